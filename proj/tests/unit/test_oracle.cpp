#include "bbm/config.hpp"
#include "bbm/timestep.hpp"

#include "bbm_oracle/oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace bbm;

namespace {

constexpr double pi = std::numbers::pi;

std::vector<double> to_vector(const Field1D& f) { return {f.values().begin(), f.values().end()}; }

double max_gap(const std::vector<double>& a, const std::vector<double>& b)
{
    double gap = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j)
        gap = std::max(gap, std::abs(a[j] - b[j]));
    return gap;
}

std::vector<double> periodic_samples(int n, double (*f)(double))
{
    std::vector<double> u(n);
    for (int j = 0; j < n; ++j)
        u[j] = f(2 * pi * j / n);
    return u;
}

}  // namespace

TEST_CASE("dense operators are symmetric, diagonally dominant and invertible")
{
    for (auto op : {bbm_oracle::DenseOperator::periodic(24, 2 * pi / 24),
                    bbm_oracle::DenseOperator::neumann(25, 0.1)}) {
        const std::size_t n = op.size();
        for (std::size_t i = 0; i < n; ++i) {
            double off = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                CHECK(op.entry(i, j) == op.entry(j, i));
                if (j != i)
                    off += std::abs(op.entry(i, j));
            }
            CHECK(op.entry(i, i) > off);
        }
        std::vector<double> x(n);
        for (std::size_t j = 0; j < n; ++j)
            x[j] = std::sin(0.3 * j) + 0.1 * j;
        CHECK(max_gap(op.solve(op.apply(x)), x) <= 1e-12);
    }
}

TEST_CASE("oracle_rhs of zero data is zero")
{
    const std::vector<double> zero(64, 0.0);
    bbm_oracle::Params p;
    for (auto v : {bbm_oracle::Variant::A, bbm_oracle::Variant::B}) {
        p.variant = v;
        p.damping.assign(64, 1.0);
        CHECK(max_gap(bbm_oracle::oracle_rhs(zero, p), zero) == 0.0);
    }
    p.variant = bbm_oracle::Variant::C;
    const std::vector<double> zero_interval(65, 0.0);
    CHECK(max_gap(bbm_oracle::oracle_rhs(zero_interval, p), zero_interval) == 0.0);
    CHECK_THROWS_AS(bbm_oracle::oracle_rhs(std::vector<double>(2, 0.0), p), std::invalid_argument);
}

TEST_CASE("oracle_rhs converges to the production operator at second order")
{
    for (Variant v : {Variant::A, Variant::B}) {
        std::vector<double> gaps;
        for (int n : {64, 128, 256, 512}) {
            const TorusGrid g(n);
            const Field1D u = Field1D::sample(g, [](double x) { return 0.5 * std::cos(x) + 0.2 * std::sin(2 * x); });
            const Model m = Model::torus(v, DampingProfile::bump(g, pi, 2.0, 1.0));
            bbm_oracle::Params p;
            p.variant = v == Variant::A ? bbm_oracle::Variant::A : bbm_oracle::Variant::B;
            p.damping = m.damping;
            gaps.push_back(max_gap(bbm_oracle::oracle_rhs(to_vector(u), p), to_vector(evolution_rhs(u, m))));
        }
        for (std::size_t k = 1; k < gaps.size(); ++k)
            CHECK(std::log2(gaps[k - 1] / gaps[k]) == doctest::Approx(2.0).epsilon(0.1));
    }
}

TEST_CASE("oracle variant C matches the hyperbolic closed form for constant data")
{
    const double length = 2.0, c = 0.8, alpha = 1.0, beta = 0.25;
    const double a = alpha * c + c * c / 3, b = beta * c + c * c / 3;
    std::vector<double> errors;
    for (int cells : {32, 64, 128}) {
        std::vector<double> u(cells + 1, c), exact(cells + 1);
        for (int j = 0; j <= cells; ++j) {
            const double x = length * j / cells;
            exact[j] = (-a * std::cosh(length - x) + b * std::cosh(x)) / std::sinh(length);
        }
        bbm_oracle::Params p;
        p.variant = bbm_oracle::Variant::C;
        p.alpha = alpha;
        p.beta = beta;
        p.length = length;
        errors.push_back(max_gap(bbm_oracle::oracle_rhs(u, p), exact));
    }
    CHECK(errors[0] < 1e-2);
    CHECK(errors[0] / errors[1] == doctest::Approx(4.0).epsilon(0.1));
    CHECK(errors[1] / errors[2] == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("oracle_integrate: zero data, energy drift order, instability")
{
    bbm_oracle::Params p;
    const std::vector<double> zero(32, 0.0);
    CHECK(max_gap(bbm_oracle::oracle_integrate(zero, 1.0, 0.1, p), zero) == 0.0);

    // The linear periodic scheme conserves its discrete energy, so the drift is
    // pure time-stepping error.
    p.nonlinear = false;
    const auto u0 = periodic_samples(64, [](double x) { return 0.5 * std::cos(x); });
    const double e0 = bbm_oracle::oracle_energy(u0, p);
    std::vector<double> drift;
    for (double dt : {0.1, 0.05, 0.025, 0.0125})
        drift.push_back(std::abs(bbm_oracle::oracle_energy(bbm_oracle::oracle_integrate(u0, 5.0, dt, p), p) - e0));
    for (std::size_t k = 1; k < drift.size(); ++k)
        CHECK(drift[k - 1] / drift[k] >= 3.5);

    p.nonlinear = true;
    const auto big = periodic_samples(64, [](double x) { return 3.0 * std::cos(x); });
    CHECK_THROWS_AS(bbm_oracle::oracle_integrate(big, 50.0, 5.0, p), bbm_oracle::Unstable);
}

TEST_CASE("oracle and production converge to the linear dispersion solution")
{
    auto exact = [](int n) { return periodic_samples(n, [](double x) { return std::cos(x - pi); }); };
    std::vector<double> oracle_err, prod_err;
    for (int n : {32, 64, 128}) {
        const double dt = 0.4 / n;
        bbm_oracle::Params p;
        p.nonlinear = false;
        const auto u0 = periodic_samples(n, [](double x) { return std::cos(x); });
        oracle_err.push_back(max_gap(bbm_oracle::oracle_integrate(u0, 2 * pi, dt, p), exact(n)));

        const TorusGrid g(n);
        Model m = Model::torus(Variant::A, DampingProfile::none(g));
        m.nonlinear = false;
        IntegratorConfig c;
        c.dt = 2 * pi / (n / 2);
        c.record_stride = 1 << 20;
        const auto u = integrate(Field1D(g, u0), 2 * pi, m, c).trajectory.back().u;
        prod_err.push_back(max_gap(to_vector(u), exact(n)));
    }
    for (std::size_t k = 1; k < 3; ++k) {
        CHECK(std::log2(oracle_err[k - 1] / oracle_err[k]) == doctest::Approx(2.0).epsilon(0.1));
        CHECK(std::log2(prod_err[k - 1] / prod_err[k]) == doctest::Approx(4.0).epsilon(0.1));
    }
}

TEST_CASE("production and oracle final states converge under joint refinement")
{
    std::vector<double> gaps;
    double dt = 0.1;
    for (int n : {32, 64, 128, 256}) {
        const TorusGrid g(n);
        const Field1D u0 = Field1D::sample(g, [](double x) { return 0.5 * std::cos(x); });
        const Model m = Model::torus(Variant::A, DampingProfile::bump(g, pi, 2.0, 1.0));
        IntegratorConfig c;
        c.dt = dt;
        c.record_stride = 1 << 20;
        const auto prod = integrate(u0, 2.0, m, c).trajectory.back().u;
        bbm_oracle::Params p;
        p.damping = m.damping;
        gaps.push_back(max_gap(bbm_oracle::oracle_integrate(to_vector(u0), 2.0, dt, p), to_vector(prod)));
        dt /= 2;
    }
    for (std::size_t k = 1; k < gaps.size(); ++k) {
        CHECK(gaps[k] < gaps[k - 1]);
        CHECK(gaps[k - 1] / gaps[k] == doctest::Approx(4.0).epsilon(0.15));
    }
}
