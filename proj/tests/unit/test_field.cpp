#include "bbm/config.hpp"
#include "bbm/field.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

using namespace bbm;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double eps = std::numeric_limits<double>::epsilon();

double max_gap(const Field1D& a, const Field1D& b) { return (a - b).max_abs(); }

// Direct O(N^2) evaluation of c_n = N^-1 sum_j f_j exp(-i n x_j).
std::complex<double> direct_coefficient(const Field1D& f, int n)
{
    std::complex<double> sum = 0.0;
    const int size = static_cast<int>(f.size());
    for (int j = 0; j < size; ++j)
        sum += f[j] * std::polar(1.0, -2.0 * pi * n * j / size);
    return sum / static_cast<double>(size);
}

}  // namespace

TEST_CASE("grids validate their parameters")
{
    CHECK_THROWS_AS(TorusGrid(15), std::invalid_argument);
    CHECK_THROWS_AS(TorusGrid(14), std::invalid_argument);
    CHECK_THROWS_AS(TorusGrid(33), std::invalid_argument);
    CHECK_NOTHROW(TorusGrid(16));
    CHECK_THROWS_AS(IntervalGrid(0.0, 64), std::invalid_argument);
    CHECK_THROWS_AS(IntervalGrid(1.0, 31), std::invalid_argument);

    const TorusGrid g(64);
    CHECK(g.node(0) == 0.0);
    CHECK(g.node(16) == doctest::Approx(pi / 2));
    const IntervalGrid ig(2.0, 40);
    CHECK(ig.size() == 41);
    CHECK(ig.node(0) == 0.0);
    CHECK(ig.node(40) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("fields reject non-finite values and mismatched sizes")
{
    const TorusGrid g(16);
    std::vector<double> v(16, 0.0);
    v[3] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(Field1D(g, v), NonFiniteError);
    v[3] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(Field1D(g, v), NonFiniteError);
    CHECK_THROWS_AS(Field1D(g, std::vector<double>(15, 0.0)), std::invalid_argument);
    CHECK_THROWS_AS(Field1D::zeros(g) + Field1D::zeros(TorusGrid(32)), std::invalid_argument);
}

TEST_CASE("to_spectral: constant and single mode")
{
    const TorusGrid g(32);
    const Spectrum one = to_spectral(Field1D::constant(g, 1.0));
    CHECK(std::abs(one[0] - 1.0) < 1e-15);
    for (int n = 1; n <= 16; ++n) {
        CHECK(std::abs(one[n]) < 1e-15);
        CHECK(std::abs(one[-n]) < 1e-15);
    }

    const Spectrum c3 = to_spectral(Field1D::sample(g, [](double x) { return std::cos(3 * x); }));
    for (int n = -16; n <= 16; ++n) {
        const double expected = std::abs(n) == 3 ? 0.5 : 0.0;
        CHECK(std::abs(c3[n] - expected) < 1e-15);
    }
}

TEST_CASE("to_spectral matches a direct discrete-transform sum")
{
    const TorusGrid g(64);
    const Field1D f = random_smooth(g, 11, 1.0, 20);
    const Spectrum c = to_spectral(f);
    double scale = 0.0;
    for (int n = 0; n <= 32; ++n)
        scale = std::max(scale, std::abs(direct_coefficient(f, n)));
    for (int n = -31; n <= 31; ++n) {
        CHECK(std::abs(c[n] - direct_coefficient(f, n)) <= 1e-12 * scale);
        CHECK(std::abs(c[-n] - std::conj(c[n])) <= 1e-15 * scale);
    }
    CHECK_THROWS_AS(c[33], std::out_of_range);
}

TEST_CASE("to_spectral rejects interval fields")
{
    CHECK_THROWS_AS(to_spectral(Field1D::zeros(IntervalGrid(1.0, 32))), std::invalid_argument);
    CHECK_THROWS_AS(mean(Field1D::zeros(IntervalGrid(1.0, 32))), std::invalid_argument);
    CHECK_THROWS_AS(sobolev_norm(Field1D::zeros(IntervalGrid(1.0, 32)), 1.0),
                    std::invalid_argument);
}

TEST_CASE("round trip is within 100 eps of the field")
{
    for (int n : {16, 64, 256, 1024}) {
        const TorusGrid g(n);
        const Field1D f = random_smooth(g, 3 + n, 2.5, n / 4);
        CHECK(max_gap(to_grid(to_spectral(f)), f) <= 100 * eps * f.max_abs());
    }
    // The Nyquist mode survives the round trip as well.
    const TorusGrid g(32);
    const Field1D alt = Field1D::sample(g, [](double x) { return std::cos(16 * x); });
    CHECK(max_gap(to_grid(to_spectral(alt)), alt) <= 100 * eps);
}

TEST_CASE("derivative on the torus and interval")
{
    const TorusGrid g(64);
    const Field1D s = Field1D::sample(g, [](double x) { return std::sin(x); });
    const Field1D c = Field1D::sample(g, [](double x) { return std::cos(x); });
    CHECK(max_gap(derivative(s), c) <= 1e-12);
    CHECK(derivative(Field1D::constant(g, 4.2)).max_abs() <= 1e-14);

    const double length = 2.5;
    const IntervalGrid ig(length, 64);
    const Field1D p = Field1D::sample(ig, [length](double x) { return x * (length - x); });
    const Field1D dp = Field1D::sample(ig, [length](double x) { return length - 2 * x; });
    CHECK(max_gap(derivative(p), dp) <= 1e-10);
    CHECK(derivative(Field1D::constant(ig, -3.0)).max_abs() <= 1e-12);

    // Quartics are reproduced exactly by the fourth-order stencils.
    const Field1D q = Field1D::sample(ig, [](double x) { return x * x * x * x - x * x; });
    const Field1D dq = Field1D::sample(ig, [](double x) { return 4 * x * x * x - 2 * x; });
    CHECK(max_gap(derivative(q), dq) <= 1e-9);
}

TEST_CASE("interval derivative converges at fourth order")
{
    auto err = [](int m) {
        const IntervalGrid ig(pi, m);
        const Field1D f = Field1D::sample(ig, [](double x) { return std::exp(std::sin(x)); });
        const Field1D df =
            Field1D::sample(ig, [](double x) { return std::cos(x) * std::exp(std::sin(x)); });
        return max_gap(derivative(f), df);
    };
    const double order = std::log2(err(64) / err(128));
    CHECK(order == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("sobolev_norm examples")
{
    const TorusGrid g(32);
    for (double s : {0.0, 0.5, 1.0, 2.0})
        CHECK(sobolev_norm(Field1D::constant(g, -3.0), s) == doctest::Approx(3.0));
    const Field1D c = Field1D::sample(g, [](double x) { return std::cos(x); });
    CHECK(sobolev_norm(c, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    const Field1D s = Field1D::sample(g, [](double x) { return std::sin(x); });
    CHECK(sobolev_norm(s, 0.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    // Parseval: int sin^2 = pi = 2 pi sum |c_n|^2.
    CHECK(integrate(pointwise(s, s)) / (2 * pi) ==
          doctest::Approx(std::pow(sobolev_norm(s, 0.0), 2)).epsilon(1e-14));
    CHECK_THROWS_AS(sobolev_norm(s, -0.5), std::invalid_argument);
}

TEST_CASE("norm properties on random fields")
{
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const TorusGrid g(128);
        const Field1D f = random_smooth(g, seed, 1.0 + seed, 30);
        const Spectrum c = to_spectral(f);
        const double l2 = std::pow(sobolev_norm(c, 0.0), 2);
        CHECK(std::abs(integrate(pointwise(f, f)) / (2 * pi) - l2) <= 1e-10 * (1 + l2));

        double previous = 0.0;
        for (double s : {0.0, 0.25, 0.5, 0.9, 1.0, 1.5, 2.0, 3.0}) {
            const double v = sobolev_norm(c, s);
            CHECK(v >= previous);
            previous = v;
        }

        const double lhs = l2 + std::pow(sobolev_norm(derivative(f), 0.0), 2);
        const double h1 = std::pow(sobolev_norm(f, 1.0), 2);
        CHECK(std::abs(lhs - h1) <= 1e-10 * h1);
    }
}

TEST_CASE("h1_norm_interval examples")
{
    CHECK(h1_norm_interval(Field1D::zeros(IntervalGrid(3.0, 32))) == 0.0);
    CHECK(h1_norm_interval(Field1D::constant(IntervalGrid(1.0, 32), 1.0)) ==
          doctest::Approx(1.0).epsilon(1e-14));
    const IntervalGrid ig(pi, 1024);
    const Field1D f = Field1D::sample(ig, [](double x) { return std::sin(x); });
    CHECK(h1_norm_interval(f) == doctest::Approx(std::sqrt(pi)).epsilon(1e-6));
}

TEST_CASE("mean examples")
{
    const TorusGrid g(64);
    CHECK(mean(Field1D::constant(g, 5.0)) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(std::abs(mean(Field1D::sample(g, [](double x) { return std::sin(7 * x); }))) < 1e-15);
    CHECK(mean(Field1D::sample(g, [](double x) { return 2 + std::cos(x); })) ==
          doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("dealias examples")
{
    const Spectrum zero = dealias(Spectrum(32));
    for (int n = -16; n <= 16; ++n)
        CHECK(zero[n] == std::complex<double>(0.0));

    const TorusGrid g(32);
    const Spectrum nyq =
        dealias(to_spectral(Field1D::sample(g, [](double x) { return std::cos(16 * x); })));
    CHECK(std::abs(nyq[16]) == 0.0);
    const Spectrum kept =
        dealias(to_spectral(Field1D::sample(g, [](double x) { return std::cos(10 * x); })));
    CHECK(std::abs(kept[10] - 0.5) < 1e-15);
    const Spectrum cut =
        dealias(to_spectral(Field1D::sample(g, [](double x) { return std::cos(11 * x); })));
    CHECK(std::abs(cut[11]) == 0.0);

    const Field1D s = Field1D::sample(g, [](double x) { return std::sin(x); });
    const Spectrum prod = to_spectral(dealiased_product(s, s));
    for (int n = -16; n <= 16; ++n) {
        const double expected = n == 0 ? 0.5 : (std::abs(n) == 2 ? -0.25 : 0.0);
        CHECK(std::abs(prod[n] - expected) <= 1e-12);
    }
}

TEST_CASE("band_integral and exact products")
{
    const TorusGrid g(64);
    const Field1D s = Field1D::sample(g, [](double x) { return std::sin(x); });
    const Spectrum sq = exact_product_spectrum(s, s);
    CHECK(band_integral(sq, 0.0, pi) == doctest::Approx(pi / 2).epsilon(1e-14));
    CHECK(band_integral(sq, 0.0, 2 * pi) == doctest::Approx(pi).epsilon(1e-14));
    CHECK(band_integral(to_spectral(s), 0.0, pi) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS(band_integral(sq, 1.0, 0.0), std::invalid_argument);

    // The exact product keeps the modes that the two-thirds rule removes.
    const Field1D c = Field1D::sample(g, [](double x) { return std::cos(20 * x); });
    const Spectrum cc = exact_product_spectrum(c, c);
    CHECK(std::abs(cc[0] - 0.5) < 1e-14);
}

TEST_CASE("arithmetic helpers")
{
    const TorusGrid g(16);
    const Field1D a = Field1D::constant(g, 2.0);
    const Field1D b = Field1D::sample(g, [](double x) { return x; });
    CHECK(max_gap(axpy(a, 3.0, b), a + 3.0 * b) == 0.0);
    CHECK(max_gap(pointwise(a, b), 2.0 * b) == 0.0);
    CHECK(max_gap(a - a, Field1D::zeros(g)) == 0.0);
    CHECK(same_grid(a, b));
    CHECK_FALSE(same_grid(a, Field1D::zeros(IntervalGrid(1.0, 32))));
}
