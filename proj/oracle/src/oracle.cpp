#include "bbm_oracle/oracle.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace bbm_oracle {

DenseOperator::DenseOperator(std::size_t n, std::vector<double> a)
    : n_(n), a_(std::move(a)), lu_(a_), pivot_(n)
{
    for (std::size_t k = 0; k < n_; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n_; ++i)
            if (std::abs(lu_[i * n_ + k]) > std::abs(lu_[p * n_ + k]))
                p = i;
        if (std::abs(lu_[p * n_ + k]) < 1e-300)
            throw SingularMatrix("oracle Helmholtz matrix is singular");
        pivot_[k] = p;
        if (p != k)
            for (std::size_t j = 0; j < n_; ++j)
                std::swap(lu_[k * n_ + j], lu_[p * n_ + j]);
        for (std::size_t i = k + 1; i < n_; ++i) {
            const double m = lu_[i * n_ + k] / lu_[k * n_ + k];
            lu_[i * n_ + k] = m;
            for (std::size_t j = k + 1; j < n_; ++j)
                lu_[i * n_ + j] -= m * lu_[k * n_ + j];
        }
    }
}

DenseOperator DenseOperator::periodic(std::size_t n, double h)
{
    const double r = 1.0 / (h * h);
    std::vector<double> a(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        a[i * n + i] = 1.0 + 2.0 * r;
        a[i * n + (i + 1) % n] -= r;
        a[i * n + (i + n - 1) % n] -= r;
    }
    return DenseOperator(n, std::move(a));
}

DenseOperator DenseOperator::neumann(std::size_t nodes, double h)
{
    const double r = 1.0 / (h * h);
    const std::size_t n = nodes;
    std::vector<double> a(n * n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        a[i * n + i] = 1.0 + 2.0 * r;
        a[i * n + i - 1] = -r;
        a[i * n + i + 1] = -r;
    }
    // End rows halved so the matrix is symmetric.
    a[0] = 0.5 + r;
    a[1] = -r;
    a[(n - 1) * n + n - 1] = 0.5 + r;
    a[(n - 1) * n + n - 2] = -r;
    return DenseOperator(n, std::move(a));
}

std::vector<double> DenseOperator::apply(const std::vector<double>& x) const
{
    std::vector<double> y(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j)
            y[i] += a_[i * n_ + j] * x[j];
    return y;
}

std::vector<double> DenseOperator::solve(std::vector<double> b) const
{
    for (std::size_t k = 0; k < n_; ++k)
        std::swap(b[k], b[pivot_[k]]);
    for (std::size_t i = 1; i < n_; ++i)
        for (std::size_t j = 0; j < i; ++j)
            b[i] -= lu_[i * n_ + j] * b[j];
    for (std::size_t i = n_; i-- > 0;) {
        for (std::size_t j = i + 1; j < n_; ++j)
            b[i] -= lu_[i * n_ + j] * b[j];
        b[i] /= lu_[i * n_ + i];
    }
    return b;
}

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

std::vector<double> centered_periodic(const std::vector<double>& u, double h)
{
    const std::size_t n = u.size();
    std::vector<double> d(n);
    for (std::size_t j = 0; j < n; ++j)
        d[j] = (u[(j + 1) % n] - u[(j + n - 1) % n]) / (2.0 * h);
    return d;
}

std::vector<double> centered_interval(const std::vector<double>& u, double h)
{
    const std::size_t n = u.size();
    std::vector<double> d(n);
    for (std::size_t j = 1; j + 1 < n; ++j)
        d[j] = (u[j + 1] - u[j - 1]) / (2.0 * h);
    d[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
    d[n - 1] = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * h);
    return d;
}

std::vector<double> flux(const std::vector<double>& u, bool nonlinear)
{
    std::vector<double> q(u);
    if (nonlinear)
        for (std::size_t j = 0; j < q.size(); ++j)
            q[j] += 0.5 * u[j] * u[j];
    return q;
}

double damping_at(const Params& p, std::size_t j)
{
    return p.damping.empty() ? 0.0 : p.damping[j];
}

std::vector<double> rhs_periodic(const std::vector<double>& u, const Params& p,
                                 const DenseOperator& op)
{
    const std::size_t n = u.size();
    const double h = two_pi / static_cast<double>(n);
    std::vector<double> bracket = centered_periodic(flux(u, p.nonlinear), h);
    if (p.variant == Variant::A) {
        for (std::size_t j = 0; j < n; ++j)
            bracket[j] += damping_at(p, j) * u[j];
    } else {
        // -(a u_x)_x in conservative flux form with face-averaged a
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t jp = (j + 1) % n;
            const std::size_t jm = (j + n - 1) % n;
            const double a_right = 0.5 * (damping_at(p, j) + damping_at(p, jp));
            const double a_left = 0.5 * (damping_at(p, j) + damping_at(p, jm));
            bracket[j] -= (a_right * (u[jp] - u[j]) - a_left * (u[j] - u[jm])) / (h * h);
        }
    }
    std::vector<double> v = op.solve(bracket);
    for (auto& x : v)
        x = -x;
    return v;
}

std::vector<double> rhs_interval(const std::vector<double>& u, const Params& p,
                                 const DenseOperator& op)
{
    const std::size_t n = u.size();
    const double h = p.length / static_cast<double>(n - 1);
    const std::vector<double> ux = centered_interval(u, h);
    std::vector<double> f(n);
    for (std::size_t j = 0; j < n; ++j)
        f[j] = -(ux[j] + (p.nonlinear ? u[j] * ux[j] : 0.0));
    const double left = u.front();
    const double right = u.back();
    const double slope_left = p.alpha * left + left * left / 3.0;
    const double slope_right = p.beta * right + right * right / 3.0;
    // Inhomogeneous Neumann data enters through the mirrored ghost nodes; end
    // rows are halved to match the symmetric operator.
    f[0] = 0.5 * f[0] - slope_left / h;
    f[n - 1] = 0.5 * f[n - 1] + slope_right / h;
    return op.solve(f);
}

DenseOperator operator_for(std::size_t n, const Params& p)
{
    if (p.variant == Variant::C)
        return DenseOperator::neumann(n, p.length / static_cast<double>(n - 1));
    return DenseOperator::periodic(n, two_pi / static_cast<double>(n));
}

std::vector<double> rhs_with(const std::vector<double>& u, const Params& p,
                             const DenseOperator& op)
{
    return p.variant == Variant::C ? rhs_interval(u, p, op) : rhs_periodic(u, p, op);
}

}  // namespace

std::vector<double> oracle_rhs(const std::vector<double>& u, const Params& params)
{
    if (u.size() < 3 || u.size() > 1025)
        throw std::invalid_argument("oracle_rhs is meant for small grids");
    return rhs_with(u, params, operator_for(u.size(), params));
}

double oracle_energy(const std::vector<double>& u, const Params& params)
{
    const std::size_t n = u.size();
    double sum = 0.0;
    if (params.variant == Variant::C) {
        const double h = params.length / static_cast<double>(n - 1);
        for (std::size_t j = 0; j + 1 < n; ++j) {
            const double du = (u[j + 1] - u[j]) / h;
            sum += 0.5 * (u[j] * u[j] + u[j + 1] * u[j + 1]) + du * du;
        }
        return 0.5 * h * sum;
    }
    const double h = two_pi / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double du = (u[(j + 1) % n] - u[j]) / h;
        sum += u[j] * u[j] + du * du;
    }
    return 0.5 * h * sum;
}

std::vector<double> oracle_integrate(const std::vector<double>& u0, double horizon, double dt,
                                     const Params& params)
{
    if (!(dt > 0.0) || horizon < 0.0)
        throw std::invalid_argument("oracle_integrate needs dt > 0 and horizon >= 0");
    const DenseOperator op = operator_for(u0.size(), params);
    const long steps = static_cast<long>(std::ceil(horizon / dt - 1e-9));
    const double step = steps > 0 ? horizon / static_cast<double>(steps) : 0.0;
    std::vector<double> u = u0;
    std::vector<double> mid(u.size());
    for (long n = 0; n < steps; ++n) {
        const std::vector<double> k1 = rhs_with(u, params, op);
        for (std::size_t j = 0; j < u.size(); ++j)
            mid[j] = u[j] + 0.5 * step * k1[j];
        const std::vector<double> k2 = rhs_with(mid, params, op);
        for (std::size_t j = 0; j < u.size(); ++j) {
            u[j] += step * k2[j];
            if (!std::isfinite(u[j]))
                throw Unstable("oracle_integrate produced a non-finite value");
        }
    }
    return u;
}

}  // namespace bbm_oracle
