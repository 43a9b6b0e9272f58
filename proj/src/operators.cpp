#include "bbm/operators.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace bbm {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

Band support_of(const TorusGrid& grid, const std::vector<double>& a)
{
    int first = -1;
    int last = -1;
    for (int j = 0; j < grid.size(); ++j) {
        if (a[j] > 0.0) {
            if (first < 0)
                first = j;
            last = j;
        }
    }
    if (first < 0)
        return {};
    return {grid.node(first), grid.node(last)};
}

// Spectrum of the quadratic flux u^2/2, alias-free when requested.
Spectrum half_square_spectrum(const Field1D& u, const Spectrum& cu, const Model& model)
{
    if (!model.nonlinear)
        return Spectrum(cu.n_points());
    const Field1D pu = model.dealias ? to_grid(dealias(cu)) : u;
    std::vector<double> w(pu.size());
    for (std::size_t j = 0; j < w.size(); ++j)
        w[j] = 0.5 * pu[j] * pu[j];
    Spectrum cw = to_spectral(Field1D(u.grid(), std::move(w)));
    return model.dealias ? dealias(std::move(cw)) : cw;
}

Field1D damping_field(const Field1D& u, const Model& model)
{
    if (model.damping.empty())
        return Field1D::zeros(u.grid());
    if (model.damping.size() != u.size())
        throw std::invalid_argument("damping profile does not match the state grid");
    return Field1D(u.grid(), model.damping);
}

std::complex<double> ik(int k, int nyquist)
{
    return k == nyquist ? 0.0 : std::complex<double>(0.0, k);
}

}  // namespace

std::string to_string(Variant v)
{
    switch (v) {
    case Variant::A: return "A";
    case Variant::B: return "B";
    case Variant::C: return "C";
    }
    return "?";
}

Variant parse_variant(const std::string& s)
{
    if (s == "A" || s == "a")
        return Variant::A;
    if (s == "B" || s == "b")
        return Variant::B;
    if (s == "C" || s == "c")
        return Variant::C;
    throw std::invalid_argument("unknown variant '" + s + "'");
}

DampingProfile::DampingProfile(DampingKind kind, Band band, double amplitude, Field1D values)
    : kind_(kind), band_(band), amplitude_(amplitude), values_(std::move(values))
{
    for (double v : values_.values())
        if (v < 0.0)
            throw std::invalid_argument("damping profile must be nonnegative");
}

DampingProfile DampingProfile::none(const TorusGrid& grid)
{
    return DampingProfile(DampingKind::None, {}, 0.0, Field1D::zeros(grid));
}

DampingProfile DampingProfile::bump(const TorusGrid& grid, double center, double radius,
                                    double amplitude)
{
    if (!(radius > 0.0) || radius > std::numbers::pi)
        throw std::invalid_argument("bump radius must lie in (0, pi]");
    if (!(amplitude >= 0.0))
        throw std::invalid_argument("bump amplitude must be >= 0");
    auto shape = [=](double x) {
        const double s = std::remainder(x - center, two_pi) / radius;
        if (std::abs(s) >= 1.0)
            return 0.0;
        return amplitude * std::exp(1.0 - 1.0 / (1.0 - s * s));
    };
    return DampingProfile(DampingKind::Bump, {center - radius, center + radius}, amplitude,
                          Field1D::sample(grid, shape));
}

DampingProfile DampingProfile::constant(const TorusGrid& grid, double amplitude)
{
    if (!(amplitude >= 0.0))
        throw std::invalid_argument("damping amplitude must be >= 0");
    return DampingProfile(DampingKind::Constant, {0.0, two_pi}, amplitude,
                          Field1D::constant(grid, amplitude));
}

DampingProfile DampingProfile::table(const TorusGrid& grid, std::vector<double> xs,
                                     std::vector<double> as)
{
    if (xs.size() != as.size() || xs.size() < 2)
        throw std::invalid_argument("damping table needs at least two (x, a) rows");
    std::vector<std::size_t> order(xs.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto i, auto j) { return xs[i] < xs[j]; });
    std::vector<double> x, a;
    for (auto i : order) {
        x.push_back(xs[i]);
        a.push_back(as[i]);
    }
    if (x.front() < 0.0 || x.back() >= two_pi)
        throw std::invalid_argument("damping table abscissae must lie in [0, 2pi)");

    auto interp = [&](double p) {
        // Periodic linear interpolation; the segment after the last sample wraps.
        auto it = std::upper_bound(x.begin(), x.end(), p);
        const std::size_t hi = (it == x.end()) ? 0 : static_cast<std::size_t>(it - x.begin());
        const std::size_t lo = (hi == 0) ? x.size() - 1 : hi - 1;
        double x_lo = x[lo];
        double x_hi = x[hi];
        if (x_hi <= x_lo)
            x_hi += two_pi;
        double q = p;
        if (q < x_lo)
            q += two_pi;
        const double w = (q - x_lo) / (x_hi - x_lo);
        return (1.0 - w) * a[lo] + w * a[hi];
    };
    Field1D values = Field1D::sample(grid, interp);
    std::vector<double> nodal(values.values().begin(), values.values().end());
    const double amp = *std::max_element(nodal.begin(), nodal.end());
    return DampingProfile(DampingKind::Table, support_of(grid, nodal), amp, std::move(values));
}

DampingProfile DampingProfile::table_from_csv(const TorusGrid& grid, const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open damping table '" + path + "'");
    std::vector<double> xs, as;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double x, a;
        if (!(row >> x >> a)) {
            if (xs.empty())
                continue;  // header
            throw std::invalid_argument("malformed damping table row: " + line);
        }
        xs.push_back(x);
        as.push_back(a);
    }
    return table(grid, std::move(xs), std::move(as));
}

Model Model::torus(Variant v, const DampingProfile& a)
{
    if (v == Variant::C)
        throw std::invalid_argument("variant C lives on an interval");
    Model m;
    m.variant = v;
    if (!a.is_zero())
        m.damping.assign(a.values().values().begin(), a.values().values().end());
    m.band = a.band();
    return m;
}

Model Model::interval(FeedbackCoefficients fb)
{
    Model m;
    m.variant = Variant::C;
    m.feedback = fb;
    return m;
}

Field1D helmholtz_inverse_periodic(const Field1D& f)
{
    Spectrum c = to_spectral(f);
    auto h = c.half();
    for (int k = 0; k < static_cast<int>(h.size()); ++k)
        h[k] /= 1.0 + double(k) * k;
    return to_grid(c);
}

Field1D helmholtz_inverse_neumann(const Field1D& f)
{
    const auto& grid = f.interval();
    const int n = grid.size();
    const double r = 1.0 / (grid.spacing() * grid.spacing());
    const double diag = 1.0 + 2.0 * r;
    // Rows: lower[j] w_{j-1} + diag w_j + upper[j] w_{j+1} = f_j, ghost nodes
    // mirrored at both ends (w_{-1} = w_1, w_{M+1} = w_{M-1}).
    std::vector<double> upper(n, -r), lower(n, -r);
    upper[0] = -2.0 * r;
    lower[n - 1] = -2.0 * r;

    std::vector<double> c_prime(n), d_prime(n);
    c_prime[0] = upper[0] / diag;
    d_prime[0] = f[0] / diag;
    for (int j = 1; j < n; ++j) {
        const double denom = diag - lower[j] * c_prime[j - 1];
        c_prime[j] = (j + 1 < n) ? upper[j] / denom : 0.0;
        d_prime[j] = (f[j] - lower[j] * d_prime[j - 1]) / denom;
    }
    std::vector<double> w(n);
    w[n - 1] = d_prime[n - 1];
    for (int j = n - 2; j >= 0; --j)
        w[j] = d_prime[j] - c_prime[j] * w[j + 1];
    return Field1D(grid, std::move(w));
}

Field1D neumann_helmholtz_apply(const Field1D& w)
{
    const auto& grid = w.interval();
    const int m = grid.cells();
    const double r = 1.0 / (grid.spacing() * grid.spacing());
    std::vector<double> out(grid.size());
    out[0] = w[0] - 2.0 * r * (w[1] - w[0]);
    out[m] = w[m] - 2.0 * r * (w[m - 1] - w[m]);
    for (int j = 1; j < m; ++j)
        out[j] = w[j] - r * (w[j - 1] - 2.0 * w[j] + w[j + 1]);
    return Field1D(grid, std::move(out));
}

BoundaryLift make_boundary_lift(const Field1D& u, const FeedbackCoefficients& coeffs)
{
    const auto& grid = u.interval();
    const double u0 = u.front();
    const double uL = u.back();
    return {coeffs.alpha * u0 + u0 * u0 / 3.0, coeffs.beta * uL + uL * uL / 3.0, grid.length()};
}

Field1D rhs_variant_A(const Field1D& u, const Model& model)
{
    const Spectrum cu = to_spectral(u);
    const Spectrum cq = half_square_spectrum(u, cu, model);
    const Spectrum ca = to_spectral(pointwise(damping_field(u, model), u));
    Spectrum out(cu.n_points());
    auto h = out.half();
    const int nyq = cu.max_mode();
    for (int k = 0; k < static_cast<int>(h.size()); ++k) {
        const auto bracket = ca.half()[k] + ik(k, nyq) * (cu.half()[k] + cq.half()[k]);
        h[k] = -bracket / (1.0 + double(k) * k);
    }
    return to_grid(out);
}

Field1D rhs_variant_B(const Field1D& u, const Model& model)
{
    const Spectrum cu = to_spectral(u);
    const Spectrum cq = half_square_spectrum(u, cu, model);
    const int nyq = cu.max_mode();

    Spectrum cux(cu.n_points());
    for (int k = 0; k < static_cast<int>(cux.half().size()); ++k)
        cux.half()[k] = ik(k, nyq) * cu.half()[k];
    // The damping coefficient is fixed and smooth; its product with u_x is
    // linear in u and is kept whole so that D stays skew on the grid.
    const Spectrum cflux = to_spectral(pointwise(damping_field(u, model), to_grid(cux)));

    Spectrum out(cu.n_points());
    auto h = out.half();
    for (int k = 0; k < static_cast<int>(h.size()); ++k) {
        const auto bracket = ik(k, nyq) * (cu.half()[k] + cq.half()[k] - cflux.half()[k]);
        h[k] = -bracket / (1.0 + double(k) * k);
    }
    return to_grid(out);
}

Field1D rhs_variant_C(const Field1D& u, const Model& model)
{
    const auto& grid = u.interval();
    const Field1D ux = derivative(u);
    const Field1D flux = model.nonlinear ? ux + pointwise(u, ux) : ux;
    const BoundaryLift g = make_boundary_lift(u, model.feedback);
    const Field1D lift = Field1D::sample(grid, [&](double x) { return g.value(x); });
    const Field1D lift_residual =
        Field1D::sample(grid, [&](double x) { return g.value(x) - g.curvature(); });
    return lift - helmholtz_inverse_neumann(flux) - helmholtz_inverse_neumann(lift_residual);
}

Field1D evolution_rhs(const Field1D& u, const Model& model)
{
    switch (model.variant) {
    case Variant::A: return rhs_variant_A(u, model);
    case Variant::B: return rhs_variant_B(u, model);
    case Variant::C: return rhs_variant_C(u, model);
    }
    throw std::logic_error("unreachable variant");
}

}  // namespace bbm
