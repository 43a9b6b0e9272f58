#include "bbm/field.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace bbm {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// FFTW planning is not thread-safe; execution with the new-array interface is.
// Plans are created once per size under a lock and never destroyed.
struct RealPlans {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
};

const RealPlans& plans_for(int n)
{
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<RealPlans>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) {
        slot = std::make_unique<RealPlans>();
        std::vector<double> re(n);
        std::vector<std::complex<double>> co(n / 2 + 1);
        auto* cp = reinterpret_cast<fftw_complex*>(co.data());
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        slot->forward = fftw_plan_dft_r2c_1d(n, re.data(), cp, flags);
        slot->backward = fftw_plan_dft_c2r_1d(n, cp, re.data(), flags);
        if (!slot->forward || !slot->backward)
            throw std::runtime_error("fftw plan creation failed for n=" + std::to_string(n));
    }
    return *slot;
}

void forward_transform(std::span<const double> values, std::span<std::complex<double>> out)
{
    const int n = static_cast<int>(values.size());
    std::vector<double> in(values.begin(), values.end());
    fftw_execute_dft_r2c(plans_for(n).forward, in.data(),
                         reinterpret_cast<fftw_complex*>(out.data()));
    const double inv = 1.0 / n;
    for (auto& c : out)
        c *= inv;
}

std::vector<double> backward_transform(std::span<const std::complex<double>> half, int n)
{
    std::vector<std::complex<double>> in(half.begin(), half.end());
    std::vector<double> out(n);
    fftw_execute_dft_c2r(plans_for(n).backward, reinterpret_cast<fftw_complex*>(in.data()),
                         out.data());
    return out;
}

void require_torus(const Field1D& f, const char* what)
{
    if (!f.on_torus())
        throw std::invalid_argument(std::string(what) + " requires a torus field");
}

void check_finite(std::span<const double> v)
{
    for (double x : v)
        if (!std::isfinite(x))
            throw NonFiniteError("field contains non-finite values");
}

Field1D interval_derivative(const Field1D& f)
{
    const auto& grid = f.interval();
    const int m = grid.cells();
    const double inv12h = 1.0 / (12.0 * grid.spacing());
    const auto u = f.values();
    std::vector<double> d(u.size());
    for (int j = 2; j <= m - 2; ++j)
        d[j] = (u[j - 2] - 8.0 * u[j - 1] + 8.0 * u[j + 1] - u[j + 2]) * inv12h;
    d[0] = (-25.0 * u[0] + 48.0 * u[1] - 36.0 * u[2] + 16.0 * u[3] - 3.0 * u[4]) * inv12h;
    d[1] = (-3.0 * u[0] - 10.0 * u[1] + 18.0 * u[2] - 6.0 * u[3] + u[4]) * inv12h;
    d[m] = (25.0 * u[m] - 48.0 * u[m - 1] + 36.0 * u[m - 2] - 16.0 * u[m - 3] + 3.0 * u[m - 4]) *
           inv12h;
    d[m - 1] = (3.0 * u[m] + 10.0 * u[m - 1] - 18.0 * u[m - 2] + 6.0 * u[m - 3] - u[m - 4]) *
               inv12h;
    return Field1D(grid, std::move(d));
}

}  // namespace

TorusGrid::TorusGrid(int n_points) : n_(n_points)
{
    if (n_points < 16 || n_points % 2 != 0)
        throw std::invalid_argument("torus grid needs an even number of points >= 16, got " +
                                    std::to_string(n_points));
}

double TorusGrid::spacing() const { return two_pi / n_; }

double TorusGrid::node(int j) const { return two_pi * j / n_; }

IntervalGrid::IntervalGrid(double length, int n_cells) : length_(length), cells_(n_cells)
{
    if (!(length > 0.0) || !std::isfinite(length))
        throw std::invalid_argument("interval length must be positive");
    if (n_cells < 32)
        throw std::invalid_argument("interval grid needs at least 32 cells, got " +
                                    std::to_string(n_cells));
}

int grid_size(const Grid& grid)
{
    return std::visit([](const auto& g) { return g.size(); }, grid);
}

double grid_node(const Grid& grid, int j)
{
    return std::visit([j](const auto& g) { return g.node(j); }, grid);
}

Field1D::Field1D(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values))
{
    if (static_cast<int>(values_.size()) != grid_size(grid_))
        throw std::invalid_argument("field size does not match grid");
    check_finite(values_);
}

Field1D Field1D::zeros(const Grid& grid) { return constant(grid, 0.0); }

Field1D Field1D::constant(const Grid& grid, double value)
{
    return Field1D(grid, std::vector<double>(grid_size(grid), value));
}

Field1D Field1D::sample(const Grid& grid, const std::function<double(double)>& f)
{
    std::vector<double> v(grid_size(grid));
    for (int j = 0; j < static_cast<int>(v.size()); ++j)
        v[j] = f(grid_node(grid, j));
    return Field1D(grid, std::move(v));
}

const TorusGrid& Field1D::torus() const
{
    if (const auto* g = std::get_if<TorusGrid>(&grid_))
        return *g;
    throw std::invalid_argument("field is not on a torus grid");
}

const IntervalGrid& Field1D::interval() const
{
    if (const auto* g = std::get_if<IntervalGrid>(&grid_))
        return *g;
    throw std::invalid_argument("field is not on an interval grid");
}

double Field1D::max_abs() const
{
    double m = 0.0;
    for (double v : values_)
        m = std::max(m, std::abs(v));
    return m;
}

bool same_grid(const Field1D& a, const Field1D& b) { return a.grid() == b.grid(); }

namespace {

template <class Op>
Field1D combine(const Field1D& a, const Field1D& b, Op op)
{
    if (!same_grid(a, b))
        throw std::invalid_argument("fields live on different grids");
    std::vector<double> out(a.size());
    for (std::size_t j = 0; j < out.size(); ++j)
        out[j] = op(a[j], b[j]);
    return Field1D(a.grid(), std::move(out));
}

}  // namespace

Field1D operator+(const Field1D& a, const Field1D& b)
{
    return combine(a, b, [](double x, double y) { return x + y; });
}

Field1D operator-(const Field1D& a, const Field1D& b)
{
    return combine(a, b, [](double x, double y) { return x - y; });
}

Field1D operator*(double s, const Field1D& a)
{
    std::vector<double> out(a.values().begin(), a.values().end());
    for (auto& v : out)
        v *= s;
    return Field1D(a.grid(), std::move(out));
}

Field1D pointwise(const Field1D& a, const Field1D& b)
{
    return combine(a, b, [](double x, double y) { return x * y; });
}

Field1D axpy(const Field1D& x, double s, const Field1D& y)
{
    return combine(x, y, [s](double p, double q) { return p + s * q; });
}

Spectrum::Spectrum(int n_points) : n_(n_points), half_(n_points / 2 + 1) {}

std::complex<double> Spectrum::operator[](int n) const
{
    const int k = std::abs(n);
    if (k > max_mode())
        throw std::out_of_range("mode outside resolved range");
    std::complex<double> c = half_[k];
    if (k == max_mode())
        c *= 0.5;
    return n < 0 ? std::conj(c) : c;
}

Spectrum to_spectral(const Field1D& f)
{
    require_torus(f, "to_spectral");
    Spectrum c(static_cast<int>(f.size()));
    forward_transform(f.values(), c.half());
    return c;
}

Field1D to_grid(const Spectrum& c)
{
    return Field1D(TorusGrid(c.n_points()), backward_transform(c.half(), c.n_points()));
}

Spectrum dealias(Spectrum c)
{
    const int n = c.n_points();
    auto h = c.half();
    for (int k = 0; k < static_cast<int>(h.size()); ++k)
        if (3 * k > n)
            h[k] = 0.0;
    return c;
}

Field1D dealiased_product(const Field1D& a, const Field1D& b)
{
    require_torus(a, "dealiased_product");
    const Field1D pa = to_grid(dealias(to_spectral(a)));
    const Field1D pb = to_grid(dealias(to_spectral(b)));
    return to_grid(dealias(to_spectral(pointwise(pa, pb))));
}

Field1D derivative(const Field1D& f)
{
    if (f.on_interval())
        return interval_derivative(f);
    Spectrum c = to_spectral(f);
    auto h = c.half();
    const int nyquist = c.max_mode();
    for (int k = 0; k < static_cast<int>(h.size()); ++k)
        h[k] = (k == nyquist) ? 0.0 : std::complex<double>(0.0, k) * h[k];
    return to_grid(c);
}

double sobolev_norm(const Spectrum& c, double s)
{
    if (!(s >= 0.0))
        throw std::invalid_argument("Sobolev index must be >= 0 on the torus");
    const auto h = c.half();
    const int nyquist = c.max_mode();
    double sum = std::norm(h[0]);
    for (int k = 1; k < static_cast<int>(h.size()); ++k) {
        const double weight = std::pow(1.0 + double(k) * k, s);
        // Two-sided sum: modes +k and -k; the Nyquist pair carries half each.
        const double mag2 = (k == nyquist) ? 0.5 * std::norm(h[k]) : 2.0 * std::norm(h[k]);
        sum += mag2 * weight;
    }
    return std::sqrt(sum);
}

double sobolev_norm(const Field1D& f, double s)
{
    require_torus(f, "sobolev_norm");
    return sobolev_norm(to_spectral(f), s);
}

double integrate(const Field1D& f)
{
    const auto v = f.values();
    if (f.on_torus()) {
        double sum = 0.0;
        for (double x : v)
            sum += x;
        return sum * f.torus().spacing();
    }
    double sum = 0.5 * (v.front() + v.back());
    for (std::size_t j = 1; j + 1 < v.size(); ++j)
        sum += v[j];
    return sum * f.interval().spacing();
}

double h1_norm_interval(const Field1D& f)
{
    const Field1D fx = derivative(f);
    const Field1D density = pointwise(f, f) + pointwise(fx, fx);
    return std::sqrt(integrate(density));
}

double mean(const Field1D& f)
{
    require_torus(f, "mean");
    return integrate(f) / two_pi;
}

double band_integral(const Spectrum& c, double left, double right)
{
    if (right < left)
        throw std::invalid_argument("band_integral: right < left");
    double total = c[0].real() * (right - left);
    for (int n = 1; n <= c.max_mode(); ++n) {
        // c_n e^{inx} + c_{-n} e^{-inx} = 2 Re(c_n e^{inx})
        const std::complex<double> cn = c[n];
        const std::complex<double> antideriv_r = cn * std::exp(std::complex<double>(0, n * right));
        const std::complex<double> antideriv_l = cn * std::exp(std::complex<double>(0, n * left));
        total += 2.0 * ((antideriv_r - antideriv_l) / std::complex<double>(0, n)).real();
    }
    return total;
}

Spectrum exact_product_spectrum(const Field1D& f, const Field1D& g)
{
    require_torus(f, "exact_product_spectrum");
    if (!same_grid(f, g))
        throw std::invalid_argument("fields live on different grids");
    const int n = static_cast<int>(f.size());
    auto upsample = [n](const Field1D& h) {
        const Spectrum c = to_spectral(h);
        Spectrum fine(2 * n);
        auto dst = fine.half();
        const auto src = c.half();
        for (int k = 0; k < n / 2; ++k)
            dst[k] = src[k];
        // Split the coarse Nyquist mode into +-N/2 of the fine grid (real cosine).
        dst[n / 2] = src[n / 2] * 0.5;
        return to_grid(fine);
    };
    return to_spectral(pointwise(upsample(f), upsample(g)));
}

}  // namespace bbm
