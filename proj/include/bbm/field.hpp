#pragma once

// Spatial discretization: periodic and interval grids, nodal fields,
// Fourier coefficients, differentiation, Sobolev norms.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace bbm {

/// Raised when a field would hold NaN or Inf values.
class NonFiniteError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Uniform grid on the torus R/2piZ: node j sits at 2*pi*j/n.
class TorusGrid {
public:
    explicit TorusGrid(int n_points);

    int size() const { return n_; }
    double spacing() const;
    double node(int j) const;
    int max_mode() const { return n_ / 2; }

    bool operator==(const TorusGrid&) const = default;

private:
    int n_;
};

/// Uniform grid on [0, L] with M cells; both endpoints are nodes.
class IntervalGrid {
public:
    IntervalGrid(double length, int n_cells);

    double length() const { return length_; }
    int cells() const { return cells_; }
    int size() const { return cells_ + 1; }
    double spacing() const { return length_ / cells_; }
    double node(int j) const { return j * spacing(); }

    bool operator==(const IntervalGrid&) const = default;

private:
    double length_;
    int cells_;
};

using Grid = std::variant<TorusGrid, IntervalGrid>;

int grid_size(const Grid& grid);
double grid_node(const Grid& grid, int j);

/// Real-valued nodal field. Immutable once built; construction rejects
/// non-finite values.
class Field1D {
public:
    Field1D(Grid grid, std::vector<double> values);

    static Field1D zeros(const Grid& grid);
    static Field1D constant(const Grid& grid, double value);
    static Field1D sample(const Grid& grid, const std::function<double(double)>& f);

    const Grid& grid() const { return grid_; }
    bool on_torus() const { return std::holds_alternative<TorusGrid>(grid_); }
    bool on_interval() const { return std::holds_alternative<IntervalGrid>(grid_); }
    const TorusGrid& torus() const;
    const IntervalGrid& interval() const;

    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t j) const { return values_[j]; }
    double front() const { return values_.front(); }
    double back() const { return values_.back(); }

    double max_abs() const;

private:
    Grid grid_;
    std::vector<double> values_;
};

bool same_grid(const Field1D& a, const Field1D& b);

Field1D operator+(const Field1D& a, const Field1D& b);
Field1D operator-(const Field1D& a, const Field1D& b);
Field1D operator*(double s, const Field1D& a);
/// Pointwise product.
Field1D pointwise(const Field1D& a, const Field1D& b);
/// x + s*y
Field1D axpy(const Field1D& x, double s, const Field1D& y);

/// Fourier coefficients of a real field on the torus, c_n for 0 <= n <= N/2.
/// Negative modes follow from conjugate symmetry. The Nyquist coefficient is
/// stored unsplit; signed access returns half of it for n = +-N/2 so that the
/// two-sided series reproduces the real trigonometric interpolant.
class Spectrum {
public:
    explicit Spectrum(int n_points);

    int n_points() const { return n_; }
    int max_mode() const { return n_ / 2; }

    /// Signed access, |n| <= N/2.
    std::complex<double> operator[](int n) const;

    std::span<std::complex<double>> half() { return half_; }
    std::span<const std::complex<double>> half() const { return half_; }

private:
    int n_;
    std::vector<std::complex<double>> half_;
};

Spectrum to_spectral(const Field1D& f);
Field1D to_grid(const Spectrum& c);

/// Zero every mode with |n| > N/3.
Spectrum dealias(Spectrum c);

/// Alias-free product on the torus: both factors and the result are truncated
/// to |n| <= N/3.
Field1D dealiased_product(const Field1D& a, const Field1D& b);

/// Spectral derivative on the torus, fourth-order finite differences on the
/// interval (one-sided five-point closures at the ends).
Field1D derivative(const Field1D& f);

/// sqrt(sum |c_n|^2 (1+n^2)^s); torus only, s >= 0.
double sobolev_norm(const Field1D& f, double s);
double sobolev_norm(const Spectrum& c, double s);

/// sqrt(int_0^L f^2 + f_x^2) by the trapezoid rule.
double h1_norm_interval(const Field1D& f);

/// Trapezoid-rule integral over the domain (periodic rule on the torus).
double integrate(const Field1D& f);

/// (2pi)^-1 int f = c_0. Torus only.
double mean(const Field1D& f);

/// Exact integral of the trigonometric interpolant over [left, right].
double band_integral(const Spectrum& c, double left, double right);

/// Spectrum of f*g with no truncation of the product (computed on a 2N grid).
Spectrum exact_product_spectrum(const Field1D& f, const Field1D& g);

}  // namespace bbm
