#pragma once

// Operator algebra of the damped BBM variants: Helmholtz inverses, damping
// profiles, the boundary lift and the evolution right-hand sides u_t = F(u).

#include "bbm/field.hpp"

#include <string>
#include <vector>

namespace bbm {

enum class Variant { A, B, C };

std::string to_string(Variant v);
Variant parse_variant(const std::string& s);

/// Open band (left, right) on the domain. On the torus the band may extend
/// past 2*pi; it is read modulo 2*pi.
struct Band {
    double left = 0.0;
    double right = 0.0;
    double width() const { return right - left; }
};

enum class DampingKind { None, Bump, Constant, Table };

/// Nonnegative damping coefficient a(x) sampled on a torus grid.
class DampingProfile {
public:
    /// a == 0 everywhere.
    static DampingProfile none(const TorusGrid& grid);
    /// amplitude * exp(1 - 1/(1 - ((x-center)/radius)^2)) on |x-center| < radius
    /// (periodic distance), zero elsewhere.
    static DampingProfile bump(const TorusGrid& grid, double center, double radius,
                               double amplitude);
    static DampingProfile constant(const TorusGrid& grid, double amplitude);
    /// Periodic piecewise-linear interpolation of (x, a) samples in [0, 2pi).
    static DampingProfile table(const TorusGrid& grid, std::vector<double> xs,
                                std::vector<double> as);
    static DampingProfile table_from_csv(const TorusGrid& grid, const std::string& path);

    DampingKind kind() const { return kind_; }
    const Band& band() const { return band_; }
    double amplitude() const { return amplitude_; }
    const Field1D& values() const { return values_; }
    bool is_zero() const { return kind_ == DampingKind::None || amplitude_ == 0.0; }

private:
    DampingProfile(DampingKind kind, Band band, double amplitude, Field1D values);

    DampingKind kind_;
    Band band_;
    double amplitude_;
    Field1D values_;
};

struct FeedbackCoefficients {
    double alpha = 1.0;
    double beta = 0.0;

    bool dissipative() const { return alpha > 0.5 && beta < 0.5; }
    bool conservative() const { return alpha == 0.5 && beta == 0.5; }
};

/// g(x) = a x + (b - a)/(2L) x^2, so that g'(0) = a and g'(L) = b.
struct BoundaryLift {
    double a_val = 0.0;
    double b_val = 0.0;
    double length = 1.0;

    double value(double x) const { return a_val * x + (b_val - a_val) / (2.0 * length) * x * x; }
    double slope(double x) const { return a_val + (b_val - a_val) / length * x; }
    double curvature() const { return (b_val - a_val) / length; }
};

/// Everything the right-hand side needs besides the state.
struct Model {
    Variant variant = Variant::A;
    std::vector<double> damping;  // nodal a(x); empty means a == 0 (A, B)
    Band band;                    // support band of a (A, B)
    FeedbackCoefficients feedback;  // (C)
    bool nonlinear = true;        // test hook: drop the u u_x term
    bool dealias = true;          // two-thirds rule on the quadratic term (torus)

    static Model torus(Variant v, const DampingProfile& a);
    static Model interval(FeedbackCoefficients fb);
};

/// v with (1 - d_xx) v = f on the torus, v_n = f_n / (1 + n^2).
Field1D helmholtz_inverse_periodic(const Field1D& f);

/// w with (1 - d_xx) w = f on (0, L), w_x(0) = w_x(L) = 0. Second-order
/// ghost-point closure, tridiagonal elimination.
Field1D helmholtz_inverse_neumann(const Field1D& f);

/// Applies the discrete Neumann operator (I - D2) used by the solve above.
Field1D neumann_helmholtz_apply(const Field1D& w);

BoundaryLift make_boundary_lift(const Field1D& u, const FeedbackCoefficients& coeffs);

/// u_t = -(1 - d_xx)^-1 [a u + (u + u^2/2)_x]
Field1D rhs_variant_A(const Field1D& u, const Model& model);
/// u_t = -(1 - d_xx)^-1 [(u + u^2/2)_x - (a u_x)_x]
Field1D rhs_variant_B(const Field1D& u, const Model& model);
/// u_t = -(1 - d_xx)_N^-1 (u_x + u u_x) + g - (1 - d_xx)_N^-1 (g - g_xx)
Field1D rhs_variant_C(const Field1D& u, const Model& model);

Field1D evolution_rhs(const Field1D& u, const Model& model);

}  // namespace bbm
