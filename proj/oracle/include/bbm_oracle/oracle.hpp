#pragma once

// Low-order reference discretization of the three damped BBM variants.
//
// Second-order centered differences, dense Gaussian elimination for the
// Helmholtz systems, explicit midpoint stepping. Nothing here includes or links
// the production library: this code exists to disagree with it.

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace bbm_oracle {

enum class Variant { A, B, C };

struct Params {
    Variant variant = Variant::A;
    /// Nodal damping a(x) on the periodic grid (A, B); empty means a == 0.
    std::vector<double> damping;
    double alpha = 1.0;   // C
    double beta = 0.0;    // C
    double length = 1.0;  // C: interval length; the torus period is 2*pi
    bool nonlinear = true;
};

class SingularMatrix : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Unstable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dense (I - D2) with periodic or (symmetrized) ghost-point Neumann closure,
/// LU-factored on construction.
class DenseOperator {
public:
    static DenseOperator periodic(std::size_t n, double h);
    static DenseOperator neumann(std::size_t nodes, double h);

    std::size_t size() const { return n_; }
    double entry(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
    std::vector<double> apply(const std::vector<double>& x) const;
    std::vector<double> solve(std::vector<double> b) const;

private:
    DenseOperator(std::size_t n, std::vector<double> a);

    std::size_t n_;
    std::vector<double> a_;
    std::vector<double> lu_;
    std::vector<std::size_t> pivot_;
};

/// u_t for the variant: nodes on [0, 2pi) for A/B, on [0, L] (M+1 nodes) for C.
std::vector<double> oracle_rhs(const std::vector<double>& u, const Params& params);

/// (1/2) sum h (u^2 + (forward difference u)^2), periodic or interval.
double oracle_energy(const std::vector<double>& u, const Params& params);

/// Explicit midpoint steps of oracle_rhs to the horizon.
std::vector<double> oracle_integrate(const std::vector<double>& u0, double horizon, double dt,
                                     const Params& params);

}  // namespace bbm_oracle
