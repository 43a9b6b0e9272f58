#pragma once

// Energy ledgers, dissipation balance, tail dissipation, band observables
// and decay reports.

#include "bbm/field.hpp"
#include "bbm/operators.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bbm {

/// H1 energy (1/2) int (u^2 + u_x^2) dx. On the torus this is pi * ||u||_1^2.
double energy(const Field1D& u);

/// Instantaneous dissipation D(t) >= 0 of the energy identity for the variant:
///   A: int a u^2,   B: int a u_x^2,   C: (1/2 - beta) u(L)^2 + (alpha - 1/2) u(0)^2.
double dissipation_rate(const Field1D& u, const Model& model);

/// Distance whose decay the stabilization results predict: ||u||_1 for A and
/// C, ||u - [u0]||_1 for B.
double h1_distance(const Field1D& u, double target);

struct EnergyRecord {
    double t = 0.0;
    double energy = 0.0;
    double mean = 0.0;
    double dissipation_rate = 0.0;
    double cumulative_dissipation = 0.0;
    double balance_residual = 0.0;
};

using EnergyLedger = std::vector<EnergyRecord>;

EnergyRecord make_record(double t, const Field1D& u, const Model& model,
                         double cumulative_dissipation, double initial_energy);

struct Snapshot {
    double t;
    Field1D u;
};

using Trajectory = std::vector<Snapshot>;

/// max_t |E(t) - E(0) + int_0^t D|
double energy_balance_residual(const EnergyLedger& ledger);

struct TailReport {
    double window = 0.0;
    std::vector<double> integrals;  // I_n over [nT, (n+1)T]
    /// Smallest n0 with I_n nonincreasing for all n >= n0.
    std::size_t decreasing_from = 0;
    bool eventually_decreasing = false;  // tail covers at least the last half
    double first = 0.0;
    double last = 0.0;
};

/// Window integrals of D from the ledger's cumulative dissipation (linear
/// interpolation between records).
TailReport tail_dissipation(const EnergyLedger& ledger, double window);

/// A: int_band u^2,  B: int_band u_x^2,  C: u(0)^2 + u(L)^2.
double band_observable(const Field1D& u, const Band& band, Variant variant);

struct DecayReport {
    Variant variant = Variant::A;
    double target = 0.0;
    std::vector<double> sobolev_indices;
    std::vector<double> times;
    std::vector<std::vector<double>> norms;  // norms[i][n] for index i at t_n
    std::vector<double> h1_distance;
    std::vector<double> band_observable;
    double slack = 0.0;
    bool monotone = true;
    double limit_estimate = 0.0;
    /// Least-squares slope of log(h1_distance) vs t; reported, not asserted.
    std::optional<double> empirical_rate;
    std::optional<double> failure_time;
    std::string failure_message;
};

/// Samples the trajectory at times spaced at least `window` apart and measures
/// the distance to the predicted limit (0 for A and C, the initial mean for B).
DecayReport decay_report(const Trajectory& trajectory, const Model& model, double window,
                         double slack);

}  // namespace bbm
