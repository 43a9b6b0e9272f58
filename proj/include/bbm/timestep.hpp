#pragma once

// Time integration: Picard iteration of the integral-form map, classical RK4,
// and the windowed driver that produces trajectories and energy ledgers.

#include "bbm/diagnostics.hpp"
#include "bbm/field.hpp"
#include "bbm/operators.hpp"

#include <span>
#include <stdexcept>
#include <vector>

namespace bbm {

/// Integration failed (non-finite state or no contracting window) at time().
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(double t, const std::string& what);
    double time() const { return time_; }

private:
    double time_;
};

struct PicardSettings {
    double window = 0.5;
    int max_iterations = 50;
    /// Sup over the window of the H^s increment between successive iterates.
    double fixed_point_tolerance = 1e-12;
    double contraction_target = 0.5;
    double window_shrink_factor = 0.5;
    /// Time-sample spacing; a window uses max(16, ceil(T/dt_hint)) intervals.
    double dt_hint = 1e-3;
    double sobolev_index = 1.0;
    double min_window = 1e-8;

    void validate() const;
};

/// Uniformly sampled path t -> u(t) on [0, T].
struct Path {
    std::vector<double> times;
    std::vector<Field1D> states;

    std::size_t size() const { return states.size(); }
};

/// Number of sample intervals for a window (even, for Simpson's rule).
int picard_intervals(double window, double dt_hint);

Path constant_path(const Field1D& u0, double window, int intervals);

/// Cumulative integral of uniformly spaced samples, fourth-order accurate at
/// every sample: Simpson on even points, a three-point rule on odd points.
std::vector<double> cumulative_simpson(std::span<const double> f, double h);

/// (Gamma u)(t) = u0 + int_0^t F(u(tau)) dtau on the path's sample grid.
Path gamma_map(const Path& path, const Field1D& u0, const Model& model);

/// Norm used for increments: torus H^s; interval L2 (s = 0) or H1 (s = 1).
double state_norm(const Field1D& u, double s);
double path_distance(const Path& a, const Path& b, double s);

struct PicardResult {
    Path path;
    double window = 0.0;
    int iterations = 0;
    int restarts = 0;
    double last_increment = 0.0;
};

/// Iterates Gamma from the constant path. When the observed contraction ratio
/// stays above the target for three iterations (or the iteration budget runs
/// out) the window shrinks and the iteration restarts.
PicardResult picard_solve(const Field1D& u0, double window, const PicardSettings& settings,
                          const Model& model);

struct StepperState {
    double t = 0.0;
    Field1D u;
    double dt = 1e-3;
    long accepted_steps = 0;
    long rejected_windows = 0;
    /// int_0^t D, advanced with the same stages as u.
    double cumulative_dissipation = 0.0;
};

StepperState rk4_step(const StepperState& state, const Model& model);

enum class IntegratorKind { Picard, OneStep };

struct IntegratorConfig {
    IntegratorKind kind = IntegratorKind::OneStep;
    double dt = 1e-3;
    int record_stride = 10;
    int snapshot_stride = 1000;
    PicardSettings picard;
};

struct RunResult {
    Trajectory trajectory;
    EnergyLedger ledger;
    long steps = 0;
    long rejected_windows = 0;
};

RunResult integrate(const Field1D& u0, double horizon, const Model& model,
                    const IntegratorConfig& config);

}  // namespace bbm
