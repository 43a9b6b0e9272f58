#include "bbm/timestep.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bbm {

IntegrationError::IntegrationError(double t, const std::string& what)
    : std::runtime_error(what + " (t=" + std::to_string(t) + ")"), time_(t)
{
}

void PicardSettings::validate() const
{
    if (!(window > 0.0))
        throw std::invalid_argument("picard window must be positive");
    if (max_iterations < 1)
        throw std::invalid_argument("picard max_iterations must be >= 1");
    if (!(fixed_point_tolerance > 0.0))
        throw std::invalid_argument("picard fixed_point_tolerance must be positive");
    if (!(contraction_target > 0.0 && contraction_target < 1.0))
        throw std::invalid_argument("picard contraction_target must lie in (0, 1)");
    if (!(window_shrink_factor > 0.0 && window_shrink_factor < 1.0))
        throw std::invalid_argument("picard window_shrink_factor must lie in (0, 1)");
    if (!(dt_hint > 0.0))
        throw std::invalid_argument("picard dt_hint must be positive");
}

int picard_intervals(double window, double dt_hint)
{
    int k = std::max(16, static_cast<int>(std::ceil(window / dt_hint - 1e-9)));
    return k + (k % 2);
}

Path constant_path(const Field1D& u0, double window, int intervals)
{
    Path p;
    p.times.resize(intervals + 1);
    for (int k = 0; k <= intervals; ++k)
        p.times[k] = window * k / intervals;
    p.states.assign(intervals + 1, u0);
    return p;
}

std::vector<double> cumulative_simpson(std::span<const double> f, double h)
{
    const std::size_t n = f.size();
    std::vector<double> out(n, 0.0);
    if (n < 2)
        return out;
    if (n == 2) {
        out[1] = 0.5 * h * (f[0] + f[1]);
        return out;
    }
    for (std::size_t k = 2; k < n; k += 2)
        out[k] = out[k - 2] + h / 3.0 * (f[k - 2] + 4.0 * f[k - 1] + f[k]);
    for (std::size_t k = 1; k < n; k += 2) {
        if (k + 1 < n)
            out[k] = out[k - 1] + h / 12.0 * (5.0 * f[k - 1] + 8.0 * f[k] - f[k + 1]);
        else
            out[k] = out[k - 1] + h / 12.0 * (-f[k - 2] + 8.0 * f[k - 1] + 5.0 * f[k]);
    }
    return out;
}

Path gamma_map(const Path& path, const Field1D& u0, const Model& model)
{
    const std::size_t samples = path.size();
    if (samples < 2)
        throw std::invalid_argument("gamma_map needs at least two samples");
    const double h = path.times[1] - path.times[0];
    const std::size_t nodes = u0.size();

    // rates[j][k] = F(u(t_k)) at node j, so each node's series is contiguous.
    std::vector<std::vector<double>> rates(nodes, std::vector<double>(samples));
    for (std::size_t k = 0; k < samples; ++k) {
        const Field1D f = evolution_rhs(path.states[k], model);
        for (std::size_t j = 0; j < nodes; ++j)
            rates[j][k] = f[j];
    }
    std::vector<std::vector<double>> values(samples, std::vector<double>(nodes));
    for (std::size_t j = 0; j < nodes; ++j) {
        const auto acc = cumulative_simpson(rates[j], h);
        for (std::size_t k = 0; k < samples; ++k)
            values[k][j] = u0[j] + acc[k];
    }
    Path out;
    out.times = path.times;
    out.states.reserve(samples);
    for (auto& v : values)
        out.states.emplace_back(u0.grid(), std::move(v));
    return out;
}

double state_norm(const Field1D& u, double s)
{
    if (u.on_torus())
        return sobolev_norm(u, s);
    if (s == 0.0)
        return std::sqrt(integrate(pointwise(u, u)));
    if (s == 1.0)
        return h1_norm_interval(u);
    throw std::invalid_argument("interval norms are available for s = 0 and s = 1 only");
}

double path_distance(const Path& a, const Path& b, double s)
{
    if (a.size() != b.size())
        throw std::invalid_argument("paths have different sample counts");
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        worst = std::max(worst, state_norm(a.states[k] - b.states[k], s));
    return worst;
}

PicardResult picard_solve(const Field1D& u0, double window, const PicardSettings& settings,
                          const Model& model)
{
    settings.validate();
    if (!(window > 0.0))
        throw std::invalid_argument("picard window must be positive");

    PicardResult result;
    double T = window;
    for (;;) {
        if (T < settings.min_window)
            throw IntegrationError(0.0, "picard window shrank below " +
                                            std::to_string(settings.min_window));
        const int intervals = picard_intervals(T, settings.dt_hint);
        Path path = constant_path(u0, T, intervals);
        double previous = -1.0;
        int slow = 0;
        bool shrink = false;
        try {
            for (int it = 1; it <= settings.max_iterations; ++it) {
                Path next = gamma_map(path, u0, model);
                const double increment = path_distance(next, path, settings.sobolev_index);
                path = std::move(next);
                if (increment < settings.fixed_point_tolerance) {
                    result.path = std::move(path);
                    result.window = T;
                    result.iterations = it;
                    result.last_increment = increment;
                    return result;
                }
                if (previous > 0.0) {
                    slow = (increment / previous > settings.contraction_target) ? slow + 1 : 0;
                    if (slow >= 3) {
                        shrink = true;
                        break;
                    }
                }
                previous = increment;
            }
            shrink = true;
        } catch (const NonFiniteError&) {
            shrink = true;
        }
        if (shrink) {
            T *= settings.window_shrink_factor;
            ++result.restarts;
        }
    }
}

StepperState rk4_step(const StepperState& state, const Model& model)
{
    if (!(state.dt > 0.0))
        throw std::invalid_argument("rk4_step needs dt > 0");
    const double dt = state.dt;
    try {
        const Field1D& u = state.u;
        const Field1D k1 = evolution_rhs(u, model);
        const Field1D u2 = axpy(u, 0.5 * dt, k1);
        const Field1D k2 = evolution_rhs(u2, model);
        const Field1D u3 = axpy(u, 0.5 * dt, k2);
        const Field1D k3 = evolution_rhs(u3, model);
        const Field1D u4 = axpy(u, dt, k3);
        const Field1D k4 = evolution_rhs(u4, model);

        std::vector<double> next(u.size());
        for (std::size_t j = 0; j < next.size(); ++j)
            next[j] = u[j] + dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);

        const double d1 = dissipation_rate(u, model);
        const double d2 = dissipation_rate(u2, model);
        const double d3 = dissipation_rate(u3, model);
        const double d4 = dissipation_rate(u4, model);

        StepperState out{state.t + dt, Field1D(u.grid(), std::move(next)), dt,
                         state.accepted_steps + 1, state.rejected_windows,
                         state.cumulative_dissipation + dt / 6.0 * (d1 + 2.0 * d2 + 2.0 * d3 + d4)};
        return out;
    } catch (const NonFiniteError&) {
        throw IntegrationError(state.t, "non-finite stage value in rk4_step");
    }
}

namespace {

RunResult integrate_onestep(const Field1D& u0, double horizon, const Model& model,
                            const IntegratorConfig& config)
{
    RunResult run;
    const double e0 = energy(u0);
    run.ledger.push_back(make_record(0.0, u0, model, 0.0, e0));
    run.trajectory.push_back({0.0, u0});
    if (horizon == 0.0)
        return run;

    const long steps = std::max(1L, static_cast<long>(std::ceil(horizon / config.dt - 1e-9)));
    const double dt = horizon / steps;
    StepperState state{0.0, u0, dt};
    for (long n = 1; n <= steps; ++n) {
        state = rk4_step(state, model);
        state.t = n * dt;  // avoid drift from repeated addition
        if (n % config.record_stride == 0 || n == steps)
            run.ledger.push_back(
                make_record(state.t, state.u, model, state.cumulative_dissipation, e0));
        if (n % config.snapshot_stride == 0 || n == steps)
            run.trajectory.push_back({state.t, state.u});
    }
    run.steps = state.accepted_steps;
    return run;
}

RunResult integrate_picard(const Field1D& u0, double horizon, const Model& model,
                           const IntegratorConfig& config)
{
    RunResult run;
    const double e0 = energy(u0);
    run.ledger.push_back(make_record(0.0, u0, model, 0.0, e0));
    run.trajectory.push_back({0.0, u0});

    PicardSettings settings = config.picard;
    settings.dt_hint = config.dt;
    double t = 0.0;
    double cumulative = 0.0;
    long sample = 0;
    Field1D u = u0;
    while (t < horizon * (1.0 - 1e-14)) {
        const double remaining = horizon - t;
        PicardResult window;
        try {
            window = picard_solve(u, std::min(settings.window, remaining), settings, model);
        } catch (const IntegrationError& e) {
            throw IntegrationError(t, e.what());
        }
        run.rejected_windows += window.restarts;

        const auto& path = window.path;
        std::vector<double> rates(path.size());
        for (std::size_t k = 0; k < path.size(); ++k)
            rates[k] = dissipation_rate(path.states[k], model);
        const auto acc = cumulative_simpson(rates, path.times[1] - path.times[0]);

        const bool final_window = window.window >= remaining * (1.0 - 1e-12);
        for (std::size_t k = 1; k < path.size(); ++k) {
            ++sample;
            const bool last = final_window && k + 1 == path.size();
            const double tk = final_window && k + 1 == path.size() ? horizon : t + path.times[k];
            if (sample % config.record_stride == 0 || last)
                run.ledger.push_back(
                    make_record(tk, path.states[k], model, cumulative + acc[k], e0));
            if (sample % config.snapshot_stride == 0 || last)
                run.trajectory.push_back({tk, path.states[k]});
        }
        cumulative += acc.back();
        u = path.states.back();
        t = final_window ? horizon : t + window.window;
        run.steps += static_cast<long>(path.size()) - 1;
    }
    return run;
}

}  // namespace

RunResult integrate(const Field1D& u0, double horizon, const Model& model,
                    const IntegratorConfig& config)
{
    if (!(horizon >= 0.0))
        throw std::invalid_argument("horizon must be >= 0");
    if (!(config.dt > 0.0) || config.record_stride < 1 || config.snapshot_stride < 1)
        throw std::invalid_argument("dt and strides must be positive");
    if (horizon == 0.0 || config.kind == IntegratorKind::OneStep)
        return integrate_onestep(u0, horizon, model, config);
    return integrate_picard(u0, horizon, model, config);
}

}  // namespace bbm
