#include "bbm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace bbm {

namespace {

double interval_l2(const Field1D& u) { return std::sqrt(integrate(pointwise(u, u))); }

double interpolate_cumulative(const EnergyLedger& ledger, double t)
{
    auto it = std::lower_bound(ledger.begin(), ledger.end(), t,
                               [](const EnergyRecord& r, double v) { return r.t < v; });
    if (it == ledger.begin())
        return it->cumulative_dissipation;
    if (it == ledger.end())
        return ledger.back().cumulative_dissipation;
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double w = (t - lo.t) / (hi.t - lo.t);
    return (1.0 - w) * lo.cumulative_dissipation + w * hi.cumulative_dissipation;
}

}  // namespace

double energy(const Field1D& u)
{
    if (u.on_torus()) {
        const double n1 = sobolev_norm(u, 1.0);
        return std::numbers::pi * n1 * n1;
    }
    const double h1 = h1_norm_interval(u);
    return 0.5 * h1 * h1;
}

double dissipation_rate(const Field1D& u, const Model& model)
{
    switch (model.variant) {
    case Variant::A: {
        if (model.damping.empty())
            return 0.0;
        double sum = 0.0;
        for (std::size_t j = 0; j < u.size(); ++j)
            sum += model.damping[j] * u[j] * u[j];
        return sum * u.torus().spacing();
    }
    case Variant::B: {
        if (model.damping.empty())
            return 0.0;
        const Field1D ux = derivative(u);
        double sum = 0.0;
        for (std::size_t j = 0; j < u.size(); ++j)
            sum += model.damping[j] * ux[j] * ux[j];
        return sum * u.torus().spacing();
    }
    case Variant::C: {
        const auto& fb = model.feedback;
        return (0.5 - fb.beta) * u.back() * u.back() + (fb.alpha - 0.5) * u.front() * u.front();
    }
    }
    return 0.0;
}

double h1_distance(const Field1D& u, double target)
{
    const Field1D d = u - Field1D::constant(u.grid(), target);
    return d.on_torus() ? sobolev_norm(d, 1.0) : h1_norm_interval(d);
}

EnergyRecord make_record(double t, const Field1D& u, const Model& model,
                         double cumulative_dissipation, double initial_energy)
{
    EnergyRecord r;
    r.t = t;
    r.energy = energy(u);
    r.mean = u.on_torus() ? mean(u) : integrate(u) / u.interval().length();
    r.dissipation_rate = dissipation_rate(u, model);
    r.cumulative_dissipation = cumulative_dissipation;
    r.balance_residual = r.energy - initial_energy + cumulative_dissipation;
    return r;
}

double energy_balance_residual(const EnergyLedger& ledger)
{
    double worst = 0.0;
    for (const auto& r : ledger)
        worst = std::max(worst, std::abs(r.balance_residual));
    return worst;
}

TailReport tail_dissipation(const EnergyLedger& ledger, double window)
{
    if (!(window > 0.0))
        throw std::invalid_argument("tail window must be positive");
    TailReport rep;
    rep.window = window;
    if (ledger.empty())
        return rep;
    const double t0 = ledger.front().t;
    const double span = ledger.back().t - t0;
    const auto count = static_cast<std::size_t>(std::floor(span / window * (1.0 + 1e-12)));
    for (std::size_t n = 0; n < count; ++n) {
        const double a = t0 + n * window;
        const double b = t0 + (n + 1) * window;
        rep.integrals.push_back(interpolate_cumulative(ledger, b) -
                                interpolate_cumulative(ledger, a));
    }
    if (rep.integrals.empty())
        return rep;
    std::size_t n0 = rep.integrals.size() - 1;
    while (n0 > 0 && rep.integrals[n0 - 1] >= rep.integrals[n0])
        --n0;
    rep.decreasing_from = n0;
    rep.eventually_decreasing = rep.integrals.size() >= 3 && 2 * n0 <= rep.integrals.size();
    rep.first = rep.integrals.front();
    rep.last = rep.integrals.back();
    return rep;
}

double band_observable(const Field1D& u, const Band& band, Variant variant)
{
    switch (variant) {
    case Variant::A: return band_integral(exact_product_spectrum(u, u), band.left, band.right);
    case Variant::B: {
        const Field1D ux = derivative(u);
        return band_integral(exact_product_spectrum(ux, ux), band.left, band.right);
    }
    case Variant::C: return u.front() * u.front() + u.back() * u.back();
    }
    return 0.0;
}

DecayReport decay_report(const Trajectory& trajectory, const Model& model, double window,
                         double slack)
{
    DecayReport rep;
    rep.variant = model.variant;
    rep.slack = slack;
    if (trajectory.empty())
        return rep;
    const Field1D& u0 = trajectory.front().u;
    rep.target = (model.variant == Variant::B) ? mean(u0) : 0.0;
    if (u0.on_torus())
        rep.sobolev_indices = {0.0, 0.5, 0.9};
    else
        rep.sobolev_indices = {0.0};  // fractional interval norms are not tracked
    rep.norms.resize(rep.sobolev_indices.size());

    double last_t = -1e300;
    for (const auto& snap : trajectory) {
        if (!rep.times.empty() && snap.t - last_t < window * (1.0 - 1e-12))
            continue;
        last_t = snap.t;
        rep.times.push_back(snap.t);
        const Field1D d = snap.u - Field1D::constant(snap.u.grid(), rep.target);
        for (std::size_t i = 0; i < rep.sobolev_indices.size(); ++i) {
            const double s = rep.sobolev_indices[i];
            rep.norms[i].push_back(d.on_torus() ? sobolev_norm(d, s) : interval_l2(d));
        }
        rep.h1_distance.push_back(h1_distance(snap.u, rep.target));
        rep.band_observable.push_back(band_observable(snap.u, model.band, model.variant));
    }

    for (std::size_t n = 1; n < rep.h1_distance.size(); ++n)
        if (rep.h1_distance[n] > rep.h1_distance[n - 1] + slack)
            rep.monotone = false;
    rep.limit_estimate = rep.h1_distance.back();

    // log-linear fit over strictly positive samples
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (std::size_t n = 0; n < rep.times.size(); ++n) {
        if (rep.h1_distance[n] <= 0.0)
            continue;
        const double x = rep.times[n];
        const double y = std::log(rep.h1_distance[n]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    const double denom = count * sxx - sx * sx;
    if (count >= 3 && denom > 0.0)
        rep.empirical_rate = -(count * sxy - sx * sy) / denom;
    return rep;
}

}  // namespace bbm
