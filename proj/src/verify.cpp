// Verification suites behind `bbm verify <suite>`. Each check prints the
// measured value against its threshold.

#include "bbm/commands.hpp"
#include "bbm/diagnostics.hpp"
#include "bbm/io.hpp"
#include "bbm/timestep.hpp"

#include "bbm_oracle/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>

namespace bbm {

namespace {

constexpr double pi = std::numbers::pi;

struct Check {
    std::string name;
    double value;
    std::string relation;  // "<=", ">=", "in"
    double lo;
    double hi;
    bool pass;
};

Check at_most(std::string name, double value, double limit)
{
    return {std::move(name), value, "<=", limit, limit, value <= limit};
}

Check within(std::string name, double value, double lo, double hi)
{
    return {std::move(name), value, "in", lo, hi, value >= lo && value <= hi};
}

Check truth(std::string name, bool ok) { return {std::move(name), ok ? 1.0 : 0.0, "==", 1, 1, ok}; }

using Suite = std::function<std::vector<Check>()>;

Field1D reference_initial(const Grid& g)
{
    return Field1D::sample(g, [](double x) { return 0.5 * std::cos(x); });
}

Model reference_model(Variant v, const TorusGrid& g)
{
    return Model::torus(v, DampingProfile::bump(g, pi, 2.0, 1.0));
}

double max_relative_drift(const EnergyLedger& ledger)
{
    const double e0 = ledger.front().energy;
    double worst = 0.0;
    for (const auto& r : ledger)
        worst = std::max(worst, std::abs(r.energy - e0) / e0);
    return worst;
}

// Largest energy increase between records, in units of the balance residual.
bool monotone_within(const EnergyLedger& ledger, double slack)
{
    for (std::size_t k = 1; k < ledger.size(); ++k)
        if (ledger[k].energy > ledger[k - 1].energy + slack)
            return false;
    return true;
}

std::vector<double> to_vector(const Field1D& f) { return {f.values().begin(), f.values().end()}; }

// Max-norm gap between production and oracle right-hand sides at four
// resolutions; returns the observed orders.
std::vector<double> oracle_orders(Variant v)
{
    std::vector<double> gaps;
    for (int n : {32, 64, 128, 256}) {
        std::vector<double> prod, u;
        bbm_oracle::Params p;
        if (v == Variant::C) {
            const IntervalGrid g(pi, n);
            const Field1D f = Field1D::sample(
                g, [](double x) { return 0.3 + 0.5 * std::cos(x) + 0.2 * std::sin(2 * x + 0.3); });
            prod = to_vector(rhs_variant_C(f, Model::interval({1.0, 0.0})));
            u = to_vector(f);
            p.variant = bbm_oracle::Variant::C;
            p.alpha = 1.0;
            p.beta = 0.0;
            p.length = pi;
        } else {
            const TorusGrid g(n);
            const Field1D f = Field1D::sample(g, [](double x) {
                return 0.5 * std::cos(x) + 0.2 * std::sin(2 * x + 0.3) + 0.1 * std::cos(3 * x);
            });
            const Model m = reference_model(v, g);
            prod = to_vector(evolution_rhs(f, m));
            u = to_vector(f);
            p.variant = v == Variant::A ? bbm_oracle::Variant::A : bbm_oracle::Variant::B;
            p.damping = m.damping;
        }
        const auto o = bbm_oracle::oracle_rhs(u, p);
        double gap = 0.0;
        for (std::size_t j = 0; j < o.size(); ++j)
            gap = std::max(gap, std::abs(o[j] - prod[j]));
        gaps.push_back(gap);
    }
    std::vector<double> orders;
    for (std::size_t k = 1; k < gaps.size(); ++k)
        orders.push_back(std::log2(gaps[k - 1] / gaps[k]));
    return orders;
}

std::vector<Check> operators_suite()
{
    std::vector<Check> out;
    const TorusGrid g(64);

    double eig = 0.0;
    for (int k = 0; k < 32; ++k) {
        const Field1D mode = Field1D::sample(g, [k](double x) { return std::cos(k * x + 0.1); });
        const Field1D v = helmholtz_inverse_periodic(mode);
        eig = std::max(eig, (v - (1.0 / (1.0 + k * k)) * mode).max_abs());
    }
    out.push_back(at_most("helmholtz eigenfunction exactness (max error)", eig, 1e-13));

    const Field1D f = random_smooth(g, 7, 1.0, 10);
    const Field1D h = random_smooth(g, 8, 1.0, 10);
    const double lhs = integrate(pointwise(helmholtz_inverse_periodic(f), h));
    const double rhs = integrate(pointwise(f, helmholtz_inverse_periodic(h)));
    out.push_back(at_most("helmholtz self-adjointness (relative)",
                          std::abs(lhs - rhs) / std::max(std::abs(lhs), 1e-300), 1e-12));

    const double smooth_ratio =
        sobolev_norm(helmholtz_inverse_periodic(f), 2.5) / sobolev_norm(f, 0.5);
    out.push_back(at_most("smoothing ||H^-1 f||_{s+2} / ||f||_s", smooth_ratio, 1.0 + 1e-13));

    const IntervalGrid ig(pi, 256);
    const Field1D fi = random_smooth(ig, 9, 1.0, 10);
    const Field1D w = helmholtz_inverse_neumann(fi);
    out.push_back(at_most("neumann solve residual / ||f||",
                          (neumann_helmholtz_apply(w) - fi).max_abs() / fi.max_abs(), 1e-10));

    for (Variant v : {Variant::A, Variant::B, Variant::C}) {
        const auto orders = oracle_orders(v);
        const double lo = *std::min_element(orders.begin(), orders.end());
        const double hi = *std::max_element(orders.begin(), orders.end());
        out.push_back(within("oracle RHS order, variant " + to_string(v) + " (min)", lo, 1.8, 2.2));
        out.push_back(within("oracle RHS order, variant " + to_string(v) + " (max)", hi, 1.8, 2.2));
    }
    return out;
}

IntegratorConfig onestep(double dt, int record_stride)
{
    IntegratorConfig c;
    c.dt = dt;
    c.record_stride = record_stride;
    c.snapshot_stride = 1 << 30;
    return c;
}

std::vector<Check> conservation_suite()
{
    std::vector<Check> out;
    const TorusGrid g(256);
    const RunResult undamped = integrate(reference_initial(g), 20.0,
                                         Model::torus(Variant::A, DampingProfile::none(g)),
                                         onestep(1e-3, 100));
    out.push_back(at_most("undamped torus H1 energy drift (relative, horizon 20)",
                          max_relative_drift(undamped.ledger), 1e-6));

    const IntervalGrid ig(pi, 4096);
    const Field1D u0 = Field1D::sample(ig, [](double x) { return 0.5 * std::cos(x); });
    const RunResult conservative =
        integrate(u0, 10.0, Model::interval({0.5, 0.5}), onestep(1e-2, 5));
    out.push_back(at_most("alpha = beta = 1/2 energy drift (relative, horizon 10)",
                          max_relative_drift(conservative.ledger), 1e-6));
    return out;
}

void dissipative_checks(const std::string& label, const EnergyLedger& ledger,
                        std::vector<Check>& out, bool residual_gate)
{
    const double e0 = ledger.front().energy;
    const double residual = energy_balance_residual(ledger);
    if (residual_gate)
        out.push_back(at_most(label + ": balance residual / E(0)", residual / e0, 1e-7));
    out.push_back(truth(label + ": energy nonincreasing within 10x residual",
                        monotone_within(ledger, 10.0 * residual)));
    out.push_back(at_most(label + ": cumulative dissipation - E(0) - 10 residual",
                          ledger.back().cumulative_dissipation - e0 - 10.0 * residual, 0.0));
}

std::vector<Check> dissipation_suite()
{
    std::vector<Check> out;
    const TorusGrid g(256);
    const Field1D u0 = reference_initial(g);
    const RunResult a = integrate(u0, 10.0, reference_model(Variant::A, g), onestep(1e-3, 100));
    dissipative_checks("variant A", a.ledger, out, true);

    const Field1D ub = Field1D::sample(g, [](double x) { return 1.0 + 0.3 * std::cos(x); });
    const RunResult b = integrate(ub, 10.0, reference_model(Variant::B, g), onestep(1e-3, 100));
    dissipative_checks("variant B", b.ledger, out, true);
    double mean_drift = 0.0;
    for (const auto& r : b.ledger)
        mean_drift = std::max(mean_drift, std::abs(r.mean - b.ledger.front().mean));
    out.push_back(at_most("variant B: mean drift (absolute)", mean_drift, 1e-12));

    const IntervalGrid ig(pi, 4096);
    const Field1D uc = Field1D::sample(ig, [](double x) { return 0.5 * std::cos(x); });
    const RunResult c = integrate(uc, 10.0, Model::interval({1.0, 0.0}), onestep(1e-2, 5));
    dissipative_checks("variant C (alpha=1, beta=0)", c.ledger, out, false);
    return out;
}

std::vector<Check> lipschitz_suite()
{
    const TorusGrid g(128);
    const Model m = reference_model(Variant::A, g);
    PicardSettings ps;
    ps.dt_hint = 1e-2;
    double worst = 0.0;
    bool norms_ok = true;
    for (int k = 0; k < 20; ++k) {
        Field1D u0 = random_smooth(g, 100 + k, 1.0, 6);
        u0 = (0.9 / sobolev_norm(u0, 1.0)) * u0;
        Field1D dv = random_smooth(g, 500 + k, 1.0, 6);
        dv = (1e-3 / sobolev_norm(dv, 1.0)) * dv;
        const Field1D v0 = u0 + dv;
        norms_ok = norms_ok && sobolev_norm(u0, 1.0) <= 1.0 && sobolev_norm(v0, 1.0) <= 1.0;
        PicardResult pu = picard_solve(u0, 1.0, ps, m);
        PicardResult pv = picard_solve(v0, pu.window, ps, m);
        if (pv.window < pu.window)
            pu = picard_solve(u0, pv.window, ps, m);
        worst = std::max(worst, path_distance(pu.path, pv.path, 1.0) / sobolev_norm(dv, 1.0));
    }
    return {truth("pairs satisfy ||u0||_1, ||v0||_1 <= 1", norms_ok),
            at_most("sup_t ||u - v||_1 / ||u0 - v0||_1 over 20 pairs", worst, 2.0)};
}

std::vector<Check> picard_suite()
{
    const TorusGrid g(256);
    const Field1D u0 = reference_initial(g);
    const Model m = reference_model(Variant::A, g);
    PicardSettings ps;
    ps.dt_hint = 1e-3;
    const PicardResult pr = picard_solve(u0, 0.5, ps, m);
    StepperState s{0.0, u0, pr.path.times[1]};
    double gap = 0.0;
    for (std::size_t k = 1; k < pr.path.size(); ++k) {
        s = rk4_step(s, m);
        gap = std::max(gap, sobolev_norm(s.u - pr.path.states[k], 0.0));
    }
    const double defect = path_distance(gamma_map(pr.path, u0, m), pr.path, 0.0);
    return {at_most("picard vs rk4, sup over window of H0 gap", gap, 1e-6),
            at_most("picard defect / tolerance", defect / ps.fixed_point_tolerance, 10.0)};
}

const std::map<std::string, Suite>& suites()
{
    static const std::map<std::string, Suite> table = {
        {"operators", operators_suite},   {"conservation", conservation_suite},
        {"dissipation", dissipation_suite}, {"lipschitz", lipschitz_suite},
        {"picard", picard_suite},
    };
    return table;
}

void print(std::ostream& out, const Check& c)
{
    char buf[256];
    if (c.relation == "in")
        std::snprintf(buf, sizeof buf, "%-4s %-62s %.3e in [%.3g, %.3g]", c.pass ? "PASS" : "FAIL",
                      c.name.c_str(), c.value, c.lo, c.hi);
    else if (c.relation == "==")
        std::snprintf(buf, sizeof buf, "%-4s %-62s", c.pass ? "PASS" : "FAIL", c.name.c_str());
    else
        std::snprintf(buf, sizeof buf, "%-4s %-62s %.3e %s %.3g", c.pass ? "PASS" : "FAIL",
                      c.name.c_str(), c.value, c.relation.c_str(), c.hi);
    out << buf << '\n';
}

}  // namespace

int run_verify(const std::string& suite, std::ostream& out)
{
    std::vector<std::string> names;
    if (suite == "all") {
        for (const auto& [name, fn] : suites())
            names.push_back(name);
    } else if (suites().count(suite)) {
        names.push_back(suite);
    } else {
        out << "unknown suite '" << suite
            << "' (expected operators|conservation|dissipation|lipschitz|picard|all)\n";
        return exit_bad_config;
    }
    bool all_pass = true;
    for (const auto& name : names) {
        out << "[" << name << "]\n";
        for (const auto& c : suites().at(name)()) {
            print(out, c);
            all_pass = all_pass && c.pass;
        }
    }
    out << (all_pass ? "all checks passed" : "some checks FAILED") << '\n';
    return all_pass ? exit_ok : exit_check_failed;
}

}  // namespace bbm
