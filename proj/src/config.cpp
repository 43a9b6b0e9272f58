#include "bbm/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>

namespace bbm {

using nlohmann::json;

ConfigError::ConfigError(std::string field, const std::string& message)
    : std::runtime_error("config field '" + field + "': " + message), field_(std::move(field))
{
}

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

void reject_unknown(const json& obj, const std::string& where, std::set<std::string> allowed)
{
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key))
            throw ConfigError(where.empty() ? key : where + "." + key, "unknown key");
}

const json& object_at(const json& doc, const std::string& key, const std::string& where)
{
    const std::string path = where.empty() ? key : where + "." + key;
    if (!doc.contains(key))
        throw ConfigError(path, "missing");
    const json& v = doc.at(key);
    if (!v.is_object())
        throw ConfigError(path, "expected an object");
    return v;
}

template <class T>
T read(const json& obj, const std::string& key, const std::string& where, T fallback)
{
    const std::string path = where.empty() ? key : where + "." + key;
    if (!obj.contains(key))
        return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(path, std::string("wrong type: ") + e.what());
    }
}

template <class T>
T require(const json& obj, const std::string& key, const std::string& where)
{
    const std::string path = where.empty() ? key : where + "." + key;
    if (!obj.contains(key))
        throw ConfigError(path, "missing");
    return read<T>(obj, key, where, T{});
}

InitialCondition parse_initial(const json& ic)
{
    const std::string where = "initial_condition";
    const auto kind = require<std::string>(ic, "kind", where);
    InitialCondition out;
    if (kind == "constant") {
        reject_unknown(ic, where, {"kind", "value"});
        out.kind = InitialKind::Constant;
        out.value = require<double>(ic, "value", where);
    } else if (kind == "single_mode") {
        reject_unknown(ic, where, {"kind", "amplitude", "wavenumber"});
        out.kind = InitialKind::SingleMode;
        out.amplitude = require<double>(ic, "amplitude", where);
        out.wavenumber = read<int>(ic, "wavenumber", where, 1);
    } else if (kind == "solitary_wave") {
        reject_unknown(ic, where, {"kind", "speed", "center"});
        out.kind = InitialKind::SolitaryWave;
        out.speed = require<double>(ic, "speed", where);
        out.center = read<double>(ic, "center", where, std::numbers::pi);
    } else if (kind == "random_smooth") {
        reject_unknown(ic, where, {"kind", "seed", "amplitude", "cutoff"});
        out.kind = InitialKind::RandomSmooth;
        out.seed = read<std::uint64_t>(ic, "seed", where, 1);
        out.amplitude = require<double>(ic, "amplitude", where);
        out.cutoff = read<int>(ic, "cutoff", where, 8);
    } else {
        throw ConfigError(where + ".kind", "unknown initial condition '" + kind + "'");
    }
    return out;
}

DampingSpec parse_damping(const json& d)
{
    const std::string where = "damping";
    const auto kind = require<std::string>(d, "kind", where);
    DampingSpec out;
    if (kind == "none") {
        reject_unknown(d, where, {"kind"});
        out.kind = DampingKind::None;
    } else if (kind == "bump") {
        reject_unknown(d, where, {"kind", "center", "radius", "amplitude"});
        out.kind = DampingKind::Bump;
        out.center = require<double>(d, "center", where);
        out.radius = require<double>(d, "radius", where);
        out.amplitude = require<double>(d, "amplitude", where);
    } else if (kind == "constant") {
        reject_unknown(d, where, {"kind", "amplitude"});
        out.kind = DampingKind::Constant;
        out.amplitude = require<double>(d, "amplitude", where);
    } else if (kind == "table") {
        reject_unknown(d, where, {"kind", "path"});
        out.kind = DampingKind::Table;
        out.table_path = require<std::string>(d, "path", where);
    } else {
        throw ConfigError(where + ".kind", "unknown damping kind '" + kind + "'");
    }
    return out;
}

std::string kind_name(InitialKind k)
{
    switch (k) {
    case InitialKind::Constant: return "constant";
    case InitialKind::SingleMode: return "single_mode";
    case InitialKind::SolitaryWave: return "solitary_wave";
    case InitialKind::RandomSmooth: return "random_smooth";
    }
    return "?";
}

std::string kind_name(DampingKind k)
{
    switch (k) {
    case DampingKind::None: return "none";
    case DampingKind::Bump: return "bump";
    case DampingKind::Constant: return "constant";
    case DampingKind::Table: return "table";
    }
    return "?";
}

}  // namespace

SimConfig parse_config(const json& doc)
{
    if (!doc.is_object())
        throw ConfigError("<root>", "expected a JSON object");
    reject_unknown(doc, "",
                   {"variant", "domain", "initial_condition", "damping", "feedback",
                    "allow_nondissipative", "integrator", "dt", "horizon", "record_stride",
                    "snapshot_stride", "tolerances", "nonlinear", "dealias", "output_dir",
                    "description"});
    SimConfig cfg;
    try {
        cfg.variant = parse_variant(require<std::string>(doc, "variant", ""));
    } catch (const std::invalid_argument& e) {
        throw ConfigError("variant", e.what());
    }

    const json& dom = object_at(doc, "domain", "");
    const auto type = require<std::string>(dom, "type", "domain");
    if (type == "torus") {
        reject_unknown(dom, "domain", {"type", "n_points"});
        cfg.domain.torus = true;
        cfg.domain.n_points = require<int>(dom, "n_points", "domain");
    } else if (type == "interval") {
        reject_unknown(dom, "domain", {"type", "length", "cells"});
        cfg.domain.torus = false;
        cfg.domain.length = require<double>(dom, "length", "domain");
        cfg.domain.cells = require<int>(dom, "cells", "domain");
    } else {
        throw ConfigError("domain.type", "expected 'torus' or 'interval'");
    }

    cfg.initial = parse_initial(object_at(doc, "initial_condition", ""));
    if (doc.contains("damping"))
        cfg.damping = parse_damping(object_at(doc, "damping", ""));
    if (doc.contains("feedback")) {
        const json& fb = object_at(doc, "feedback", "");
        reject_unknown(fb, "feedback", {"alpha", "beta"});
        cfg.feedback.alpha = require<double>(fb, "alpha", "feedback");
        cfg.feedback.beta = require<double>(fb, "beta", "feedback");
    }
    cfg.allow_nondissipative = read<bool>(doc, "allow_nondissipative", "", false);

    const auto integrator = read<std::string>(doc, "integrator", "", "onestep");
    if (integrator == "onestep")
        cfg.integrator.kind = IntegratorKind::OneStep;
    else if (integrator == "picard")
        cfg.integrator.kind = IntegratorKind::Picard;
    else
        throw ConfigError("integrator", "expected 'onestep' or 'picard'");
    cfg.integrator.dt = read<double>(doc, "dt", "", 1e-3);
    cfg.horizon = require<double>(doc, "horizon", "");
    cfg.integrator.record_stride = read<int>(doc, "record_stride", "", 10);
    cfg.integrator.snapshot_stride = read<int>(doc, "snapshot_stride", "", 1000);

    if (doc.contains("tolerances")) {
        const json& tol = object_at(doc, "tolerances", "");
        const std::string w = "tolerances";
        reject_unknown(tol, w,
                       {"picard_window", "fixed_point", "max_iterations", "contraction_target",
                        "window_shrink_factor", "sobolev_index", "monotone_slack",
                        "tail_window"});
        auto& p = cfg.integrator.picard;
        p.window = read<double>(tol, "picard_window", w, p.window);
        p.fixed_point_tolerance = read<double>(tol, "fixed_point", w, p.fixed_point_tolerance);
        p.max_iterations = read<int>(tol, "max_iterations", w, p.max_iterations);
        p.contraction_target = read<double>(tol, "contraction_target", w, p.contraction_target);
        p.window_shrink_factor =
            read<double>(tol, "window_shrink_factor", w, p.window_shrink_factor);
        p.sobolev_index = read<double>(tol, "sobolev_index", w, p.sobolev_index);
        cfg.monotone_slack = read<double>(tol, "monotone_slack", w, cfg.monotone_slack);
        cfg.tail_window = read<double>(tol, "tail_window", w, cfg.tail_window);
    }
    cfg.nonlinear = read<bool>(doc, "nonlinear", "", true);
    cfg.dealias = read<bool>(doc, "dealias", "", true);
    cfg.output_dir = read<std::string>(doc, "output_dir", "", cfg.output_dir);
    validate(cfg);
    return cfg;
}

SimConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("<file>", "cannot open '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("<file>", std::string("JSON parse error: ") + e.what());
    }
    return parse_config(doc);
}

void validate(const SimConfig& c)
{
    if (c.variant == Variant::C && c.domain.torus)
        throw ConfigError("variant", "variant C requires an interval domain");
    if (c.variant != Variant::C && !c.domain.torus)
        throw ConfigError("variant", "variants A and B require a torus domain");
    if (c.domain.torus && (c.domain.n_points < 16 || c.domain.n_points % 2 != 0))
        throw ConfigError("domain.n_points", "must be an even integer >= 16");
    if (!c.domain.torus && !(c.domain.length > 0.0))
        throw ConfigError("domain.length", "must be positive");
    if (!c.domain.torus && c.domain.cells < 32)
        throw ConfigError("domain.cells", "must be >= 32");
    if (c.variant == Variant::C && c.damping.kind != DampingKind::None)
        throw ConfigError("damping", "variant C uses boundary feedback, not interior damping");
    if (c.variant == Variant::C && !c.feedback.dissipative() && !c.allow_nondissipative)
        throw ConfigError("feedback",
                          "dissipative feedback needs alpha > 1/2 and beta < 1/2 "
                          "(set allow_nondissipative to override)");
    if (c.damping.kind == DampingKind::Bump &&
        (!(c.damping.radius > 0.0) || c.damping.radius > std::numbers::pi))
        throw ConfigError("damping.radius", "must lie in (0, pi]");
    if (c.damping.kind != DampingKind::None && c.damping.kind != DampingKind::Table &&
        !(c.damping.amplitude >= 0.0))
        throw ConfigError("damping.amplitude", "must be >= 0");
    if (c.initial.kind == InitialKind::SolitaryWave && !(c.initial.speed > 1.0))
        throw ConfigError("initial_condition.speed", "solitary wave speed must exceed 1");
    if (c.initial.kind == InitialKind::RandomSmooth && c.initial.cutoff < 1)
        throw ConfigError("initial_condition.cutoff", "must be >= 1");
    if (!(c.integrator.dt > 0.0))
        throw ConfigError("dt", "must be positive");
    if (!(c.horizon >= 0.0))
        throw ConfigError("horizon", "must be >= 0");
    if (c.integrator.record_stride < 1)
        throw ConfigError("record_stride", "must be >= 1");
    if (c.integrator.snapshot_stride < 1)
        throw ConfigError("snapshot_stride", "must be >= 1");
    if (!(c.tail_window > 0.0))
        throw ConfigError("tolerances.tail_window", "must be positive");
    try {
        c.integrator.picard.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("tolerances", e.what());
    }
}

json to_json(const SimConfig& c)
{
    json doc;
    doc["variant"] = to_string(c.variant);
    if (c.domain.torus)
        doc["domain"] = {{"type", "torus"}, {"n_points", c.domain.n_points}};
    else
        doc["domain"] = {{"type", "interval"}, {"length", c.domain.length},
                         {"cells", c.domain.cells}};
    json ic = {{"kind", kind_name(c.initial.kind)}};
    switch (c.initial.kind) {
    case InitialKind::Constant: ic["value"] = c.initial.value; break;
    case InitialKind::SingleMode:
        ic["amplitude"] = c.initial.amplitude;
        ic["wavenumber"] = c.initial.wavenumber;
        break;
    case InitialKind::SolitaryWave:
        ic["speed"] = c.initial.speed;
        ic["center"] = c.initial.center;
        break;
    case InitialKind::RandomSmooth:
        ic["seed"] = c.initial.seed;
        ic["amplitude"] = c.initial.amplitude;
        ic["cutoff"] = c.initial.cutoff;
        break;
    }
    doc["initial_condition"] = ic;
    json d = {{"kind", kind_name(c.damping.kind)}};
    if (c.damping.kind == DampingKind::Bump) {
        d["center"] = c.damping.center;
        d["radius"] = c.damping.radius;
        d["amplitude"] = c.damping.amplitude;
    } else if (c.damping.kind == DampingKind::Constant) {
        d["amplitude"] = c.damping.amplitude;
    } else if (c.damping.kind == DampingKind::Table) {
        d["path"] = c.damping.table_path;
    }
    doc["damping"] = d;
    doc["feedback"] = {{"alpha", c.feedback.alpha}, {"beta", c.feedback.beta}};
    doc["allow_nondissipative"] = c.allow_nondissipative;
    doc["integrator"] = c.integrator.kind == IntegratorKind::Picard ? "picard" : "onestep";
    doc["dt"] = c.integrator.dt;
    doc["horizon"] = c.horizon;
    doc["record_stride"] = c.integrator.record_stride;
    doc["snapshot_stride"] = c.integrator.snapshot_stride;
    const auto& p = c.integrator.picard;
    doc["tolerances"] = {{"picard_window", p.window},
                         {"fixed_point", p.fixed_point_tolerance},
                         {"max_iterations", p.max_iterations},
                         {"contraction_target", p.contraction_target},
                         {"window_shrink_factor", p.window_shrink_factor},
                         {"sobolev_index", p.sobolev_index},
                         {"monotone_slack", c.monotone_slack},
                         {"tail_window", c.tail_window}};
    doc["nonlinear"] = c.nonlinear;
    doc["dealias"] = c.dealias;
    doc["output_dir"] = c.output_dir;
    return doc;
}

Grid make_grid(const SimConfig& c)
{
    if (c.domain.torus)
        return TorusGrid(c.domain.n_points);
    return IntervalGrid(c.domain.length, c.domain.cells);
}

double solitary_profile(double speed, double xi)
{
    const double kappa = 0.5 * std::sqrt((speed - 1.0) / speed);
    const double sech = 1.0 / std::cosh(kappa * xi);
    return 3.0 * (speed - 1.0) * sech * sech;
}

Field1D solitary_wave(const Grid& grid, double speed, double center)
{
    if (!(speed > 1.0))
        throw std::invalid_argument("solitary wave speed must exceed 1");
    if (std::holds_alternative<IntervalGrid>(grid))
        return Field1D::sample(grid, [=](double x) { return solitary_profile(speed, x - center); });
    return Field1D::sample(grid, [=](double x) {
        double sum = 0.0;
        for (int image = -40; image <= 40; ++image)
            sum += solitary_profile(speed, x - center + two_pi * image);
        return sum;
    });
}

Field1D random_smooth(const Grid& grid, std::uint64_t seed, double amplitude, int cutoff)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::vector<double> ca(cutoff + 1), cb(cutoff + 1);
    for (int n = 1; n <= cutoff; ++n) {
        ca[n] = coef(rng) / n;
        cb[n] = coef(rng) / n;
    }
    const double scale = std::holds_alternative<TorusGrid>(grid)
                             ? 1.0
                             : std::numbers::pi / std::get<IntervalGrid>(grid).length();
    Field1D raw = Field1D::sample(grid, [&](double x) {
        double s = 0.0;
        for (int n = 1; n <= cutoff; ++n)
            s += ca[n] * std::cos(n * scale * x) + cb[n] * std::sin(n * scale * x);
        return s;
    });
    const double peak = raw.max_abs();
    if (peak == 0.0)
        return raw;
    return (amplitude / peak) * raw;
}

Field1D make_initial(const SimConfig& c, const Grid& grid)
{
    const auto& ic = c.initial;
    switch (ic.kind) {
    case InitialKind::Constant: return Field1D::constant(grid, ic.value);
    case InitialKind::SingleMode: {
        const double k = std::holds_alternative<TorusGrid>(grid)
                             ? ic.wavenumber
                             : ic.wavenumber * std::numbers::pi /
                                   std::get<IntervalGrid>(grid).length();
        return Field1D::sample(grid, [&](double x) { return ic.amplitude * std::cos(k * x); });
    }
    case InitialKind::SolitaryWave: return solitary_wave(grid, ic.speed, ic.center);
    case InitialKind::RandomSmooth: return random_smooth(grid, ic.seed, ic.amplitude, ic.cutoff);
    }
    throw std::logic_error("unreachable initial condition");
}

Model make_model(const SimConfig& c, const Grid& grid)
{
    Model m;
    if (c.variant == Variant::C) {
        m = Model::interval(c.feedback);
    } else {
        const auto& g = std::get<TorusGrid>(grid);
        const auto& d = c.damping;
        try {
            switch (d.kind) {
            case DampingKind::None: m = Model::torus(c.variant, DampingProfile::none(g)); break;
            case DampingKind::Bump:
                m = Model::torus(c.variant,
                                 DampingProfile::bump(g, d.center, d.radius, d.amplitude));
                break;
            case DampingKind::Constant:
                m = Model::torus(c.variant, DampingProfile::constant(g, d.amplitude));
                break;
            case DampingKind::Table:
                m = Model::torus(c.variant, DampingProfile::table_from_csv(g, d.table_path));
                break;
            }
        } catch (const std::invalid_argument& e) {
            throw ConfigError("damping", e.what());
        }
    }
    m.nonlinear = c.nonlinear;
    m.dealias = c.dealias;
    return m;
}

}  // namespace bbm
