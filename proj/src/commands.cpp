#include "bbm/commands.hpp"

#include "bbm/io.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <thread>

namespace bbm {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path resolve_output_dir(const std::string& configured)
{
    if (const char* env = std::getenv("BBM_OUTPUT_DIR"); env && *env)
        return env;
    return configured;
}

namespace {

std::string snapshot_name(std::size_t index)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "snapshot_%06zu.csv", index);
    return buf;
}

double monotone_slack(const SimConfig& cfg, double residual, double e0, double d0)
{
    if (e0 <= 0.0)
        return cfg.monotone_slack;
    return cfg.monotone_slack + 10.0 * residual / e0 * d0;
}

}  // namespace

SimulationOutcome simulate(const SimConfig& cfg, const fs::path& output_dir)
{
    validate(cfg);
    SimulationOutcome outcome;
    const Grid grid = make_grid(cfg);
    const Field1D u0 = make_initial(cfg, grid);
    const Model model = make_model(cfg, grid);
    outcome.initial_energy = energy(u0);

    write_atomic(output_dir / "config.json", to_json(cfg).dump(2) + "\n");

    RunResult run;
    try {
        run = integrate(u0, cfg.horizon, model, cfg.integrator);
    } catch (const IntegrationError& e) {
        outcome.exit_code = exit_integration_failed;
        outcome.failure_time = e.time();
        outcome.message = e.what();
        DecayReport failed;
        failed.variant = cfg.variant;
        failed.failure_time = e.time();
        failed.failure_message = e.what();
        json doc = to_json(failed);
        doc["exit_code"] = outcome.exit_code;
        write_atomic(output_dir / "decay_report.json", doc.dump(2) + "\n");
        return outcome;
    }

    write_atomic(output_dir / "ledger.csv", ledger_csv(run.ledger));
    for (std::size_t i = 0; i < run.trajectory.size(); ++i)
        write_atomic(output_dir / "snapshots" / snapshot_name(i),
                     snapshot_text(run.trajectory[i]));

    outcome.balance_residual = energy_balance_residual(run.ledger);
    outcome.total_dissipation = run.ledger.back().cumulative_dissipation;

    const double target = cfg.variant == Variant::B ? mean(u0) : 0.0;
    const double d0 = h1_distance(u0, target);
    const DecayReport report =
        decay_report(run.trajectory, model, cfg.tail_window,
                     monotone_slack(cfg, outcome.balance_residual, outcome.initial_energy, d0));
    outcome.final_h1_distance = h1_distance(run.trajectory.back().u, target);

    json doc = to_json(report);
    if (cfg.horizon >= cfg.tail_window) {
        const TailReport tail = tail_dissipation(run.ledger, cfg.tail_window);
        outcome.tail_last = tail.last;
        doc["tail_dissipation"] = to_json(tail);
    }
    doc["energy_balance_residual"] = outcome.balance_residual;
    doc["initial_energy"] = outcome.initial_energy;
    doc["total_dissipation"] = outcome.total_dissipation;
    doc["steps"] = run.steps;
    doc["rejected_windows"] = run.rejected_windows;
    doc["exit_code"] = outcome.exit_code;
    write_atomic(output_dir / "decay_report.json", doc.dump(2) + "\n");
    return outcome;
}

int run_simulate(const std::string& config_path, std::ostream& out, std::ostream& err)
{
    SimConfig cfg;
    try {
        cfg = load_config(config_path);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return exit_bad_config;
    }
    const fs::path dir = resolve_output_dir(cfg.output_dir);
    try {
        const SimulationOutcome o = simulate(cfg, dir);
        if (o.exit_code != exit_ok) {
            err << "integration failed: " << o.message << '\n';
            return o.exit_code;
        }
        out << "wrote " << dir.string() << "\n"
            << "  E(0)               " << format_double(o.initial_energy) << "\n"
            << "  balance residual   " << format_double(o.balance_residual) << "\n"
            << "  total dissipation  " << format_double(o.total_dissipation) << "\n"
            << "  final H1 distance  " << format_double(o.final_h1_distance) << "\n";
        return exit_ok;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return exit_bad_config;
    }
}

namespace {

struct SweepAxis {
    std::string pointer;
    std::vector<json> values;
};

std::string csv_safe(std::string s)
{
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

std::string value_text(const json& v)
{
    if (v.is_number())
        return format_double(v.get<double>());
    if (v.is_string())
        return csv_safe(v.get<std::string>());
    return csv_safe(v.dump());
}

}  // namespace

int run_sweep(const std::string& sweep_path, std::ostream& out, std::ostream& err)
{
    json sweep;
    json base;
    std::vector<SweepAxis> axes;
    fs::path root;
    unsigned workers = 1;
    try {
        std::ifstream in(sweep_path);
        if (!in)
            throw ConfigError("<file>", "cannot open '" + sweep_path + "'");
        try {
            sweep = json::parse(in);
        } catch (const json::parse_error& e) {
            throw ConfigError("<file>", std::string("JSON parse error: ") + e.what());
        }
        if (sweep.contains("base"))
            base = sweep.at("base");
        else if (sweep.contains("base_config")) {
            const fs::path p = fs::path(sweep_path).parent_path() /
                               sweep.at("base_config").get<std::string>();
            std::ifstream bin(p);
            if (!bin)
                throw ConfigError("base_config", "cannot open '" + p.string() + "'");
            base = json::parse(bin);
        } else {
            throw ConfigError("base", "missing (or give base_config)");
        }
        if (!sweep.contains("parameters") || !sweep.at("parameters").is_array() ||
            sweep.at("parameters").empty() || sweep.at("parameters").size() > 2)
            throw ConfigError("parameters", "expected an array of one or two axes");
        std::size_t cells = 1;
        for (const auto& ax : sweep.at("parameters")) {
            if (!ax.contains("pointer") || !ax.contains("values") || !ax.at("values").is_array() ||
                ax.at("values").empty())
                throw ConfigError("parameters", "each axis needs 'pointer' and non-empty 'values'");
            SweepAxis a{ax.at("pointer").get<std::string>(), {}};
            for (const auto& v : ax.at("values"))
                a.values.push_back(v);
            cells *= a.values.size();
            axes.push_back(std::move(a));
        }
        if (cells > 10000)
            throw ConfigError("parameters", "sweep exceeds 10000 cells");
        parse_config(base);  // fail fast on an invalid base
        root = resolve_output_dir(sweep.value("output_dir", std::string("bbm_sweep")));
        workers = sweep.value("workers", 1u);
        workers = std::clamp(workers, 1u, 64u);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return exit_bad_config;
    } catch (const json::exception& e) {
        err << "error: sweep file: " << e.what() << '\n';
        return exit_bad_config;
    }

    std::size_t cells = 1;
    for (const auto& a : axes)
        cells *= a.values.size();

    struct CellResult {
        std::vector<json> params;
        std::string status = "ok";
        std::string message;
        SimulationOutcome outcome;
    };
    std::vector<CellResult> results(cells);
    for (std::size_t c = 0; c < cells; ++c) {
        std::size_t rest = c;
        for (std::size_t i = axes.size(); i-- > 0;) {
            results[c].params.insert(results[c].params.begin(),
                                     axes[i].values[rest % axes[i].values.size()]);
            rest /= axes[i].values.size();
        }
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t c = next++; c < cells; c = next++) {
            auto& cell = results[c];
            char name[32];
            std::snprintf(name, sizeof name, "cell_%05zu", c);
            try {
                json doc = base;
                for (std::size_t i = 0; i < axes.size(); ++i)
                    doc[json::json_pointer(axes[i].pointer)] = cell.params[i];
                SimConfig cfg = parse_config(doc);
                cell.outcome = simulate(cfg, root / name);
                if (cell.outcome.exit_code != exit_ok) {
                    cell.status = "failed";
                    cell.message = cell.outcome.message;
                }
            } catch (const ConfigError& e) {
                cell.status = "invalid";
                cell.message = e.what();
            } catch (const std::exception& e) {
                cell.status = "failed";
                cell.message = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < std::min<std::size_t>(workers, cells); ++w)
        pool.emplace_back(worker);
    for (auto& t : pool)
        t.join();

    std::string summary = "cell";
    for (const auto& a : axes)
        summary += "," + csv_safe(a.pointer);
    summary += ",status,final_h1_distance,total_dissipation,tail_last,message\n";
    std::size_t failures = 0;
    for (std::size_t c = 0; c < cells; ++c) {
        const auto& cell = results[c];
        summary += std::to_string(c);
        for (const auto& p : cell.params)
            summary += "," + value_text(p);
        summary += "," + cell.status + "," + format_double(cell.outcome.final_h1_distance) + "," +
                   format_double(cell.outcome.total_dissipation) + "," +
                   format_double(cell.outcome.tail_last) + "," + csv_safe(cell.message) + "\n";
        if (cell.status != "ok")
            ++failures;
    }
    write_atomic(root / "summary.csv", summary);
    out << "sweep: " << cells << " cells, " << failures << " failed; summary at "
        << (root / "summary.csv").string() << "\n";

    if (axes.size() == 1 && failures == 0 && cells > 1) {
        bool nonincreasing = true;
        for (std::size_t c = 1; c < cells; ++c)
            if (results[c].outcome.final_h1_distance > results[c - 1].outcome.final_h1_distance)
                nonincreasing = false;
        out << "  final H1 distance " << (nonincreasing ? "is" : "is not")
            << " nonincreasing along " << axes[0].pointer << " (observational)\n";
    }
    return exit_ok;
}

}  // namespace bbm
