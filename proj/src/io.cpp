#include "bbm/io.hpp"

#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <system_error>
#include <unistd.h>

namespace bbm {

namespace fs = std::filesystem;

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_atomic(const fs::path& path, const std::string& content)
{
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out)
            throw std::runtime_error("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("rename to " + path.string() + " failed: " + ec.message());
    }
}

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string ledger_csv(const EnergyLedger& ledger)
{
    std::string out = ledger_header;
    out += '\n';
    for (const auto& r : ledger) {
        out += format_double(r.t) + ',' + format_double(r.energy) + ',' + format_double(r.mean) +
               ',' + format_double(r.dissipation_rate) + ',' +
               format_double(r.cumulative_dissipation) + ',' + format_double(r.balance_residual) +
               '\n';
    }
    return out;
}

EnergyLedger parse_ledger_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != ledger_header)
        throw std::runtime_error("ledger CSV header mismatch");
    EnergyLedger ledger;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        EnergyRecord r;
        char c1, c2, c3, c4, c5;
        std::istringstream row(line);
        if (!(row >> r.t >> c1 >> r.energy >> c2 >> r.mean >> c3 >> r.dissipation_rate >> c4 >>
              r.cumulative_dissipation >> c5 >> r.balance_residual))
            throw std::runtime_error("malformed ledger row: " + line);
        ledger.push_back(r);
    }
    return ledger;
}

EnergyLedger read_ledger(const fs::path& path) { return parse_ledger_csv(read_file(path)); }

std::string snapshot_text(const Snapshot& snap)
{
    const Field1D& u = snap.u;
    const bool torus = u.on_torus();
    const double length = torus ? 2.0 * std::numbers::pi : u.interval().length();
    std::string out = "# t=" + format_double(snap.t) + " domain=" +
                      (torus ? "torus" : "interval") + " n=" + std::to_string(u.size()) +
                      " L=" + format_double(length) + '\n';
    for (std::size_t j = 0; j < u.size(); ++j)
        out += format_double(grid_node(u.grid(), static_cast<int>(j))) + ',' +
               format_double(u[j]) + '\n';
    return out;
}

Snapshot parse_snapshot(const std::string& text)
{
    std::istringstream in(text);
    std::string header;
    std::getline(in, header);
    double t = 0.0, length = 0.0;
    int n = 0;
    char domain[16] = {0};
    if (std::sscanf(header.c_str(), "# t=%lf domain=%15s n=%d L=%lf", &t, domain, &n, &length) !=
        4)
        throw std::runtime_error("malformed snapshot header: " + header);
    std::vector<double> values;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("malformed snapshot row: " + line);
        values.push_back(std::stod(line.substr(comma + 1)));
    }
    if (static_cast<int>(values.size()) != n)
        throw std::runtime_error("snapshot row count does not match header");
    const std::string dom = domain;
    if (dom == "torus")
        return {t, Field1D(TorusGrid(n), std::move(values))};
    if (dom == "interval")
        return {t, Field1D(IntervalGrid(length, n - 1), std::move(values))};
    throw std::runtime_error("unknown snapshot domain " + dom);
}

nlohmann::json to_json(const DecayReport& r)
{
    nlohmann::json doc;
    doc["variant"] = to_string(r.variant);
    doc["target"] = r.target;
    doc["sobolev_indices"] = r.sobolev_indices;
    doc["sample_times"] = r.times;
    nlohmann::json norms = nlohmann::json::object();
    for (std::size_t i = 0; i < r.sobolev_indices.size(); ++i)
        norms[format_double(r.sobolev_indices[i])] = r.norms[i];
    doc["norms"] = norms;
    doc["h1_distance"] = r.h1_distance;
    doc["band_observable"] = r.band_observable;
    doc["verdict"] = {{"monotone", r.monotone},
                      {"slack", r.slack},
                      {"limit_estimate", r.limit_estimate},
                      {"empirical_rate", r.empirical_rate ? nlohmann::json(*r.empirical_rate)
                                                          : nlohmann::json(nullptr)}};
    if (r.failure_time) {
        doc["failure"] = {{"time", *r.failure_time}, {"message", r.failure_message}};
    }
    return doc;
}

nlohmann::json to_json(const TailReport& tail)
{
    return {{"window", tail.window},
            {"integrals", tail.integrals},
            {"decreasing_from", tail.decreasing_from},
            {"eventually_decreasing", tail.eventually_decreasing},
            {"first", tail.first},
            {"last", tail.last}};
}

}  // namespace bbm
