#pragma once

// Artifact formats: energy ledger CSV, field snapshots, decay report JSON.
// Every file is written to a temporary sibling and renamed into place.

#include "bbm/diagnostics.hpp"
#include "bbm/field.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace bbm {

/// 17 significant digits, shortest round-trip-safe form for doubles.
std::string format_double(double v);

void write_atomic(const std::filesystem::path& path, const std::string& content);

inline constexpr const char* ledger_header = "t,E,mean,D,cumD,residual";

std::string ledger_csv(const EnergyLedger& ledger);
EnergyLedger parse_ledger_csv(const std::string& text);
EnergyLedger read_ledger(const std::filesystem::path& path);

/// `# t=<time> domain=<torus|interval> n=<points> L=<length>` then `x,value` rows.
std::string snapshot_text(const Snapshot& snap);
Snapshot parse_snapshot(const std::string& text);

nlohmann::json to_json(const DecayReport& report);
nlohmann::json to_json(const TailReport& tail);

std::string read_file(const std::filesystem::path& path);

}  // namespace bbm
