#pragma once

#include "emmlab/doob_meyer.hpp"
#include "emmlab/sim.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace emmlab {

// `key = value` lines with exactly the SimConfig field names; '#' starts a
// comment. Reals accept p/q (dt = 1/252). y0 and s0 take one value or a comma
// list. Unknown or repeated keys, bad values, and invariant violations throw
// ValidationError prefixed with "<source>:<line>".
SimConfig parse_config(const std::string& text, const std::string& source = "config");
SimConfig load_config(const std::filesystem::path& path);

// Canonical text: every field, fixed order, shortest round-trip numbers.
std::string config_to_text(const SimConfig& config);

// FNV-1a 64 of the canonical text, as 16 hex digits.
std::string config_digest(const SimConfig& config);

struct RunManifest {
    std::string command;
    std::string config_digest;
    std::uint64_t seed = 0;
    std::string version;
    std::vector<std::string> outputs;
};

std::string manifest_json(const RunManifest& manifest);

void write_paths_csv(std::ostream& out, const PathPanel& panel);
void write_diagnostics_csv(std::ostream& out, const std::vector<StructureResult>& results);
void write_at_paths_csv(std::ostream& out, const std::vector<StructureResult>& results);
void write_m_hist_csv(std::ostream& out, const std::vector<StructureResult>& results);

struct DiagnosticsRow {
    std::string asset;
    std::string filtration;
    double mean_abs_m = 0.0;
    double rms_m = 0.0;
    double fraction_qv = 0.0;
};

// Throws ValidationError on a header or field mismatch.
std::vector<DiagnosticsRow> read_diagnostics_csv(std::istream& in);

// Per-asset table followed by cross-asset averages per structure.
std::string render_report(const std::vector<DiagnosticsRow>& rows);
// Cross-asset averages as `filtration,mean_abs_m,rms_m,fraction_qv`.
std::string render_report_csv(const std::vector<DiagnosticsRow>& rows);
// {"per_asset": [...], "average": [...]}
std::string render_report_json(const std::vector<DiagnosticsRow>& rows);

}  // namespace emmlab
