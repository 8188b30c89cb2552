#include "emmlab/mc_io.hpp"

#include "emmlab/error.hpp"
#include "emmlab/numfmt.hpp"
#include "emmlab/rng.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace emmlab {
namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double parse_real(const std::string& text) {
    if (auto slash = text.find('/'); slash != std::string::npos)
        return parse_real(trim(text.substr(0, slash))) / parse_real(trim(text.substr(slash + 1)));
    double v = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (text.empty() || ec != std::errc() || ptr != end) throw ValidationError("expected a real number, got '" + text + "'");
    return v;
}

template <class Int>
Int parse_int(const std::string& text) {
    Int v{};
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (text.empty() || ec != std::errc() || ptr != end) throw ValidationError("expected an integer, got '" + text + "'");
    return v;
}

std::vector<double> parse_list(std::string text) {
    if (!text.empty() && text.front() == '[' && text.back() == ']') text = text.substr(1, text.size() - 2);
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_real(trim(item)));
    if (out.empty()) throw ValidationError("expected at least one value");
    return out;
}

std::string join(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) out += (i ? ", " : "") + format_double(values[i]);
    return out;
}

const char* display_name(const std::string& filtration) {
    static const std::map<std::string, const char*> names{{"price_only", "Price-only"},
                                                          {"local", "Local"},
                                                          {"pairwise", "Pairwise"},
                                                          {"global_smoothed", "Global (sm.)"},
                                                          {"global_future_leak", "Global (dY)"}};
    auto it = names.find(filtration);
    return it == names.end() ? filtration.c_str() : it->second;
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4e", v);
    return buf;
}

std::string asset_name(std::size_t i) { return "S" + std::to_string(i + 1); }

// Rows grouped by filtration in first-seen order, averaged across assets.
std::vector<DiagnosticsRow> averages(const std::vector<DiagnosticsRow>& rows) {
    std::vector<DiagnosticsRow> out;
    std::vector<int> counts;
    for (const auto& r : rows) {
        std::size_t k = 0;
        while (k < out.size() && out[k].filtration != r.filtration) ++k;
        if (k == out.size()) {
            out.push_back({"", r.filtration, 0.0, 0.0, 0.0});
            counts.push_back(0);
        }
        out[k].mean_abs_m += r.mean_abs_m;
        out[k].rms_m += r.rms_m;
        out[k].fraction_qv += r.fraction_qv;
        ++counts[k];
    }
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k].mean_abs_m /= counts[k];
        out[k].rms_m /= counts[k];
        out[k].fraction_qv /= counts[k];
    }
    return out;
}

}  // namespace

SimConfig parse_config(const std::string& text, const std::string& source) {
    SimConfig c;
    std::map<std::string, int> seen;  // key -> line
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const std::string where = source + ":" + std::to_string(lineno);
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw ValidationError(where + ": expected 'key = value'");
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (!seen.emplace(key, lineno).second) throw ValidationError(where + ": key '" + key + "' given twice");
        try {
            if (key == "n_assets") c.n_assets = parse_int<int>(value);
            else if (key == "epsilon") c.epsilon = parse_real(value);
            else if (key == "kappa") c.kappa = parse_real(value);
            else if (key == "nu") c.nu = parse_real(value);
            else if (key == "mu0") c.mu0 = parse_real(value);
            else if (key == "beta") c.beta = parse_real(value);
            else if (key == "sigma") c.sigma = parse_real(value);
            else if (key == "dt") c.dt = parse_real(value);
            else if (key == "n_steps") c.n_steps = parse_int<std::int64_t>(value);
            else if (key == "seed") c.seed = parse_int<std::uint64_t>(value);
            else if (key == "y0") c.y0 = parse_list(value);
            else if (key == "s0") c.s0 = parse_list(value);
            else throw ValidationError("unknown key");
        } catch (const ValidationError& e) {
            throw ValidationError(where + ": key '" + key + "': " + e.what());
        }
    }
    try {
        c.validate();
    } catch (const ValidationError& e) {
        // Invariant messages start with the field name; point at its line when it was set.
        const std::string msg = e.what();
        const auto it = seen.find(msg.substr(0, msg.find_first_of(":[")));
        throw ValidationError(source + (it == seen.end() ? "" : ":" + std::to_string(it->second)) + ": " + msg);
    }
    return c;
}

SimConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path.string());
}

std::string config_to_text(const SimConfig& c) {
    std::ostringstream out;
    out << "n_assets = " << c.n_assets << "\n"
        << "epsilon = " << format_double(c.epsilon) << "\n"
        << "kappa = " << format_double(c.kappa) << "\n"
        << "nu = " << format_double(c.nu) << "\n"
        << "mu0 = " << format_double(c.mu0) << "\n"
        << "beta = " << format_double(c.beta) << "\n"
        << "sigma = " << format_double(c.sigma) << "\n"
        << "dt = " << format_double(c.dt) << "\n"
        << "n_steps = " << c.n_steps << "\n"
        << "seed = " << c.seed << "\n"
        << "y0 = " << join(c.y0) << "\n"
        << "s0 = " << join(c.s0) << "\n";
    return out.str();
}

std::string config_digest(const SimConfig& config) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(config_to_text(config))));
    return buf;
}

std::string manifest_json(const RunManifest& m) {
    nlohmann::ordered_json j;
    j["command"] = m.command;
    j["config_digest"] = m.config_digest;
    j["seed"] = m.seed;
    j["version"] = m.version;
    j["outputs"] = m.outputs;
    return j.dump(2) + "\n";
}

void write_paths_csv(std::ostream& out, const PathPanel& panel) {
    out << "t";
    for (std::size_t k = 0; k < panel.y.size(); ++k) out << ",y" << k + 1;
    for (std::size_t i = 0; i < panel.log_s.size(); ++i) out << ",logS" << i + 1;
    out << "\n";
    const std::size_t n = panel.n_steps();
    for (std::size_t t = 0; t <= n; ++t) {
        out << t;
        for (const auto& y : panel.y) out << ',' << format_double(y[t]);
        for (const auto& s : panel.log_s) out << ',' << format_double(s[t]);
        out << "\n";
    }
}

void write_diagnostics_csv(std::ostream& out, const std::vector<StructureResult>& results) {
    out << "asset,filtration,mean_abs_m,rms_m,fraction_qv\n";
    if (results.empty()) return;
    for (std::size_t i = 0; i < results.front().per_asset.size(); ++i)
        for (const auto& r : results) {
            const auto& d = r.per_asset[i];
            out << asset_name(i) << ',' << structure_name(r.kind) << ',' << format_double(d.mean_abs_m) << ','
                << format_double(d.rms_m) << ',' << format_double(d.fraction_qv) << "\n";
        }
}

void write_at_paths_csv(std::ostream& out, const std::vector<StructureResult>& results) {
    out << "t,asset,filtration,A_t\n";
    if (results.empty()) return;
    for (std::size_t i = 0; i < results.front().per_asset.size(); ++i)
        for (const auto& r : results) {
            const auto& a = r.per_asset[i].a_path;
            for (std::size_t t = 0; t < a.size(); ++t)
                out << t << ',' << asset_name(i) << ',' << structure_name(r.kind) << ',' << format_double(a[t]) << "\n";
        }
}

void write_m_hist_csv(std::ostream& out, const std::vector<StructureResult>& results) {
    out << "asset,filtration,m_hat\n";
    if (results.empty()) return;
    for (std::size_t i = 0; i < results.front().per_asset.size(); ++i)
        for (const auto& r : results)
            for (double m : r.per_asset[i].m_path)
                out << asset_name(i) << ',' << structure_name(r.kind) << ',' << format_double(m) << "\n";
}

std::vector<DiagnosticsRow> read_diagnostics_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || trim(line) != "asset,filtration,mean_abs_m,rms_m,fraction_qv")
        throw ValidationError("diagnostics.csv: unexpected header");
    std::vector<DiagnosticsRow> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(trim(line));
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        const std::string where = "diagnostics.csv:" + std::to_string(lineno);
        if (cells.size() != 5) throw ValidationError(where + ": expected 5 fields");
        try {
            rows.push_back({cells[0], cells[1], parse_real(cells[2]), parse_real(cells[3]), parse_real(cells[4])});
        } catch (const ValidationError& e) {
            throw ValidationError(where + ": " + e.what());
        }
    }
    return rows;
}

std::string render_report(const std::vector<DiagnosticsRow>& rows) {
    std::ostringstream out;
    auto line = [&](const std::string& a, const std::string& f, const std::string& x, const std::string& y,
                    const std::string& z) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%-6s %-14s %14s %14s %14s\n", a.c_str(), f.c_str(), x.c_str(), y.c_str(),
                      z.c_str());
        out << buf;
    };
    out << "Doob-Meyer predictable finite-variation diagnostics\n\n";
    line("Asset", "Filtration", "Mean |m_t|", "RMS(m_t)", "Fraction QV");
    std::string last;
    for (const auto& r : rows) {
        if (!last.empty() && r.asset != last) out << "\n";
        last = r.asset;
        line(r.asset, display_name(r.filtration), sci(r.mean_abs_m), sci(r.rms_m), sci(r.fraction_qv));
    }

    out << "\nCross-asset averages\n\n";
    line("", "Filtration", "Mean |m_t|", "RMS(m_t)", "Fraction QV");
    for (const auto& a : averages(rows))
        line("", display_name(a.filtration), sci(a.mean_abs_m), sci(a.rms_m), sci(a.fraction_qv));
    return out.str();
}

std::string render_report_csv(const std::vector<DiagnosticsRow>& rows) {
    std::ostringstream out;
    out << "filtration,mean_abs_m,rms_m,fraction_qv\n";
    for (const auto& a : averages(rows))
        out << a.filtration << ',' << format_double(a.mean_abs_m) << ',' << format_double(a.rms_m) << ','
            << format_double(a.fraction_qv) << "\n";
    return out.str();
}

std::string render_report_json(const std::vector<DiagnosticsRow>& rows) {
    using json = nlohmann::ordered_json;
    auto doc = [](const DiagnosticsRow& r, bool with_asset) {
        json j;
        if (with_asset) j["asset"] = r.asset;
        j["filtration"] = r.filtration;
        j["mean_abs_m"] = r.mean_abs_m;
        j["rms_m"] = r.rms_m;
        j["fraction_qv"] = r.fraction_qv;
        return j;
    };
    json j;
    j["per_asset"] = json::array();
    for (const auto& r : rows) j["per_asset"].push_back(doc(r, true));
    j["average"] = json::array();
    for (const auto& a : averages(rows)) j["average"].push_back(doc(a, false));
    return j.dump(2) + "\n";
}

}  // namespace emmlab
