#include "emmlab/reports.hpp"

#include "emmlab/error.hpp"
#include "emmlab/filtration.hpp"
#include "emmlab/numfmt.hpp"
#include "emmlab/tree_io.hpp"

#include <json.hpp>

#include <sstream>

namespace emmlab {
namespace {

using json = nlohmann::ordered_json;

json filtration_doc(const ScenarioTree& tree, const FiltrationSpec& f) {
    return json::parse(filtration_to_json(tree, f))["partitions"];
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

std::string joined(const std::vector<std::string>& items, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
    return out;
}

std::string flag(bool b) { return b ? "true" : "false"; }

json row_doc(const ObstructionRow& row) {
    json j;
    j["group"] = row.group;
    j["must_contain"] = row.constraint.must_contain;
    j["must_not_contain"] = row.constraint.must_not_contain;
    j["satisfiable"] = row.satisfiable;
    if (row.witness) j["witness"] = *row.witness;
    return j;
}

std::string row_csv(const ObstructionRow& row) {
    return csv_field(row.group) + ',' + joined(row.constraint.must_contain, ";") + ',' +
           joined(row.constraint.must_not_contain, ";") + ',' + flag(row.satisfiable) + ',' +
           csv_field(row.witness.value_or("")) + "\n";
}

}  // namespace

ReportFormat parse_report_format(const std::string& name) {
    if (name == "json") return ReportFormat::Json;
    if (name == "csv") return ReportFormat::Csv;
    throw ValidationError("unknown format '" + name + "' (expected csv or json)");
}

std::string emm_query_report(const ScenarioTree& tree, const FiltrationSpec& filtration,
                             const std::string& filtration_id, const AssetGroup& group, bool emit_measure,
                             ReportFormat format, const EmmOptions& options) {
    const auto cert = emm_exists(tree, filtration, group, options);
    std::optional<std::size_t> dim;
    std::optional<bool> complete;
    if (cert) {
        dim = solution_geometry(tree, filtration, group, options).affine_dimension;
        complete = is_complete(tree, filtration, group, options);
    }

    if (format == ReportFormat::Csv) {
        std::ostringstream out;
        out << "filtration_id,group,feasible,affine_dimension,complete,max_residual";
        if (emit_measure)
            for (const auto& id : tree.path_ids()) out << ",q_" << csv_field(id);
        out << "\n"
            << csv_field(filtration_id) << ',' << csv_field(group.label()) << ',' << flag(cert.has_value()) << ',';
        if (cert)
            out << *dim << ',' << flag(*complete) << ',' << format_double(cert->report.max_residual);
        else
            out << ",,";
        if (emit_measure)
            for (std::size_t w = 0; w < tree.path_count(); ++w)
                out << ',' << (cert ? format_double(cert->measure[w]) : "");
        out << "\n";
        return out.str();
    }

    json j;
    j["filtration_id"] = filtration_id;
    j["group"] = group.ids();
    j["feasible"] = cert.has_value();
    if (cert) {
        j["affine_dimension"] = *dim;
        j["complete"] = *complete;
        j["max_residual"] = cert->report.max_residual;
        if (emit_measure) {
            json m = json::object();
            for (std::size_t w = 0; w < tree.path_count(); ++w) m[tree.path_ids()[w]] = cert->measure[w];
            j["measure"] = m;
        }
    } else {
        j["affine_dimension"] = nullptr;
        j["complete"] = nullptr;
        j["max_residual"] = nullptr;
    }
    return j.dump(2) + "\n";
}

std::string minimality_report_text(const ScenarioTree& tree, const AssetGroup& group,
                                   const MinimalityReport& report, ReportFormat format) {
    if (format == ReportFormat::Csv) {
        std::ostringstream out;
        out << "group,enumerated,feasible,minimal_count,meet_feasible,meet_equals_natural,theorem_violation\n"
            << csv_field(group.label()) << ',' << report.enumerated << ',' << report.feasible << ','
            << report.minimal.size() << ',' << flag(report.meet_feasible) << ',' << flag(report.meet_equals_natural)
            << ',' << flag(report.theorem_violation) << "\n";
        return out.str();
    }
    json j;
    j["group"] = group.ids();
    j["enumerated"] = report.enumerated;
    j["feasible"] = report.feasible;
    j["minimal_count"] = report.minimal.size();
    json minimal = json::array();
    for (const auto& f : report.minimal) minimal.push_back(filtration_doc(tree, f));
    j["minimal"] = minimal;
    j["meet"] = filtration_doc(tree, report.meet);
    j["natural"] = filtration_doc(tree, report.natural);
    j["meet_feasible"] = report.meet_feasible;
    j["meet_equals_natural"] = report.meet_equals_natural;
    j["theorem_violation"] = report.theorem_violation;
    return j.dump(2) + "\n";
}

std::string obstruction_report_text(const ObstructionReport& report, ReportFormat format) {
    if (format == ReportFormat::Csv) {
        std::string out = "group,must_contain,must_not_contain,satisfiable,witness\n";
        for (const auto& row : report.rows) out += row_csv(row);
        out += row_csv(report.global);
        return out;
    }

    const auto& cfg = report.metadata.config;
    json j;
    json scenario;
    scenario["drivers"] = cfg.drivers;
    scenario["periods"] = cfg.periods;
    scenario["level"] = cfg.level;
    scenario["beta"] = cfg.beta;
    scenario["noise"] = cfg.noise;
    scenario["assets"] = report.metadata.assets;
    scenario["driver_ids"] = report.metadata.drivers;
    json candidates = json::array();
    for (const auto& c : report.metadata.candidates) candidates.push_back(c.id);
    scenario["candidates"] = candidates;
    j["scenario"] = scenario;

    json rows = json::array();
    for (const auto& row : report.rows) rows.push_back(row_doc(row));
    j["rows"] = rows;
    j["global"] = row_doc(report.global);

    json leak;
    leak["filtration"] = report.leak_filtration;
    leak["anticipative"] = report.leak_anticipative;
    if (report.leak_witness) {
        leak["witness"] = {{"t", report.leak_witness->t},
                           {"prefix_block", report.leak_witness->prefix_block},
                           {"path_indices", {report.leak_witness->path_a, report.leak_witness->path_b}}};
    }
    leak["feasible"] = report.leak_feasible;
    j["anticipative_emm_check"] = leak;
    return j.dump(2) + "\n";
}

}  // namespace emmlab
