#pragma once

#include "emmlab/emm.hpp"
#include "emmlab/lab.hpp"

#include <string>

namespace emmlab {

enum class ReportFormat { Json, Csv };

// Throws ValidationError for anything but "json" or "csv".
ReportFormat parse_report_format(const std::string& name);

// {filtration_id, group, feasible, affine_dimension, complete, max_residual, measure?}
// affine_dimension, complete and max_residual are null when infeasible. CSV is
// one header and one row; the measure adds a q_<path> column per path.
std::string emm_query_report(const ScenarioTree& tree, const FiltrationSpec& filtration,
                             const std::string& filtration_id, const AssetGroup& group, bool emit_measure,
                             ReportFormat format, const EmmOptions& options = {});

// CSV carries the counts and flags only; JSON adds the minimal filtrations and the meet.
std::string minimality_report_text(const ScenarioTree& tree, const AssetGroup& group,
                                   const MinimalityReport& report, ReportFormat format);

// {scenario, rows:[{group, must_contain, must_not_contain, satisfiable, witness?}],
//  global:{...}, anticipative_emm_check:{filtration, anticipative, witness?, feasible}}
// CSV lists the group rows then the global row, ids joined by ';'.
std::string obstruction_report_text(const ObstructionReport& report, ReportFormat format);

}  // namespace emmlab
