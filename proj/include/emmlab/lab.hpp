#pragma once

#include "emmlab/asset_group.hpp"
#include "emmlab/emm.hpp"
#include "emmlab/partition.hpp"
#include "emmlab/tree.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace emmlab {

// Coarsenings grow like Bell numbers in the path count, so enumeration is
// capped and refuses oversized trees instead of sampling.
struct EnumerationCaps {
    std::size_t max_paths = 12;
    std::size_t max_periods = 3;
    std::size_t max_filtrations = 2'000'000;
};

// Visits every non-anticipative filtration that coarsens the full prefix
// filtration and keeps the group adapted. Order is deterministic: time 0
// first, then blocks by smallest path. Returning false from the visitor stops
// early. Returns the number visited.
// Throws BudgetError when the tree exceeds the caps or the count would pass
// max_filtrations.
std::size_t for_each_filtration(const ScenarioTree& tree, const AssetGroup& group, const EnumerationCaps& caps,
                                const std::function<bool(const FiltrationSpec&)>& visit);

std::vector<FiltrationSpec> enumerate_filtrations(const ScenarioTree& tree, const AssetGroup& group,
                                                  const EnumerationCaps& caps = {});

struct LabOptions {
    EnumerationCaps caps;
    EmmOptions emm;
    unsigned workers = 0;  // 0 = hardware concurrency
};

// Timewise meet of every pricing-feasible enumerated filtration.
// Throws NoArbitrageError when none is feasible.
FiltrationSpec meet_construction(const ScenarioTree& tree, const AssetGroup& group, const LabOptions& options = {});

struct MinimalityReport {
    std::size_t enumerated = 0;
    std::size_t feasible = 0;
    std::vector<FiltrationSpec> minimal;  // in enumeration order
    FiltrationSpec meet;
    FiltrationSpec natural;
    bool meet_feasible = false;
    bool meet_equals_natural = false;
    // Set unless there is exactly one minimal element and it equals both the
    // meet and the natural filtration of the group.
    bool theorem_violation = false;
};

MinimalityReport minimality_report(const ScenarioTree& tree, const AssetGroup& group, const LabOptions& options = {});

// An EMM for H still prices the group on its natural filtration.
// Throws PreconditionError when H admits no EMM.
bool canonical_reduction_check(const ScenarioTree& tree, const FiltrationSpec& h, const AssetGroup& group,
                               const EmmOptions& options = {});

// The driver's values at every time <= t are constant on blocks of partitions[t].
bool contains_driver_sigma(const FiltrationSpec& filtration, const ScenarioTree& tree, const std::string& driver,
                           std::size_t t);

// contains_driver_sigma at every time.
bool contains_driver(const FiltrationSpec& filtration, const ScenarioTree& tree, const std::string& driver);

struct AnticipativityWitness {
    std::size_t t = 0;
    std::size_t prefix_block = 0;  // block index in the full prefix partition at t
    std::size_t path_a = 0;
    std::size_t path_b = 0;
};

std::optional<AnticipativityWitness> anticipativity_witness(const ScenarioTree& tree, const FiltrationSpec& filtration);

struct CovariationEntry {
    std::size_t t = 0;
    std::size_t block = 0;
    std::string asset_i;
    std::string asset_j;
    double value = 0.0;
};

struct OrthogonalityTable {
    std::vector<CovariationEntry> entries;
    double max_abs = 0.0;
};

// Conditional covariation sum q dS^i dS^j / Q(B) per (t, block, i < j).
OrthogonalityTable orthogonality_diagnostic(const ScenarioTree& tree, const Measure& measure,
                                            const FiltrationSpec& filtration, const AssetGroup& group);

// ---- three-driver obstruction scenario ----

struct ObstructionConfig {
    int drivers = 3;  // also the asset count
    int periods = 1;
    double level = 1.0;  // drivers take +level or -level
    double beta = 0.5;   // asset i's increment shifts by beta * Y^i
    double noise = 1.0;  // plus +noise or -noise, equally likely
    std::size_t max_paths = 4096;
};

struct CandidateFiltration {
    std::string id;
    FiltrationSpec filtration;
    bool anticipative = false;
};

struct ScenarioMetadata {
    ObstructionConfig config;
    std::vector<std::string> assets;   // S1..Sd
    std::vector<std::string> drivers;  // Y1..Yd, driver i loads on asset i
    std::vector<CandidateFiltration> candidates;

    const CandidateFiltration& candidate(const std::string& id) const;
};

struct ObstructionScenario {
    ScenarioTree tree;
    ScenarioMetadata metadata;
};

// Drivers are revealed at time 0 and never move; each period every asset
// steps by beta * Y^i plus independent binary noise. All combinations are
// equally likely, so 2^(d + d * periods) paths.
// Throws ValidationError for bad parameters, BudgetError past max_paths.
ObstructionScenario build_three_driver_tree(const ObstructionConfig& config = {});

struct FiltrationConstraint {
    std::vector<std::string> must_contain;
    std::vector<std::string> must_not_contain;
    bool require_nonanticipative = true;

    // Throws ValidationError when the two sets overlap.
    void validate() const;
};

struct GroupConstraint {
    std::vector<int> group;  // 1-based asset indices
    FiltrationConstraint constraint;
};

// Singleton rows require the own driver and exclude the others; pair rows
// take the union of requirements and the intersection of exclusions.
std::vector<GroupConstraint> default_constraints(const ScenarioMetadata& metadata, bool exclusions = true);

struct ObstructionRow {
    std::string group;  // "{1}", "{1,2}", "global"
    FiltrationConstraint constraint;
    bool satisfiable = false;
    std::optional<std::string> witness;  // candidate id or "natural:..."
};

struct ObstructionReport {
    ScenarioMetadata metadata;
    std::vector<ObstructionRow> rows;
    ObstructionRow global;
    std::string leak_filtration;
    bool leak_anticipative = false;
    bool leak_feasible = false;
    std::optional<AnticipativityWitness> leak_witness;
};

// Requirements only ever get harder under refinement and exclusions, pricing
// and non-anticipativity only ever get harder under coarsening, so a
// constraint set is satisfiable iff the natural filtration of the group and
// its required drivers meets the exclusions and prices the group. That
// filtration is the witness.
//
// The global row asks one filtration to satisfy every singleton constraint at
// once when there are three or more drivers; with fewer it is the aggregate
// of all groups, formed the same way as pair rows.
ObstructionReport obstruction_report(const ScenarioTree& tree, const ScenarioMetadata& metadata,
                                     const std::vector<GroupConstraint>& constraints, const EmmOptions& options = {});

// Satisfiability of several constraints by one filtration pricing `assets`.
std::optional<FiltrationSpec> satisfy_constraints(const ScenarioTree& tree, const std::vector<std::string>& assets,
                                                  const std::vector<FiltrationConstraint>& constraints,
                                                  const EmmOptions& options = {});

}  // namespace emmlab
