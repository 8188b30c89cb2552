#include "emmlab/lab.hpp"

#include "emmlab/error.hpp"
#include "emmlab/filtration.hpp"

#include <algorithm>
#include <cmath>

namespace emmlab {
namespace {

std::string index_label(const std::vector<int>& group) {
    std::string out = "{";
    for (std::size_t k = 0; k < group.size(); ++k) out += (k ? "," : "") + std::to_string(group[k]);
    return out + "}";
}

void add_unique(std::vector<std::string>& into, const std::vector<std::string>& items) {
    for (const auto& item : items)
        if (std::find(into.begin(), into.end(), item) == into.end()) into.push_back(item);
}

std::vector<std::string> keep_common(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::vector<std::string> out;
    for (const auto& item : a)
        if (std::find(b.begin(), b.end(), item) != b.end()) out.push_back(item);
    return out;
}

std::string name_witness(const ScenarioMetadata& metadata, const FiltrationSpec& f, const ProcessSet& generators) {
    for (const auto& c : metadata.candidates)
        if (!c.anticipative && c.filtration == f) return c.id;
    std::string out = "natural:";
    for (std::size_t k = 0; k < generators.size(); ++k) out += (k ? "," : "") + generators[k];
    return out;
}

ProcessSet generators_of(const std::vector<std::string>& assets, const std::vector<FiltrationConstraint>& constraints) {
    ProcessSet ids = assets;
    for (const auto& c : constraints) add_unique(ids, c.must_contain);
    return ids;
}

}  // namespace

const CandidateFiltration& ScenarioMetadata::candidate(const std::string& id) const {
    for (const auto& c : candidates)
        if (c.id == id) return c;
    throw ValidationError("unknown candidate filtration '" + id + "'");
}

ObstructionScenario build_three_driver_tree(const ObstructionConfig& config) {
    if (config.drivers < 1) throw ValidationError("drivers must be at least 1");
    if (config.periods < 1) throw ValidationError("periods must be at least 1");
    if (!(config.level > 0.0) || !std::isfinite(config.level)) throw ValidationError("level must be positive");
    if (!(config.noise > 0.0) || !std::isfinite(config.noise)) throw ValidationError("noise must be positive");
    if (!std::isfinite(config.beta)) throw ValidationError("beta must be finite");

    const int d = config.drivers;
    const int bits = d + d * config.periods;
    if (bits >= 40 || (std::size_t{1} << bits) > config.max_paths)
        throw BudgetError("scenario needs 2^" + std::to_string(bits) + " paths; cap is " +
                          std::to_string(config.max_paths));
    const std::size_t n_paths = std::size_t{1} << bits;
    const auto steps = static_cast<std::size_t>(config.periods);

    // Path index bits, most significant first: driver states, then the noise
    // signs period by period, asset by asset. A zero bit is the up state.
    auto bit = [&](std::size_t path, int k) { return (path >> (bits - 1 - k)) & 1u; };

    TreeData data;
    data.prob.assign(n_paths, 1.0 / static_cast<double>(n_paths));
    for (int i = 0; i < d; ++i) {
        ProcessData y{"Y" + std::to_string(i + 1), {}, {}};
        ProcessData s{"S" + std::to_string(i + 1), {}, {}};
        for (std::size_t p = 0; p < n_paths; ++p) {
            const double driver = bit(p, i) ? -config.level : config.level;
            y.values.emplace_back(steps + 1, driver);
            std::vector<double> row{0.0};
            for (int k = 0; k < config.periods; ++k) {
                const double shock = bit(p, d + k * d + i) ? -config.noise : config.noise;
                row.push_back(row.back() + config.beta * driver + shock);
            }
            s.values.push_back(std::move(row));
        }
        data.drivers.push_back(std::move(y));
        data.assets.push_back(std::move(s));
    }
    ScenarioTree tree(std::move(data));

    ScenarioMetadata meta;
    meta.config = config;
    meta.assets = tree.asset_ids();
    meta.drivers = tree.driver_ids();
    meta.candidates.push_back({"price_only", natural_filtration(tree, meta.assets), false});
    for (int i = 0; i < d; ++i) {
        meta.candidates.push_back({"local(" + std::to_string(i + 1) + ")",
                                   natural_filtration(tree, {meta.assets[i], meta.drivers[i]}), false});
    }
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            meta.candidates.push_back(
                {"pairwise(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")",
                 natural_filtration(tree, {meta.assets[i], meta.assets[j], meta.drivers[i], meta.drivers[j]}), false});
        }
    }
    meta.candidates.push_back({"global_all_drivers", full_filtration(tree), false});
    meta.candidates.push_back({"global_future_leak", future_leak_filtration(tree), true});
    return {std::move(tree), std::move(meta)};
}

void FiltrationConstraint::validate() const {
    for (const auto& id : must_contain)
        if (std::find(must_not_contain.begin(), must_not_contain.end(), id) != must_not_contain.end())
            throw ValidationError("driver '" + id + "' is both required and excluded");
}

std::vector<GroupConstraint> default_constraints(const ScenarioMetadata& metadata, bool exclusions) {
    const int d = static_cast<int>(metadata.drivers.size());
    std::vector<GroupConstraint> out;
    for (int i = 0; i < d; ++i) {
        FiltrationConstraint c;
        c.must_contain = {metadata.drivers[i]};
        if (exclusions)
            for (int j = 0; j < d; ++j)
                if (j != i) c.must_not_contain.push_back(metadata.drivers[j]);
        out.push_back({{i + 1}, c});
    }
    const std::size_t singles = out.size();
    for (std::size_t a = 0; a < singles; ++a) {
        for (std::size_t b = a + 1; b < singles; ++b) {
            FiltrationConstraint c;
            c.must_contain = out[a].constraint.must_contain;
            add_unique(c.must_contain, out[b].constraint.must_contain);
            c.must_not_contain = keep_common(out[a].constraint.must_not_contain, out[b].constraint.must_not_contain);
            out.push_back({{out[a].group[0], out[b].group[0]}, c});
        }
    }
    return out;
}

std::optional<FiltrationSpec> satisfy_constraints(const ScenarioTree& tree, const std::vector<std::string>& assets,
                                                  const std::vector<FiltrationConstraint>& constraints,
                                                  const EmmOptions& options) {
    const AssetGroup group(tree, assets);
    for (const auto& c : constraints) {
        for (const auto& id : c.must_contain)
            if (tree.process_kind(tree.process_index(id)) != ProcessKind::Driver)
                throw ValidationError("'" + id + "' is not a driver");
        for (const auto& id : c.must_not_contain)
            if (tree.process_kind(tree.process_index(id)) != ProcessKind::Driver)
                throw ValidationError("'" + id + "' is not a driver");
    }
    const auto base = natural_filtration(tree, generators_of(group.ids(), constraints));
    for (const auto& c : constraints) {
        for (const auto& id : c.must_not_contain)
            if (contains_driver(base, tree, id)) return std::nullopt;
        if (c.require_nonanticipative && !is_nonanticipative(tree, base)) return std::nullopt;
    }
    if (!emm_exists(tree, base, group, options)) return std::nullopt;
    return base;
}

ObstructionReport obstruction_report(const ScenarioTree& tree, const ScenarioMetadata& metadata,
                                     const std::vector<GroupConstraint>& constraints, const EmmOptions& options) {
    ObstructionReport report;
    report.metadata = metadata;

    auto evaluate = [&](ObstructionRow& row, const std::vector<std::string>& assets,
                        const std::vector<FiltrationConstraint>& set) {
        const auto witness = satisfy_constraints(tree, assets, set, options);
        row.satisfiable = witness.has_value();
        if (witness) row.witness = name_witness(metadata, *witness, generators_of(assets, set));
    };

    std::vector<FiltrationConstraint> all;
    FiltrationConstraint aggregate;
    bool first = true;
    for (const auto& gc : constraints) {
        gc.constraint.validate();
        if (gc.group.empty()) throw ValidationError("constraint row has an empty asset group");
        std::vector<std::string> assets;
        for (int i : gc.group) {
            if (i < 1 || i > static_cast<int>(metadata.assets.size()))
                throw ValidationError("asset index " + std::to_string(i) + " is outside the scenario");
            assets.push_back(metadata.assets[static_cast<std::size_t>(i - 1)]);
        }
        ObstructionRow row;
        row.group = index_label(gc.group);
        row.constraint = gc.constraint;
        evaluate(row, assets, {gc.constraint});
        report.rows.push_back(std::move(row));

        all.push_back(gc.constraint);
        add_unique(aggregate.must_contain, gc.constraint.must_contain);
        aggregate.must_not_contain = first ? gc.constraint.must_not_contain
                                           : keep_common(aggregate.must_not_contain, gc.constraint.must_not_contain);
        first = false;
    }

    report.global.group = "global";
    if (metadata.drivers.size() >= 3) {
        FiltrationConstraint joint;
        for (const auto& c : all) {
            add_unique(joint.must_contain, c.must_contain);
            add_unique(joint.must_not_contain, c.must_not_contain);
        }
        report.global.constraint = joint;
        evaluate(report.global, metadata.assets, all);
    } else {
        report.global.constraint = aggregate;
        evaluate(report.global, metadata.assets, {aggregate});
    }

    const auto& leak = metadata.candidate("global_future_leak");
    report.leak_filtration = leak.id;
    report.leak_witness = anticipativity_witness(tree, leak.filtration);
    report.leak_anticipative = report.leak_witness.has_value();
    report.leak_feasible = emm_exists(tree, leak.filtration, AssetGroup(tree, metadata.assets), options).has_value();
    return report;
}

}  // namespace emmlab
