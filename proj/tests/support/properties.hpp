#pragma once

// Randomized property runs shared by the unit suites and the acceptance
// binary. Each run reports how many instances it saw and how many broke.

#include "support/oracles.hpp"
#include "support/trees.hpp"

#include "emmlab/emm.hpp"
#include "emmlab/error.hpp"
#include "emmlab/filtration.hpp"
#include "emmlab/lab.hpp"

#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace testsupport {

struct Tally {
    std::size_t instances = 0;
    std::size_t failures = 0;
    std::string first_failure;

    void record(bool ok, const std::string& what) {
        ++instances;
        if (ok) return;
        if (failures++ == 0) first_failure = what;
    }
    bool clean() const { return failures == 0 && instances > 0; }
    std::string summary() const {
        std::ostringstream out;
        out << instances - failures << "/" << instances;
        if (failures) out << " (first: " << first_failure << ")";
        return out.str();
    }
};

// Half the trees are arbitrage-free by construction, half unconstrained.
inline ScenarioTree mixed_tree(std::mt19937_64& rng, int index) {
    RandomTreeSpec spec;
    spec.max_drivers = 2;
    spec.arbitrage_free = index % 2 == 0;
    spec.driver_splits = index % 4 == 0;
    return random_tree(rng, spec);
}

inline std::vector<std::string> random_subset(std::mt19937_64& rng, const std::vector<std::string>& items,
                                              bool nonempty) {
    for (;;) {
        std::vector<std::string> out;
        for (const auto& item : items)
            if (rng() & 1u) out.push_back(item);
        if (!nonempty || !out.empty()) return out;
    }
}

inline std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
    for (const auto& s : b)
        if (std::find(a.begin(), a.end(), s) == a.end()) a.push_back(s);
    return a;
}

// Engine feasibility against the node-local vertex oracle.
inline Tally feasibility_agreement(std::uint64_t seed, int trees) {
    std::mt19937_64 rng(seed);
    Tally tally;
    for (int k = 0; k < trees; ++k) {
        const auto tree = mixed_tree(rng, k);
        const auto assets = tree.asset_ids();
        const auto f = natural_filtration(tree, concat(assets, random_subset(rng, tree.driver_ids(), false)));
        const emmlab::AssetGroup group(tree, assets);
        const bool expected = oracle_feasible(tree, f, assets);
        const bool got_float = emmlab::emm_exists(tree, f, group, {emmlab::NumericMode::Float}).has_value();
        const bool got_exact = emmlab::emm_exists(tree, f, group, {emmlab::NumericMode::Exact}).has_value();
        tally.record(got_float == expected && got_exact == expected, "tree " + std::to_string(k));
    }
    return tally;
}

struct PropertyTallies {
    Tally reduction;    // EMM on H prices the group on its natural filtration
    Tally tower;        // and on any adapted coarsening of H
    Tally restriction;  // and every non-empty sub-group
    Tally aggregation;  // a measure pricing A and B prices A u B
    Tally scaling;      // positive rescaling changes nothing
    Tally completeness; // complete iff unique
};

inline ScenarioTree scale_asset(const ScenarioTree& tree, const std::string& id, double c) {
    auto data = tree.to_data();
    for (auto& proc : data.assets)
        if (proc.id == id) {
            for (auto& row : proc.values)
                for (double& v : row) v *= c;
            proc.exact.clear();
        }
    return ScenarioTree(data);
}

// Draws random (tree, H, group) triples until `feasible_target` of them admit
// an EMM, then runs every property on each.
inline PropertyTallies property_suite(std::uint64_t seed, int feasible_target) {
    std::mt19937_64 rng(seed);
    PropertyTallies out;
    int found = 0;
    for (int k = 0; found < feasible_target && k < feasible_target * 50; ++k) {
        const auto tree = mixed_tree(rng, k);
        const auto assets = tree.asset_ids();
        const auto group_ids = random_subset(rng, assets, true);
        const emmlab::AssetGroup group(tree, group_ids);
        const auto extra = random_subset(rng, tree.all_process_ids(), false);
        const auto h = natural_filtration(tree, concat(group_ids, extra));
        const auto cert = emmlab::emm_exists(tree, h, group);
        if (!cert) continue;
        ++found;
        const std::string tag = "instance " + std::to_string(k);
        const auto& q = cert->measure;

        out.reduction.record(emmlab::canonical_reduction_check(tree, h, group), tag);

        const auto coarser = emmlab::intersect(h, natural_filtration(tree, concat(group_ids, random_subset(rng, tree.all_process_ids(), false))));
        out.tower.record(emmlab::check_martingale(tree, q, coarser, group).passes(), tag);

        bool restricted = true;
        for (const auto& id : group_ids)
            restricted = restricted && emmlab::check_martingale(tree, q, h, emmlab::AssetGroup(tree, {id})).passes();
        out.restriction.record(restricted, tag);

        // The certificate of the whole asset set, when H adapts it, gives
        // two overlapping groups priced by one measure.
        bool adapted_all = true;
        for (const auto& id : assets) adapted_all = adapted_all && emmlab::is_adapted(tree, h, id);
        if (adapted_all) {
            const emmlab::AssetGroup everything(tree, assets);
            if (const auto joint = emmlab::emm_exists(tree, h, everything)) {
                const auto a = random_subset(rng, assets, true);
                const auto b = random_subset(rng, assets, true);
                const bool pa = emmlab::check_martingale(tree, joint->measure, h, emmlab::AssetGroup(tree, a)).passes();
                const bool pb = emmlab::check_martingale(tree, joint->measure, h, emmlab::AssetGroup(tree, b)).passes();
                const bool pab =
                    emmlab::check_martingale(tree, joint->measure, h, emmlab::AssetGroup(tree, concat(a, b))).passes();
                out.aggregation.record(!(pa && pb) || pab, tag);
            }
        }
        // Sub-groups of a certified group recombine under the same measure.
        {
            const auto a = random_subset(rng, group_ids, true);
            const auto b = random_subset(rng, group_ids, true);
            const bool pa = emmlab::check_martingale(tree, q, h, emmlab::AssetGroup(tree, a)).passes();
            const bool pb = emmlab::check_martingale(tree, q, h, emmlab::AssetGroup(tree, b)).passes();
            const bool pab = emmlab::check_martingale(tree, q, h, emmlab::AssetGroup(tree, concat(a, b))).passes();
            out.aggregation.record(pa && pb && pab, tag);
        }

        const auto geometry = emmlab::solution_geometry(tree, h, group);
        const double c = std::uniform_int_distribution<int>(2, 9)(rng) / 4.0;
        const auto scaled = scale_asset(tree, group_ids.front(), c);
        const auto geometry_scaled = emmlab::solution_geometry(scaled, h, emmlab::AssetGroup(scaled, group_ids));
        out.scaling.record(geometry.feasible == geometry_scaled.feasible &&
                               geometry.affine_dimension == geometry_scaled.affine_dimension,
                           tag);

        const bool complete = emmlab::is_complete(tree, h, group);
        out.completeness.record(geometry.affine_dimension && complete == (*geometry.affine_dimension == 0) &&
                                    complete == oracle_complete(tree, h, group_ids),
                                tag);
    }
    return out;
}

// Exhaustive minimality on arbitrage-free trees with driver-only splits.
inline Tally minimality_suite(std::uint64_t seed, int trees) {
    std::mt19937_64 rng(seed);
    Tally tally;
    RandomTreeSpec spec;
    spec.max_drivers = 2;
    spec.arbitrage_free = true;
    spec.driver_splits = true;
    for (int k = 0; k < trees; ++k) {
        const auto tree = random_tree(rng, spec);
        const auto group_ids = random_subset(rng, tree.asset_ids(), true);
        const emmlab::AssetGroup group(tree, group_ids);
        const auto report = emmlab::minimality_report(tree, group);
        const auto meet = emmlab::meet_construction(tree, group);
        tally.record(!report.theorem_violation && report.minimal.size() == 1 && report.minimal[0] == meet &&
                         meet == natural_filtration(tree, group_ids),
                     "tree " + std::to_string(k));
    }
    return tally;
}

}  // namespace testsupport
