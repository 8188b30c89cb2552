#pragma once

// Small tree builders shared by the unit, property, and acceptance suites.

#include "emmlab/tree.hpp"

#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace testsupport {

using emmlab::ProcessData;
using emmlab::ScenarioTree;
using emmlab::TreeData;

// One period, one asset "S" starting at 0, path k moves by increments[k].
inline ScenarioTree one_period(const std::vector<double>& increments, std::vector<double> prob = {}) {
    TreeData data;
    if (prob.empty()) prob.assign(increments.size(), 1.0 / static_cast<double>(increments.size()));
    data.prob = prob;
    ProcessData s{"S", {}, {}};
    for (double inc : increments) s.values.push_back({0.0, inc});
    data.assets.push_back(s);
    return ScenarioTree(data);
}

// 2^periods paths; asset "S" moves +up / -down each period, bit k of the path
// index (most significant first) choosing the move at period k.
inline ScenarioTree binary_tree(int periods, double up = 1.0, double down = -1.0) {
    TreeData data;
    const int n = 1 << periods;
    data.prob.assign(n, 1.0 / n);
    ProcessData s{"S", {}, {}};
    for (int p = 0; p < n; ++p) {
        std::vector<double> row{0.0};
        for (int k = 0; k < periods; ++k) {
            const bool bit = (p >> (periods - 1 - k)) & 1;
            row.push_back(row.back() + (bit ? down : up));
        }
        s.values.push_back(row);
    }
    data.assets.push_back(s);
    return ScenarioTree(data);
}

struct RandomTreeSpec {
    int max_paths = 12;
    int max_periods = 3;
    int max_assets = 2;
    int max_drivers = 1;
    int max_increment = 2;  // asset increments drawn from [-max, max]
    // The last child cancels the sum of its siblings, so zero is the centroid
    // of every node and the natural filtration is arbitrage-free.
    bool arbitrage_free = false;
    // Occasionally add a child that copies a sibling's asset move but flips
    // the drivers, so prices do not reveal everything.
    bool driver_splits = false;
};

// Random non-recombining tree: every node branches 1-3 ways while the leaf
// budget allows, asset increments are small integers (so feasibility is
// decided exactly in floating point), drivers take values in {0, 1}.
inline ScenarioTree random_tree(std::mt19937_64& rng, const RandomTreeSpec& spec = {}) {
    auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    const int periods = uniform(1, spec.max_periods);
    const int n_assets = uniform(1, spec.max_assets);
    const int n_drivers = uniform(0, spec.max_drivers);
    const int n_proc = n_assets + n_drivers;

    struct Node {
        std::vector<std::vector<double>> history;  // [proc][time]
        double prob;
    };
    std::vector<Node> level{{std::vector<std::vector<double>>(n_proc, std::vector<double>{0.0}), 1.0}};
    for (int k = n_assets; k < n_proc; ++k) level[0].history[k][0] = uniform(0, 1);

    for (int t = 0; t < periods; ++t) {
        std::vector<Node> next;
        int budget = spec.max_paths;
        for (std::size_t i = 0; i < level.size(); ++i) {
            const int remaining_parents = static_cast<int>(level.size() - i - 1);
            const int room = budget - remaining_parents;
            const int branches = std::max(1, std::min(uniform(1, 3), room));
            const bool split = spec.driver_splits && n_drivers > 0 && room > branches && uniform(0, 1) == 1;
            budget -= branches + (split ? 1 : 0);
            const std::size_t first_child = next.size();
            std::vector<int> sum(n_assets, 0);
            for (int c = 0; c < branches; ++c) {
                Node child = level[i];
                child.prob = level[i].prob / branches;
                for (int k = 0; k < n_assets; ++k) {
                    int inc = uniform(-spec.max_increment, spec.max_increment);
                    if (spec.arbitrage_free) {
                        if (c == branches - 1) inc = -sum[k];
                        else if (c == 0) inc = uniform(1, std::max(1, spec.max_increment));
                        sum[k] += inc;
                    }
                    child.history[k].push_back(child.history[k].back() + inc);
                }
                for (int k = n_assets; k < n_proc; ++k) child.history[k].push_back(uniform(0, 1));
                next.push_back(std::move(child));
            }
            if (split) {
                Node twin = next[first_child + static_cast<std::size_t>(uniform(0, branches - 1))];
                for (int k = n_assets; k < n_proc; ++k) twin.history[k].back() = 1.0 - twin.history[k].back();
                next.push_back(std::move(twin));
                const double mass = level[i].prob / (branches + 1);
                for (std::size_t c = first_child; c < next.size(); ++c) next[c].prob = mass;
            }
        }
        level = std::move(next);
    }

    TreeData data;
    for (const auto& leaf : level) data.prob.push_back(leaf.prob);
    for (int k = 0; k < n_proc; ++k) {
        ProcessData proc;
        proc.id = k < n_assets ? "S" + std::to_string(k + 1) : "Y" + std::to_string(k - n_assets + 1);
        for (const auto& leaf : level) proc.values.push_back(leaf.history[k]);
        (k < n_assets ? data.assets : data.drivers).push_back(std::move(proc));
    }
    return ScenarioTree(data);
}

}  // namespace testsupport
