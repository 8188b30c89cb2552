#include "emmlab/lab.hpp"

#include "emmlab/error.hpp"
#include "emmlab/filtration.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace emmlab {
namespace {

class Enumerator {
public:
    Enumerator(const ScenarioTree& tree, const AssetGroup& group, const EnumerationCaps& caps,
               const std::function<bool(const FiltrationSpec&)>& visit)
        : tree_(tree), caps_(caps), visit_(visit) {
        const auto natural = natural_filtration(tree, group.ids());
        for (std::size_t t = 0; t <= tree.n_steps(); ++t) {
            lower_.push_back(natural.at(t));
            upper_.push_back(full_prefix_partition(tree, t));
        }
    }

    std::size_t run() {
        level(0);
        return count_;
    }

private:
    struct Unit {
        std::size_t group;  // block of the lower bound
        int block;          // block of the upper bound
    };

    // Every partition between max(previous, adapted lower bound) and the full
    // prefix at t: set partitions of the prefix blocks inside each lower block.
    void level(std::size_t t) {
        if (stop_) return;
        if (t > tree_.n_steps()) {
            if (count_ >= caps_.max_filtrations)
                throw BudgetError("more than " + std::to_string(caps_.max_filtrations) +
                                  " filtrations; raise the filtration cap or shrink the tree");
            ++count_;
            if (!visit_(FiltrationSpec(chosen_))) stop_ = true;
            return;
        }
        const Partition lower = t == 0 ? lower_[0] : common_refinement(chosen_.back(), lower_[t]);
        const Partition& upper = upper_[t];

        std::vector<Unit> units;
        std::vector<bool> seen(upper.block_count(), false);
        const auto lower_blocks = lower.blocks();
        for (std::size_t g = 0; g < lower_blocks.size(); ++g) {
            for (std::size_t w : lower_blocks[g]) {
                const int b = upper.block_of(w);
                if (seen[b]) continue;
                seen[b] = true;
                units.push_back({g, b});
            }
        }
        std::vector<int> unit_label(upper.block_count(), 0);

        auto assign = [&](auto&& self, std::size_t k, int next_label, int group_start) -> void {
            if (stop_) return;
            if (k == units.size()) {
                std::vector<int> labels(tree_.path_count());
                for (std::size_t w = 0; w < labels.size(); ++w) labels[w] = unit_label[upper.block_of(w)];
                chosen_.push_back(Partition::from_labels(labels));
                level(t + 1);
                chosen_.pop_back();
                return;
            }
            if (k == 0 || units[k].group != units[k - 1].group) group_start = next_label;
            for (int label = group_start; label <= next_label; ++label) {
                unit_label[units[k].block] = label;
                self(self, k + 1, std::max(next_label, label + 1), group_start);
            }
        };
        assign(assign, 0, 0, 0);
    }

    const ScenarioTree& tree_;
    const EnumerationCaps& caps_;
    const std::function<bool(const FiltrationSpec&)>& visit_;
    std::vector<Partition> lower_;
    std::vector<Partition> upper_;
    std::vector<Partition> chosen_;
    std::size_t count_ = 0;
    bool stop_ = false;
};

// Feasibility flags for every filtration, computed on a worker pool. Each
// slot is written by exactly one worker, so the result does not depend on
// scheduling.
std::vector<char> feasibility(const ScenarioTree& tree, const AssetGroup& group,
                              const std::vector<FiltrationSpec>& family, const LabOptions& options) {
    std::vector<char> ok(family.size(), 0);
    unsigned workers = options.workers ? options.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, family.size() / 64)));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        try {
            for (std::size_t i = next++; i < family.size(); i = next++)
                ok[i] = emm_exists(tree, family[i], group, options.emm).has_value();
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = family.size();
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);
    return ok;
}

void check_caps(const ScenarioTree& tree, const EnumerationCaps& caps) {
    if (tree.path_count() > caps.max_paths)
        throw BudgetError("tree has " + std::to_string(tree.path_count()) + " paths; enumeration cap is " +
                          std::to_string(caps.max_paths));
    if (tree.n_steps() > caps.max_periods)
        throw BudgetError("tree has " + std::to_string(tree.n_steps()) + " periods; enumeration cap is " +
                          std::to_string(caps.max_periods));
}

const char* kNoFeasible = "no-arbitrage violated at every information structure";

}  // namespace

std::size_t for_each_filtration(const ScenarioTree& tree, const AssetGroup& group, const EnumerationCaps& caps,
                                const std::function<bool(const FiltrationSpec&)>& visit) {
    check_caps(tree, caps);
    Enumerator enumerator(tree, group, caps, visit);
    return enumerator.run();
}

std::vector<FiltrationSpec> enumerate_filtrations(const ScenarioTree& tree, const AssetGroup& group,
                                                  const EnumerationCaps& caps) {
    std::vector<FiltrationSpec> out;
    for_each_filtration(tree, group, caps, [&](const FiltrationSpec& f) {
        out.push_back(f);
        return true;
    });
    return out;
}

FiltrationSpec meet_construction(const ScenarioTree& tree, const AssetGroup& group, const LabOptions& options) {
    const auto family = enumerate_filtrations(tree, group, options.caps);
    const auto ok = feasibility(tree, group, family, options);
    std::optional<FiltrationSpec> meet;
    for (std::size_t i = 0; i < family.size(); ++i) {
        if (!ok[i]) continue;
        meet = meet ? intersect(*meet, family[i]) : family[i];
    }
    if (!meet) throw NoArbitrageError(kNoFeasible);
    return *meet;
}

MinimalityReport minimality_report(const ScenarioTree& tree, const AssetGroup& group, const LabOptions& options) {
    const auto family = enumerate_filtrations(tree, group, options.caps);
    const auto ok = feasibility(tree, group, family, options);

    MinimalityReport report;
    report.enumerated = family.size();
    std::vector<std::size_t> feasible;
    for (std::size_t i = 0; i < family.size(); ++i)
        if (ok[i]) feasible.push_back(i);
    report.feasible = feasible.size();
    if (feasible.empty()) throw NoArbitrageError(kNoFeasible);

    // A strictly coarser filtration has strictly fewer blocks in total, so in
    // ascending block count each candidate only needs comparing against the
    // minimal elements already found.
    std::vector<std::size_t> order = feasible;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return family[a].total_blocks() < family[b].total_blocks();
    });
    std::vector<std::size_t> minimal;
    for (std::size_t i : order) {
        bool dominated = false;
        for (std::size_t m : minimal) dominated = dominated || family[i].refines(family[m]);
        if (!dominated) minimal.push_back(i);
    }
    std::sort(minimal.begin(), minimal.end());
    for (std::size_t m : minimal) report.minimal.push_back(family[m]);

    report.meet = family[feasible.front()];
    for (std::size_t i : feasible) report.meet = intersect(report.meet, family[i]);
    report.natural = natural_filtration(tree, group.ids());
    report.meet_feasible = emm_exists(tree, report.meet, group, options.emm).has_value();
    report.meet_equals_natural = report.meet == report.natural;
    report.theorem_violation = !(report.minimal.size() == 1 && report.minimal.front() == report.meet &&
                                 report.meet_equals_natural && report.meet_feasible);
    return report;
}

}  // namespace emmlab
