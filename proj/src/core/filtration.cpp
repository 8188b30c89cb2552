#include "emmlab/filtration.hpp"

#include "emmlab/error.hpp"

#include <map>

namespace emmlab {
namespace {

std::vector<std::size_t> resolve(const ScenarioTree& tree, const ProcessSet& processes) {
    if (processes.empty()) throw ValidationError("process set is empty");
    std::vector<std::size_t> out;
    out.reserve(processes.size());
    for (const auto& id : processes) out.push_back(tree.process_index(id));
    return out;
}

std::vector<std::size_t> all_processes(const ScenarioTree& tree) {
    std::vector<std::size_t> out(tree.process_count());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = k;
    return out;
}

// Splits `labels` by the value of `proc` at time t.
void split_by(const ScenarioTree& tree, std::size_t proc, std::size_t t, std::vector<int>& labels) {
    std::map<std::pair<int, double>, int> keys;
    for (std::size_t p = 0; p < labels.size(); ++p) {
        auto key = std::make_pair(labels[p], tree.value(proc, p, t) + 0.0);  // folds -0.0 into 0.0
        auto [it, inserted] = keys.emplace(key, static_cast<int>(keys.size()));
        labels[p] = it->second;
    }
}

// Natural filtration of an already-resolved process list, built incrementally.
FiltrationSpec natural_of(const ScenarioTree& tree, const std::vector<std::size_t>& procs) {
    std::vector<int> labels(tree.path_count(), 0);
    std::vector<Partition> parts;
    parts.reserve(tree.n_steps() + 1);
    for (std::size_t t = 0; t <= tree.n_steps(); ++t) {
        for (std::size_t proc : procs) split_by(tree, proc, t, labels);
        parts.push_back(Partition::from_labels(labels));
    }
    return FiltrationSpec(std::move(parts));
}

Partition prefix_of(const ScenarioTree& tree, std::size_t t, const std::vector<std::size_t>& procs) {
    if (t > tree.n_steps())
        throw RangeError("time index " + std::to_string(t) + " exceeds horizon " + std::to_string(tree.n_steps()));
    std::vector<int> labels(tree.path_count(), 0);
    for (std::size_t u = 0; u <= t; ++u)
        for (std::size_t proc : procs) split_by(tree, proc, u, labels);
    return Partition::from_labels(labels);
}

}  // namespace

void require_compatible(const ScenarioTree& tree, const FiltrationSpec& filtration) {
    if (filtration.path_count() != tree.path_count())
        throw ValidationError("filtration covers " + std::to_string(filtration.path_count()) + " paths, tree has " +
                              std::to_string(tree.path_count()));
    if (filtration.horizon() != tree.n_steps())
        throw ValidationError("filtration horizon " + std::to_string(filtration.horizon()) + " differs from tree horizon " +
                              std::to_string(tree.n_steps()));
}

Partition prefix_partition(const ScenarioTree& tree, std::size_t t, const ProcessSet& processes) {
    return prefix_of(tree, t, resolve(tree, processes));
}

Partition full_prefix_partition(const ScenarioTree& tree, std::size_t t) {
    return prefix_of(tree, t, all_processes(tree));
}

FiltrationSpec natural_filtration(const ScenarioTree& tree, const ProcessSet& processes) {
    return natural_of(tree, resolve(tree, processes));
}

FiltrationSpec full_filtration(const ScenarioTree& tree) { return natural_of(tree, all_processes(tree)); }

FiltrationSpec trivial_filtration(const ScenarioTree& tree) {
    return FiltrationSpec(std::vector<Partition>(tree.n_steps() + 1, Partition::trivial(tree.path_count())));
}

FiltrationSpec future_leak_filtration(const ScenarioTree& tree) {
    const FiltrationSpec full = full_filtration(tree);
    std::vector<Partition> parts;
    for (std::size_t t = 0; t <= tree.n_steps(); ++t) parts.push_back(full.at(std::min(t + 1, tree.n_steps())));
    return FiltrationSpec(std::move(parts));
}

bool is_adapted(const ScenarioTree& tree, const FiltrationSpec& filtration, const std::string& process) {
    require_compatible(tree, filtration);
    const std::size_t proc = tree.process_index(process);
    for (std::size_t t = 0; t <= tree.n_steps(); ++t) {
        const Partition& part = filtration.at(t);
        std::vector<double> seen(part.block_count());
        std::vector<bool> set(part.block_count(), false);
        for (std::size_t p = 0; p < tree.path_count(); ++p) {
            const int b = part.block_of(p);
            const double v = tree.value(proc, p, t);
            if (!set[b]) {
                seen[b] = v;
                set[b] = true;
            } else if (seen[b] != v) {
                return false;
            }
        }
    }
    return true;
}

bool is_nonanticipative(const ScenarioTree& tree, const FiltrationSpec& filtration) {
    require_compatible(tree, filtration);
    const FiltrationSpec full = full_filtration(tree);
    for (std::size_t t = 0; t <= tree.n_steps(); ++t)
        if (!full.at(t).refines(filtration.at(t))) return false;
    return true;
}

double quadratic_covariation(const ScenarioTree& tree, const std::string& x, const std::string& y,
                             std::size_t path) {
    if (path >= tree.path_count()) throw ValidationError("path index " + std::to_string(path) + " out of range");
    const std::size_t px = tree.process_index(x);
    const std::size_t py = tree.process_index(y);
    double total = 0.0;
    for (std::size_t t = 0; t < tree.n_steps(); ++t) {
        const double dx = tree.value(px, path, t + 1) - tree.value(px, path, t);
        const double dy = tree.value(py, path, t + 1) - tree.value(py, path, t);
        total += dx * dy;
    }
    return total;
}

}  // namespace emmlab
