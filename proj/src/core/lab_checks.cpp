#include "emmlab/lab.hpp"

#include "emmlab/error.hpp"
#include "emmlab/filtration.hpp"

#include <cmath>

namespace emmlab {

bool canonical_reduction_check(const ScenarioTree& tree, const FiltrationSpec& h, const AssetGroup& group,
                               const EmmOptions& options) {
    const auto cert = emm_exists(tree, h, group, options);
    if (!cert) throw PreconditionError("the filtration admits no martingale measure for group " + group.label());
    return check_martingale(tree, cert->measure, natural_filtration(tree, group.ids()), group).passes();
}

bool contains_driver_sigma(const FiltrationSpec& filtration, const ScenarioTree& tree, const std::string& driver,
                           std::size_t t) {
    require_compatible(tree, filtration);
    if (t > tree.n_steps()) throw RangeError("time " + std::to_string(t) + " is past the horizon");
    const std::size_t proc = tree.process_index(driver);
    const Partition& part = filtration.at(t);
    std::vector<std::size_t> first(part.block_count(), tree.path_count());
    for (std::size_t w = 0; w < tree.path_count(); ++w) {
        const auto b = static_cast<std::size_t>(part.block_of(w));
        if (first[b] == tree.path_count()) {
            first[b] = w;
            continue;
        }
        for (std::size_t u = 0; u <= t; ++u)
            if (tree.value(proc, w, u) != tree.value(proc, first[b], u)) return false;
    }
    return true;
}

bool contains_driver(const FiltrationSpec& filtration, const ScenarioTree& tree, const std::string& driver) {
    for (std::size_t t = 0; t <= tree.n_steps(); ++t)
        if (!contains_driver_sigma(filtration, tree, driver, t)) return false;
    return true;
}

std::optional<AnticipativityWitness> anticipativity_witness(const ScenarioTree& tree,
                                                            const FiltrationSpec& filtration) {
    require_compatible(tree, filtration);
    for (std::size_t t = 0; t <= tree.n_steps(); ++t) {
        const Partition prefix = full_prefix_partition(tree, t);
        const Partition& part = filtration.at(t);
        std::vector<std::size_t> first(prefix.block_count(), tree.path_count());
        for (std::size_t w = 0; w < tree.path_count(); ++w) {
            const auto b = static_cast<std::size_t>(prefix.block_of(w));
            if (first[b] == tree.path_count()) first[b] = w;
            else if (part.block_of(w) != part.block_of(first[b])) return AnticipativityWitness{t, b, first[b], w};
        }
    }
    return std::nullopt;
}

OrthogonalityTable orthogonality_diagnostic(const ScenarioTree& tree, const Measure& measure,
                                            const FiltrationSpec& filtration, const AssetGroup& group) {
    require_compatible(tree, filtration);
    if (measure.size() != tree.path_count()) throw ValidationError("measure size differs from path count");
    OrthogonalityTable table;
    const auto& ids = group.ids();
    for (std::size_t t = 0; t < tree.n_steps(); ++t) {
        const auto blocks = filtration.at(t).blocks();
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            double mass = 0.0;
            for (std::size_t w : blocks[b]) mass += measure[w];
            for (std::size_t i = 0; i < ids.size(); ++i) {
                for (std::size_t j = i + 1; j < ids.size(); ++j) {
                    const auto pi = tree.process_index(ids[i]);
                    const auto pj = tree.process_index(ids[j]);
                    double sum = 0.0;
                    for (std::size_t w : blocks[b])
                        sum += measure[w] * (tree.value(pi, w, t + 1) - tree.value(pi, w, t)) *
                               (tree.value(pj, w, t + 1) - tree.value(pj, w, t));
                    const double value = sum / mass;
                    table.entries.push_back({t, b, ids[i], ids[j], value});
                    table.max_abs = std::max(table.max_abs, std::abs(value));
                }
            }
        }
    }
    return table;
}

}  // namespace emmlab
