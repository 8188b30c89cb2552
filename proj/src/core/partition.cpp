#include "emmlab/partition.hpp"

#include "emmlab/error.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace emmlab {

Partition Partition::from_labels(const std::vector<int>& labels) {
    Partition out;
    out.labels_.resize(labels.size());
    std::map<int, int> remap;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto [it, inserted] = remap.emplace(labels[i], static_cast<int>(remap.size()));
        out.labels_[i] = it->second;
    }
    out.count_ = remap.size();
    return out;
}

Partition Partition::from_blocks(std::size_t n, const std::vector<std::vector<std::size_t>>& blocks) {
    std::vector<int> labels(n, -1);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (blocks[b].empty()) throw ValidationError("partition: block " + std::to_string(b) + " is empty");
        for (std::size_t path : blocks[b]) {
            if (path >= n) throw ValidationError("partition: path index " + std::to_string(path) + " out of range");
            if (labels[path] != -1)
                throw ValidationError("partition: path " + std::to_string(path) + " appears in two blocks");
            labels[path] = static_cast<int>(b);
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        if (labels[i] == -1) throw ValidationError("partition: path " + std::to_string(i) + " is not covered");
    return from_labels(labels);
}

Partition Partition::trivial(std::size_t n) { return from_labels(std::vector<int>(n, 0)); }

Partition Partition::discrete(std::size_t n) {
    std::vector<int> labels(n);
    std::iota(labels.begin(), labels.end(), 0);
    return from_labels(labels);
}

std::vector<std::vector<std::size_t>> Partition::blocks() const {
    std::vector<std::vector<std::size_t>> out(count_);
    for (std::size_t i = 0; i < labels_.size(); ++i) out[labels_[i]].push_back(i);
    return out;
}

bool Partition::refines(const Partition& coarser) const {
    if (coarser.size() != size()) return false;
    std::vector<int> image(count_, -1);
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        int& slot = image[labels_[i]];
        if (slot == -1) slot = coarser.labels_[i];
        else if (slot != coarser.labels_[i]) return false;
    }
    return true;
}

std::string Partition::to_string() const {
    std::ostringstream os;
    os << '{';
    bool first_block = true;
    for (const auto& block : blocks()) {
        if (!first_block) os << ' ';
        first_block = false;
        os << '{';
        for (std::size_t k = 0; k < block.size(); ++k) os << (k ? "," : "") << block[k];
        os << '}';
    }
    os << '}';
    return os.str();
}

Partition common_refinement(const Partition& a, const Partition& b) {
    if (a.size() != b.size()) throw ValidationError("partition sizes differ");
    std::map<std::pair<int, int>, int> keys;
    std::vector<int> labels(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto [it, inserted] = keys.emplace(std::make_pair(a.block_of(i), b.block_of(i)), static_cast<int>(keys.size()));
        labels[i] = it->second;
    }
    return Partition::from_labels(labels);
}

Partition common_coarsening(const Partition& a, const Partition& b) {
    if (a.size() != b.size()) throw ValidationError("partition sizes differ");
    // Union-find over paths, merging everything either partition groups.
    std::vector<std::size_t> parent(a.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](std::size_t x, std::size_t y) {
        x = find(x);
        y = find(y);
        if (x != y) parent[std::max(x, y)] = std::min(x, y);
    };
    for (const Partition* p : {&a, &b}) {
        std::vector<long> first(p->block_count(), -1);
        for (std::size_t i = 0; i < p->size(); ++i) {
            long& f = first[p->block_of(i)];
            if (f < 0) f = static_cast<long>(i);
            else unite(static_cast<std::size_t>(f), i);
        }
    }
    std::vector<int> labels(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) labels[i] = static_cast<int>(find(i));
    return Partition::from_labels(labels);
}

FiltrationSpec::FiltrationSpec(std::vector<Partition> partitions) : partitions_(std::move(partitions)) {
    if (partitions_.empty()) throw ValidationError("filtration: no partitions");
    for (std::size_t t = 1; t < partitions_.size(); ++t) {
        if (partitions_[t].size() != partitions_[0].size())
            throw ValidationError("filtration: partition " + std::to_string(t) + " has a different path count");
        if (!partitions_[t].refines(partitions_[t - 1]))
            throw ValidationError("filtration: partition " + std::to_string(t) + " does not refine partition " +
                                  std::to_string(t - 1));
    }
}

bool FiltrationSpec::refines(const FiltrationSpec& coarser) const {
    if (coarser.partitions_.size() != partitions_.size()) return false;
    for (std::size_t t = 0; t < partitions_.size(); ++t)
        if (!partitions_[t].refines(coarser.partitions_[t])) return false;
    return true;
}

std::size_t FiltrationSpec::total_blocks() const {
    std::size_t total = 0;
    for (const auto& p : partitions_) total += p.block_count();
    return total;
}

FiltrationSpec intersect(const FiltrationSpec& a, const FiltrationSpec& b) {
    if (a.horizon() != b.horizon()) throw ValidationError("filtration horizons differ");
    std::vector<Partition> parts;
    parts.reserve(a.horizon() + 1);
    for (std::size_t t = 0; t <= a.horizon(); ++t) parts.push_back(common_coarsening(a.at(t), b.at(t)));
    return FiltrationSpec(std::move(parts));
}

}  // namespace emmlab
