#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace emmlab {

// A partition of the path set {0, ..., n-1}, the finite stand-in for a
// sigma-field. Stored as a canonical label per path: blocks are numbered in
// order of their smallest path, so two equal partitions have equal labels.
class Partition {
public:
    Partition() = default;

    static Partition from_labels(const std::vector<int>& labels);
    // Throws ValidationError unless the blocks are non-empty, disjoint, and
    // cover {0, ..., n-1}.
    static Partition from_blocks(std::size_t n, const std::vector<std::vector<std::size_t>>& blocks);
    static Partition trivial(std::size_t n);
    static Partition discrete(std::size_t n);

    std::size_t size() const { return labels_.size(); }
    std::size_t block_count() const { return count_; }
    int block_of(std::size_t path) const { return labels_[path]; }
    const std::vector<int>& labels() const { return labels_; }

    // Blocks sorted by smallest member, members ascending.
    std::vector<std::vector<std::size_t>> blocks() const;

    // True when every block of *this lies inside a block of `coarser`.
    bool refines(const Partition& coarser) const;

    bool operator==(const Partition& other) const { return labels_ == other.labels_; }

    std::string to_string() const;

private:
    std::vector<int> labels_;
    std::size_t count_ = 0;
};

// Coarsest partition finer than both (generated sigma-field a v b).
Partition common_refinement(const Partition& a, const Partition& b);

// Finest partition coarser than both (sigma-field intersection a ^ b).
Partition common_coarsening(const Partition& a, const Partition& b);

// A time-indexed refining sequence of partitions, one per time 0..n_steps.
class FiltrationSpec {
public:
    FiltrationSpec() = default;
    // Throws ValidationError if sizes differ or some step fails to refine.
    explicit FiltrationSpec(std::vector<Partition> partitions);

    std::size_t horizon() const { return partitions_.empty() ? 0 : partitions_.size() - 1; }
    std::size_t path_count() const { return partitions_.empty() ? 0 : partitions_.front().size(); }
    const Partition& at(std::size_t t) const { return partitions_[t]; }
    const std::vector<Partition>& partitions() const { return partitions_; }

    // Timewise refinement: at every t, *this is at least as fine as `coarser`.
    bool refines(const FiltrationSpec& coarser) const;
    std::size_t total_blocks() const;

    bool operator==(const FiltrationSpec& other) const { return partitions_ == other.partitions_; }

private:
    std::vector<Partition> partitions_;
};

// Timewise sigma-field intersection; the result is again a filtration.
FiltrationSpec intersect(const FiltrationSpec& a, const FiltrationSpec& b);

}  // namespace emmlab
