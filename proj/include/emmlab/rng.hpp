#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>

namespace emmlab {

std::uint64_t fnv1a64(std::string_view text);

// Counter-based normal source: draw k depends only on (seed, label, k), so
// streams can be consumed in any order or in parallel. Uniforms come from a
// SplitMix64 finalizer over key + counter; normals from the cosine branch of
// Box-Muller on counters 2k and 2k+1.
class Substream {
public:
    Substream(std::uint64_t seed, std::string_view label);

    std::uint64_t bits(std::uint64_t counter) const;
    double uniform(std::uint64_t counter) const;  // in (0, 1]
    double normal(std::uint64_t k) const;

    std::uint64_t key() const { return key_; }

private:
    std::uint64_t key_;
};

// Hands out substreams and rejects a label seen twice.
class StreamRegistry {
public:
    explicit StreamRegistry(std::uint64_t seed) : seed_(seed) {}

    // Throws ValidationError on a duplicate label.
    Substream open(const std::string& label);

private:
    std::uint64_t seed_;
    std::set<std::string> labels_;
};

}  // namespace emmlab
