#include "emmlab/rng.hpp"

#include "emmlab/error.hpp"

#include <cmath>
#include <numbers>

namespace emmlab {
namespace {

std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

Substream::Substream(std::uint64_t seed, std::string_view label) : key_(mix(seed ^ fnv1a64(label))) {}

std::uint64_t Substream::bits(std::uint64_t counter) const {
    return mix(key_ + (counter + 1) * 0x9E3779B97F4A7C15ULL);
}

double Substream::uniform(std::uint64_t counter) const {
    return static_cast<double>((bits(counter) >> 11) + 1) * 0x1.0p-53;
}

double Substream::normal(std::uint64_t k) const {
    const double u1 = uniform(2 * k);
    const double u2 = uniform(2 * k + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Substream StreamRegistry::open(const std::string& label) {
    if (!labels_.insert(label).second) throw ValidationError("random stream '" + label + "' registered twice");
    return Substream(seed_, label);
}

}  // namespace emmlab
