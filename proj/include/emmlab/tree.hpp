#pragma once

#include "emmlab/rational.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace emmlab {

// Comparison tolerance for float-mode inputs.
inline constexpr double kFloatTolerance = 1e-9;

struct TimeGrid {
    std::size_t n_steps = 1;
    double dt = 1.0;

    TimeGrid() = default;
    TimeGrid(std::size_t n_steps, double dt);
};

enum class ProcessKind { Asset, Driver };

// Raw description of one process, values indexed [path][time]. `exact` is
// either empty or the same shape as `values` and carries the exact rationals
// the document supplied.
struct ProcessData {
    std::string id;
    std::vector<std::vector<double>> values;
    std::vector<std::vector<Rational>> exact;
};

// Unvalidated input to ScenarioTree. Empty `path_ids` means "w0", "w1", ...
struct TreeData {
    double dt = 1.0;
    std::vector<std::string> path_ids;
    std::vector<double> prob;
    std::vector<Rational> exact_prob;  // empty unless supplied exactly
    std::vector<ProcessData> assets;
    std::vector<ProcessData> drivers;
};

// Finite path space with strictly positive path weights and per-path,
// per-time values for assets and drivers. Recombining trees are stored
// unrolled, one entry per full path. Immutable once built.
class ScenarioTree {
public:
    // Validates every invariant and throws ValidationError naming the first
    // offending path/field.
    explicit ScenarioTree(TreeData data);

    std::size_t path_count() const { return path_ids_.size(); }
    std::size_t n_steps() const { return grid_.n_steps; }
    const TimeGrid& grid() const { return grid_; }

    const std::vector<std::string>& path_ids() const { return path_ids_; }
    std::span<const double> probabilities() const { return prob_; }

    std::size_t process_count() const { return ids_.size(); }
    std::size_t process_index(std::string_view id) const;
    bool has_process(std::string_view id) const;
    const std::string& process_id(std::size_t proc) const { return ids_[proc]; }
    ProcessKind process_kind(std::size_t proc) const { return kinds_[proc]; }

    std::vector<std::string> asset_ids() const;
    std::vector<std::string> driver_ids() const;
    std::vector<std::string> all_process_ids() const { return ids_; }

    double value(std::size_t proc, std::size_t path, std::size_t t) const {
        return values_[proc][path * (grid_.n_steps + 1) + t];
    }
    Rational exact_value(std::size_t proc, std::size_t path, std::size_t t) const;

    // True when any process value or probability was supplied as an exact
    // rational; the EMM engine then defaults to exact arithmetic.
    bool exact_input() const { return exact_input_; }

    // Returns the data this tree was built from (used by the JSON writer).
    TreeData to_data() const;

private:
    TimeGrid grid_;
    std::vector<std::string> path_ids_;
    std::vector<double> prob_;
    std::vector<Rational> exact_prob_;
    std::vector<std::string> ids_;
    std::vector<ProcessKind> kinds_;
    std::vector<std::vector<double>> values_;
    std::vector<std::vector<Rational>> exact_;
    std::unordered_map<std::string, std::size_t> index_;
    bool exact_input_ = false;
};

}  // namespace emmlab
