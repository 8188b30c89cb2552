#pragma once

#include "emmlab/partition.hpp"
#include "emmlab/tree.hpp"

#include <string>
#include <vector>

namespace emmlab {

using ProcessSet = std::vector<std::string>;

// Paths share a block iff every selected process agrees at all times <= t.
// Throws ValidationError for unknown ids or an empty process set, RangeError
// for t > n_steps.
Partition prefix_partition(const ScenarioTree& tree, std::size_t t, const ProcessSet& processes);

// Prefix partition over every asset and driver.
Partition full_prefix_partition(const ScenarioTree& tree, std::size_t t);

FiltrationSpec natural_filtration(const ScenarioTree& tree, const ProcessSet& processes);

// Finest non-anticipative filtration: the natural filtration of everything.
FiltrationSpec full_filtration(const ScenarioTree& tree);

// The one-block-forever filtration.
FiltrationSpec trivial_filtration(const ScenarioTree& tree);

// Reveals every process one period early (capped at the horizon). The
// canonical anticipative information structure.
FiltrationSpec future_leak_filtration(const ScenarioTree& tree);

bool is_adapted(const ScenarioTree& tree, const FiltrationSpec& filtration, const std::string& process);

// No block separates two paths whose complete process histories up to t agree.
bool is_nonanticipative(const ScenarioTree& tree, const FiltrationSpec& filtration);

// Pathwise sum over t of (X_{t+1} - X_t)(Y_{t+1} - Y_t).
double quadratic_covariation(const ScenarioTree& tree, const std::string& x, const std::string& y,
                             std::size_t path);

// Throws ValidationError if the filtration's shape does not match the tree.
void require_compatible(const ScenarioTree& tree, const FiltrationSpec& filtration);

}  // namespace emmlab
