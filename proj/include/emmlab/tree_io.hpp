#pragma once

#include "emmlab/partition.hpp"
#include "emmlab/tree.hpp"

#include <string>

namespace emmlab {

// Tree interchange document:
//   { "dt": 1.0,
//     "paths":   [ {"id": "u", "prob": 0.5}, {"id": "d", "prob": "1/2"} ],
//     "assets":  { "S1": [[100, 101], [100, 99]] },
//     "drivers": { "Y1": [[0, 1], [0, -1]] } }
// Values and probabilities may be JSON numbers or exact rational strings.
// Rejects on the first violation with a location-bearing ValidationError.
ScenarioTree parse_tree_json(const std::string& text);
ScenarioTree load_tree_file(const std::string& path);
std::string tree_to_json(const ScenarioTree& tree);

// Filtration document: { "partitions": [ [["u","d"]], [["u"],["d"]] ] }
// with blocks listed by path id, one partition per time 0..n_steps.
FiltrationSpec parse_filtration_json(const ScenarioTree& tree, const std::string& text);
std::string filtration_to_json(const ScenarioTree& tree, const FiltrationSpec& filtration);

// Resolves a command-line filtration argument. Accepted forms:
//   natural:S1,Y1   natural filtration of the listed processes
//   full            natural filtration of every process
//   trivial         one block at every time
//   leak            every process revealed one period early
//   <file.json>     explicit filtration document
FiltrationSpec resolve_filtration(const ScenarioTree& tree, const std::string& spec);

}  // namespace emmlab
