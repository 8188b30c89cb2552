#pragma once

#include "emmlab/tree.hpp"

#include <string>
#include <vector>

namespace emmlab {

// A non-empty set of asset identifiers drawn from one tree. Duplicates are
// dropped; first-seen order is kept so reports read naturally.
class AssetGroup {
public:
    // Throws ValidationError on an empty list, an unknown id, or a driver id.
    AssetGroup(const ScenarioTree& tree, const std::vector<std::string>& ids);

    const std::vector<std::string>& ids() const { return ids_; }
    std::size_t size() const { return ids_.size(); }
    std::string label() const;  // "S1,S2"

private:
    std::vector<std::string> ids_;
};

// Splits "S1,S2" into ids (empty items skipped).
std::vector<std::string> split_ids(const std::string& text);

}  // namespace emmlab
