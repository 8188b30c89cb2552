#include "emmlab/asset_group.hpp"

#include "emmlab/error.hpp"

#include <algorithm>
#include <sstream>

namespace emmlab {

AssetGroup::AssetGroup(const ScenarioTree& tree, const std::vector<std::string>& ids) {
    if (ids.empty()) throw ValidationError("asset group is empty");
    for (const auto& id : ids) {
        const std::size_t proc = tree.process_index(id);
        if (tree.process_kind(proc) != ProcessKind::Asset)
            throw ValidationError("'" + id + "' is a driver, not an asset");
        if (std::find(ids_.begin(), ids_.end(), id) == ids_.end()) ids_.push_back(id);
    }
}

std::string AssetGroup::label() const {
    std::string out;
    for (std::size_t k = 0; k < ids_.size(); ++k) out += (k ? "," : "") + ids_[k];
    return out;
}

std::vector<std::string> split_ids(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace emmlab
