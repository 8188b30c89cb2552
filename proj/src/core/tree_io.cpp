#include "emmlab/tree_io.hpp"

#include "emmlab/error.hpp"
#include "emmlab/filtration.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace emmlab {
namespace {

using nlohmann::json;

struct Scalar {
    double value = 0.0;
    bool exact = false;
    Rational rational;
};

Scalar read_scalar(const json& node, const std::string& where) {
    Scalar out;
    if (node.is_number()) {
        out.value = node.get<double>();
        out.rational = Rational(out.value);
    } else if (node.is_string()) {
        try {
            out.rational = parse_rational(node.get<std::string>());
        } catch (const ValidationError& e) {
            throw ValidationError(where + ": " + e.what());
        }
        out.value = static_cast<double>(out.rational);
        out.exact = true;
    } else {
        throw ValidationError(where + ": expected a number or rational string");
    }
    return out;
}

std::vector<ProcessData> read_processes(const json& doc, const char* section, std::size_t n_paths) {
    std::vector<ProcessData> out;
    if (!doc.contains(section)) return out;
    const json& map = doc.at(section);
    if (!map.is_object()) throw ValidationError(std::string(section) + ": expected an object of id -> [path][time]");
    for (auto it = map.begin(); it != map.end(); ++it) {
        ProcessData proc;
        proc.id = it.key();
        const std::string where = std::string(section) + "." + proc.id;
        if (!it->is_array()) throw ValidationError(where + ": expected an array of per-path arrays");
        if (it->size() != n_paths)
            throw ValidationError(where + ": expected " + std::to_string(n_paths) + " paths, got " +
                                  std::to_string(it->size()));
        bool any_exact = false;
        for (std::size_t p = 0; p < it->size(); ++p) {
            const json& row = (*it)[p];
            const std::string row_where = where + "[" + std::to_string(p) + "]";
            if (!row.is_array()) throw ValidationError(row_where + ": expected an array of values");
            std::vector<double> values;
            std::vector<Rational> exact;
            for (std::size_t t = 0; t < row.size(); ++t) {
                Scalar s = read_scalar(row[t], row_where + "[" + std::to_string(t) + "]");
                any_exact = any_exact || s.exact;
                values.push_back(s.value);
                exact.push_back(std::move(s.rational));
            }
            proc.values.push_back(std::move(values));
            proc.exact.push_back(std::move(exact));
        }
        if (!any_exact) proc.exact.clear();
        out.push_back(std::move(proc));
    }
    return out;
}

json scalar_json(double v) { return v; }

}  // namespace

ScenarioTree parse_tree_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("tree document: ") + e.what());
    }
    if (!doc.is_object()) throw ValidationError("tree document: expected a JSON object");

    TreeData data;
    if (!doc.contains("dt")) throw ValidationError("dt: missing");
    data.dt = read_scalar(doc.at("dt"), "dt").value;

    if (!doc.contains("paths") || !doc.at("paths").is_array()) throw ValidationError("paths: missing or not an array");
    bool any_exact_prob = false;
    std::vector<Rational> exact_prob;
    for (std::size_t p = 0; p < doc.at("paths").size(); ++p) {
        const json& entry = doc.at("paths")[p];
        const std::string where = "paths[" + std::to_string(p) + "]";
        if (!entry.is_object() || !entry.contains("id") || !entry.contains("prob"))
            throw ValidationError(where + ": expected {id, prob}");
        const json& id = entry.at("id");
        if (id.is_string()) data.path_ids.push_back(id.get<std::string>());
        else if (id.is_number_integer()) data.path_ids.push_back(std::to_string(id.get<long long>()));
        else throw ValidationError(where + ".id: expected a string or integer");
        Scalar s = read_scalar(entry.at("prob"), where + ".prob");
        any_exact_prob = any_exact_prob || s.exact;
        data.prob.push_back(s.value);
        exact_prob.push_back(std::move(s.rational));
    }
    if (any_exact_prob) data.exact_prob = std::move(exact_prob);

    data.assets = read_processes(doc, "assets", data.prob.size());
    data.drivers = read_processes(doc, "drivers", data.prob.size());
    return ScenarioTree(std::move(data));
}

ScenarioTree load_tree_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open tree file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_tree_json(buffer.str());
}

std::string tree_to_json(const ScenarioTree& tree) {
    const TreeData data = tree.to_data();
    json doc;
    doc["dt"] = data.dt;
    doc["paths"] = json::array();
    for (std::size_t p = 0; p < data.prob.size(); ++p) {
        json entry{{"id", data.path_ids[p]}};
        if (!data.exact_prob.empty()) entry["prob"] = data.exact_prob[p].str();
        else entry["prob"] = data.prob[p];
        doc["paths"].push_back(entry);
    }
    auto write = [&](const std::vector<ProcessData>& procs, const char* section) {
        doc[section] = json::object();
        for (const auto& proc : procs) {
            json rows = json::array();
            for (std::size_t p = 0; p < proc.values.size(); ++p) {
                json row = json::array();
                for (std::size_t t = 0; t < proc.values[p].size(); ++t) {
                    if (!proc.exact.empty()) row.push_back(proc.exact[p][t].str());
                    else row.push_back(scalar_json(proc.values[p][t]));
                }
                rows.push_back(row);
            }
            doc[section][proc.id] = rows;
        }
    };
    write(data.assets, "assets");
    write(data.drivers, "drivers");
    return doc.dump(2);
}

FiltrationSpec parse_filtration_json(const ScenarioTree& tree, const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("filtration document: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("partitions") || !doc.at("partitions").is_array())
        throw ValidationError("filtration document: expected {\"partitions\": [...]}");
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t p = 0; p < tree.path_count(); ++p) index.emplace(tree.path_ids()[p], p);

    std::vector<Partition> parts;
    const json& list = doc.at("partitions");
    for (std::size_t t = 0; t < list.size(); ++t) {
        const std::string where = "partitions[" + std::to_string(t) + "]";
        if (!list[t].is_array()) throw ValidationError(where + ": expected an array of blocks");
        std::vector<std::vector<std::size_t>> blocks;
        for (std::size_t b = 0; b < list[t].size(); ++b) {
            const json& block = list[t][b];
            if (!block.is_array()) throw ValidationError(where + "[" + std::to_string(b) + "]: expected an array of path ids");
            std::vector<std::size_t> members;
            for (const json& id : block) {
                std::string key = id.is_string() ? id.get<std::string>()
                                  : id.is_number_integer() ? std::to_string(id.get<long long>())
                                                           : std::string();
                auto it = index.find(key);
                if (it == index.end())
                    throw ValidationError(where + "[" + std::to_string(b) + "]: unknown path id '" + key + "'");
                members.push_back(it->second);
            }
            blocks.push_back(std::move(members));
        }
        try {
            parts.push_back(Partition::from_blocks(tree.path_count(), blocks));
        } catch (const ValidationError& e) {
            throw ValidationError(where + ": " + e.what());
        }
    }
    FiltrationSpec spec(std::move(parts));
    require_compatible(tree, spec);
    return spec;
}

std::string filtration_to_json(const ScenarioTree& tree, const FiltrationSpec& filtration) {
    json doc;
    doc["partitions"] = json::array();
    for (const auto& part : filtration.partitions()) {
        json blocks = json::array();
        for (const auto& block : part.blocks()) {
            json ids = json::array();
            for (std::size_t p : block) ids.push_back(tree.path_ids()[p]);
            blocks.push_back(ids);
        }
        doc["partitions"].push_back(blocks);
    }
    return doc.dump();
}

FiltrationSpec resolve_filtration(const ScenarioTree& tree, const std::string& spec) {
    if (spec == "full") return full_filtration(tree);
    if (spec == "trivial") return trivial_filtration(tree);
    if (spec == "leak") return future_leak_filtration(tree);
    if (spec.rfind("natural:", 0) == 0) {
        ProcessSet ids;
        std::stringstream ss(spec.substr(8));
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (!item.empty()) ids.push_back(item);
        }
        return natural_filtration(tree, ids);
    }
    std::ifstream in(spec);
    if (!in) throw ValidationError("filtration '" + spec + "' is neither a known form nor a readable file");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_filtration_json(tree, buffer.str());
}

}  // namespace emmlab
