#include "emmlab/tree.hpp"

#include "emmlab/error.hpp"

#include <cmath>
#include <sstream>

namespace emmlab {

Rational parse_rational(std::string_view text) {
    auto fail = [&] { throw ValidationError("malformed rational '" + std::string(text) + "'"); };
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    if (text.empty()) fail();

    auto parse_integer = [&](std::string_view s) -> boost::multiprecision::cpp_int {
        if (s.empty()) fail();
        std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i == s.size()) fail();
        for (std::size_t k = i; k < s.size(); ++k)
            if (s[k] < '0' || s[k] > '9') fail();
        boost::multiprecision::cpp_int v(std::string(s.substr(i)));
        return s[0] == '-' ? boost::multiprecision::cpp_int(-v) : v;
    };

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        auto num = parse_integer(text.substr(0, slash));
        auto den = parse_integer(text.substr(slash + 1));
        if (den == 0) throw ValidationError("zero denominator in '" + std::string(text) + "'");
        return Rational(num, den);
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string digits(text.substr(0, dot));
        std::string frac(text.substr(dot + 1));
        if (frac.empty()) fail();
        for (char c : frac)
            if (c < '0' || c > '9') fail();
        bool negative = !digits.empty() && digits[0] == '-';
        if (digits.empty() || digits == "-" || digits == "+") digits += "0";
        auto whole = parse_integer(digits);
        boost::multiprecision::cpp_int scale = 1;
        for (std::size_t k = 0; k < frac.size(); ++k) scale *= 10;
        boost::multiprecision::cpp_int f(frac);
        boost::multiprecision::cpp_int magnitude = (whole < 0 ? -whole : whole) * scale + f;
        return Rational(negative ? boost::multiprecision::cpp_int(-magnitude) : magnitude, scale);
    }
    return Rational(parse_integer(text));
}

TimeGrid::TimeGrid(std::size_t n, double step) : n_steps(n), dt(step) {
    if (n_steps < 1) throw ValidationError("time grid: n_steps must be >= 1");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("time grid: dt must be positive");
}

ScenarioTree::ScenarioTree(TreeData data) {
    const std::size_t n_paths = data.prob.size();
    if (n_paths == 0) throw ValidationError("paths: at least one path is required");

    if (data.path_ids.empty()) {
        for (std::size_t p = 0; p < n_paths; ++p) data.path_ids.push_back("w" + std::to_string(p));
    }
    if (data.path_ids.size() != n_paths)
        throw ValidationError("paths: id count does not match probability count");
    std::unordered_map<std::string, std::size_t> seen_paths;
    for (std::size_t p = 0; p < n_paths; ++p) {
        if (!seen_paths.emplace(data.path_ids[p], p).second)
            throw ValidationError("paths[" + std::to_string(p) + "].id: duplicate id '" + data.path_ids[p] + "'");
    }

    for (std::size_t p = 0; p < n_paths; ++p) {
        if (!(data.prob[p] > 0.0) || !std::isfinite(data.prob[p]))
            throw ValidationError("paths[" + std::to_string(p) + "].prob: must be strictly positive");
    }
    if (!data.exact_prob.empty()) {
        if (data.exact_prob.size() != n_paths) throw ValidationError("paths: exact probability count mismatch");
        Rational total = 0;
        for (std::size_t p = 0; p < n_paths; ++p) {
            if (data.exact_prob[p] <= 0)
                throw ValidationError("paths[" + std::to_string(p) + "].prob: must be strictly positive");
            total += data.exact_prob[p];
        }
        if (total != 1) throw ValidationError("paths: probabilities must sum to exactly 1");
    } else {
        double total = 0.0;
        for (double q : data.prob) total += q;
        if (std::abs(total - 1.0) > kFloatTolerance)
            throw ValidationError("paths: probabilities sum to " + std::to_string(total) + ", expected 1");
    }

    if (data.assets.empty() && data.drivers.empty())
        throw ValidationError("assets: the tree carries no processes");

    std::size_t n_times = 0;
    bool have_shape = false;
    auto ingest = [&](ProcessData& proc, ProcessKind kind, const char* section) {
        const std::string where = std::string(section) + "." + proc.id;
        if (proc.id.empty()) throw ValidationError(std::string(section) + ": empty process id");
        if (index_.count(proc.id)) throw ValidationError(where + ": duplicate process id");
        if (proc.values.size() != n_paths)
            throw ValidationError(where + ": expected " + std::to_string(n_paths) + " paths, got " +
                                  std::to_string(proc.values.size()));
        for (std::size_t p = 0; p < n_paths; ++p) {
            const auto& row = proc.values[p];
            if (!have_shape) {
                if (row.size() < 2) throw ValidationError(where + "[" + std::to_string(p) + "]: need at least two times");
                n_times = row.size();
                have_shape = true;
            }
            if (row.size() != n_times)
                throw ValidationError(where + "[" + std::to_string(p) + "]: expected " + std::to_string(n_times) +
                                      " times, got " + std::to_string(row.size()));
            for (std::size_t t = 0; t < row.size(); ++t) {
                if (!std::isfinite(row[t]))
                    throw ValidationError(where + "[" + std::to_string(p) + "][" + std::to_string(t) + "]: not finite");
            }
        }
        std::vector<double> flat;
        flat.reserve(n_paths * n_times);
        for (const auto& row : proc.values) flat.insert(flat.end(), row.begin(), row.end());

        std::vector<Rational> exact_flat;
        if (!proc.exact.empty()) {
            if (proc.exact.size() != n_paths) throw ValidationError(where + ": exact table shape mismatch");
            for (const auto& row : proc.exact) {
                if (row.size() != n_times) throw ValidationError(where + ": exact table shape mismatch");
                exact_flat.insert(exact_flat.end(), row.begin(), row.end());
            }
            exact_input_ = true;
        }
        index_.emplace(proc.id, ids_.size());
        ids_.push_back(proc.id);
        kinds_.push_back(kind);
        values_.push_back(std::move(flat));
        exact_.push_back(std::move(exact_flat));
    };
    for (auto& a : data.assets) ingest(a, ProcessKind::Asset, "assets");
    for (auto& d : data.drivers) ingest(d, ProcessKind::Driver, "drivers");

    grid_ = TimeGrid(n_times - 1, data.dt);
    path_ids_ = std::move(data.path_ids);
    prob_ = std::move(data.prob);
    exact_prob_ = std::move(data.exact_prob);
    if (!exact_prob_.empty()) exact_input_ = true;
}

std::size_t ScenarioTree::process_index(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) throw ValidationError("unknown process id '" + std::string(id) + "'");
    return it->second;
}

bool ScenarioTree::has_process(std::string_view id) const { return index_.count(std::string(id)) != 0; }

std::vector<std::string> ScenarioTree::asset_ids() const {
    std::vector<std::string> out;
    for (std::size_t k = 0; k < ids_.size(); ++k)
        if (kinds_[k] == ProcessKind::Asset) out.push_back(ids_[k]);
    return out;
}

std::vector<std::string> ScenarioTree::driver_ids() const {
    std::vector<std::string> out;
    for (std::size_t k = 0; k < ids_.size(); ++k)
        if (kinds_[k] == ProcessKind::Driver) out.push_back(ids_[k]);
    return out;
}

Rational ScenarioTree::exact_value(std::size_t proc, std::size_t path, std::size_t t) const {
    const std::size_t at = path * (grid_.n_steps + 1) + t;
    if (!exact_[proc].empty()) return exact_[proc][at];
    return Rational(values_[proc][at]);
}

TreeData ScenarioTree::to_data() const {
    TreeData data;
    data.dt = grid_.dt;
    data.path_ids = path_ids_;
    data.prob = prob_;
    data.exact_prob = exact_prob_;
    const std::size_t n_times = grid_.n_steps + 1;
    for (std::size_t k = 0; k < ids_.size(); ++k) {
        ProcessData proc;
        proc.id = ids_[k];
        for (std::size_t p = 0; p < path_count(); ++p) {
            proc.values.emplace_back(values_[k].begin() + p * n_times, values_[k].begin() + (p + 1) * n_times);
            if (!exact_[k].empty())
                proc.exact.emplace_back(exact_[k].begin() + p * n_times, exact_[k].begin() + (p + 1) * n_times);
        }
        (kinds_[k] == ProcessKind::Asset ? data.assets : data.drivers).push_back(std::move(proc));
    }
    return data;
}

}  // namespace emmlab
