#pragma once

// Reference computations the engine is checked against. Everything here is
// exact and deliberately naive: node-local, small, no LP.

#include "emmlab/partition.hpp"
#include "emmlab/rational.hpp"
#include "emmlab/tree.hpp"

#include <optional>
#include <string>
#include <vector>

namespace testsupport {

using emmlab::FiltrationSpec;
using emmlab::Rational;
using emmlab::ScenarioTree;
using RMatrix = std::vector<std::vector<Rational>>;

// Reduced row echelon form in place; returns the pivot columns.
inline std::vector<std::size_t> rref(RMatrix& M) {
    std::vector<std::size_t> pivots;
    if (M.empty()) return pivots;
    const std::size_t cols = M.front().size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < M.size(); ++c) {
        std::size_t p = r;
        while (p < M.size() && M[p][c] == 0) ++p;
        if (p == M.size()) continue;
        std::swap(M[r], M[p]);
        const Rational inv = 1 / M[r][c];
        for (auto& v : M[r]) v *= inv;
        for (std::size_t i = 0; i < M.size(); ++i) {
            if (i == r || M[i][c] == 0) continue;
            const Rational f = M[i][c];
            for (std::size_t j = 0; j < cols; ++j) M[i][j] -= f * M[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline std::size_t rational_rank(RMatrix M) { return rref(M).size(); }

// Solves A x = b; nullopt when inconsistent. Free variables are set to zero.
inline std::optional<std::vector<Rational>> solve_linear(const RMatrix& A, const std::vector<Rational>& b,
                                                         std::size_t unknowns) {
    RMatrix aug;
    for (std::size_t i = 0; i < A.size(); ++i) {
        auto row = A[i];
        row.push_back(b[i]);
        aug.push_back(std::move(row));
    }
    const auto pivots = rref(aug);
    for (std::size_t i = 0; i < pivots.size(); ++i)
        if (pivots[i] == unknowns) return std::nullopt;
    std::vector<Rational> x(unknowns, Rational(0));
    for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug[i][unknowns];
    return x;
}

struct Node {
    std::size_t t;
    std::vector<std::size_t> children;  // one representative path per sub-block
};

// Every (t, block) of the filtration with its sub-blocks at t+1.
inline std::vector<Node> nodes(const ScenarioTree& tree, const FiltrationSpec& f) {
    std::vector<Node> out;
    for (std::size_t t = 0; t < tree.n_steps(); ++t) {
        for (const auto& block : f.at(t).blocks()) {
            Node node{t, {}};
            std::vector<int> seen;
            for (std::size_t w : block) {
                const int child = f.at(t + 1).block_of(w);
                bool dup = false;
                for (int s : seen) dup = dup || s == child;
                if (dup) continue;
                seen.push_back(child);
                node.children.push_back(w);
            }
            out.push_back(std::move(node));
        }
    }
    return out;
}

inline std::vector<std::vector<Rational>> child_increments(const ScenarioTree& tree, const Node& node,
                                                           const std::vector<std::string>& assets) {
    std::vector<std::vector<Rational>> points;
    for (std::size_t w : node.children) {
        std::vector<Rational> x;
        for (const auto& id : assets) {
            const auto p = tree.process_index(id);
            x.push_back(tree.exact_value(p, w, node.t + 1) - tree.exact_value(p, w, node.t));
        }
        points.push_back(std::move(x));
    }
    return points;
}

// Zero is a strictly positive convex combination of the points iff every
// point carries positive weight at some vertex of {l >= 0, sum l = 1,
// sum l x = 0}. Vertices have linearly independent support of size <= d+1,
// so the supports are enumerated directly.
inline bool zero_in_relative_interior(const std::vector<std::vector<Rational>>& points) {
    const std::size_t k = points.size();
    const std::size_t d = points.front().size();
    if (k == 1) {
        for (const auto& v : points[0])
            if (v != 0) return false;
        return true;
    }
    std::vector<bool> covered(k, false);
    const std::size_t max_support = std::min(k, d + 1);
    std::vector<std::size_t> subset;
    auto try_subset = [&]() {
        const std::size_t s = subset.size();
        RMatrix A(d + 1, std::vector<Rational>(s));
        std::vector<Rational> b(d + 1, Rational(0));
        for (std::size_t j = 0; j < s; ++j) {
            for (std::size_t r = 0; r < d; ++r) A[r][j] = points[subset[j]][r];
            A[d][j] = 1;
        }
        b[d] = 1;
        if (rational_rank(A) != s) return;
        const auto x = solve_linear(A, b, s);
        if (!x) return;
        for (const auto& v : *x)
            if (v < 0) return;
        for (std::size_t j = 0; j < s; ++j)
            if ((*x)[j] > 0) covered[subset[j]] = true;
    };
    auto recurse = [&](auto&& self, std::size_t start) -> void {
        if (!subset.empty()) try_subset();
        if (subset.size() == max_support) return;
        for (std::size_t i = start; i < k; ++i) {
            subset.push_back(i);
            self(self, i + 1);
            subset.pop_back();
        }
    };
    recurse(recurse, 0);
    for (bool c : covered)
        if (!c) return false;
    return true;
}

inline bool oracle_feasible(const ScenarioTree& tree, const FiltrationSpec& f, const std::vector<std::string>& assets) {
    for (const auto& node : nodes(tree, f))
        if (!zero_in_relative_interior(child_increments(tree, node, assets))) return false;
    return true;
}

// Free parameters of the measure set when feasible: per node, k - 1 minus the
// rank of the increment matrix; per terminal block, |B| - 1 free splits.
inline std::size_t oracle_affine_dimension(const ScenarioTree& tree, const FiltrationSpec& f,
                                           const std::vector<std::string>& assets) {
    std::size_t dim = 0;
    for (const auto& node : nodes(tree, f)) {
        const auto pts = child_increments(tree, node, assets);
        RMatrix M(assets.size(), std::vector<Rational>(pts.size()));
        for (std::size_t j = 0; j < pts.size(); ++j)
            for (std::size_t r = 0; r < assets.size(); ++r) M[r][j] = pts[j][r];
        // The ones row is independent of M whenever the node is feasible.
        dim += pts.size() - 1 - rational_rank(M);
    }
    for (const auto& block : f.at(tree.n_steps()).blocks()) dim += block.size() - 1;
    return dim;
}

// Every path-indicator claim is replicated by backward induction; each node
// solves a + theta . dS_j = V_j for its sub-blocks. A claim is only
// measurable when terminal blocks are single paths.
inline bool oracle_complete(const ScenarioTree& tree, const FiltrationSpec& f, const std::vector<std::string>& assets) {
    const std::size_t n = tree.path_count();
    const std::size_t T = tree.n_steps();
    if (f.at(T).block_count() != n) return false;
    const auto all_nodes = nodes(tree, f);
    for (std::size_t target = 0; target < n; ++target) {
        std::vector<Rational> value(n, Rational(0));
        value[target] = 1;
        for (std::size_t t = T; t-- > 0;) {
            std::vector<Rational> prev = value;
            for (const auto& node : all_nodes) {
                if (node.t != t) continue;
                const auto pts = child_increments(tree, node, assets);
                RMatrix A;
                std::vector<Rational> b;
                for (std::size_t j = 0; j < pts.size(); ++j) {
                    std::vector<Rational> row{Rational(1)};
                    row.insert(row.end(), pts[j].begin(), pts[j].end());
                    A.push_back(std::move(row));
                    b.push_back(value[node.children[j]]);
                }
                const auto x = solve_linear(A, b, assets.size() + 1);
                if (!x) return false;
                const int parent = f.at(t).block_of(node.children[0]);
                for (std::size_t w = 0; w < n; ++w)
                    if (f.at(t).block_of(w) == parent) prev[w] = (*x)[0];
            }
            value = std::move(prev);
        }
    }
    return true;
}

}  // namespace testsupport
