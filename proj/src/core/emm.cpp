#include "emmlab/emm.hpp"

#include "emmlab/error.hpp"
#include "emmlab/filtration.hpp"
#include "emmlab/simplex.hpp"

#include <cmath>
#include <numeric>

namespace emmlab {
namespace {

bool use_exact(const ScenarioTree& tree, const EmmOptions& options) {
    switch (options.mode) {
        case NumericMode::Float: return false;
        case NumericMode::Exact: return true;
        case NumericMode::Auto: break;
    }
    return tree.exact_input();
}

template <class T>
T increment(const ScenarioTree& tree, std::size_t proc, std::size_t path, std::size_t t) {
    if constexpr (std::is_same_v<T, double>) {
        return tree.value(proc, path, t + 1) - tree.value(proc, path, t);
    } else {
        return tree.exact_value(proc, path, t + 1) - tree.exact_value(proc, path, t);
    }
}

// One row per (t, block, asset) over the path columns; identically zero rows
// are dropped.
template <class T>
std::vector<std::vector<T>> martingale_rows(const ScenarioTree& tree, const FiltrationSpec& filtration,
                                            const AssetGroup& group) {
    std::vector<std::size_t> procs;
    for (const auto& id : group.ids()) procs.push_back(tree.process_index(id));
    const std::size_t n = tree.path_count();
    std::vector<std::vector<T>> rows;
    for (std::size_t t = 0; t < tree.n_steps(); ++t) {
        const auto blocks = filtration.at(t).blocks();
        for (const auto& block : blocks) {
            for (std::size_t proc : procs) {
                std::vector<T> row(n, T(0));
                bool nonzero = false;
                for (std::size_t path : block) {
                    row[path] = increment<T>(tree, proc, path, t);
                    nonzero = nonzero || !ScalarOps<T>::is_zero(row[path]);
                }
                if (nonzero) rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

template <class T>
std::optional<std::vector<double>> strict_measure(const ScenarioTree& tree, const FiltrationSpec& filtration,
                                                  const AssetGroup& group, double* margin) {
    const std::size_t n = tree.path_count();
    const auto rows = martingale_rows<T>(tree, filtration, group);

    // Substitute q = e + r with r >= 0; variables are (e, r_0..r_{n-1}).
    std::vector<std::vector<T>> A;
    std::vector<T> b;
    for (const auto& row : rows) {
        std::vector<T> lp_row(n + 1, T(0));
        T total(0);
        for (std::size_t w = 0; w < n; ++w) {
            lp_row[w + 1] = row[w];
            total += row[w];
        }
        lp_row[0] = total;
        A.push_back(std::move(lp_row));
        b.push_back(T(0));
    }
    std::vector<T> norm(n + 1, T(1));
    norm[0] = T(static_cast<long>(n));
    A.push_back(std::move(norm));
    b.push_back(T(1));

    std::vector<T> c(n + 1, T(0));
    c[0] = T(1);

    const LpResult<T> lp = solve_lp(A, b, c);
    if (lp.status != LpStatus::Optimal) return std::nullopt;
    const T& e = lp.x[0];
    bool accepted = false;
    if constexpr (std::is_same_v<T, double>) accepted = e > kFloatTolerance;
    else accepted = e > 0;
    *margin = static_cast<double>(e);
    if (!accepted) return std::nullopt;

    std::vector<double> q(n);
    for (std::size_t w = 0; w < n; ++w) q[w] = static_cast<double>(T(e + lp.x[w + 1]));
    const double total = std::accumulate(q.begin(), q.end(), 0.0);
    for (double& v : q) v /= total;
    return q;
}

template <class T>
std::size_t constraint_rank(const ScenarioTree& tree, const FiltrationSpec& filtration, const AssetGroup& group) {
    auto rows = martingale_rows<T>(tree, filtration, group);
    rows.emplace_back(tree.path_count(), T(1));
    return matrix_rank(std::move(rows));
}

template <class T>
bool replication_condition(const ScenarioTree& tree, const FiltrationSpec& filtration, const AssetGroup& group) {
    std::vector<std::size_t> procs;
    for (const auto& id : group.ids()) procs.push_back(tree.process_index(id));
    for (std::size_t t = 0; t < tree.n_steps(); ++t) {
        const Partition& now = filtration.at(t);
        const Partition& next = filtration.at(t + 1);
        // Representative path of every sub-block, grouped by parent block.
        std::vector<std::vector<std::size_t>> children(now.block_count());
        std::vector<bool> seen(next.block_count(), false);
        for (std::size_t w = 0; w < tree.path_count(); ++w) {
            const int child = next.block_of(w);
            if (seen[child]) continue;
            seen[child] = true;
            children[now.block_of(w)].push_back(w);
        }
        for (const auto& subs : children) {
            const std::size_t k = subs.size();
            if (k <= 1) continue;
            std::vector<std::vector<T>> M;
            for (std::size_t proc : procs) {
                std::vector<T> row;
                for (std::size_t w : subs) row.push_back(increment<T>(tree, proc, w, t));
                M.push_back(std::move(row));
            }
            if (matrix_rank(std::move(M)) != k - 1) return false;
        }
    }
    const Partition& terminal = filtration.at(tree.n_steps());
    return terminal.block_count() == tree.path_count();
}

}  // namespace

Measure::Measure(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw ValidationError("measure has no paths");
    double total = 0.0;
    for (std::size_t w = 0; w < weights_.size(); ++w) {
        if (!(weights_[w] > 0.0) || !std::isfinite(weights_[w]))
            throw ValidationError("measure weight " + std::to_string(w) + " is not strictly positive");
        total += weights_[w];
    }
    if (std::abs(total - 1.0) > kFloatTolerance) throw ValidationError("measure weights do not sum to 1");
}

Measure Measure::uniform(std::size_t n) { return Measure(std::vector<double>(n, 1.0 / static_cast<double>(n))); }

void require_adapted(const ScenarioTree& tree, const FiltrationSpec& filtration, const AssetGroup& group) {
    require_compatible(tree, filtration);
    for (const auto& id : group.ids()) {
        if (!is_adapted(tree, filtration, id))
            throw PreconditionError("asset '" + id + "' is not adapted to the filtration; reduce to its natural filtration first");
    }
}

std::optional<EmmCertificate> emm_exists(const ScenarioTree& tree, const FiltrationSpec& filtration,
                                         const AssetGroup& group, const EmmOptions& options) {
    require_adapted(tree, filtration, group);
    double margin = 0.0;
    auto q = use_exact(tree, options) ? strict_measure<Rational>(tree, filtration, group, &margin)
                                      : strict_measure<double>(tree, filtration, group, &margin);
    if (!q) return std::nullopt;
    Measure measure(std::move(*q));
    ResidualReport report = check_martingale(tree, measure, filtration, group);
    return EmmCertificate{std::move(measure), std::move(report), margin};
}

ResidualReport check_martingale(const ScenarioTree& tree, const Measure& measure, const FiltrationSpec& filtration,
                                const AssetGroup& group) {
    require_compatible(tree, filtration);
    if (measure.size() != tree.path_count()) throw ValidationError("measure size differs from path count");
    ResidualReport report;
    for (std::size_t t = 0; t < tree.n_steps(); ++t) {
        const auto blocks = filtration.at(t).blocks();
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            for (const auto& id : group.ids()) {
                const std::size_t proc = tree.process_index(id);
                double sum = 0.0;
                for (std::size_t w : blocks[b]) sum += measure[w] * (tree.value(proc, w, t + 1) - tree.value(proc, w, t));
                report.residuals.push_back({t, b, id, sum});
                report.max_residual = std::max(report.max_residual, std::abs(sum));
            }
        }
    }
    return report;
}

SolutionGeometry solution_geometry(const ScenarioTree& tree, const FiltrationSpec& filtration,
                                   const AssetGroup& group, const EmmOptions& options) {
    SolutionGeometry geometry;
    geometry.feasible = emm_exists(tree, filtration, group, options).has_value();
    if (!geometry.feasible) return geometry;
    const std::size_t rank = use_exact(tree, options) ? constraint_rank<Rational>(tree, filtration, group)
                                                      : constraint_rank<double>(tree, filtration, group);
    geometry.affine_dimension = tree.path_count() - rank;
    return geometry;
}

bool is_complete(const ScenarioTree& tree, const FiltrationSpec& filtration, const AssetGroup& group,
                 const EmmOptions& options) {
    if (!emm_exists(tree, filtration, group, options))
        throw PreconditionError("completeness is evaluated relative to a martingale measure, and none exists");
    return use_exact(tree, options) ? replication_condition<Rational>(tree, filtration, group)
                                    : replication_condition<double>(tree, filtration, group);
}

}  // namespace emmlab
