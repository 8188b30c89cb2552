#pragma once

#include "emmlab/rational.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <type_traits>
#include <vector>

namespace emmlab {

// Sign tests used by the dense solvers. Floats use a fixed absolute pivot
// tolerance; rationals are exact.
template <class T>
struct ScalarOps;

template <>
struct ScalarOps<double> {
    static constexpr double kPivot = 1e-11;
    static bool is_zero(double x) { return std::abs(x) <= kPivot; }
    static bool is_pos(double x) { return x > kPivot; }
    static bool is_neg(double x) { return x < -kPivot; }
    static double magnitude(double x) { return std::abs(x); }
};

template <>
struct ScalarOps<Rational> {
    static bool is_zero(const Rational& x) { return x == 0; }
    static bool is_pos(const Rational& x) { return x > 0; }
    static bool is_neg(const Rational& x) { return x < 0; }
    static Rational magnitude(const Rational& x) { return x < 0 ? Rational(-x) : x; }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

template <class T>
struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    T objective{};
    std::vector<T> x;
};

// Dense two-phase tableau simplex with Bland's rule:
//   maximize c'x  subject to  A x = b,  x >= 0.
// Sized for desk-scale problems (hundreds of variables).
template <class T>
LpResult<T> solve_lp(const std::vector<std::vector<T>>& A, const std::vector<T>& b, const std::vector<T>& c) {
    using Ops = ScalarOps<T>;
    const std::size_t m = A.size();
    const std::size_t n = c.size();
    const std::size_t width = n + m + 1;  // originals, artificials, rhs
    const std::size_t rhs = n + m;

    std::vector<std::vector<T>> tab(m + 1, std::vector<T>(width, T(0)));
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        const bool flip = Ops::is_neg(b[i]);
        for (std::size_t j = 0; j < n; ++j) tab[i][j] = flip ? T(-A[i][j]) : A[i][j];
        tab[i][n + i] = T(1);
        tab[i][rhs] = flip ? T(-b[i]) : b[i];
        basis[i] = n + i;
    }
    std::size_t rows = m;  // constraint rows; tab[rows] is the objective row

    auto pivot = [&](std::size_t r, std::size_t s) {
        const T inv = T(1) / tab[r][s];
        for (auto& v : tab[r]) v *= inv;
        tab[r][s] = T(1);
        for (std::size_t i = 0; i <= rows; ++i) {
            if (i == r || Ops::is_zero(tab[i][s])) continue;
            const T f = tab[i][s];
            for (std::size_t j = 0; j < width; ++j) {
                if (!Ops::is_zero(tab[r][j])) tab[i][j] -= f * tab[r][j];
            }
            tab[i][s] = T(0);
        }
        basis[r] = s;
    };

    // Simplex iterations on the objective row; returns false when unbounded.
    auto iterate = [&](const std::vector<bool>& allowed) -> bool {
        for (;;) {
            std::size_t enter = rhs;
            for (std::size_t j = 0; j < rhs; ++j) {
                if (allowed[j] && Ops::is_neg(tab[rows][j])) {
                    enter = j;
                    break;
                }
            }
            if (enter == rhs) return true;
            std::size_t leave = rows;
            T best{};
            for (std::size_t i = 0; i < rows; ++i) {
                if (!Ops::is_pos(tab[i][enter])) continue;
                T ratio = tab[i][rhs] / tab[i][enter];
                const bool better = leave == rows || ratio < best ||
                                    (!(best < ratio) && basis[i] < basis[leave]);
                if (better) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == rows) return false;
            pivot(leave, enter);
        }
    };

    // Phase 1: maximize -sum(artificials).
    for (std::size_t j = 0; j <= rhs; ++j) {
        if (j >= n && j < rhs) continue;
        T total(0);
        for (std::size_t i = 0; i < m; ++i) total += tab[i][j];
        tab[m][j] = -total;
    }
    std::vector<bool> allowed(rhs, true);
    iterate(allowed);

    LpResult<T> result;
    if (!Ops::is_zero(tab[m][rhs])) return result;

    // Drive zero-level artificials out of the basis; drop redundant rows.
    std::vector<bool> dead(m, false);
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < n) continue;
        std::size_t col = n;
        for (std::size_t j = 0; j < n; ++j) {
            if (!Ops::is_zero(tab[i][j])) {
                col = j;
                break;
            }
        }
        if (col == n) dead[i] = true;
        else pivot(i, col);
    }
    if (std::find(dead.begin(), dead.end(), true) != dead.end()) {
        std::vector<std::vector<T>> kept;
        std::vector<std::size_t> kept_basis;
        for (std::size_t i = 0; i < m; ++i) {
            if (dead[i]) continue;
            kept.push_back(std::move(tab[i]));
            kept_basis.push_back(basis[i]);
        }
        kept.push_back(std::move(tab[m]));
        tab = std::move(kept);
        basis = std::move(kept_basis);
        rows = basis.size();
    }

    // Phase 2 objective row.
    std::fill(tab[rows].begin(), tab[rows].end(), T(0));
    for (std::size_t j = 0; j < n; ++j) tab[rows][j] = -c[j];
    for (std::size_t i = 0; i < rows; ++i) {
        const T cb = c[basis[i]];
        if (Ops::is_zero(cb)) continue;
        for (std::size_t j = 0; j < width; ++j) tab[rows][j] += cb * tab[i][j];
    }
    for (std::size_t j = n; j < rhs; ++j) allowed[j] = false;
    if (!iterate(allowed)) {
        result.status = LpStatus::Unbounded;
        return result;
    }

    result.status = LpStatus::Optimal;
    result.x.assign(n, T(0));
    for (std::size_t i = 0; i < rows; ++i)
        if (basis[i] < n) result.x[basis[i]] = tab[i][rhs];
    result.objective = T(0);
    for (std::size_t j = 0; j < n; ++j) result.objective += c[j] * result.x[j];
    return result;
}

// Row rank by Gaussian elimination with partial pivoting. Float entries are
// treated as zero below 1e-9 times the largest magnitude in the matrix.
template <class T>
std::size_t matrix_rank(std::vector<std::vector<T>> M) {
    using Ops = ScalarOps<T>;
    if (M.empty()) return 0;
    const std::size_t rows = M.size();
    const std::size_t cols = M.front().size();
    T scale(0);
    for (const auto& row : M)
        for (const auto& v : row) scale = std::max(scale, Ops::magnitude(v));
    auto negligible = [&](const T& v) {
        if constexpr (std::is_same_v<T, double>) return std::abs(v) <= 1e-9 * std::max(1.0, scale);
        else return Ops::is_zero(v);
    };
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t best = rank;
        for (std::size_t i = rank + 1; i < rows; ++i)
            if (Ops::magnitude(M[i][col]) > Ops::magnitude(M[best][col])) best = i;
        if (negligible(M[best][col])) continue;
        std::swap(M[rank], M[best]);
        for (std::size_t i = rank + 1; i < rows; ++i) {
            if (Ops::is_zero(M[i][col])) continue;
            const T f = M[i][col] / M[rank][col];
            for (std::size_t j = col; j < cols; ++j) M[i][j] -= f * M[rank][j];
        }
        ++rank;
    }
    return rank;
}

}  // namespace emmlab
