#pragma once

#include "emmlab/sim.hpp"

#include <string>
#include <vector>

namespace emmlab {

enum class StructureKind { PriceOnly, Local, Pairwise, GlobalSmoothed, GlobalFutureLeak };

// What the conditional-mean regression may see. Driver indices are 0-based.
// GlobalSmoothed and GlobalFutureLeak use future driver values and are
// inadmissible by construction.
class InformationStructure {
public:
    static InformationStructure price_only();
    static InformationStructure local(int driver);
    // Throws ValidationError unless the drivers differ.
    static InformationStructure pairwise(int first, int second);
    // Throws ValidationError unless the window is odd and >= 3.
    static InformationStructure global_smoothed(int window = 21);
    static InformationStructure global_future_leak();

    StructureKind kind() const { return kind_; }
    int driver() const { return a_; }
    int second_driver() const { return b_; }
    int window() const { return window_; }
    // Earliest t with a full feature vector.
    std::size_t first_time() const;
    std::size_t dimension(std::size_t n_drivers) const;

private:
    StructureKind kind_ = StructureKind::PriceOnly;
    int a_ = -1;
    int b_ = -1;
    int window_ = 0;
};

// Column names used in CSV output.
const char* structure_name(StructureKind kind);
StructureKind parse_structure_name(const std::string& name);

// PriceOnly [1, R_t]; Local [1, R_t, Y_a]; Pairwise [1, R_t, Y_a, Y_b];
// GlobalSmoothed [1, R_t, centered means of every driver, window truncated
// at the horizon]; GlobalFutureLeak [1, R_t, Y(t), Y(t+1) - Y(t)].
// R_t is the return into t. Throws RangeError outside [first_time, n-1].
std::vector<double> features(const PathPanel& panel, const InformationStructure& info, int asset, std::size_t t);

struct FeatureSeries {
    std::size_t first = 0;                  // time of rows[0]
    std::vector<std::vector<double>> rows;  // times first .. n-1
};

FeatureSeries feature_series(const PathPanel& panel, const InformationStructure& info, int asset);

// m_hat[t] for t in [0, n): zero before warmup; afterwards the fit on pairs
// (x_u, R[u]) for first <= u < t evaluated at x_t. Ridge applies to every
// coefficient except the intercept.
// Throws ValidationError if warmup < dim + 10 or ridge < 0, EstimationError if
// the normal equations are singular.
std::vector<double> expanding_ols(const std::vector<double>& targets, const FeatureSeries& x, std::size_t warmup,
                                  double ridge);

struct Decomposition {
    std::vector<double> martingale;  // R[t] - m_hat[t], t in [0, n)
    std::vector<double> a_path;      // A_t for t in [0, n], summing m_hat over [warmup, t)
};

Decomposition decompose(const std::vector<double>& returns, const std::vector<double>& m_hat, std::size_t warmup);

struct Diagnostics {
    double mean_abs_m = 0.0;
    double rms_m = 0.0;
    double fraction_qv = 0.0;
    bool degenerate = false;  // post-warmup returns all zero
    std::vector<double> a_path;
    std::vector<double> m_path;  // m_hat for t >= warmup
};

// Throws ValidationError with fewer than 100 post-warmup samples.
Diagnostics diagnostics(const std::vector<double>& returns, const std::vector<double>& m_hat, std::size_t warmup);

struct SummaryRow {
    double mean_abs_m = 0.0;
    double rms_m = 0.0;
    double fraction_qv = 0.0;
};

// Throws ValidationError on an empty list.
SummaryRow cross_asset_average(const std::vector<Diagnostics>& rows);

struct DiagnoseOptions {
    std::size_t warmup = 250;
    double ridge = 1e-8;
    int window = 21;
};

struct StructureResult {
    StructureKind kind;
    std::vector<Diagnostics> per_asset;
    SummaryRow average;
};

// All five structures for every asset. Asset i uses driver i for Local and
// drivers (i, i+1 mod n) for Pairwise. Results come back in structure order.
// Throws ValidationError with fewer than two assets.
std::vector<StructureResult> run_structures(const PathPanel& panel, const DiagnoseOptions& options = {});

}  // namespace emmlab
