#pragma once

#include "emmlab/asset_group.hpp"
#include "emmlab/partition.hpp"
#include "emmlab/tree.hpp"

#include <optional>
#include <string>
#include <vector>

namespace emmlab {

// Auto picks Exact when the tree was supplied with rational values.
enum class NumericMode { Auto, Float, Exact };

struct EmmOptions {
    NumericMode mode = NumericMode::Auto;
};

// A strictly positive path measure. On a finite path space "equivalent to P"
// is exactly full support.
class Measure {
public:
    // Throws ValidationError unless every weight is > 0 and they sum to 1
    // within kFloatTolerance.
    explicit Measure(std::vector<double> weights);
    static Measure uniform(std::size_t n);

    const std::vector<double>& weights() const { return weights_; }
    double operator[](std::size_t path) const { return weights_[path]; }
    std::size_t size() const { return weights_.size(); }

private:
    std::vector<double> weights_;
};

// sum over the block of q * (S_{t+1} - S_t), i.e. E_Q[S_{t+1} 1_B] - S_t Q(B).
struct MartingaleResidual {
    std::size_t t = 0;
    std::size_t block = 0;
    std::string asset;
    double value = 0.0;
};

struct ResidualReport {
    std::vector<MartingaleResidual> residuals;
    double max_residual = 0.0;

    bool passes(double tolerance = kFloatTolerance) const { return max_residual <= tolerance; }
};

struct EmmCertificate {
    Measure measure;
    ResidualReport report;
    double margin = 0.0;  // optimal smallest path weight from the LP
};

struct SolutionGeometry {
    bool feasible = false;
    // Dimension of the affine hull of the feasible measure set; set only when
    // feasible. Zero iff the martingale measure is unique.
    std::optional<std::size_t> affine_dimension;
};

// Martingale and local martingale coincide on finite trees with finitely many
// periods, so the engine imposes the one-step conditional-mean equalities.
//
// Decided by the LP  max e  s.t.  q_w >= e,  sum q = 1,  and for every t < T,
// block B of partitions[t], asset i:  sum_{w in B} q_w (S^i_{t+1} - S^i_t)(w) = 0.
// A certificate is returned iff the optimum exceeds the acceptance margin
// (1e-9 in float mode, 0 in exact mode).
//
// Throws PreconditionError if a group asset is not adapted to the filtration.
std::optional<EmmCertificate> emm_exists(const ScenarioTree& tree, const FiltrationSpec& filtration,
                                         const AssetGroup& group, const EmmOptions& options = {});

// Every (t, block, asset) residual for the given measure; independent of how
// the measure was produced.
ResidualReport check_martingale(const ScenarioTree& tree, const Measure& measure, const FiltrationSpec& filtration,
                                const AssetGroup& group);

SolutionGeometry solution_geometry(const ScenarioTree& tree, const FiltrationSpec& filtration,
                                   const AssetGroup& group, const EmmOptions& options = {});

// Finite-model replication condition: at every t < T and block B of
// partitions[t], the asset-increment matrix over the k sub-blocks of B in
// partitions[t+1] has rank k-1; and every terminal block is a single path,
// since claims are measured against the full path set.
// Throws PreconditionError when no martingale measure exists.
bool is_complete(const ScenarioTree& tree, const FiltrationSpec& filtration, const AssetGroup& group,
                 const EmmOptions& options = {});

// Throws PreconditionError naming the first group asset that is not adapted.
void require_adapted(const ScenarioTree& tree, const FiltrationSpec& filtration, const AssetGroup& group);

}  // namespace emmlab
