#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "linkpred/kernels.hpp"
#include "linkpred/trace_model.hpp"

namespace linkpred {

/// Largest N scored with dense linear algebra. Above it only the sparse
/// truncated series is available.
inline constexpr std::size_t kDenseLimit = 2048;

/// Margin on beta * rho(X) < 1.
inline constexpr double kBetaMargin = 1e-9;

/// Closed-form scores below this are reported as exactly 0.
inline constexpr double kScoreClamp = 1e-15;

struct CollapseParams {
    double theta = 0.2;
};

/// Recency-weighted sum of the slices: X(i,j) = sum_t (1-theta)^(T-t) Z_t(i,j).
/// Symmetric, non-negative, zero diagonal.
struct CollapsedTensor {
    std::size_t n = 0;
    SparseMatrix x;
    double theta = 0;
    std::size_t slice_count = 0;

    Eigen::MatrixXd dense() const { return Eigen::MatrixXd(x); }
    double at(NodeIndex i, NodeIndex j) const
    {
        return x.coeff(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
};

CollapsedTensor collapse(const SnapshotTensor& tensor, CollapseParams params);

/// Wraps an arbitrary weight matrix. Throws InvalidArgument unless it is
/// square, symmetric, non-negative and has a zero diagonal.
CollapsedTensor collapsed_from_matrix(const Eigen::MatrixXd& x);

enum class KatzMode { closed, truncated };

struct KatzParams {
    double beta = 0.001;
    KatzMode mode = KatzMode::closed;
    std::size_t max_length = 10;  // truncated mode only
};

struct Provenance {
    enum class Kind { centralized, distributed, truncated, baseline_svd };
    Kind kind = Kind::centralized;
    unsigned khop = 0;           // distributed only
    std::size_t max_length = 0;  // truncated only

    /// "centralized", "distributed-k2", "truncated-10", "baseline-svd".
    std::string label() const;
};

struct ScoreMatrix {
    std::size_t n = 0;
    Eigen::MatrixXd s;
    Provenance provenance;
    double theta = 0;
    double beta = 0;
};

/// Power-iteration estimate of the spectral radius of a symmetric
/// non-negative matrix (200 iterations or relative change < 1e-10).
double spectral_radius(const Eigen::MatrixXd& x);
double spectral_radius(const SparseMatrix& x);

/// Returns the rho estimate; throws BetaTooLarge if beta*rho >= 1 - 1e-9.
double validate_beta(const CollapsedTensor& x, double beta);

/// S = (I - beta X)^-1 - I, computed per connected component.
ScoreMatrix katz_closed(const CollapsedTensor& x, const KatzParams& params);

/// S = sum_{l=1..L} beta^l X^l. Dense up to kDenseLimit, sparse above.
ScoreMatrix katz_truncated(const CollapsedTensor& x, const KatzParams& params, Exec exec = Exec::parallel);

/// N_k(i) for every node: sorted node sets reachable within k hops on the
/// support graph of X (entries > 0), each containing i itself.
struct KHopView {
    unsigned k = 0;
    std::vector<std::vector<NodeIndex>> neighborhoods;
};

KHopView khop_view(const CollapsedTensor& x, unsigned k);

/// Each node i scores its own k-hop induced submatrix in closed form; the
/// global score is max(S_i(i,j), S_j(j,i)), with missing views counting 0.
ScoreMatrix katz_distributed(const CollapsedTensor& x, const KatzParams& params, unsigned k,
                             Exec exec = Exec::parallel);

/// The scoring variants the pipeline exposes.
struct ScoringSpec {
    enum class Method { centralized, distributed, truncated };
    Method method = Method::centralized;
    double beta = 0.001;
    unsigned khop = 2;
    std::size_t max_length = 10;

    /// Parses "centralized", "distributed" (uses khop), "distributed-k1",
    /// "distributed-k2", "truncated" (uses max_length) or "truncated-<L>".
    static ScoringSpec parse(const std::string& mode, double beta, unsigned khop, std::size_t max_length);
    std::string label() const;
};

ScoreMatrix score(const CollapsedTensor& x, const ScoringSpec& spec, Exec exec = Exec::parallel);

}  // namespace linkpred
