#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "linkpred/katz.hpp"
#include "linkpred/trace_model.hpp"

namespace linkpred {

/// Behavior of one node: A(g,p) is the fraction of time granule g spent at
/// location p.
struct AssociationMatrix {
    NodeIndex node = 0;
    Eigen::MatrixXd a;  // G x P
};

/// One matrix per node over [origin, origin + horizon). Overlapping visits
/// of a node to the same location are merged first. Throws InvalidArgument
/// if granule does not divide horizon, or if a node is at two locations
/// at once for a positive length of time.
std::vector<AssociationMatrix> build_association(const std::vector<LocationVisit>& visits, std::size_t node_count,
                                                 std::size_t location_count, Seconds granule, Seconds horizon,
                                                 Seconds origin = 0);

/// Top-r right singular vectors of A and their singular values normalized
/// to sum to 1. Empty (zero columns) for A = 0.
struct BehaviorProfile {
    NodeIndex node = 0;
    Eigen::MatrixXd vectors;  // P x r, orthonormal columns
    Eigen::VectorXd weights;  // r

    std::size_t rank() const noexcept { return static_cast<std::size_t>(weights.size()); }
    std::size_t dimension() const noexcept { return static_cast<std::size_t>(vectors.rows()); }
};

inline constexpr std::size_t kDefaultProfileRank = 3;

BehaviorProfile profile(const AssociationMatrix& a, std::size_t r = kDefaultProfileRank);

/// sum_{a,b} w_a w'_b |v_a . v'_b|, in [0, 1]; 0 if either profile is empty.
double similarity(const BehaviorProfile& p, const BehaviorProfile& q);

/// Pairwise similarity of all profiles, packaged like a Katz score matrix.
ScoreMatrix baseline_scores(const std::vector<BehaviorProfile>& profiles, Exec exec = Exec::parallel);

}  // namespace linkpred
