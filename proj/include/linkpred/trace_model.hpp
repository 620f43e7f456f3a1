#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace linkpred {

using Seconds = double;
using NodeIndex = std::size_t;
using LocationIndex = std::size_t;

/// Bijective map between external string ids and dense indices 0..N-1,
/// assigned in first-appearance order.
class Registry {
public:
    /// Returns the index of `id`, registering it if unseen.
    NodeIndex intern(std::string_view id);

    bool contains(std::string_view id) const;
    NodeIndex index_of(std::string_view id) const;  // throws InvalidArgument if absent
    const std::string& id_of(NodeIndex index) const { return ids_.at(index); }
    std::size_t size() const noexcept { return ids_.size(); }
    const std::vector<std::string>& ids() const noexcept { return ids_; }

private:
    std::vector<std::string> ids_;
    std::unordered_map<std::string, NodeIndex> index_;
};

using NodeRegistry = Registry;
using LocationRegistry = Registry;

/// Undirected contact over the closed interval [start, end]; stored with a < b.
struct ContactEvent {
    NodeIndex a = 0;
    NodeIndex b = 0;
    Seconds start = 0;
    Seconds end = 0;

    friend bool operator==(const ContactEvent&, const ContactEvent&) = default;
};

/// Validates and canonicalizes (swaps so that a < b). Throws InvalidArgument
/// on self-contacts, start > end or non-finite times.
ContactEvent make_contact(NodeIndex a, NodeIndex b, Seconds start, Seconds end);

struct LocationVisit {
    NodeIndex node = 0;
    LocationIndex location = 0;
    Seconds start = 0;
    Seconds end = 0;

    friend bool operator==(const LocationVisit&, const LocationVisit&) = default;
};

struct WindowConfig {
    Seconds origin = 0;
    Seconds slice_duration = 300;
    std::size_t slice_count = 1;

    /// Throws InvalidArgument when D <= 0, T < 1, or the window end
    /// origin + (T+1)*D is not exactly representable.
    void validate() const;
    Seconds slice_begin(std::size_t t) const { return origin + static_cast<double>(t - 1) * slice_duration; }
    Seconds slice_end(std::size_t t) const { return origin + static_cast<double>(t) * slice_duration; }
};

/// One binary symmetric adjacency slice, stored as sorted unique (i<j) pairs.
class AdjacencySlice {
public:
    AdjacencySlice() = default;
    explicit AdjacencySlice(std::vector<std::pair<NodeIndex, NodeIndex>> edges);

    bool has(NodeIndex i, NodeIndex j) const;
    const std::vector<std::pair<NodeIndex, NodeIndex>>& edges() const noexcept { return edges_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    /// Full N x N 0/1 matrix (symmetric, zero diagonal).
    Eigen::MatrixXd to_dense(std::size_t n) const;

    friend bool operator==(const AdjacencySlice&, const AdjacencySlice&) = default;

private:
    std::vector<std::pair<NodeIndex, NodeIndex>> edges_;
};

/// Slices Z_1..Z_T of an N-node network. Slice t (1-based) covers
/// [origin + (t-1)D, origin + tD).
class SnapshotTensor {
public:
    SnapshotTensor(std::size_t n, WindowConfig config, std::vector<AdjacencySlice> slices);

    std::size_t node_count() const noexcept { return n_; }
    std::size_t slice_count() const noexcept { return slices_.size(); }
    const WindowConfig& config() const noexcept { return config_; }

    /// 1-based, matching the Z_1..Z_T numbering.
    const AdjacencySlice& slice(std::size_t t) const { return slices_.at(t - 1); }
    bool at(std::size_t t, NodeIndex i, NodeIndex j) const { return slice(t).has(i, j); }

    /// Pairs (i<j) linked in at least one slice.
    std::vector<std::pair<NodeIndex, NodeIndex>> seen_pairs() const;

private:
    std::size_t n_;
    WindowConfig config_;
    std::vector<AdjacencySlice> slices_;
};

/// Registers every id in first-appearance order; each record contributes
/// its ids left to right.
NodeRegistry register_nodes(const std::vector<std::vector<std::string>>& records);

/// Z_t(i,j) = 1 iff some event's closed interval [s,e] meets
/// [origin+(t-1)D, origin+tD). Events outside [origin, origin+TD) are ignored.
SnapshotTensor build_tensor(const std::vector<ContactEvent>& events, const WindowConfig& cfg, std::size_t n);

/// Adjacency of the interval [origin+TD, origin+(T+1)D) under the same rule.
AdjacencySlice ground_truth_slice(const std::vector<ContactEvent>& events, const WindowConfig& cfg, std::size_t n);

}  // namespace linkpred
