#include "linkpred/trace_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "linkpred/errors.hpp"

namespace linkpred {

NodeIndex Registry::intern(std::string_view id)
{
    auto it = index_.find(std::string(id));
    if (it != index_.end())
        return it->second;
    NodeIndex idx = ids_.size();
    ids_.emplace_back(id);
    index_.emplace(ids_.back(), idx);
    return idx;
}

bool Registry::contains(std::string_view id) const
{
    return index_.count(std::string(id)) != 0;
}

NodeIndex Registry::index_of(std::string_view id) const
{
    auto it = index_.find(std::string(id));
    if (it == index_.end())
        throw InvalidArgument("unknown id '" + std::string(id) + "'");
    return it->second;
}

ContactEvent make_contact(NodeIndex a, NodeIndex b, Seconds start, Seconds end)
{
    if (a == b)
        throw InvalidArgument("self-contact");
    if (!std::isfinite(start) || !std::isfinite(end))
        throw InvalidArgument("non-finite contact time");
    if (start > end)
        throw InvalidArgument("contact start > end");
    if (a > b)
        std::swap(a, b);
    return {a, b, start, end};
}

namespace {

// Largest integer-valued double; window bounds past it lose second resolution.
constexpr double kMaxExactTime = 9007199254740992.0;

}  // namespace

void WindowConfig::validate() const
{
    if (!(slice_duration > 0) || !std::isfinite(slice_duration))
        throw InvalidArgument("slice duration must be positive");
    if (slice_count < 1)
        throw InvalidArgument("slice count must be >= 1");
    if (!std::isfinite(origin))
        throw InvalidArgument("window origin must be finite");
    double end = origin + (static_cast<double>(slice_count) + 1.0) * slice_duration;
    if (!std::isfinite(end) || std::fabs(end) > kMaxExactTime || std::fabs(origin) > kMaxExactTime)
        throw InvalidArgument("window (T+1)*D overflows the time domain");
}

AdjacencySlice::AdjacencySlice(std::vector<std::pair<NodeIndex, NodeIndex>> edges) : edges_(std::move(edges))
{
    for (auto& [i, j] : edges_) {
        if (i == j)
            throw InvalidArgument("adjacency slice with self-loop");
        if (i > j)
            std::swap(i, j);
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

bool AdjacencySlice::has(NodeIndex i, NodeIndex j) const
{
    if (i == j)
        return false;
    if (i > j)
        std::swap(i, j);
    return std::binary_search(edges_.begin(), edges_.end(), std::make_pair(i, j));
}

Eigen::MatrixXd AdjacencySlice::to_dense(std::size_t n) const
{
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (auto [i, j] : edges_) {
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
        m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = 1.0;
    }
    return m;
}

SnapshotTensor::SnapshotTensor(std::size_t n, WindowConfig config, std::vector<AdjacencySlice> slices)
    : n_(n), config_(config), slices_(std::move(slices))
{
    config_.validate();
    if (slices_.size() != config_.slice_count)
        throw InvalidArgument("slice vector length differs from slice count");
    for (const auto& s : slices_)
        for (auto [i, j] : s.edges())
            if (j >= n_)
                throw InvalidArgument("slice edge references node beyond n");
}

std::vector<std::pair<NodeIndex, NodeIndex>> SnapshotTensor::seen_pairs() const
{
    std::vector<std::pair<NodeIndex, NodeIndex>> all;
    for (const auto& s : slices_)
        all.insert(all.end(), s.edges().begin(), s.edges().end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return all;
}

NodeRegistry register_nodes(const std::vector<std::vector<std::string>>& records)
{
    NodeRegistry reg;
    for (const auto& rec : records)
        for (const auto& id : rec)
            reg.intern(id);
    return reg;
}

namespace {

// Slices are numbered 1..last; slice t is [origin+(t-1)D, origin+tD).
// Returns the inclusive range of slices met by the closed interval [s,e],
// or an empty range (first > last).
std::pair<std::size_t, std::size_t> slices_met(const WindowConfig& cfg, std::size_t last, Seconds s, Seconds e)
{
    const double D = cfg.slice_duration;
    auto begin_of = [&](long long t) { return cfg.origin + static_cast<double>(t - 1) * D; };
    auto end_of = [&](long long t) { return cfg.origin + static_cast<double>(t) * D; };

    // first: smallest t with end_of(t) > s
    long long first = static_cast<long long>(std::floor((s - cfg.origin) / D)) + 1;
    first = std::max<long long>(first, 1);
    while (first > 1 && end_of(first - 1) > s)
        --first;
    while (end_of(first) <= s)
        ++first;

    // last met: largest t with begin_of(t) <= e
    long long lastmet = static_cast<long long>(std::floor((e - cfg.origin) / D)) + 1;
    while (begin_of(lastmet) > e)
        --lastmet;
    while (begin_of(lastmet + 1) <= e)
        ++lastmet;
    lastmet = std::min<long long>(lastmet, static_cast<long long>(last));

    if (lastmet < 1 || first > lastmet)
        return {1, 0};
    return {static_cast<std::size_t>(first), static_cast<std::size_t>(lastmet)};
}

void check_events(const std::vector<ContactEvent>& events, std::size_t n)
{
    for (const auto& ev : events) {
        if (ev.a >= n || ev.b >= n)
            throw InvalidArgument("contact references node index beyond n");
        if (ev.a == ev.b)
            throw InvalidArgument("self-contact");
        if (ev.start > ev.end)
            throw InvalidArgument("contact start > end");
    }
}

// Edge lists for slices 1..last.
std::vector<std::vector<std::pair<NodeIndex, NodeIndex>>> bin_events(
    const std::vector<ContactEvent>& events, const WindowConfig& cfg, std::size_t last)
{
    std::vector<std::vector<std::pair<NodeIndex, NodeIndex>>> bins(last);
    for (const auto& ev : events) {
        auto [first, lastmet] = slices_met(cfg, last, ev.start, ev.end);
        for (std::size_t t = first; t <= lastmet; ++t)
            bins[t - 1].emplace_back(std::min(ev.a, ev.b), std::max(ev.a, ev.b));
    }
    return bins;
}

}  // namespace

SnapshotTensor build_tensor(const std::vector<ContactEvent>& events, const WindowConfig& cfg, std::size_t n)
{
    cfg.validate();
    check_events(events, n);
    auto bins = bin_events(events, cfg, cfg.slice_count);
    std::vector<AdjacencySlice> slices;
    slices.reserve(bins.size());
    for (auto& b : bins)
        slices.emplace_back(std::move(b));
    return SnapshotTensor(n, cfg, std::move(slices));
}

AdjacencySlice ground_truth_slice(const std::vector<ContactEvent>& events, const WindowConfig& cfg, std::size_t n)
{
    cfg.validate();
    check_events(events, n);
    auto bins = bin_events(events, cfg, cfg.slice_count + 1);
    return AdjacencySlice(std::move(bins.back()));
}

}  // namespace linkpred
