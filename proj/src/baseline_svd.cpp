#include "linkpred/baseline_svd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SVD>

#include "linkpred/errors.hpp"

namespace linkpred {

namespace {

struct Interval {
    Seconds start;
    Seconds end;
};

std::vector<Interval> merge(std::vector<Interval> v)
{
    std::sort(v.begin(), v.end(), [](const Interval& a, const Interval& b) { return a.start < b.start; });
    std::vector<Interval> out;
    for (const auto& iv : v) {
        if (!out.empty() && iv.start <= out.back().end)
            out.back().end = std::max(out.back().end, iv.end);
        else
            out.push_back(iv);
    }
    return out;
}

}  // namespace

std::vector<AssociationMatrix> build_association(const std::vector<LocationVisit>& visits, std::size_t node_count,
                                                 std::size_t location_count, Seconds granule, Seconds horizon,
                                                 Seconds origin)
{
    if (!(granule > 0) || !(horizon > 0))
        throw InvalidArgument("granule and horizon must be positive");
    const double ratio = horizon / granule;
    const auto granules = static_cast<std::size_t>(std::llround(ratio));
    if (granules < 1 || std::fabs(ratio - static_cast<double>(granules)) > 1e-9 * ratio)
        throw InvalidArgument("granule must divide horizon");

    // per (node, location): merged intervals
    std::vector<std::vector<std::vector<Interval>>> by_node(node_count, std::vector<std::vector<Interval>>(location_count));
    for (const auto& v : visits) {
        if (v.node >= node_count || v.location >= location_count)
            throw InvalidArgument("visit references unregistered node or location");
        if (v.start > v.end)
            throw InvalidArgument("visit start > end");
        by_node[v.node][v.location].push_back({v.start, v.end});
    }

    std::vector<AssociationMatrix> out(node_count);
    for (NodeIndex node = 0; node < node_count; ++node) {
        auto& am = out[node];
        am.node = node;
        am.a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(granules), static_cast<Eigen::Index>(location_count));

        std::vector<std::pair<Interval, LocationIndex>> all;
        for (LocationIndex p = 0; p < location_count; ++p) {
            auto merged = merge(std::move(by_node[node][p]));
            for (const auto& iv : merged) {
                all.push_back({iv, p});
                // overlap with each granule [origin + gD, origin + (g+1)D)
                double lo = std::max(iv.start, origin);
                double hi = std::min(iv.end, origin + horizon);
                if (!(hi > lo))
                    continue;
                auto g0 = static_cast<std::size_t>(std::floor((lo - origin) / granule));
                for (std::size_t g = g0; g < granules; ++g) {
                    double gb = origin + static_cast<double>(g) * granule;
                    double ge = gb + granule;
                    if (gb >= hi)
                        break;
                    double ov = std::min(hi, ge) - std::max(lo, gb);
                    if (ov > 0)
                        am.a(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(p)) += ov / granule;
                }
            }
        }
        // Same-location intervals are disjoint after merging, so a sweep over
        // the furthest end seen so far finds any cross-location overlap.
        std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.first.start < y.first.start; });
        double reach = -std::numeric_limits<double>::infinity();
        LocationIndex reach_loc = 0;
        for (const auto& [iv, loc] : all) {
            if (iv.start < reach && loc != reach_loc)
                throw InvalidArgument("node " + std::to_string(node) + " visits two locations at once");
            if (iv.end > reach) {
                reach = iv.end;
                reach_loc = loc;
            }
        }
        am.a = am.a.cwiseMin(1.0);
    }
    return out;
}

BehaviorProfile profile(const AssociationMatrix& a, std::size_t r)
{
    if (r < 1)
        throw InvalidArgument("profile rank must be >= 1");
    BehaviorProfile p;
    p.node = a.node;
    const Eigen::Index cols = a.a.cols();
    p.vectors.resize(cols, 0);
    p.weights.resize(0);
    if (a.a.size() == 0 || a.a.isZero(0.0))
        return p;

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a.a, Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double tol = static_cast<double>(std::max(a.a.rows(), a.a.cols())) *
                       std::numeric_limits<double>::epsilon() * sv(0);
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) > tol)
        ++rank;
    const Eigen::Index keep = std::min<Eigen::Index>(rank, static_cast<Eigen::Index>(r));
    p.vectors = svd.matrixV().leftCols(keep);
    p.weights = sv.head(keep) / sv.head(keep).sum();
    return p;
}

double similarity(const BehaviorProfile& p, const BehaviorProfile& q)
{
    if (p.dimension() != q.dimension())
        throw InvalidArgument("behavior profiles have different location dimensions");
    if (p.rank() == 0 || q.rank() == 0)
        return 0.0;
    const Eigen::MatrixXd dots = (p.vectors.transpose() * q.vectors).cwiseAbs();
    double s = p.weights.transpose() * dots * q.weights;
    return std::clamp(s, 0.0, 1.0);
}

ScoreMatrix baseline_scores(const std::vector<BehaviorProfile>& profiles, Exec exec)
{
    const auto n = static_cast<Eigen::Index>(profiles.size());
    ScoreMatrix out;
    out.n = profiles.size();
    out.provenance.kind = Provenance::Kind::baseline_svd;
    out.s = Eigen::MatrixXd::Zero(n, n);
    auto row = [&](Eigen::Index i) {
        for (Eigen::Index j = i + 1; j < n; ++j)
            out.s(i, j) = similarity(profiles[static_cast<std::size_t>(i)], profiles[static_cast<std::size_t>(j)]);
    };
    if (exec == Exec::serial) {
        for (Eigen::Index i = 0; i < n; ++i)
            row(i);
    } else {
#pragma omp parallel for schedule(dynamic, 4)
        for (Eigen::Index i = 0; i < n; ++i)
            row(i);
    }
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            out.s(j, i) = out.s(i, j);
    return out;
}

}  // namespace linkpred
