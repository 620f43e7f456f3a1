#pragma once

// Random instance generators and brute-force oracles shared by the unit
// tests and the acceptance runner.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "linkpred/trace_model.hpp"

namespace linkpred::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo = 0.0, double hi = 1.0)
{
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

inline std::size_t index_below(Rng& rng, std::size_t n)
{
    return static_cast<std::size_t>(rng() % n);
}

/// Symmetric, non-negative, zero diagonal; each off-diagonal pair is
/// nonzero with probability `density`.
inline Eigen::MatrixXd random_weights(Rng& rng, std::size_t n, double density, double max_weight = 3.0)
{
    const auto m = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = i + 1; j < m; ++j)
            if (uniform(rng) < density)
                x(i, j) = x(j, i) = uniform(rng, 0.05, max_weight);
    return x;
}

/// Largest |eigenvalue| from a full symmetric eigendecomposition.
inline double exact_spectral_radius(const Eigen::MatrixXd& x)
{
    if (x.size() == 0)
        return 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

/// Graph made of disjoint small cliques/paths/stars, so every component has
/// diameter <= 2.
inline Eigen::MatrixXd random_small_components(Rng& rng, std::size_t n)
{
    const auto m = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(m, m);
    std::size_t i = 0;
    while (i < n) {
        const std::size_t size = std::min<std::size_t>(n - i, 1 + index_below(rng, 5));
        const bool star = uniform(rng) < 0.5;
        for (std::size_t a = 0; a < size; ++a)
            for (std::size_t b = a + 1; b < size; ++b) {
                if (star && a != 0)
                    continue;
                const auto p = static_cast<Eigen::Index>(i + a), q = static_cast<Eigen::Index>(i + b);
                x(p, q) = x(q, p) = uniform(rng, 0.1, 2.0);
            }
        i += size;
    }
    return x;
}

/// Independent formulation of the slice rule: [s,e] meets [a,b) iff the
/// point max(s,a) lies in both.
inline bool meets(Seconds s, Seconds e, Seconds a, Seconds b)
{
    const Seconds lo = std::max(s, a);
    return lo < b && lo <= e;
}

/// Z_t(i,j) by scanning every event.
inline bool slice_bit(const std::vector<ContactEvent>& events, Seconds a, Seconds b, NodeIndex i, NodeIndex j)
{
    for (const auto& ev : events)
        if (((ev.a == i && ev.b == j) || (ev.a == j && ev.b == i)) && meets(ev.start, ev.end, a, b))
            return true;
    return false;
}

/// X(i,j) = sum_{t=1..T} (1-theta)^(T-t) Z_t(i,j), entry by entry.
inline Eigen::MatrixXd collapse_oracle(const SnapshotTensor& z, double theta)
{
    const auto n = static_cast<Eigen::Index>(z.node_count());
    const std::size_t T = z.slice_count();
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j)
                continue;
            double sum = 0;
            for (std::size_t t = 1; t <= T; ++t)
                if (z.at(t, static_cast<NodeIndex>(i), static_cast<NodeIndex>(j)))
                    sum += std::pow(1.0 - theta, static_cast<double>(T - t));
            x(i, j) = sum;
        }
    return x;
}

/// P(s_pos > s_neg) + P(s_pos = s_neg)/2 over all positive/negative pairs.
inline double mann_whitney(const std::vector<double>& scores, const std::vector<std::uint8_t>& labels)
{
    double wins = 0, total = 0;
    for (std::size_t p = 0; p < scores.size(); ++p) {
        if (!labels[p])
            continue;
        for (std::size_t q = 0; q < scores.size(); ++q) {
            if (labels[q])
                continue;
            total += 1;
            if (scores[p] > scores[q])
                wins += 1;
            else if (scores[p] == scores[q])
                wins += 0.5;
        }
    }
    return wins / total;
}

/// Random labelled scores; `levels` > 0 quantizes scores to force ties.
inline void random_labelled(Rng& rng, std::size_t count, int levels, std::vector<double>& scores,
                            std::vector<std::uint8_t>& labels)
{
    scores.resize(count);
    labels.resize(count);
    for (std::size_t k = 0; k < count; ++k) {
        double s = uniform(rng);
        if (levels > 0)
            s = std::floor(s * levels) / levels;
        scores[k] = s;
        labels[k] = uniform(rng) < 0.35 ? 1 : 0;
    }
    labels[0] = 1;
    labels[count - 1] = 0;
}

/// Random contact events over n nodes inside [0, horizon].
inline std::vector<ContactEvent> random_events(Rng& rng, std::size_t n, std::size_t count, Seconds horizon)
{
    std::vector<ContactEvent> out;
    for (std::size_t k = 0; k < count; ++k) {
        NodeIndex a = index_below(rng, n), b = index_below(rng, n);
        if (a == b)
            b = (a + 1) % n;
        // Whole seconds keep boundary hits (s or e exactly on a slice edge) frequent.
        Seconds s = std::floor(uniform(rng, 0, horizon));
        Seconds e = std::min(horizon, s + std::floor(uniform(rng, 0, horizon / 4)));
        out.push_back(make_contact(a, b, s, e));
    }
    return out;
}

}  // namespace linkpred::testing
