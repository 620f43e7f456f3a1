#include "linkpred/katz.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <unordered_map>

#include <Eigen/LU>

#include "linkpred/errors.hpp"

namespace linkpred {

BetaTooLarge::BetaTooLarge(double beta, double rho, std::optional<std::size_t> node)
    : Error("beta " + std::to_string(beta) + " too large for spectral radius estimate " + std::to_string(rho) +
            " (need beta*rho < 1)" + (node ? " in local view of node " + std::to_string(*node) : std::string())),
      beta_(beta), rho_(rho), node_(node)
{
}

std::string Provenance::label() const
{
    switch (kind) {
    case Kind::centralized: return "centralized";
    case Kind::distributed: return "distributed-k" + std::to_string(khop);
    case Kind::truncated: return "truncated-" + std::to_string(max_length);
    case Kind::baseline_svd: return "baseline-svd";
    }
    return "unknown";
}

CollapsedTensor collapse(const SnapshotTensor& tensor, CollapseParams params)
{
    const double theta = params.theta;
    if (!(theta >= 0.0 && theta <= 1.0))
        throw InvalidArgument("theta must lie in [0, 1]");
    const std::size_t n = tensor.node_count();
    const std::size_t T = tensor.slice_count();

    // Accumulate in slice order so each entry is summed t = 1..T.
    std::unordered_map<std::uint64_t, double> acc;
    std::vector<std::uint64_t> order;
    for (std::size_t t = 1; t <= T; ++t) {
        const double w = std::pow(1.0 - theta, static_cast<double>(T - t));
        for (auto [i, j] : tensor.slice(t).edges()) {
            std::uint64_t key = static_cast<std::uint64_t>(i) * n + j;
            auto [it, inserted] = acc.try_emplace(key, 0.0);
            if (inserted)
                order.push_back(key);
            it->second += w;
        }
    }

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(2 * order.size());
    for (auto key : order) {
        double w = acc[key];
        if (w == 0.0)
            continue;
        auto i = static_cast<Eigen::Index>(key / n);
        auto j = static_cast<Eigen::Index>(key % n);
        triplets.emplace_back(i, j, w);
        triplets.emplace_back(j, i, w);
    }
    CollapsedTensor out;
    out.n = n;
    out.theta = theta;
    out.slice_count = T;
    out.x.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    out.x.setFromTriplets(triplets.begin(), triplets.end());
    return out;
}

CollapsedTensor collapsed_from_matrix(const Eigen::MatrixXd& x)
{
    if (x.rows() != x.cols())
        throw InvalidArgument("weight matrix must be square");
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        if (x(j, j) != 0.0)
            throw InvalidArgument("weight matrix must have a zero diagonal");
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            if (!(x(i, j) >= 0.0) || !std::isfinite(x(i, j)))
                throw InvalidArgument("weight matrix must be finite and non-negative");
            if (x(i, j) != x(j, i))
                throw InvalidArgument("weight matrix must be symmetric");
        }
    }
    CollapsedTensor out;
    out.n = static_cast<std::size_t>(x.rows());
    out.x = x.sparseView();
    return out;
}

namespace {

constexpr int kPowerIterations = 200;
constexpr double kPowerTolerance = 1e-10;

template <class Matrix>
double power_iteration(const Matrix& x)
{
    const Eigen::Index n = x.cols();
    if (n == 0)
        return 0.0;
    Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
    double lambda = 0.0;
    for (int it = 0; it < kPowerIterations; ++it) {
        Eigen::VectorXd w = x * v;
        double next = w.norm();
        if (next == 0.0)
            return 0.0;
        v = w / next;
        bool converged = it > 0 && std::fabs(next - lambda) < kPowerTolerance * next;
        lambda = next;
        if (converged)
            break;
    }
    return lambda;
}

// Support-graph adjacency lists (off-diagonal entries > 0), sorted.
std::vector<std::vector<NodeIndex>> support_lists(const SparseMatrix& x)
{
    std::vector<std::vector<NodeIndex>> adj(static_cast<std::size_t>(x.cols()));
    for (Eigen::Index c = 0; c < x.outerSize(); ++c)
        for (SparseMatrix::InnerIterator it(x, c); it; ++it)
            if (it.value() > 0.0 && it.row() != c)
                adj[static_cast<std::size_t>(c)].push_back(static_cast<NodeIndex>(it.row()));
    for (auto& a : adj)
        std::sort(a.begin(), a.end());
    return adj;
}

std::vector<std::vector<NodeIndex>> components(const std::vector<std::vector<NodeIndex>>& adj)
{
    std::vector<std::vector<NodeIndex>> comps;
    std::vector<bool> seen(adj.size(), false);
    for (NodeIndex s = 0; s < adj.size(); ++s) {
        if (seen[s])
            continue;
        std::vector<NodeIndex> comp{s};
        seen[s] = true;
        for (std::size_t head = 0; head < comp.size(); ++head)
            for (NodeIndex v : adj[comp[head]])
                if (!seen[v]) {
                    seen[v] = true;
                    comp.push_back(v);
                }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    return comps;
}

Eigen::MatrixXd induced(const SparseMatrix& x, const std::vector<NodeIndex>& nodes)
{
    const auto m = static_cast<Eigen::Index>(nodes.size());
    Eigen::MatrixXd sub = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index lc = 0; lc < m; ++lc) {
        for (SparseMatrix::InnerIterator it(x, static_cast<Eigen::Index>(nodes[static_cast<std::size_t>(lc)])); it; ++it) {
            auto pos = std::lower_bound(nodes.begin(), nodes.end(), static_cast<NodeIndex>(it.row()));
            if (pos != nodes.end() && *pos == static_cast<NodeIndex>(it.row()))
                sub(pos - nodes.begin(), lc) = it.value();
        }
    }
    return sub;
}

// (I - beta X)^-1 - I for one dense block, symmetrized and clamped.
Eigen::MatrixXd closed_block(const Eigen::MatrixXd& x, double beta, double rho)
{
    const Eigen::Index m = x.rows();
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(m, m) - beta * x;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    Eigen::MatrixXd s = lu.inverse();
    s.diagonal().array() -= 1.0;
    kernels::symmetrize(s);
    for (Eigen::Index j = 0; j < m; ++j)
        for (Eigen::Index i = 0; i < m; ++i) {
            double& v = s(i, j);
            if (!std::isfinite(v) || v < -kScoreClamp)
                throw BetaTooLarge(beta, rho);
            if (v < kScoreClamp)
                v = 0.0;
        }
    return s;
}

void check_beta(double beta)
{
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw InvalidArgument("beta must be a positive real");
}

}  // namespace

double spectral_radius(const Eigen::MatrixXd& x)
{
    return power_iteration(x);
}

double spectral_radius(const SparseMatrix& x)
{
    return power_iteration(x);
}

double validate_beta(const CollapsedTensor& x, double beta)
{
    check_beta(beta);
    double rho = spectral_radius(x.x);
    if (beta * rho >= 1.0 - kBetaMargin)
        throw BetaTooLarge(beta, rho);
    return rho;
}

ScoreMatrix katz_closed(const CollapsedTensor& x, const KatzParams& params)
{
    if (x.n > kDenseLimit)
        throw DenseLimitExceeded("closed-form Katz is limited to " + std::to_string(kDenseLimit) +
                                 " nodes; use truncated scoring");
    const double rho = validate_beta(x, params.beta);

    ScoreMatrix out;
    out.n = x.n;
    out.theta = x.theta;
    out.beta = params.beta;
    out.provenance.kind = Provenance::Kind::centralized;
    const auto n = static_cast<Eigen::Index>(x.n);
    out.s = Eigen::MatrixXd::Zero(n, n);

    // (I - beta X)^-1 is block diagonal over connected components.
    for (const auto& comp : components(support_lists(x.x))) {
        if (comp.size() < 2)
            continue;
        Eigen::MatrixXd block = closed_block(induced(x.x, comp), params.beta, rho);
        for (std::size_t lc = 0; lc < comp.size(); ++lc)
            for (std::size_t lr = 0; lr < comp.size(); ++lr)
                out.s(static_cast<Eigen::Index>(comp[lr]), static_cast<Eigen::Index>(comp[lc])) =
                    block(static_cast<Eigen::Index>(lr), static_cast<Eigen::Index>(lc));
    }
    return out;
}

ScoreMatrix katz_truncated(const CollapsedTensor& x, const KatzParams& params, Exec exec)
{
    check_beta(params.beta);
    if (params.max_length < 1)
        throw InvalidArgument("truncation length must be >= 1");

    ScoreMatrix out;
    out.n = x.n;
    out.theta = x.theta;
    out.beta = params.beta;
    out.provenance.kind = Provenance::Kind::truncated;
    out.provenance.max_length = params.max_length;
    if (x.n <= kDenseLimit)
        out.s = kernels::power_series(x.dense(), params.beta, params.max_length, exec);
    else
        out.s = kernels::power_series_sparse(x.x, params.beta, params.max_length, exec);
    kernels::symmetrize(out.s);
    return out;
}

KHopView khop_view(const CollapsedTensor& x, unsigned k)
{
    if (k != 1 && k != 2)
        throw InvalidArgument("k-hop view supports k = 1 or 2");
    const auto adj = support_lists(x.x);
    KHopView view;
    view.k = k;
    view.neighborhoods.resize(x.n);
    std::vector<unsigned> depth(x.n, 0);
    std::vector<bool> seen(x.n, false);
    for (NodeIndex s = 0; s < x.n; ++s) {
        std::vector<NodeIndex> reached{s};
        seen[s] = true;
        depth[s] = 0;
        for (std::size_t head = 0; head < reached.size(); ++head) {
            NodeIndex u = reached[head];
            if (depth[u] == k)
                continue;
            for (NodeIndex v : adj[u])
                if (!seen[v]) {
                    seen[v] = true;
                    depth[v] = depth[u] + 1;
                    reached.push_back(v);
                }
        }
        for (NodeIndex v : reached)
            seen[v] = false;
        std::sort(reached.begin(), reached.end());
        view.neighborhoods[s] = std::move(reached);
    }
    return view;
}

namespace {

struct LocalRow {
    std::vector<std::pair<NodeIndex, double>> entries;
};

LocalRow local_scores(const CollapsedTensor& x, const std::vector<NodeIndex>& nb, NodeIndex self, double beta)
{
    LocalRow row;
    if (nb.size() < 2)
        return row;
    if (nb.size() > kDenseLimit)
        throw DenseLimitExceeded("local view of node " + std::to_string(self) + " exceeds the dense limit");
    Eigen::MatrixXd sub = induced(x.x, nb);
    double rho = spectral_radius(sub);
    if (beta * rho >= 1.0 - kBetaMargin)
        throw BetaTooLarge(beta, rho, self);
    Eigen::MatrixXd s;
    try {
        s = closed_block(sub, beta, rho);
    } catch (const BetaTooLarge&) {
        throw BetaTooLarge(beta, rho, self);
    }
    auto li = static_cast<Eigen::Index>(std::lower_bound(nb.begin(), nb.end(), self) - nb.begin());
    // Includes the node's own closed-walk score S_i(i,i).
    row.entries.reserve(nb.size());
    for (std::size_t lj = 0; lj < nb.size(); ++lj)
        row.entries.emplace_back(nb[lj], s(li, static_cast<Eigen::Index>(lj)));
    return row;
}

}  // namespace

ScoreMatrix katz_distributed(const CollapsedTensor& x, const KatzParams& params, unsigned k, Exec exec)
{
    check_beta(params.beta);
    const KHopView view = khop_view(x, k);
    const std::size_t n = x.n;
    std::vector<LocalRow> rows(n);
    std::vector<std::exception_ptr> errors(n);

    auto work = [&](std::size_t i) {
        try {
            rows[i] = local_scores(x, view.neighborhoods[i], i, params.beta);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };
    if (exec == Exec::serial) {
        for (std::size_t i = 0; i < n; ++i)
            work(i);
    } else {
        const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1)
        for (long long i = 0; i < count; ++i)
            work(static_cast<std::size_t>(i));
    }
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);

    ScoreMatrix out;
    out.n = n;
    out.theta = x.theta;
    out.beta = params.beta;
    out.provenance.kind = Provenance::Kind::distributed;
    out.provenance.khop = k;
    out.s = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (auto [j, v] : rows[i].entries) {
            auto a = static_cast<Eigen::Index>(i);
            auto b = static_cast<Eigen::Index>(j);
            out.s(a, b) = std::max(out.s(a, b), v);
            out.s(b, a) = std::max(out.s(b, a), v);
        }
    return out;
}

ScoringSpec ScoringSpec::parse(const std::string& mode, double beta, unsigned khop, std::size_t max_length)
{
    ScoringSpec spec;
    spec.beta = beta;
    spec.khop = khop;
    spec.max_length = max_length;
    auto suffix_number = [&](std::size_t prefix) -> std::size_t {
        std::string tail = mode.substr(prefix);
        if (tail.empty() || tail.find_first_not_of("0123456789") != std::string::npos)
            throw InvalidArgument("bad scoring mode '" + mode + "'");
        return static_cast<std::size_t>(std::stoull(tail));
    };
    if (mode == "centralized") {
        spec.method = Method::centralized;
    } else if (mode == "distributed") {
        spec.method = Method::distributed;
    } else if (mode.rfind("distributed-k", 0) == 0) {
        spec.method = Method::distributed;
        spec.khop = static_cast<unsigned>(suffix_number(13));
    } else if (mode == "truncated") {
        spec.method = Method::truncated;
    } else if (mode.rfind("truncated-", 0) == 0) {
        spec.method = Method::truncated;
        spec.max_length = suffix_number(10);
    } else {
        throw InvalidArgument("unknown scoring mode '" + mode + "'");
    }
    if (spec.method == Method::distributed && spec.khop != 1 && spec.khop != 2)
        throw InvalidArgument("distributed scoring supports k = 1 or 2");
    if (spec.method == Method::truncated && spec.max_length < 1)
        throw InvalidArgument("truncation length must be >= 1");
    return spec;
}

std::string ScoringSpec::label() const
{
    switch (method) {
    case Method::centralized: return "centralized";
    case Method::distributed: return "distributed-k" + std::to_string(khop);
    case Method::truncated: return "truncated-" + std::to_string(max_length);
    }
    return "unknown";
}

ScoreMatrix score(const CollapsedTensor& x, const ScoringSpec& spec, Exec exec)
{
    KatzParams p;
    p.beta = spec.beta;
    switch (spec.method) {
    case ScoringSpec::Method::centralized:
        return katz_closed(x, p);
    case ScoringSpec::Method::distributed:
        return katz_distributed(x, p, spec.khop, exec);
    case ScoringSpec::Method::truncated:
        p.mode = KatzMode::truncated;
        p.max_length = spec.max_length;
        return katz_truncated(x, p, exec);
    }
    throw InvalidArgument("unknown scoring method");
}

}  // namespace linkpred
