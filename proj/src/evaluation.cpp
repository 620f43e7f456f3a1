#include "linkpred/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>

#include "linkpred/errors.hpp"

namespace linkpred {

std::string to_string(Regime r)
{
    return r == Regime::all_links ? "all" : "new";
}

Regime parse_regime(const std::string& s)
{
    if (s == "all")
        return Regime::all_links;
    if (s == "new")
        return Regime::new_links_only;
    throw InvalidArgument("unknown regime '" + s + "' (expected all|new)");
}

CandidateSet CandidateSet::all_links(std::size_t n)
{
    CandidateSet c;
    c.n = n;
    c.regime = Regime::all_links;
    if (n > 1)
        c.pairs.reserve(n * (n - 1) / 2);
    for (NodeIndex i = 0; i < n; ++i)
        for (NodeIndex j = i + 1; j < n; ++j)
            c.pairs.emplace_back(i, j);
    return c;
}

CandidateSet CandidateSet::new_links_only(const SnapshotTensor& tensor)
{
    const auto seen = tensor.seen_pairs();
    CandidateSet c;
    c.n = tensor.node_count();
    c.regime = Regime::new_links_only;
    auto it = seen.begin();
    for (NodeIndex i = 0; i < c.n; ++i)
        for (NodeIndex j = i + 1; j < c.n; ++j) {
            auto p = std::make_pair(i, j);
            while (it != seen.end() && *it < p)
                ++it;
            if (it != seen.end() && *it == p)
                continue;
            c.pairs.push_back(p);
        }
    return c;
}

CandidateSet CandidateSet::for_regime(Regime regime, const SnapshotTensor& tensor)
{
    return regime == Regime::all_links ? all_links(tensor.node_count()) : new_links_only(tensor);
}

namespace {

void check_inputs(std::span<const double> scores, std::span<const std::uint8_t> labels)
{
    if (scores.size() != labels.size())
        throw InvalidArgument("scores and labels differ in length");
    for (double s : scores)
        if (!std::isfinite(s))
            throw InvalidArgument("non-finite score");
}

// Indices ordered by descending score; equal scores keep input order.
std::vector<std::size_t> rank_descending(std::span<const double> scores)
{
    std::vector<std::size_t> idx(scores.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    return idx;
}

}  // namespace

RocCurve roc_from_labels(std::span<const double> scores, std::span<const std::uint8_t> labels)
{
    check_inputs(scores, labels);
    RocCurve out;
    for (auto l : labels)
        (l ? out.positives : out.negatives) += 1;
    if (out.positives == 0)
        throw NoPositives();
    if (out.negatives == 0)
        throw NoNegatives();

    const auto order = rank_descending(scores);
    const double P = static_cast<double>(out.positives);
    const double N = static_cast<double>(out.negatives);
    out.points.push_back({0.0, 0.0});
    double tp = 0, fp = 0, area = 0;
    for (std::size_t k = 0; k < order.size();) {
        const double s = scores[order[k]];
        double tp_next = tp, fp_next = fp;
        for (; k < order.size() && scores[order[k]] == s; ++k)
            (labels[order[k]] ? tp_next : fp_next) += 1;
        area += (fp_next - fp) * (tp_next + tp) / 2.0;
        tp = tp_next;
        fp = fp_next;
        out.points.push_back({fp / N, tp / P});
    }
    out.auc = area / (P * N);
    return out;
}

TopL top_l_from_labels(std::span<const double> scores, std::span<const std::uint8_t> labels)
{
    check_inputs(scores, labels);
    TopL out;
    out.l = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), std::uint8_t{1}));
    if (out.l == 0)
        return out;
    const auto order = rank_descending(scores);
    for (std::size_t k = 0; k < out.l; ++k)
        out.hits += labels[order[k]] ? 1 : 0;
    out.ratio = static_cast<double>(out.hits) / static_cast<double>(out.l);
    out.tie_at_cutoff = out.l < order.size() && scores[order[out.l - 1]] == scores[order[out.l]];
    return out;
}

std::vector<CdfPoint> cdf_from_scores(std::span<const double> scores)
{
    std::vector<double> pos;
    for (double s : scores)
        if (s > 0)
            pos.push_back(s);
    std::sort(pos.begin(), pos.end());
    std::vector<CdfPoint> out;
    const double total = static_cast<double>(pos.size());
    for (std::size_t k = 0; k < pos.size(); ++k)
        if (k + 1 == pos.size() || pos[k + 1] != pos[k])
            out.push_back({pos[k], static_cast<double>(k + 1) / total});
    return out;
}

LabeledScores label_candidates(const Eigen::MatrixXd& scores, const AdjacencySlice& truth, const CandidateSet& cand)
{
    if (static_cast<std::size_t>(scores.rows()) != cand.n || static_cast<std::size_t>(scores.cols()) != cand.n)
        throw InvalidArgument("score matrix size differs from candidate set");
    LabeledScores out;
    out.scores.reserve(cand.pairs.size());
    out.labels.reserve(cand.pairs.size());
    for (auto [i, j] : cand.pairs) {
        out.scores.push_back(scores(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
        out.labels.push_back(truth.has(i, j) ? 1 : 0);
    }
    return out;
}

RocCurve roc(const Eigen::MatrixXd& scores, const AdjacencySlice& truth, const CandidateSet& cand)
{
    auto ls = label_candidates(scores, truth, cand);
    return roc_from_labels(ls.scores, ls.labels);
}

TopL top_l_ratio(const Eigen::MatrixXd& scores, const AdjacencySlice& truth, const CandidateSet& cand)
{
    auto ls = label_candidates(scores, truth, cand);
    return top_l_from_labels(ls.scores, ls.labels);
}

std::vector<CdfPoint> score_cdf(const Eigen::MatrixXd& scores, const CandidateSet& cand)
{
    std::vector<double> v;
    v.reserve(cand.pairs.size());
    for (auto [i, j] : cand.pairs)
        v.push_back(scores(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    return cdf_from_scores(v);
}

EvalReport evaluate(const Eigen::MatrixXd& scores, const AdjacencySlice& truth, const CandidateSet& cand,
                    const EvalParams& params)
{
    auto ls = label_candidates(scores, truth, cand);
    EvalReport r;
    r.regime = cand.regime;
    r.params = params;
    r.node_count = cand.n;
    r.candidates = cand.pairs.size();
    r.roc = roc_from_labels(ls.scores, ls.labels);
    r.top = top_l_from_labels(ls.scores, ls.labels);
    r.cdf = cdf_from_scores(ls.scores);
    return r;
}

std::vector<SweepRow> sweep(const SnapshotTensor& tensor, const AdjacencySlice& truth, const std::vector<double>& thetas,
                            const std::vector<double>& betas, const ScoringSpec& mode, Regime regime, Exec exec)
{
    const CandidateSet cand = CandidateSet::for_regime(regime, tensor);
    std::vector<SweepRow> rows(thetas.size() * betas.size());
    for (std::size_t a = 0; a < thetas.size(); ++a)
        for (std::size_t b = 0; b < betas.size(); ++b) {
            rows[a * betas.size() + b].theta = thetas[a];
            rows[a * betas.size() + b].beta = betas[b];
        }

    auto cell = [&](SweepRow& row) {
        try {
            CollapsedTensor x = collapse(tensor, CollapseParams{row.theta});
            ScoringSpec spec = mode;
            spec.beta = row.beta;
            ScoreMatrix s = score(x, spec, Exec::serial);
            auto ls = label_candidates(s.s, truth, cand);
            row.auc = roc_from_labels(ls.scores, ls.labels).auc;
            row.top_l_ratio = top_l_from_labels(ls.scores, ls.labels).ratio;
        } catch (const BetaTooLarge& e) {
            row.error = std::string("BetaTooLarge: ") + e.what();
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    };
    if (exec == Exec::serial) {
        for (auto& r : rows)
            cell(r);
    } else {
        const auto count = static_cast<long long>(rows.size());
#pragma omp parallel for schedule(dynamic, 1)
        for (long long k = 0; k < count; ++k)
            cell(rows[static_cast<std::size_t>(k)]);
    }
    return rows;
}

}  // namespace linkpred
