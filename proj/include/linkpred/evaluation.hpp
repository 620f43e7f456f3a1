#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "linkpred/katz.hpp"
#include "linkpred/trace_model.hpp"

namespace linkpred {

enum class Regime { all_links, new_links_only };

std::string to_string(Regime r);     // "all" | "new"
Regime parse_regime(const std::string& s);

/// Unordered pairs (i<j) eligible for prediction, in lexicographic order.
struct CandidateSet {
    std::size_t n = 0;
    Regime regime = Regime::all_links;
    std::vector<std::pair<NodeIndex, NodeIndex>> pairs;

    static CandidateSet all_links(std::size_t n);
    /// All pairs never linked in any slice of `tensor`.
    static CandidateSet new_links_only(const SnapshotTensor& tensor);
    static CandidateSet for_regime(Regime regime, const SnapshotTensor& tensor);
};

struct RocPoint {
    double fpr = 0;
    double tpr = 0;
};

struct RocCurve {
    std::vector<RocPoint> points;  // (0,0) ... (1,1)
    double auc = 0;
    std::size_t positives = 0;
    std::size_t negatives = 0;
};

/// Threshold sweep over distinct scores; tied scores enter together.
/// AUC by the trapezoidal rule. Throws NoPositives / NoNegatives.
RocCurve roc_from_labels(std::span<const double> scores, std::span<const std::uint8_t> labels);

struct TopL {
    std::size_t l = 0;
    std::size_t hits = 0;
    std::optional<double> ratio;  // empty when L = 0
    bool tie_at_cutoff = false;   // the L-th and (L+1)-th scores are equal
};

/// L = number of positives; takes the L best scores, ties broken by
/// position in the input (lexicographic pair order for candidate sets).
TopL top_l_from_labels(std::span<const double> scores, std::span<const std::uint8_t> labels);

struct CdfPoint {
    double score = 0;
    double fraction = 0;
};

/// Empirical CDF of the strictly positive scores, one point per distinct value.
std::vector<CdfPoint> cdf_from_scores(std::span<const double> scores);

/// Scores and truth labels of the candidate pairs, in candidate order.
struct LabeledScores {
    std::vector<double> scores;
    std::vector<std::uint8_t> labels;  // 1 = linked at T+1
};

LabeledScores label_candidates(const Eigen::MatrixXd& scores, const AdjacencySlice& truth, const CandidateSet& cand);

RocCurve roc(const Eigen::MatrixXd& scores, const AdjacencySlice& truth, const CandidateSet& cand);
TopL top_l_ratio(const Eigen::MatrixXd& scores, const AdjacencySlice& truth, const CandidateSet& cand);
std::vector<CdfPoint> score_cdf(const Eigen::MatrixXd& scores, const CandidateSet& cand);

/// Echo of the settings a report was produced with.
struct EvalParams {
    std::string method;  // provenance label
    double theta = 0;
    double beta = 0;
    unsigned khop = 0;
    std::size_t slice_count = 0;
    Seconds slice_duration = 0;
    Seconds origin = 0;
};

struct EvalReport {
    Regime regime = Regime::all_links;
    EvalParams params;
    std::size_t node_count = 0;
    std::size_t candidates = 0;
    RocCurve roc;
    TopL top;
    std::vector<CdfPoint> cdf;
};

EvalReport evaluate(const Eigen::MatrixXd& scores, const AdjacencySlice& truth, const CandidateSet& cand,
                    const EvalParams& params);

struct SweepRow {
    double theta = 0;
    double beta = 0;
    std::optional<double> auc;
    std::optional<double> top_l_ratio;
    std::string error;  // empty on success
};

/// One collapse + score + evaluation per (theta, beta) cell, theta-major.
/// Failing cells carry the error text; the others are unaffected.
std::vector<SweepRow> sweep(const SnapshotTensor& tensor, const AdjacencySlice& truth, const std::vector<double>& thetas,
                            const std::vector<double>& betas, const ScoringSpec& mode, Regime regime,
                            Exec exec = Exec::parallel);

}  // namespace linkpred
