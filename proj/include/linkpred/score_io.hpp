#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "linkpred/evaluation.hpp"
#include "linkpred/katz.hpp"
#include "linkpred/trace_model.hpp"

namespace linkpred {

inline constexpr const char* kScoresHeader = "node_i,node_j,score";
inline constexpr const char* kReportSchema = "linkpred.report/1";
inline constexpr const char* kScoresSchema = "linkpred.scores/1";

/// `%.17g`-style text, independent of the global locale.
std::string format_real(double v);

/// One line per pair i<j (registry order), including zero scores.
void write_scores_csv(std::ostream& out, const Eigen::MatrixXd& scores, const NodeRegistry& nodes);

/// Inverse of write_scores_csv. Pairs not listed score 0; ids must be
/// registered in `nodes`.
Eigen::MatrixXd read_scores_csv(std::istream& in, const NodeRegistry& nodes);

/// JSON sidecar echoing how a score matrix was produced.
std::string scores_sidecar_json(const EvalParams& params, std::size_t node_count);

std::string report_json(const EvalReport& report);
void write_roc_csv(std::ostream& out, const RocCurve& roc);
void write_cdf_csv(std::ostream& out, const std::vector<CdfPoint>& cdf);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// One row of the method comparison table.
struct CompareRow {
    std::string method;
    double granule = 0;
    double auc = 0;
    std::optional<double> top_l_ratio;
};

void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows);

/// Per granule: first method minus second method, for AUC and top-L ratio.
void write_compare_gap_csv(std::ostream& out, const std::vector<CompareRow>& rows, const std::string& method_a,
                           const std::string& method_b);

}  // namespace linkpred
