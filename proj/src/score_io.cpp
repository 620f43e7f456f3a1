#include "linkpred/score_io.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>

#include <json.hpp>

#include "linkpred/errors.hpp"
#include "linkpred/ingestion.hpp"

namespace linkpred {

std::string format_real(double v)
{
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    if (ec != std::errc())
        throw Error("cannot format real value");
    return std::string(buf.data(), ptr);
}

void write_scores_csv(std::ostream& out, const Eigen::MatrixXd& scores, const NodeRegistry& nodes)
{
    const auto n = static_cast<Eigen::Index>(nodes.size());
    if (scores.rows() != n || scores.cols() != n)
        throw InvalidArgument("score matrix size differs from node registry");
    out << kScoresHeader << '\n';
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            out << nodes.id_of(static_cast<NodeIndex>(i)) << ',' << nodes.id_of(static_cast<NodeIndex>(j)) << ','
                << format_real(scores(i, j)) << '\n';
    if (!out)
        throw Error("write failure");
}

Eigen::MatrixXd read_scores_csv(std::istream& in, const NodeRegistry& nodes)
{
    const auto n = static_cast<Eigen::Index>(nodes.size());
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line.front() == '#')
            continue;
        if (!header) {
            if (line != kScoresHeader)
                throw ParseError(lineno, std::string("expected header '") + kScoresHeader + "'");
            header = true;
            continue;
        }
        auto c1 = line.find(',');
        auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
        if (c2 == std::string::npos || line.find(',', c2 + 1) != std::string::npos)
            throw ParseError(lineno, "wrong field count");
        std::string a = line.substr(0, c1);
        std::string b = line.substr(c1 + 1, c2 - c1 - 1);
        std::string_view v(line.data() + c2 + 1, line.size() - c2 - 1);
        double value = 0;
        auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), value, std::chars_format::general);
        if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(value))
            throw ParseError(lineno, "non-numeric score");
        if (!nodes.contains(a) || !nodes.contains(b))
            throw ParseError(lineno, "unknown node id");
        auto i = static_cast<Eigen::Index>(nodes.index_of(a));
        auto j = static_cast<Eigen::Index>(nodes.index_of(b));
        if (i == j)
            throw ParseError(lineno, "self pair");
        s(i, j) = value;
        s(j, i) = value;
    }
    if (!header)
        throw ParseError(lineno + 1, "missing scores header");
    return s;
}

namespace {

nlohmann::ordered_json params_json(const EvalParams& p)
{
    nlohmann::ordered_json j;
    j["method"] = p.method;
    j["theta"] = p.theta;
    j["beta"] = p.beta;
    j["khop"] = p.khop;
    j["slice_count"] = p.slice_count;
    j["slice_duration"] = p.slice_duration;
    j["origin"] = p.origin;
    return j;
}

}  // namespace

std::string scores_sidecar_json(const EvalParams& params, std::size_t node_count)
{
    nlohmann::ordered_json j;
    j["schema"] = kScoresSchema;
    j["node_count"] = node_count;
    j["params"] = params_json(params);
    return j.dump(2) + "\n";
}

std::string report_json(const EvalReport& r)
{
    nlohmann::ordered_json j;
    j["schema"] = kReportSchema;
    j["regime"] = to_string(r.regime);
    j["params"] = params_json(r.params);
    j["node_count"] = r.node_count;
    j["candidates"] = r.candidates;
    j["positives"] = r.roc.positives;
    j["negatives"] = r.roc.negatives;
    j["auc"] = r.roc.auc;
    j["l_links"] = r.top.l;
    j["top_l_hits"] = r.top.hits;
    j["top_l_ratio"] = r.top.ratio ? nlohmann::ordered_json(*r.top.ratio) : nlohmann::ordered_json(nullptr);
    j["top_l_tie"] = r.top.tie_at_cutoff;
    auto roc = nlohmann::ordered_json::array();
    for (const auto& p : r.roc.points)
        roc.push_back({p.fpr, p.tpr});
    j["roc"] = std::move(roc);
    auto cdf = nlohmann::ordered_json::array();
    for (const auto& p : r.cdf)
        cdf.push_back({p.score, p.fraction});
    j["cdf"] = std::move(cdf);
    return j.dump(2) + "\n";
}

void write_roc_csv(std::ostream& out, const RocCurve& roc)
{
    out << "false_positive_rate,true_positive_rate\n";
    for (const auto& p : roc.points)
        out << format_real(p.fpr) << ',' << format_real(p.tpr) << '\n';
}

void write_cdf_csv(std::ostream& out, const std::vector<CdfPoint>& cdf)
{
    out << "score,cumulative_fraction\n";
    for (const auto& p : cdf)
        out << format_real(p.score) << ',' << format_real(p.fraction) << '\n';
}

namespace {

std::string opt(const std::optional<double>& v)
{
    return v ? format_real(*v) : std::string();
}

// Errors go in the last column; keep them comma-free.
std::string sanitize(std::string s)
{
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r')
            c = ';';
    return s;
}

}  // namespace

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows)
{
    out << "theta,beta,auc,top_l_ratio,error\n";
    for (const auto& r : rows)
        out << format_real(r.theta) << ',' << format_real(r.beta) << ',' << opt(r.auc) << ',' << opt(r.top_l_ratio)
            << ',' << sanitize(r.error) << '\n';
}

void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows)
{
    out << "method,granule,auc,top_l_ratio\n";
    for (const auto& r : rows)
        out << r.method << ',' << format_seconds(r.granule) << ',' << format_real(r.auc) << ',' << opt(r.top_l_ratio)
            << '\n';
}

void write_compare_gap_csv(std::ostream& out, const std::vector<CompareRow>& rows, const std::string& method_a,
                           const std::string& method_b)
{
    std::map<double, std::pair<const CompareRow*, const CompareRow*>> by_granule;
    for (const auto& r : rows) {
        if (r.method == method_a)
            by_granule[r.granule].first = &r;
        else if (r.method == method_b)
            by_granule[r.granule].second = &r;
    }
    out << "granule,auc_gap,top_l_ratio_gap\n";
    for (const auto& [g, pr] : by_granule) {
        if (!pr.first || !pr.second)
            continue;
        std::optional<double> top_gap;
        if (pr.first->top_l_ratio && pr.second->top_l_ratio)
            top_gap = *pr.first->top_l_ratio - *pr.second->top_l_ratio;
        out << format_seconds(g) << ',' << format_real(pr.first->auc - pr.second->auc) << ',' << opt(top_gap) << '\n';
    }
}

}  // namespace linkpred
