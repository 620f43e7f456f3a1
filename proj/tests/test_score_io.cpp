#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "linkpred/errors.hpp"
#include "linkpred/score_io.hpp"
#include "test_support.hpp"

using namespace linkpred;
namespace lt = linkpred::testing;

namespace {

Registry abc()
{
    return register_nodes({{"a", "b", "c"}});
}

}  // namespace

TEST(FormatReal, SeventeenDigitsRoundTrip)
{
    lt::Rng rng(101);
    for (int k = 0; k < 1000; ++k) {
        double v = std::ldexp(lt::uniform(rng), -static_cast<int>(lt::index_below(rng, 60)));
        EXPECT_EQ(std::stod(format_real(v)), v);
    }
    EXPECT_EQ(format_real(0.0), "0");
    EXPECT_EQ(format_real(0.5), "0.5");
    EXPECT_EQ(format_real(0.1), "0.10000000000000001");
}

TEST(ScoresCsv, AllPairsAndRoundTrip)
{
    Eigen::MatrixXd s(3, 3);
    s << 0, 1e-7, 0, 1e-7, 0, 0.25, 0, 0.25, 0;
    std::ostringstream out;
    write_scores_csv(out, s, abc());
    EXPECT_EQ(out.str(), "node_i,node_j,score\na,b,9.9999999999999995e-08\na,c,0\nb,c,0.25\n");
    std::istringstream in(out.str());
    EXPECT_EQ(read_scores_csv(in, abc()), s);
}

TEST(ScoresCsv, ReadErrors)
{
    auto read = [](const std::string& text) {
        std::istringstream in(text);
        return read_scores_csv(in, abc());
    };
    EXPECT_THROW(read("a,b,1\n"), ParseError);
    EXPECT_THROW(read("node_i,node_j,score\na,b\n"), ParseError);
    EXPECT_THROW(read("node_i,node_j,score\na,z,1\n"), ParseError);
    EXPECT_THROW(read("node_i,node_j,score\na,a,1\n"), ParseError);
    EXPECT_THROW(read("node_i,node_j,score\na,b,x\n"), ParseError);
    EXPECT_EQ(read("node_i,node_j,score\nc,a,2\n")(0, 2), 2.0);
}

TEST(ScoresCsv, SizeMismatch)
{
    std::ostringstream out;
    EXPECT_THROW(write_scores_csv(out, Eigen::MatrixXd::Zero(2, 2), abc()), InvalidArgument);
}

TEST(ReportJson, SchemaAndNullRatio)
{
    EvalReport r;
    r.params.method = "centralized";
    r.params.theta = 0.2;
    r.params.beta = 0.001;
    r.params.slice_count = 48;
    r.params.slice_duration = 300;
    r.node_count = 3;
    r.candidates = 3;
    r.roc.points = {{0, 0}, {1, 1}};
    r.roc.auc = 0.5;
    r.roc.positives = 1;
    r.roc.negatives = 2;
    r.cdf = {{0.5, 1.0}};
    auto j = nlohmann::json::parse(report_json(r));
    EXPECT_EQ(j["schema"], kReportSchema);
    EXPECT_EQ(j["regime"], "all");
    EXPECT_EQ(j["params"]["slice_count"], 48);
    EXPECT_TRUE(j["top_l_ratio"].is_null());
    EXPECT_EQ(j["roc"].size(), 2u);
    EXPECT_EQ(j["cdf"][0][1], 1.0);
    r.top.l = 1;
    r.top.hits = 1;
    r.top.ratio = 1.0;
    EXPECT_EQ(nlohmann::json::parse(report_json(r))["top_l_ratio"], 1.0);
}

TEST(Sidecar, EchoesParams)
{
    EvalParams p;
    p.method = "distributed-k2";
    p.khop = 2;
    p.theta = 0.2;
    p.beta = 0.001;
    p.slice_count = 48;
    p.slice_duration = 300;
    auto j = nlohmann::json::parse(scores_sidecar_json(p, 7));
    EXPECT_EQ(j["schema"], kScoresSchema);
    EXPECT_EQ(j["node_count"], 7);
    for (const char* key : {"method", "theta", "beta", "khop", "slice_count", "slice_duration", "origin"})
        EXPECT_TRUE(j["params"].contains(key)) << key;
}

TEST(PlotCsv, RocAndCdf)
{
    RocCurve r;
    r.points = {{0, 0}, {0.5, 1}, {1, 1}};
    std::ostringstream a, b;
    write_roc_csv(a, r);
    write_cdf_csv(b, {{1, 0.25}, {2, 1}});
    EXPECT_EQ(a.str(), "false_positive_rate,true_positive_rate\n0,0\n0.5,1\n1,1\n");
    EXPECT_EQ(b.str(), "score,cumulative_fraction\n1,0.25\n2,1\n");
}

TEST(SweepCsv, ErrorsStayInOneColumn)
{
    SweepRow ok{0.5, 0.001, 0.75, 0.5, ""};
    SweepRow bad{0.5, 10, std::nullopt, std::nullopt, "BetaTooLarge: a, b\nc"};
    std::ostringstream out;
    write_sweep_csv(out, {ok, bad});
    EXPECT_EQ(out.str(), "theta,beta,auc,top_l_ratio,error\n0.5,0.001,0.75,0.5,\n0.5,10,,,BetaTooLarge: a; b;c\n");
}

TEST(CompareCsv, RowsAndGaps)
{
    std::vector<CompareRow> rows{{"katz", 300, 0.9, 0.5}, {"svd", 300, 0.6, 0.25}, {"katz", 600, 0.8, std::nullopt},
                                 {"svd", 600, 0.7, 0.5}};
    std::ostringstream a, b;
    write_compare_csv(a, rows);
    write_compare_gap_csv(b, rows, "katz", "svd");
    EXPECT_EQ(a.str(), "method,granule,auc,top_l_ratio\nkatz,300,0.90000000000000002,0.5\nsvd,300,0.59999999999999998,0.25\n"
                       "katz,600,0.80000000000000004,\nsvd,600,0.69999999999999996,0.5\n");
    EXPECT_EQ(b.str(), "granule,auc_gap,top_l_ratio_gap\n300,0.30000000000000004,0.25\n600,0.10000000000000009,\n");
}
