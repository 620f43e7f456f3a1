#include <cstring>

#include <omp.h>

#include <gtest/gtest.h>

#include "linkpred/baseline_svd.hpp"
#include "linkpred/evaluation.hpp"
#include "linkpred/katz.hpp"
#include "linkpred/kernels.hpp"
#include "test_support.hpp"

using namespace linkpred;
namespace lt = linkpred::testing;

namespace {

// Oversubscribe on purpose so the parallel paths really split work even on
// a single-core machine.
class ParallelTest : public ::testing::Test {
protected:
    void SetUp() override
    {
        saved_ = omp_get_max_threads();
        omp_set_num_threads(4);
    }
    void TearDown() override { omp_set_num_threads(saved_); }

private:
    int saved_ = 1;
};

bool bitwise_equal(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b)
{
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

}  // namespace

TEST_F(ParallelTest, ThreadCountReflectsOpenMP)
{
    EXPECT_EQ(kernels::thread_count(), 4);
}

TEST_F(ParallelTest, MatmulSerialEqualsParallel)
{
    lt::Rng rng(1);
    for (int rep = 0; rep < 5; ++rep) {
        auto a = lt::random_weights(rng, 70, 0.3);
        auto b = lt::random_weights(rng, 70, 0.1);
        Eigen::MatrixXd s, p;
        kernels::matmul(a, b, s, Exec::serial);
        kernels::matmul(a, b, p, Exec::parallel);
        EXPECT_TRUE(bitwise_equal(s, p));
        EXPECT_LT((s - a * b).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST_F(ParallelTest, MatmulRectangular)
{
    lt::Rng rng(2);
    Eigen::MatrixXd a = Eigen::MatrixXd::NullaryExpr(5, 7, [&] { return lt::uniform(rng); });
    Eigen::MatrixXd b = Eigen::MatrixXd::NullaryExpr(7, 3, [&] { return lt::uniform(rng); });
    Eigen::MatrixXd out;
    kernels::matmul(a, b, out, Exec::parallel);
    EXPECT_LT((out - a * b).cwiseAbs().maxCoeff(), 1e-14);
}

TEST_F(ParallelTest, PowerSeriesDenseAndSparseAgree)
{
    lt::Rng rng(3);
    auto x = lt::random_weights(rng, 60, 0.1);
    const double beta = 0.3 / lt::exact_spectral_radius(x);
    auto ds = kernels::power_series(x, beta, 8, Exec::serial);
    auto dp = kernels::power_series(x, beta, 8, Exec::parallel);
    SparseMatrix sx = x.sparseView();
    auto ss = kernels::power_series_sparse(sx, beta, 8, Exec::serial);
    auto sp = kernels::power_series_sparse(sx, beta, 8, Exec::parallel);
    EXPECT_TRUE(bitwise_equal(ds, dp));
    EXPECT_TRUE(bitwise_equal(ss, sp));
    EXPECT_LT((ds - ss).cwiseAbs().maxCoeff(), 1e-14);

    // Naive sum of powers.
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(60, 60), sum = Eigen::MatrixXd::Zero(60, 60);
    for (int l = 1; l <= 8; ++l) {
        term = term * (beta * x);
        sum += term;
    }
    EXPECT_LT((ds - sum).cwiseAbs().maxCoeff(), 1e-14);
}

TEST_F(ParallelTest, TruncatedKatzSerialEqualsParallel)
{
    lt::Rng rng(4);
    auto x = collapsed_from_matrix(lt::random_weights(rng, 80, 0.08));
    KatzParams kp;
    kp.beta = 0.01;
    kp.mode = KatzMode::truncated;
    kp.max_length = 12;
    EXPECT_TRUE(bitwise_equal(katz_truncated(x, kp, Exec::serial).s, katz_truncated(x, kp, Exec::parallel).s));
}

TEST_F(ParallelTest, DistributedKatzSerialEqualsParallel)
{
    lt::Rng rng(5);
    auto x = collapsed_from_matrix(lt::random_weights(rng, 90, 0.03));
    KatzParams kp;
    kp.beta = 0.05;
    for (unsigned k : {1u, 2u})
        EXPECT_TRUE(bitwise_equal(katz_distributed(x, kp, k, Exec::serial).s,
                                  katz_distributed(x, kp, k, Exec::parallel).s));
}

TEST_F(ParallelTest, SweepSerialEqualsParallel)
{
    lt::Rng rng(6);
    auto ev = lt::random_events(rng, 25, 300, 3000);
    WindowConfig w{0, 300, 8};
    auto z = build_tensor(ev, w, 25);
    auto truth = ground_truth_slice(ev, w, 25);
    ScoringSpec spec;
    auto a = sweep(z, truth, {0, 0.5, 1}, {1e-3, 1e-2, 10}, spec, Regime::all_links, Exec::serial);
    auto b = sweep(z, truth, {0, 0.5, 1}, {1e-3, 1e-2, 10}, spec, Regime::all_links, Exec::parallel);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        EXPECT_EQ(a[k].auc, b[k].auc);
        EXPECT_EQ(a[k].top_l_ratio, b[k].top_l_ratio);
        EXPECT_EQ(a[k].error, b[k].error);
    }
}

TEST_F(ParallelTest, BaselineSerialEqualsParallel)
{
    lt::Rng rng(7);
    std::vector<BehaviorProfile> profiles;
    for (int i = 0; i < 30; ++i) {
        AssociationMatrix a{static_cast<NodeIndex>(i), Eigen::MatrixXd::Zero(6, 4)};
        for (int g = 0; g < 6; ++g)
            a.a(g, static_cast<Eigen::Index>(lt::index_below(rng, 4))) = lt::uniform(rng);
        profiles.push_back(profile(a));
    }
    EXPECT_TRUE(bitwise_equal(baseline_scores(profiles, Exec::serial).s, baseline_scores(profiles, Exec::parallel).s));
}
