#include "linkpred/kernels.hpp"

#include <omp.h>

#include "linkpred/errors.hpp"

namespace linkpred::kernels {

namespace {

void matmul_column(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, Eigen::MatrixXd& out, Eigen::Index j)
{
    auto col = out.col(j);
    col.setZero();
    for (Eigen::Index k = 0; k < a.cols(); ++k) {
        const double bkj = b(k, j);
        if (bkj == 0.0)
            continue;
        col.noalias() += bkj * a.col(k);
    }
}

}  // namespace

void matmul(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, Eigen::MatrixXd& out, Exec exec)
{
    if (a.cols() != b.rows())
        throw InvalidArgument("matmul: inner dimensions differ");
    out.resize(a.rows(), b.cols());
    const Eigen::Index cols = b.cols();
    if (exec == Exec::serial) {
        for (Eigen::Index j = 0; j < cols; ++j)
            matmul_column(a, b, out, j);
        return;
    }
#pragma omp parallel for schedule(dynamic, 8)
    for (Eigen::Index j = 0; j < cols; ++j)
        matmul_column(a, b, out, j);
}

Eigen::MatrixXd power_series(const Eigen::MatrixXd& x, double beta, std::size_t max_length, Exec exec)
{
    const Eigen::MatrixXd step = beta * x;
    Eigen::MatrixXd term = step;
    Eigen::MatrixXd sum = step;
    Eigen::MatrixXd next;
    for (std::size_t l = 2; l <= max_length; ++l) {
        matmul(term, step, next, exec);
        term.swap(next);
        sum += term;
    }
    return sum;
}

namespace {

void series_column(const SparseMatrix& step, Eigen::Index src, std::size_t max_length, Eigen::MatrixXd& out)
{
    Eigen::VectorXd term = step.col(src);
    Eigen::VectorXd acc = term;
    for (std::size_t l = 2; l <= max_length; ++l) {
        term = step * term;
        acc += term;
    }
    out.col(src) = acc;
}

}  // namespace

Eigen::MatrixXd power_series_sparse(const SparseMatrix& x, double beta, std::size_t max_length, Exec exec)
{
    const SparseMatrix step = beta * x;
    const Eigen::Index n = x.cols();
    Eigen::MatrixXd out(n, n);
    if (exec == Exec::serial) {
        for (Eigen::Index c = 0; c < n; ++c)
            series_column(step, c, max_length, out);
        return out;
    }
#pragma omp parallel for schedule(dynamic, 16)
    for (Eigen::Index c = 0; c < n; ++c)
        series_column(step, c, max_length, out);
    return out;
}

void symmetrize(Eigen::MatrixXd& s)
{
    const Eigen::Index n = s.rows();
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = j + 1; i < n; ++i) {
            double v = 0.5 * (s(i, j) + s(j, i));
            s(i, j) = v;
            s(j, i) = v;
        }
}

int thread_count()
{
    return omp_get_max_threads();
}

}  // namespace linkpred::kernels
