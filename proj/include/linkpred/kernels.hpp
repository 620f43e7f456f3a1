#pragma once

// Data-parallel inner loops. Every kernel takes an Exec policy: `serial` is
// the reference path kept for tests and benchmarks, `parallel` runs the
// same per-element arithmetic under OpenMP, so both produce bitwise
// identical results.

#include <cstddef>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace linkpred {

enum class Exec { serial, parallel };

using SparseMatrix = Eigen::SparseMatrix<double>;  // column-major

namespace kernels {

/// out = a * b. Columns of `out` are independent work items; zero entries
/// of `b` are skipped.
void matmul(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, Eigen::MatrixXd& out, Exec exec);

/// sum_{l=1..max_length} (beta*x)^l, dense.
Eigen::MatrixXd power_series(const Eigen::MatrixXd& x, double beta, std::size_t max_length, Exec exec);

/// Same series for a sparse x, one source column at a time with repeated
/// sparse matrix-vector products. The result is dense.
Eigen::MatrixXd power_series_sparse(const SparseMatrix& x, double beta, std::size_t max_length, Exec exec);

/// (s + s^T) / 2 in place.
void symmetrize(Eigen::MatrixXd& s);

/// Number of OpenMP threads a parallel kernel would use.
int thread_count();

}  // namespace kernels
}  // namespace linkpred
