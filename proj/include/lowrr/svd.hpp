#pragma once

#include <vector>

#include "lowrr/kernels.hpp"
#include "lowrr/mat.hpp"

namespace lowrr {

/// Thin SVD restricted to the retained positive singular values:
/// M ≈ U * diag(s) * V^T with U (m×k) and V (n×k) having orthonormal columns
/// and s nonincreasing and strictly positive.
struct ThinSvd {
  Mat U;
  std::vector<double> s;
  Mat V;

  int rank() const { return static_cast<int>(s.size()); }
};

/// Relative threshold used to drop trailing singular values when none is
/// given explicitly: 1e-10 * max(rows, cols).
double default_rank_tol(const Mat& m);

/// One-sided Jacobi factorization. Keeps singular values s_k > rel_tol * s_1
/// (all positive ones when rel_tol = 0); a zero matrix yields an empty
/// factorization. Throws on empty dimensions or non-finite entries.
ThinSvd thin_svd(const Mat& m, double rel_tol,
                 kernels::Exec exec = kernels::Exec::parallel);
ThinSvd thin_svd(const Mat& m);

int numerical_rank(const ThinSvd& svd);

/// U * diag(s) * V^T using the top r triplets (all of them when r < 0).
Mat reconstruct(const ThinSvd& svd, int r = -1);

/// Best rank-<=r approximation in Frobenius norm. r = 0 gives the zero
/// matrix; r >= rank(m) returns m unchanged.
Mat truncate_rank(const Mat& m, int r);

/// Singular value soft-thresholding: U * diag(max(s - tau, 0)) * V^T.
Mat svt(const Mat& m, double tau);

/// Orthogonal projection onto the column space of the factored matrix,
/// Pi = U U^T, applied to m.
Mat project_colspace(const ThinSvd& svd_x, const Mat& m);

/// Orthogonal projection onto the row space of the factored matrix,
/// Pi = V V^T, applied to a.
Mat project_rowspace(const ThinSvd& svd_x, const Mat& a);

/// Minimum-norm pseudo-inverse application V * diag(1/s) * U^T * m.
Mat pinv_apply(const ThinSvd& svd_x, const Mat& m);

/// Largest singular value; 0 for the zero matrix.
double op_norm(const Mat& m);

namespace detail {
/// Round-robin tournament over column indices: every unordered pair appears
/// exactly once across the rounds and the pairs within a round are disjoint,
/// so a round can be processed in parallel without changing the result.
std::vector<std::vector<std::pair<int, int>>> round_robin_schedule(int n);
}  // namespace detail

}  // namespace lowrr
