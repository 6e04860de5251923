#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "lowrr/mat.hpp"
#include "lowrr/svd.hpp"

namespace lowrr {

struct FitResult {
  Mat A_hat;            // p×T coefficient estimate
  Mat fitted;           // X * A_hat
  double rss = 0.0;     // ||Y - X*A_hat||_F^2
  double nuclear_norm = 0.0;
  int rank_hat = 0;
  int iterations = 0;
  bool converged = true;
  std::vector<double> objective_trace;  // filled when requested
};

struct SolverOptions {
  int max_iterations = 50000;
  double rel_tol = 1e-10;    // stop when the relative objective change drops below this
  bool acceleration = true;  // momentum with objective-increase restarts
  double step_scale = 1.0;   // multiplier in (0,1] on the safe step 1/(2*sigma1(X)^2)
  bool record_objective = false;
};

/// Rank-constrained least squares: the global minimizer of ||Y - XA||_F^2
/// over rank(A) <= r, via projection onto col(X), rank-r truncation, and
/// pseudo-inverse recovery.
FitResult fit_reduced_rank(const Mat& x, const Mat& y, int r);

/// One fit per r in 0..min(p, T); rss is nonincreasing along the path.
std::vector<FitResult> fit_reduced_rank_path(const Mat& x, const Mat& y);

enum class RankCriterion { known_variance, log_form };

struct RankSelection {
  int r_hat = 0;
  std::vector<double> criterion;  // one value per path entry (-inf left out on exact fits)
  bool exact_fit = false;         // some rss underflowed to zero in log form
};

/// Minimizes rss_r + pen(r)*sigma^2 (known_variance) or log(rss_r) + pen(r)
/// (log_form) over the path; ties go to the smallest r. In log form, an rss
/// of exactly zero short-circuits to the smallest such r with exact_fit set.
RankSelection select_rank(const std::vector<FitResult>& path,
                          RankCriterion criterion,
                          const std::function<double(int)>& pen,
                          std::optional<double> sigma);

/// ||Y - XA||_F^2 + lambda * sum_k sigma_k(A).
double nnp_objective(const Mat& x, const Mat& y, const Mat& a, double lambda);

/// Nuclear-norm-penalized least squares by proximal gradient from A = 0:
///   A <- svt(A - step * 2 X^T (XA - Y), step * lambda),
/// step = step_scale / (2 sigma_1(X)^2). Every iterate stays in the row
/// space of X, so the solution satisfies project_rowspace(A_hat) = A_hat.
/// lambda = 0 short-circuits to the exact minimum-norm least-squares fit.
/// Non-convergence is reported through the flag, not an error; the iterate
/// with the best objective seen is returned.
FitResult fit_nnp(const Mat& x, const Mat& y, double lambda,
                  const SolverOptions& opts = {});

/// Closed form for designs with orthonormal columns (X^T X = I_p, checked
/// to 1e-8): A_hat = svt(X^T Y, lambda/2). Exact global minimizer; serves
/// as the oracle the iterative solver is tested against.
FitResult fit_nnp_orthogonal(const Mat& x, const Mat& y, double lambda);

}  // namespace lowrr
