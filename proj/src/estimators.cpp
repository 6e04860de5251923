#include "lowrr/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lowrr/kernels.hpp"

namespace lowrr {

using kernels::frob_norm_sq;
using kernels::gemm_nn;
using kernels::gemm_tn;

namespace {

void check_xy(const Mat& x, const Mat& y) {
  if (x.rows != y.rows)
    throw std::invalid_argument("X and Y must have the same number of rows");
  if (x.rows == 0 || x.cols == 0 || y.cols == 0)
    throw std::invalid_argument("X and Y must be nonempty");
}

FitResult make_fit_result(const Mat& x, const Mat& y, Mat a_hat) {
  FitResult fit;
  fit.fitted = gemm_nn(x, a_hat);
  fit.rss = frob_norm_sq(y - fit.fitted);
  const ThinSvd svd_a = thin_svd(a_hat);
  fit.rank_hat = numerical_rank(svd_a);
  fit.nuclear_norm = 0.0;
  for (double s : svd_a.s) fit.nuclear_norm += s;
  fit.A_hat = std::move(a_hat);
  return fit;
}

FitResult zero_fit(const Mat& x, const Mat& y) {
  FitResult fit = make_fit_result(x, y, Mat::zeros(x.cols, y.cols));
  fit.converged = true;
  fit.iterations = 0;
  return fit;
}

}  // namespace

FitResult fit_reduced_rank(const Mat& x, const Mat& y, int r) {
  check_xy(x, y);
  const int rmax = std::min(x.cols, y.cols);
  if (r < 0 || r > rmax)
    throw std::invalid_argument("fit_reduced_rank: rank out of range");
  if (r == 0 || frob_norm_sq(y) == 0.0) return zero_fit(x, y);

  const ThinSvd svd_x = thin_svd(x);
  const Mat projected = project_colspace(svd_x, y);
  return make_fit_result(x, y, pinv_apply(svd_x, truncate_rank(projected, r)));
}

std::vector<FitResult> fit_reduced_rank_path(const Mat& x, const Mat& y) {
  check_xy(x, y);
  const int rmax = std::min(x.cols, y.cols);
  std::vector<FitResult> path;
  path.reserve(rmax + 1);

  if (frob_norm_sq(y) == 0.0) {
    for (int r = 0; r <= rmax; ++r) path.push_back(zero_fit(x, y));
    return path;
  }

  const ThinSvd svd_x = thin_svd(x);
  const Mat projected = project_colspace(svd_x, y);
  const ThinSvd svd_p = thin_svd(projected);
  for (int r = 0; r <= rmax; ++r) {
    Mat truncated = (r == 0) ? Mat::zeros(projected.rows, projected.cols)
                  : (r >= svd_p.rank()) ? projected
                                        : reconstruct(svd_p, r);
    path.push_back(make_fit_result(x, y, pinv_apply(svd_x, truncated)));
  }
  return path;
}

RankSelection select_rank(const std::vector<FitResult>& path,
                          RankCriterion criterion,
                          const std::function<double(int)>& pen,
                          std::optional<double> sigma) {
  if (path.empty()) throw std::invalid_argument("select_rank: empty path");
  if (!pen) throw std::invalid_argument("select_rank: penalty not set");

  RankSelection sel;
  const int count = static_cast<int>(path.size());

  if (criterion == RankCriterion::known_variance) {
    if (!sigma.has_value() || *sigma <= 0.0)
      throw std::invalid_argument(
          "select_rank: known-variance criterion needs sigma > 0");
    sel.criterion.resize(count);
    for (int r = 0; r < count; ++r)
      sel.criterion[r] = path[r].rss + pen(r) * (*sigma) * (*sigma);
  } else {
    // An exactly-zero rss makes the log undefined; pick the smallest such r.
    for (int r = 0; r < count; ++r) {
      if (path[r].rss < std::numeric_limits<double>::min()) {
        sel.r_hat = r;
        sel.exact_fit = true;
        sel.criterion.assign(count,
                             -std::numeric_limits<double>::infinity());
        for (int k = 0; k < count; ++k)
          if (path[k].rss >= std::numeric_limits<double>::min())
            sel.criterion[k] = std::log(path[k].rss) + pen(k);
        return sel;
      }
    }
    sel.criterion.resize(count);
    for (int r = 0; r < count; ++r)
      sel.criterion[r] = std::log(path[r].rss) + pen(r);
  }

  int best = 0;
  for (int r = 1; r < count; ++r)
    if (sel.criterion[r] < sel.criterion[best]) best = r;
  sel.r_hat = best;
  return sel;
}

double nnp_objective(const Mat& x, const Mat& y, const Mat& a, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("nnp_objective: lambda < 0");
  if (x.cols != a.rows || a.cols != y.cols || x.rows != y.rows)
    throw std::invalid_argument("nnp_objective: dimension mismatch");
  double nuclear = 0.0;
  if (max_abs(a) > 0.0)
    for (double s : thin_svd(a, 0.0).s) nuclear += s;
  return frob_norm_sq(y - gemm_nn(x, a)) + lambda * nuclear;
}

FitResult fit_nnp(const Mat& x, const Mat& y, double lambda,
                  const SolverOptions& opts) {
  check_xy(x, y);
  if (lambda < 0.0) throw std::invalid_argument("fit_nnp: lambda < 0");
  if (opts.max_iterations < 1 || opts.rel_tol <= 0.0 ||
      opts.step_scale <= 0.0 || opts.step_scale > 1.0)
    throw std::invalid_argument("fit_nnp: invalid solver options");
  const double sigma1_x = op_norm(x);
  if (sigma1_x == 0.0)
    throw std::invalid_argument("degenerate design: X is zero");

  if (frob_norm_sq(y) == 0.0) return zero_fit(x, y);
  if (lambda == 0.0) {
    // Plain least squares; the minimum-norm solution is what the proximal
    // iteration started at zero converges to, so return it directly.
    const ThinSvd svd_x = thin_svd(x);
    FitResult fit = make_fit_result(x, y, pinv_apply(svd_x, y));
    fit.converged = true;
    fit.iterations = 0;
    return fit;
  }

  const double step = opts.step_scale / (2.0 * sigma1_x * sigma1_x);
  const int p = x.cols, T = y.cols;

  Mat a_prev = Mat::zeros(p, T);     // last accepted iterate
  Mat extrap = a_prev;               // extrapolation point
  double f_prev = nnp_objective(x, y, a_prev, lambda);
  double t_momentum = 1.0;

  Mat best_a = a_prev;
  double best_f = f_prev;

  FitResult fit;
  if (opts.record_objective) fit.objective_trace.push_back(f_prev);

  auto prox_step = [&](const Mat& point) {
    const Mat grad = 2.0 * gemm_tn(x, gemm_nn(x, point) - y);
    return svt(point - step * grad, step * lambda);
  };

  int iter = 0;
  bool converged = false;
  while (iter < opts.max_iterations) {
    ++iter;
    Mat a_next = prox_step(extrap);
    double f_next = nnp_objective(x, y, a_next, lambda);
    if (opts.acceleration && f_next > f_prev) {
      // Momentum overshot; restart from the last accepted iterate, where
      // the step is a plain descent step.
      t_momentum = 1.0;
      a_next = prox_step(a_prev);
      f_next = nnp_objective(x, y, a_next, lambda);
    }

    const double rel_change =
        std::abs(f_prev - f_next) / std::max(1.0, std::abs(f_prev));

    if (f_next < best_f) {
      best_f = f_next;
      best_a = a_next;
    }
    if (opts.record_objective) fit.objective_trace.push_back(f_next);

    const double t_next =
        opts.acceleration
            ? 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_momentum * t_momentum))
            : 1.0;
    const double beta = (t_momentum - 1.0) / t_next;
    extrap = a_next + beta * (a_next - a_prev);
    a_prev = std::move(a_next);
    f_prev = f_next;
    t_momentum = t_next;

    if (rel_change < opts.rel_tol) {
      converged = true;
      break;
    }
  }

  std::vector<double> trace = std::move(fit.objective_trace);
  fit = make_fit_result(x, y, std::move(best_a));
  fit.iterations = iter;
  fit.converged = converged;
  fit.objective_trace = std::move(trace);
  return fit;
}

FitResult fit_nnp_orthogonal(const Mat& x, const Mat& y, double lambda) {
  check_xy(x, y);
  if (lambda < 0.0)
    throw std::invalid_argument("fit_nnp_orthogonal: lambda < 0");
  const Mat gram = gemm_tn(x, x);
  if (max_abs_diff(gram, Mat::identity(x.cols)) > 1e-8)
    throw std::invalid_argument(
        "fit_nnp_orthogonal: X does not have orthonormal columns");
  Mat a_hat = svt(gemm_tn(x, y), lambda / 2.0);
  FitResult fit = make_fit_result(x, y, std::move(a_hat));
  fit.converged = true;
  fit.iterations = 0;
  return fit;
}

}  // namespace lowrr
