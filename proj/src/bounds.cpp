#include "lowrr/bounds.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "lowrr/kernels.hpp"

namespace lowrr {

using kernels::frob_norm_sq;
using kernels::gemm_nn;
using kernels::gemm_tn;

double bound_constant(ConstantMode mode) {
  return mode == ConstantMode::exact ? (3.0 + 2.0 * std::sqrt(2.0)) / 4.0 : 1.5;
}

double lambda_noise_min(const Mat& x, const Mat& e) {
  if (x.rows != e.rows)
    throw std::invalid_argument("lambda_noise_min: row count mismatch");
  return 2.0 * op_norm(gemm_tn(x, e));
}

double lambda_corollary(double sigma1_x, int T, int q, double K, double sigma) {
  if (K <= 1.0)
    throw std::invalid_argument("lambda_corollary: K must exceed 1");
  if (T < 1 || q < 1)
    throw std::invalid_argument("lambda_corollary: T and q must be >= 1");
  if (sigma < 0.0)
    throw std::invalid_argument("lambda_corollary: sigma must be >= 0");
  return 2.0 * K * sigma1_x * (std::sqrt(static_cast<double>(T)) +
                               std::sqrt(static_cast<double>(q))) *
         sigma;
}

namespace {

// Suffix sums of squared singular values of X*A0: tail[r] = sum_{k>r} s_k^2.
std::vector<double> tail_sums(const Mat& x, const Mat& a0) {
  if (x.cols != a0.rows)
    throw std::invalid_argument("oracle bound: X and A0 dimension mismatch");
  const Mat xa0 = gemm_nn(x, a0);
  std::vector<double> s;
  if (max_abs(xa0) > 0.0) s = thin_svd(xa0).s;
  const int rank = static_cast<int>(s.size());
  std::vector<double> tail(rank + 1, 0.0);
  for (int k = rank - 1; k >= 0; --k) tail[k] = tail[k + 1] + s[k] * s[k];
  return tail;
}

RhsScan scan_min(const std::vector<double>& tail, double per_rank_term) {
  RhsScan best{tail[0], 0};
  for (int r = 1; r < static_cast<int>(tail.size()); ++r) {
    const double value = tail[r] + per_rank_term * r;
    if (value < best.value) best = {value, r};
  }
  return best;
}

}  // namespace

RhsScan oracle_rhs(const Mat& x, const Mat& a0, double lambda,
                   ConstantMode mode) {
  if (lambda < 0.0) throw std::invalid_argument("oracle_rhs: lambda < 0");
  const DesignSummary summary = summarize_design(x);
  const double term =
      bound_constant(mode) * summary.mu * summary.mu * lambda * lambda;
  return scan_min(tail_sums(x, a0), term);
}

GaussianRhsScan gaussian_oracle_rhs(const Mat& x, const Mat& a0, double K,
                                    double sigma) {
  if (K <= 1.0)
    throw std::invalid_argument("gaussian_oracle_rhs: K must exceed 1");
  const DesignSummary summary = summarize_design(x);
  const int T = a0.cols;
  const int q = summary.q;
  const double root_sum = std::sqrt(static_cast<double>(T)) +
                          std::sqrt(static_cast<double>(q));
  const double ratio_sq =
      (summary.sigma1 * summary.sigma1) / (summary.sigmaq * summary.sigmaq);
  const double term = 6.0 * K * K * ratio_sq * root_sum * root_sum * sigma * sigma;
  const double term_eta =
      6.0 * K * K * summary.eta * summary.eta * root_sum * root_sum * sigma * sigma;
  if (std::abs(term - term_eta) > 1e-12 * std::max(1.0, std::abs(term)))
    throw std::logic_error(
        "gaussian_oracle_rhs: sigma-ratio and eta forms disagree");

  const auto tail = tail_sums(x, a0);
  const RhsScan scan = scan_min(tail, term);
  GaussianRhsScan out;
  out.value = scan.value;
  out.argmin_r = scan.argmin_r;
  out.per_rank_term = term;
  out.eta_form_value = tail[scan.argmin_r] + term_eta * scan.argmin_r;
  return out;
}

BoundReport check_oracle(const Mat& x, const Mat& a0, const Mat& a_hat,
                         double lambda, const std::optional<Mat>& e,
                         ConstantMode mode) {
  if (x.cols != a_hat.rows || a_hat.cols != a0.cols)
    throw std::invalid_argument("check_oracle: A_hat dimension mismatch");
  const Mat xa0 = gemm_nn(x, a0);
  BoundReport report;
  report.lambda_used = lambda;
  report.constant_mode = mode;
  report.lhs = frob_norm_sq(gemm_nn(x, a_hat) - xa0);
  const RhsScan scan = oracle_rhs(x, a0, lambda, mode);
  report.rhs = scan.value;
  report.argmin_r = scan.argmin_r;
  if (e.has_value())
    report.lambda_min_event = lambda >= lambda_noise_min(x, *e);
  // The inequality is exact in real arithmetic; the slack only absorbs
  // floating-point accumulation. The absolute floor covers bounds that are
  // exactly zero (noiseless fits at lambda = 0).
  const double slack =
      1e-8 * report.rhs + 1e-18 * std::max(1.0, frob_norm_sq(xa0));
  report.holds = report.lhs <= report.rhs + slack;
  return report;
}

}  // namespace lowrr
