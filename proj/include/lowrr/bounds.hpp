#pragma once

#include <optional>

#include "lowrr/design.hpp"
#include "lowrr/mat.hpp"

namespace lowrr {

/// Leading constant on the mu^2 lambda^2 rank term of the oracle bound.
/// `exact` is the sharper imported constant ((1+sqrt(2))/2)^2; `relaxed`
/// rounds it up to 3/2.
enum class ConstantMode { exact, relaxed };

double bound_constant(ConstantMode mode);

/// Comparison of realized prediction error against the oracle bound.
struct BoundReport {
  double lhs = 0.0;         // ||X*A_hat - X*A0||_F^2
  double rhs = 0.0;         // bound value at the minimizing rank
  int argmin_r = 0;
  double lambda_used = 0.0;
  std::optional<bool> lambda_min_event;  // lambda >= 2 sigma_1(X^T E), when E known
  ConstantMode constant_mode = ConstantMode::exact;
  bool holds = false;
};

/// Smallest penalty level for which the deterministic bound applies:
/// 2 * sigma_1(X^T E).
double lambda_noise_min(const Mat& x, const Mat& e);

/// Gaussian-noise calibration 2 * K * sigma_1(X) * (sqrt(T) + sqrt(q)) * sigma.
/// Requires K > 1 (the associated probability bound is vacuous otherwise).
double lambda_corollary(double sigma1_x, int T, int q, double K, double sigma);

struct RhsScan {
  double value = 0.0;
  int argmin_r = 0;
};

/// min over r of  sum_{k > r} sigma_k(X*A0)^2 + c * mu^2 * lambda^2 * r,
/// with c from `mode` and mu from the design summary. Ties break toward the
/// smallest r.
RhsScan oracle_rhs(const Mat& x, const Mat& a0, double lambda,
                   ConstantMode mode);

struct GaussianRhsScan {
  double value = 0.0;
  int argmin_r = 0;
  double eta_form_value = 0.0;  // same bound written with eta = sigma1/sigmaq
  double per_rank_term = 0.0;   // 6 K^2 (sigma1/sigmaq)^2 (sqrt(T)+sqrt(q))^2 sigma^2
};

/// Same scan with the Gaussian-calibrated per-rank constant
/// 6 K^2 (sigma1(X)/sigmaq(X))^2 (sqrt(T)+sqrt(q))^2 sigma^2. The eta-form
/// value is computed independently and checked to agree to 1e-12.
GaussianRhsScan gaussian_oracle_rhs(const Mat& x, const Mat& a0, double K,
                                    double sigma);

/// Evaluates both sides of the oracle inequality for a fitted A_hat.
/// holds allows a 1e-8 relative slack on the right-hand side (plus a tiny
/// absolute floor so an exactly-zero bound tolerates roundoff in the lhs).
BoundReport check_oracle(const Mat& x, const Mat& a0, const Mat& a_hat,
                         double lambda, const std::optional<Mat>& e,
                         ConstantMode mode);

}  // namespace lowrr
