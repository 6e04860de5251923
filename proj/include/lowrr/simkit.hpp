#pragma once

#include <cstdint>
#include <vector>

#include "lowrr/bounds.hpp"
#include "lowrr/estimators.hpp"
#include "lowrr/mat.hpp"
#include "lowrr/rng.hpp"

namespace lowrr {

/// Everything a trial depends on. A trial is a pure function of this
/// struct; rerunning with the same config is bit-identical.
struct TrialConfig {
  int n = 15;
  int p = 30;
  int T = 8;
  int r0 = 2;                   // true rank of A0
  double eta_target = 1.0;      // desired sigma1/sigmaq of X
  double sigma1_target = 1.0;   // scale of X
  double signal = 1.0;          // singular values of A0
  double sigma = 1.0;           // noise standard deviation
  double K = 1.5;               // calibration multiplier, > 1
  std::uint64_t seed = 0;
  bool coef_in_rowspace = false;  // project A0 onto rg(X^T) before use

  void validate() const;
};

/// X = U diag(s) V^T with Haar-like factors (orthonormalized seeded Gaussian
/// matrices) and q = min(n, p) singular values geometrically spaced from
/// sigma1_target down to sigma1_target/eta_target.
Mat gen_design(const TrialConfig& cfg);

/// A0 = sum of r0 rank-one terms with orthonormal factors, each scaled to
/// `signal`, so rank(A0) = r0 exactly.
Mat gen_coef(const TrialConfig& cfg);

/// n×T matrix of i.i.d. N(0, sigma^2) draws.
Mat gen_noise(const TrialConfig& cfg);

struct TrialReport {
  std::uint64_t seed = 0;
  double lambda = 0.0;
  bool lambda_min_event = false;
  BoundReport exact;
  BoundReport relaxed;
  int q = 0;
  double sigma1_x = 0.0;
  double sigmaq_x = 0.0;
  double eta_x = 0.0;
  int solver_iterations = 0;
  bool solver_converged = true;
};

/// Generate (X, A0, E), form Y = X A0 + E, fit the nuclear-norm estimator at
/// lambda = lambda_corollary(sigma1(X), T, q, K, sigma), and compare both
/// sides of the oracle inequality under both leading constants.
TrialReport run_trial(const TrialConfig& cfg, const SolverOptions& opts = {});

struct MCReport {
  int trials = 0;
  int violation_count_exact = 0;
  int violation_count_relaxed = 0;
  int event_fail_count = 0;        // trials with lambda < 2 sigma_1(X^T E)
  double bound_probability = 0.0;  // e^{-(K-1)^2 (T+q)/2}
  std::vector<TrialReport> trial_reports;

  int violation_count(ConstantMode mode) const {
    return mode == ConstantMode::exact ? violation_count_exact
                                       : violation_count_relaxed;
  }
};

/// Runs trials at seeds seed+0 .. seed+n_trials-1 (concurrently; aggregation
/// folds in trial order so the report is reproducible). Throws logic_error
/// if any exact-constant violation occurs on a trial where the lambda event
/// holds — the bound is deterministic there.
MCReport monte_carlo(const TrialConfig& cfg, int n_trials,
                     const SolverOptions& opts = {});

/// Entrywise identity between (X*A)_it and the trace pairing of A with the
/// rank-one measurement x_i e_t^T, checked to 1e-12 (relative to the scale
/// of X*A).
bool trace_embedding_check(const Mat& x, const Mat& a);

/// Seeded Gaussian matrix and orthonormal-column factor, exposed for tests
/// and the CLI.
Mat gaussian_matrix(int rows, int cols, Rng& rng);
Mat orthonormal_columns(int rows, int cols, Rng& rng);

}  // namespace lowrr
