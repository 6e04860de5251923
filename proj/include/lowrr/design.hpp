#pragma once

#include "lowrr/mat.hpp"
#include "lowrr/svd.hpp"

namespace lowrr {

/// Spectral summary of a design matrix X: its thin SVD, numerical rank q,
/// extreme positive singular values, and the derived quantities
/// mu = 1/sigma_q and eta = sigma_1/sigma_q. Full column rank is never
/// required; the summary is well defined whenever X != 0, including n < p.
struct DesignSummary {
  ThinSvd svd;
  int n = 0;
  int p = 0;
  int q = 0;
  double sigma1 = 0.0;
  double sigmaq = 0.0;
  double mu = 0.0;
  double eta = 0.0;
};

/// Throws std::invalid_argument("degenerate design...") when X has no
/// positive singular values.
DesignSummary summarize_design(const Mat& x);

struct Assumption1Report {
  bool holds = false;
  double sigmaq = 0.0;
  double mu_required = 0.0;  // smallest admissible mu, i.e. 1/sigma_q
  double mu_max = 0.0;
  double eta = 0.0;
};

/// True iff sigma_q >= 1/mu_max. The report is returned either way so
/// callers can print diagnostics on failure.
Assumption1Report check_assumption1(const DesignSummary& summary, double mu_max);

/// True iff eta <= eta_max (eta >= 1 always). eta_max < 1 is an input error.
bool check_ri_property(const DesignSummary& summary, double eta_max);

}  // namespace lowrr
