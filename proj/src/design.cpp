#include "lowrr/design.hpp"

#include <stdexcept>

namespace lowrr {

DesignSummary summarize_design(const Mat& x) {
  DesignSummary out;
  out.n = x.rows;
  out.p = x.cols;
  out.svd = thin_svd(x);
  out.q = numerical_rank(out.svd);
  if (out.q == 0)
    throw std::invalid_argument(
        "degenerate design: X has no positive singular values");
  out.sigma1 = out.svd.s.front();
  out.sigmaq = out.svd.s.back();
  out.mu = 1.0 / out.sigmaq;
  out.eta = out.sigma1 / out.sigmaq;
  return out;
}

Assumption1Report check_assumption1(const DesignSummary& summary, double mu_max) {
  if (mu_max <= 0.0)
    throw std::invalid_argument("check_assumption1: mu_max must be positive");
  Assumption1Report rep;
  rep.sigmaq = summary.sigmaq;
  rep.mu_required = 1.0 / summary.sigmaq;
  rep.mu_max = mu_max;
  rep.eta = summary.eta;
  rep.holds = summary.sigmaq >= 1.0 / mu_max;
  return rep;
}

bool check_ri_property(const DesignSummary& summary, double eta_max) {
  if (eta_max < 1.0)
    throw std::invalid_argument("check_ri_property: eta_max must be >= 1");
  return summary.eta <= eta_max;
}

}  // namespace lowrr
