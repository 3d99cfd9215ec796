#pragma once

#include <vector>

#include "wpdm/fusion.hpp"

namespace wpdm {

// Gaussian tail probability Q(x) = P(N(0,1) > x).
double q_function(double x);

struct WilsonInterval {
  double lo = 0.0;
  double hi = 0.0;
  double half = 0.0;  // half-width
};

// Wilson score interval for a binomial proportion (z defaults to 95%).
WilsonInterval wilson_interval(long successes, long trials, double z = 1.959963985);

struct RocPoint {
  double threshold = 0.0;
  double pd0 = 0.0;  // P(decide H1 | H1)
  double pf0 = 0.0;  // P(decide H1 | H0)
  double pd0_ci = 0.0;
  double pf0_ci = 0.0;
  long trials_h1 = 0;
  long trials_h0 = 0;
};

// Empirical ROC of the fused statistic over a threshold grid. llr_h1/llr_h0
// hold the per-trial fused log likelihood ratios under each hypothesis.
std::vector<RocPoint> estimate_roc(const std::vector<double>& llr_h1,
                                   const std::vector<double>& llr_h0,
                                   const std::vector<double>& thresholds);

struct PfdPoint {
  double snr_db = 0.0;
  double pfd = 0.0;
  double pfd_ci = 0.0;
  long trials = 0;
};

// Pooled error rate at a fixed threshold with equal hypothesis priors:
//   pfd = (#(llr >  t | H0) + #(llr <= t | H1)) / (n0 + n1),  n0 = n1.
PfdPoint estimate_pfd(const std::vector<double>& llr_h1,
                      const std::vector<double>& llr_h0, double snr_db,
                      double threshold = 0.0);

// Closed-form reference approximation of the post-fusion false-detection
// rate: evaluated entrywise per sensor at the clean H0-conditional statistic
// mean and averaged over sensors. Reported as "analytic_reference" alongside
// Monte Carlo estimates; it is a sanity anchor, not the primary estimator.
double analytic_reference_pf0(const DetectionModel& model,
                              const std::vector<double>& d,
                              const LocalPerformance& local);

// Error rate of the optimal fused decision at threshold zero when the channel
// is error-free, by exhaustive enumeration over all 2^M local report
// patterns; pooled over equal priors.
double enumerated_fusion_floor(int sensors, const LocalPerformance& local);

}  // namespace wpdm
