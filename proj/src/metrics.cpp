#include "wpdm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace wpdm {

double q_function(double x) {
  return 0.5 * std::erfc(x * 0.70710678118654752440);
}

WilsonInterval wilson_interval(long successes, long trials, double z) {
  if (trials <= 0) throw std::invalid_argument("Wilson interval needs trials > 0");
  if (successes < 0 || successes > trials)
    throw std::invalid_argument("success count outside [0, trials]");
  double n = static_cast<double>(trials);
  double p = static_cast<double>(successes) / n;
  double z2 = z * z;
  double denom = 1.0 + z2 / n;
  double center = (p + z2 / (2.0 * n)) / denom;
  double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  WilsonInterval w;
  w.lo = std::max(0.0, center - half);
  w.hi = std::min(1.0, center + half);
  w.half = half;
  return w;
}

std::vector<RocPoint> estimate_roc(const std::vector<double>& llr_h1,
                                   const std::vector<double>& llr_h0,
                                   const std::vector<double>& thresholds) {
  if (llr_h1.empty() || llr_h0.empty())
    throw std::invalid_argument("ROC estimation needs trials under both hypotheses");
  if (thresholds.empty()) throw std::invalid_argument("empty threshold grid");

  // Sort once; each threshold then costs a binary search.
  std::vector<double> h1 = llr_h1;
  std::vector<double> h0 = llr_h0;
  std::sort(h1.begin(), h1.end());
  std::sort(h0.begin(), h0.end());

  std::vector<RocPoint> roc;
  roc.reserve(thresholds.size());
  for (double t : thresholds) {
    long above1 = h1.end() - std::upper_bound(h1.begin(), h1.end(), t);
    long above0 = h0.end() - std::upper_bound(h0.begin(), h0.end(), t);
    RocPoint p;
    p.threshold = t;
    p.trials_h1 = static_cast<long>(h1.size());
    p.trials_h0 = static_cast<long>(h0.size());
    p.pd0 = static_cast<double>(above1) / p.trials_h1;
    p.pf0 = static_cast<double>(above0) / p.trials_h0;
    p.pd0_ci = wilson_interval(above1, p.trials_h1).half;
    p.pf0_ci = wilson_interval(above0, p.trials_h0).half;
    roc.push_back(p);
  }
  return roc;
}

PfdPoint estimate_pfd(const std::vector<double>& llr_h1,
                      const std::vector<double>& llr_h0, double snr_db,
                      double threshold) {
  if (llr_h1.empty() || llr_h0.empty())
    throw std::invalid_argument("error-rate estimation needs trials under both hypotheses");
  long errors = 0;
  for (double v : llr_h0)
    if (v > threshold) ++errors;  // false alarm
  for (double v : llr_h1)
    if (!(v > threshold)) ++errors;  // miss (ties resolve to H0)
  long total = static_cast<long>(llr_h1.size() + llr_h0.size());
  PfdPoint p;
  p.snr_db = snr_db;
  p.trials = total;
  p.pfd = static_cast<double>(errors) / total;
  p.pfd_ci = wilson_interval(errors, total).half;
  return p;
}

double analytic_reference_pf0(const DetectionModel& model,
                              const std::vector<double>& d,
                              const LocalPerformance& local) {
  if (d.empty()) throw std::invalid_argument("no per-sensor gains");
  double sigma_e = std::sqrt(model.sigma_e2);
  double m_sensors = static_cast<double>(d.size());
  double denom =
      std::sqrt(0.5 * (m_sensors * (1.0 - local.pf) + model.sigma_e2));
  if (!(denom > 0.0)) throw std::invalid_argument("degenerate denominator");

  double acc = 0.0;
  for (double dm : d) {
    if (!(dm > 0.0)) throw std::invalid_argument("effective gain must be positive");
    double r0 = statistic_mean(model, dm, -1);  // clean statistic under H0
    double shift = std::sqrt(model.antennas * dm * model.rho) / sigma_e;
    acc += q_function((r0 - shift) / denom);
  }
  return acc / m_sensors;
}

double enumerated_fusion_floor(int sensors, const LocalPerformance& local) {
  if (sensors < 1 || sensors > 24)
    throw std::invalid_argument("enumeration limited to 1..24 sensors");
  if (!(local.pd >= 0.0 && local.pd <= 1.0 && local.pf >= 0.0 && local.pf <= 1.0))
    throw std::invalid_argument("local probabilities must lie in [0, 1]");

  auto safe_log_ratio = [](double a, double b) {
    if (a == 0.0 && b == 0.0) return 0.0;
    if (b == 0.0) return std::numeric_limits<double>::infinity();
    if (a == 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(a / b);
  };
  double t_pos = safe_log_ratio(local.pd, local.pf);
  double t_neg = safe_log_ratio(1.0 - local.pd, 1.0 - local.pf);

  // Binomial coefficients via Pascal row.
  std::vector<double> comb(sensors + 1, 0.0);
  comb[0] = 1.0;
  for (int i = 1; i <= sensors; ++i)
    for (int j = i; j >= 1; --j) comb[j] += comb[j - 1];

  double pfa = 0.0;
  double pmiss = 0.0;
  for (int k = 0; k <= sensors; ++k) {
    double llr = 0.0;
    if (k > 0) llr += k * t_pos;
    if (sensors - k > 0) llr += (sensors - k) * t_neg;
    bool decide_h1 = llr > 0.0;
    double w_h0 = comb[k] * std::pow(local.pf, k) *
                  std::pow(1.0 - local.pf, sensors - k);
    double w_h1 = comb[k] * std::pow(local.pd, k) *
                  std::pow(1.0 - local.pd, sensors - k);
    if (decide_h1)
      pfa += w_h0;
    else
      pmiss += w_h1;
  }
  return 0.5 * (pfa + pmiss);
}

}  // namespace wpdm
