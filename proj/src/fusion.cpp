#include "wpdm/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace wpdm {

namespace {

constexpr double kDegenerateGain = 1e-12;

double log_sum_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

double safe_log(double p) {
  return p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity();
}

}  // namespace

std::string to_string(DetectorKind kind) {
  return kind == DetectorKind::MatchedFilter ? "mf" : "zf";
}

DetectorKind detector_kind_from_string(const std::string& name) {
  if (name == "mf") return DetectorKind::MatchedFilter;
  if (name == "zf") return DetectorKind::ZeroForcing;
  throw std::invalid_argument("unknown detector: " + name);
}

FusionStatistic detect(const CMatrix& antenna_stats, const CMatrix& ghat,
                       double sigma_hat, DetectorKind kind) {
  int n = antenna_stats.rows;
  int m = antenna_stats.cols;
  if (ghat.rows != n || ghat.cols != m)
    throw std::invalid_argument("channel estimate shape mismatch");
  if (!(sigma_hat > 0.0))
    throw std::invalid_argument("waveform gain must be positive");

  FusionStatistic stat;
  stat.r.resize(m);
  stat.d.resize(m);

  // d_m = diagonal of A^H A / N with A = sigma_hat * ghat. The slots already
  // separate sensors, so the gain matrix is treated as diagonal and zero
  // forcing reduces to per-sensor inversion; this is also what keeps the
  // statistic variances exactly at their modeled values.
  double s2 = sigma_hat * sigma_hat;
  for (int i = 0; i < m; ++i) {
    double acc = 0.0;
    for (int ant = 0; ant < n; ++ant) acc += std::norm(ghat.at(ant, i));
    stat.d[i] = acc * s2 / static_cast<double>(n);
    if (stat.d[i] < kDegenerateGain)
      throw std::runtime_error("degenerate channel: effective gain collapsed");
  }

  for (int col = 0; col < m; ++col) {
    cplx acc(0.0, 0.0);
    for (int ant = 0; ant < n; ++ant)
      acc += std::conj(ghat.at(ant, col)) * antenna_stats.at(ant, col);
    double r = (acc * sigma_hat).real();
    stat.r[col] =
        kind == DetectorKind::MatchedFilter ? r : r / stat.d[col];
  }
  return stat;
}

FusionStatistic mrc_combine(const CMatrix& y, const CMatrix& ghat) {
  if (y.cols != 1 || y.rows != ghat.rows)
    throw std::invalid_argument("mrc_combine expects one received column");
  int n = ghat.rows;
  int m = ghat.cols;
  FusionStatistic stat;
  stat.r.resize(m);
  stat.d.resize(m);
  for (int i = 0; i < m; ++i) {
    cplx acc(0.0, 0.0);
    double e = 0.0;
    for (int ant = 0; ant < n; ++ant) {
      acc += std::conj(ghat.at(ant, i)) * y.at(ant, 0);
      e += std::norm(ghat.at(ant, i));
    }
    stat.r[i] = acc.real();
    stat.d[i] = e / n;
    if (stat.d[i] < kDegenerateGain)
      throw std::runtime_error("degenerate channel: effective gain collapsed");
  }
  return stat;
}

double waveform_gain(const std::vector<double>& leaf_filter,
                     const AutocorrelationTable& table, double delta) {
  if (leaf_filter.empty()) throw std::invalid_argument("empty leaf filter");
  int taps = static_cast<int>(leaf_filter.size());
  // Bilinear form sum_k sum_q f[k] f[q] R((k - q) + delta), folded over the
  // filter autocorrelation to stay O(taps^2) once.
  double num = 0.0;
  double den = 0.0;
  for (int lag = -(taps - 1); lag <= taps - 1; ++lag) {
    double cf = 0.0;
    for (int q = std::max(0, -lag); q < std::min(taps, taps - lag); ++q)
      cf += leaf_filter[q + lag] * leaf_filter[q];
    num += cf * table(lag + delta);
    den += cf * table(static_cast<double>(lag));
  }
  if (!(den > 0.0)) throw std::invalid_argument("degenerate waveform gain");
  return num / den;
}

double statistic_mean(const DetectionModel& model, double d, int x) {
  double base = model.antennas * std::sqrt(model.rho) * x;
  return model.kind == DetectorKind::MatchedFilter ? base * d : base;
}

double statistic_variance(const DetectionModel& model, double d) {
  if (!(d > 0.0)) throw std::invalid_argument("effective gain must be positive");
  double half = 0.5 * model.sigma_e2;
  if (!(half > 0.0)) throw std::invalid_argument("noise variance must be positive");
  return model.kind == DetectorKind::MatchedFilter ? model.antennas * d * half
                                                   : model.antennas * half / d;
}

double conditional_pdf(double r, int x, const DetectionModel& model, double d) {
  if (x != 1 && x != -1) throw std::invalid_argument("symbol must be +1 or -1");
  double var = statistic_variance(model, d);
  double diff = r - statistic_mean(model, d, x);
  return std::exp(-0.5 * diff * diff / var) /
         std::sqrt(2.0 * std::numbers::pi * var);
}

double llr_fusion(const FusionStatistic& stat, const DetectionModel& model,
                  const LocalPerformance& local, double term_clamp) {
  if (stat.r.size() != stat.d.size())
    throw std::invalid_argument("statistic/gain length mismatch");
  if (!(local.pd >= 0.0 && local.pd <= 1.0 && local.pf >= 0.0 && local.pf <= 1.0))
    throw std::invalid_argument("local probabilities must lie in [0, 1]");
  if (!(term_clamp > 0.0)) throw std::invalid_argument("clamp must be positive");

  double lpd = safe_log(local.pd);
  double lqd = safe_log(1.0 - local.pd);
  double lpf = safe_log(local.pf);
  double lqf = safe_log(1.0 - local.pf);

  double llr = 0.0;
  for (size_t m = 0; m < stat.r.size(); ++m) {
    double var = statistic_variance(model, stat.d[m]);
    double mp = statistic_mean(model, stat.d[m], +1);
    double mn = statistic_mean(model, stat.d[m], -1);
    double zp = -0.5 * (stat.r[m] - mp) * (stat.r[m] - mp) / var;
    double zn = -0.5 * (stat.r[m] - mn) * (stat.r[m] - mn) / var;
    double num = log_sum_exp(lpd + zp, lqd + zn);
    double den = log_sum_exp(lpf + zp, lqf + zn);
    double term = num - den;
    if (std::isnan(term)) throw std::runtime_error("ill-posed likelihood ratio term");
    llr += std::clamp(term, -term_clamp, term_clamp);
  }
  return llr;
}

bool global_decision(double llr, double threshold) { return llr > threshold; }

std::vector<double> threshold_grid(int sensors, int points) {
  if (sensors < 1) throw std::invalid_argument("sensor count must be >= 1");
  if (points < 2) throw std::invalid_argument("grid needs at least two points");
  double edge = sensors * std::numbers::ln10 + 1.0;
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i)
    grid[i] = -edge + 2.0 * edge * i / (points - 1);
  return grid;
}

}  // namespace wpdm
