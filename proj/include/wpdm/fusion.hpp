#pragma once

#include <string>
#include <vector>

#include "wpdm/mat.hpp"
#include "wpdm/wavelet.hpp"

namespace wpdm {

enum class DetectorKind { MatchedFilter, ZeroForcing };

std::string to_string(DetectorKind kind);
DetectorKind detector_kind_from_string(const std::string& name);

// Local sensor operating point: probability of a +1 report under H1 (pd) and
// under H0 (pf).
struct LocalPerformance {
  double pd = 0.5;
  double pf = 0.05;
};

// Per-sensor combining output r_m plus the per-sensor effective gain
// d_m = |sigma_hat * ghat_m|^2 / N that parameterizes the statistic pdfs.
struct FusionStatistic {
  std::vector<double> r;
  std::vector<double> d;
};

// antenna_stats: N x M reconstructed statistics. ghat: N x M channel estimate
// with the large-scale gain folded in. sigma_hat: waveform-correlation gain of
// the receiver model.
//   MatchedFilter: r_m = Re{ a_m^H yhat_m },              a_m = sigma_hat*ghat_m
//   ZeroForcing:   r_m = Re{ [D^-1 A^H yhat_m]_m },       D = A^H A / N
// Throws std::runtime_error when any diagonal entry of D falls below 1e-12
// (degenerate channel).
FusionStatistic detect(const CMatrix& antenna_stats, const CMatrix& ghat,
                       double sigma_hat, DetectorKind kind);

// MRC combining of a single bare symbol: r_m = Re{ ghat_m^H y }.
FusionStatistic mrc_combine(const CMatrix& y, const CMatrix& ghat);

// Waveform-correlation gain at timing offset delta, from the pulse
// autocorrelation table: bilinear form over the leaf filter, normalized to 1
// at delta = 0.
double waveform_gain(const std::vector<double>& leaf_filter,
                     const AutocorrelationTable& table, double delta);

// Gaussian model for a combined statistic. sigma_e2 is the total complex
// noise variance; the real-part statistic carries half of it.
struct DetectionModel {
  DetectorKind kind = DetectorKind::ZeroForcing;
  int antennas = 1;
  double rho = 1.0;
  double sigma_e2 = 1.0;
};

double statistic_mean(const DetectionModel& model, double d, int x);
double statistic_variance(const DetectionModel& model, double d);

// Density of r_m given the transmitted symbol x in {+1, -1}.
double conditional_pdf(double r, int x, const DetectionModel& model, double d);

// Sum over sensors of the per-sensor log likelihood ratio
//   ln[(psi(r|+1) pd + psi(r|-1)(1-pd)) / (psi(r|+1) pf + psi(r|-1)(1-pf))]
// computed in the log domain, each term clamped to +-term_clamp.
double llr_fusion(const FusionStatistic& stat, const DetectionModel& model,
                  const LocalPerformance& local, double term_clamp = 50.0);

// H1 iff llr strictly exceeds the threshold; ties resolve to H0.
bool global_decision(double llr, double threshold);

// Uniform grid of detection thresholds on [-(M ln 10 + 1), M ln 10 + 1].
std::vector<double> threshold_grid(int sensors, int points = 201);

}  // namespace wpdm
