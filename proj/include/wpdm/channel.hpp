#pragma once

#include <array>
#include <vector>

#include "wpdm/mat.hpp"
#include "wpdm/noise.hpp"
#include "wpdm/rng.hpp"
#include "wpdm/waveform.hpp"

namespace wpdm {

// Fusion center at the origin; group centers area-uniform on an annulus;
// sensors clustered in a rectangle anchored at their group center.
struct GeometryParams {
  double radius_min_m = 100.0;
  double radius_max_m = 1000.0;
  double cluster_width_m = 50.0;
  double cluster_height_m = 100.0;
};

struct ShadowParams {
  double pathloss_exp = 2.0;  // eta
  double mean_db = 4.0;       // lognormal shadowing mean (dB)
  double sigma_db = 2.0;      // lognormal shadowing std dev (dB)
};

struct NetworkGeometry {
  std::vector<std::array<double, 2>> group_centers;            // Z
  std::vector<std::vector<std::array<double, 2>>> sensor_pos;  // Z x M
};

// Group centers drawn area-uniform on the annulus (radius via inverse CDF,
// angle uniform); sensor offsets half-normal per axis with scale extent/3,
// truncated to the cluster rectangle by resampling, anchored at the group
// center toward +x/+y.
NetworkGeometry deploy(int groups, int sensors, const GeometryParams& gp,
                       SubstreamRng& rng);

// Distance-based mean gain with lognormal shadowing:
//   lambda = upsilon * (radius_min / distance)^eta, 10 log10(upsilon) ~
//   N(mean_db, sigma_db^2). Distances below radius_min clamp to radius_min.
std::vector<double> draw_large_scale(const NetworkGeometry& geom, int group,
                                     const GeometryParams& gp,
                                     const ShadowParams& sp, SubstreamRng& rng);

// Analytic ensemble mean of lambda over the annulus (cluster offsets ignored);
// used to anchor the SNR definition.
double mean_large_scale_gain(const GeometryParams& gp, const ShadowParams& sp);

struct ChannelRealization {
  CMatrix h;                   // N x M small-scale, entries CN(0, 1)
  std::vector<double> lambda;  // M large-scale gains
  double rho = 1.0;            // transmit power scale

  // Effective gain entry g[n][m] = h[n][m] * sqrt(lambda[m]).
  cplx g(int n, int m) const { return h.at(n, m) * std::sqrt(lambda[m]); }
};

ChannelRealization draw_channel(int antennas, const std::vector<double>& lambda,
                                double rho, SubstreamRng& rng);

// Y = sqrt(rho) * sum over groups/sensors of g_zm * s_zm(t) + e.
// chans holds one realization per frame in mux (same order); noise.e must be
// N x mux.length.
CMatrix apply_mac(const MultiplexedSignal& mux,
                  const std::vector<ChannelRealization>& chans,
                  const NoiseRealization& noise);

}  // namespace wpdm
