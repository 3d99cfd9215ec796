#include "wpdm/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wpdm {

namespace {

void check_geometry(const GeometryParams& gp) {
  if (!(gp.radius_min_m > 0.0) || !(gp.radius_max_m > gp.radius_min_m))
    throw std::invalid_argument("annulus radii must satisfy 0 < min < max");
  if (!(gp.cluster_width_m > 0.0) || !(gp.cluster_height_m > 0.0))
    throw std::invalid_argument("cluster extents must be positive");
}

// Half-normal with scale extent/3, truncated to [0, extent] by resampling.
double half_normal_offset(double extent, SubstreamRng& rng) {
  double scale = extent / 3.0;
  for (int tries = 0; tries < 64; ++tries) {
    double v = std::abs(rng.next_gaussian()) * scale;
    if (v <= extent) return v;
  }
  return extent;  // ~1e-60 tail; clamp rather than loop forever
}

}  // namespace

NetworkGeometry deploy(int groups, int sensors, const GeometryParams& gp,
                       SubstreamRng& rng) {
  check_geometry(gp);
  if (groups < 1 || sensors < 1)
    throw std::invalid_argument("groups and sensors must be >= 1");

  NetworkGeometry geom;
  geom.group_centers.resize(groups);
  geom.sensor_pos.assign(groups, std::vector<std::array<double, 2>>(sensors));

  double r2min = gp.radius_min_m * gp.radius_min_m;
  double r2max = gp.radius_max_m * gp.radius_max_m;
  for (int z = 0; z < groups; ++z) {
    double u = rng.next_double();
    double radius = std::sqrt(u * (r2max - r2min) + r2min);
    double angle = 2.0 * std::numbers::pi * rng.next_double();
    geom.group_centers[z] = {radius * std::cos(angle), radius * std::sin(angle)};
    for (int m = 0; m < sensors; ++m) {
      double ox = half_normal_offset(gp.cluster_width_m, rng);
      double oy = half_normal_offset(gp.cluster_height_m, rng);
      geom.sensor_pos[z][m] = {geom.group_centers[z][0] + ox,
                               geom.group_centers[z][1] + oy};
    }
  }
  return geom;
}

std::vector<double> draw_large_scale(const NetworkGeometry& geom, int group,
                                     const GeometryParams& gp,
                                     const ShadowParams& sp, SubstreamRng& rng) {
  check_geometry(gp);
  if (group < 0 || group >= static_cast<int>(geom.sensor_pos.size()))
    throw std::invalid_argument("group index outside the geometry");
  if (!(sp.sigma_db >= 0.0))
    throw std::invalid_argument("shadowing sigma must be nonnegative");

  const std::vector<std::array<double, 2>>& pos = geom.sensor_pos[group];
  std::vector<double> lambda(pos.size());
  for (size_t m = 0; m < pos.size(); ++m) {
    double dist = std::hypot(pos[m][0], pos[m][1]);
    dist = std::max(dist, gp.radius_min_m);
    double shadow_db = sp.mean_db + sp.sigma_db * rng.next_gaussian();
    double upsilon = std::pow(10.0, shadow_db / 10.0);
    lambda[m] = upsilon * std::pow(gp.radius_min_m / dist, sp.pathloss_exp);
  }
  return lambda;
}

double mean_large_scale_gain(const GeometryParams& gp, const ShadowParams& sp) {
  check_geometry(gp);
  // Lognormal mean of upsilon.
  double c = std::numbers::ln10 / 10.0;
  double mu = c * sp.mean_db;
  double sigma = c * sp.sigma_db;
  double e_upsilon = std::exp(mu + 0.5 * sigma * sigma);
  // E[(rmin/r)^eta] with area-uniform radius on the annulus.
  double r2min = gp.radius_min_m * gp.radius_min_m;
  double r2max = gp.radius_max_m * gp.radius_max_m;
  double eta = sp.pathloss_exp;
  double radial;
  if (std::abs(eta - 2.0) < 1e-12) {
    radial = r2min * 2.0 * std::log(gp.radius_max_m / gp.radius_min_m) /
             (r2max - r2min);
  } else {
    double p = 2.0 - eta;
    radial = std::pow(gp.radius_min_m, eta) * 2.0 *
             (std::pow(gp.radius_max_m, p) - std::pow(gp.radius_min_m, p)) /
             (p * (r2max - r2min));
  }
  return e_upsilon * radial;
}

ChannelRealization draw_channel(int antennas, const std::vector<double>& lambda,
                                double rho, SubstreamRng& rng) {
  if (antennas < 1) throw std::invalid_argument("antenna count must be >= 1");
  if (lambda.empty()) throw std::invalid_argument("no large-scale gains");
  for (double l : lambda)
    if (!(l > 0.0)) throw std::invalid_argument("large-scale gains must be positive");
  if (!(rho > 0.0)) throw std::invalid_argument("power scale must be positive");

  ChannelRealization chan;
  chan.rho = rho;
  chan.lambda = lambda;
  chan.h = CMatrix(antennas, static_cast<int>(lambda.size()));
  for (cplx& v : chan.h.a) v = rng.next_cnormal();
  return chan;
}

CMatrix apply_mac(const MultiplexedSignal& mux,
                  const std::vector<ChannelRealization>& chans,
                  const NoiseRealization& noise) {
  if (mux.frames.empty()) throw std::invalid_argument("empty multiplex");
  if (chans.size() != mux.frames.size())
    throw std::invalid_argument("one channel realization per group required");
  int n = chans.front().h.rows;
  for (const ChannelRealization& c : chans)
    if (c.h.rows != n)
      throw std::invalid_argument("antenna count differs across groups");
  if (noise.e.rows != n || noise.e.cols != mux.length)
    throw std::invalid_argument("noise shape does not match the receive grid");

  CMatrix y = noise.e;  // start from e, add the faded signal
  for (size_t zi = 0; zi < mux.frames.size(); ++zi) {
    const EncodedFrame& f = mux.frames[zi];
    const ChannelRealization& chan = chans[zi];
    if (static_cast<int>(f.coded_symbols.size()) != chan.h.cols)
      throw std::invalid_argument("sensor count differs between frame and channel");
    double amp = std::sqrt(chan.rho);
    int wlen = static_cast<int>(f.waveform.samples.size());
    for (size_t m = 0; m < f.coded_symbols.size(); ++m) {
      int base = f.slot_offsets[m] - mux.start;
      double s = amp * f.coded_symbols[m];
      for (int ant = 0; ant < n; ++ant) {
        cplx gain = chan.g(ant, static_cast<int>(m)) * s;
        cplx* row = &y.a[static_cast<size_t>(ant) * y.cols];
        const double* w = f.waveform.samples.data();
        for (int j = 0; j < wlen; ++j) row[base + j] += gain * w[j];
      }
    }
  }
  return y;
}

}  // namespace wpdm
