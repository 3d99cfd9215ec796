#include "wpdm/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wpdm {

namespace {

double sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

// Inner product of f1 shifted by `lag` against f2 (dense, zero-padded).
double shifted_dot(const std::vector<double>& f1, const std::vector<double>& f2,
                   int lag) {
  double acc = 0.0;
  int n1 = static_cast<int>(f1.size());
  int n2 = static_cast<int>(f2.size());
  for (int q = 0; q < n2; ++q) {
    int p = q + lag;
    if (p >= 0 && p < n1) acc += f1[p] * f2[q];
  }
  return acc;
}

// Convolution of a with b upsampled by `up` (zeros inserted between taps).
std::vector<double> convolve_upsampled(const std::vector<double>& a,
                                       const std::vector<double>& b, int up) {
  int la = static_cast<int>(a.size());
  int lb = (static_cast<int>(b.size()) - 1) * up + 1;
  std::vector<double> out(la + lb - 1, 0.0);
  for (size_t j = 0; j < b.size(); ++j) {
    double bj = b[j];
    if (bj == 0.0) continue;
    size_t off = j * up;
    for (int i = 0; i < la; ++i) out[off + i] += a[i] * bj;
  }
  return out;
}

}  // namespace

PrototypeFilterPair design_prototype_filters(int taps, int order, double bandwidth) {
  if (taps < 2 || taps % 2 != 0)
    throw std::invalid_argument("filter length Q must be even and >= 2");
  if (order < 1 || order > taps / 2)
    throw std::invalid_argument("order K must satisfy 1 <= K <= Q/2");
  if (!(bandwidth > 0.0))
    throw std::invalid_argument("bandwidth B must be positive");

  // Tiny backoff keeps exact powers of two (2*log2 B integral) from ceiling
  // one step too far under floating-point round-off.
  int k0 = 2 * order - 1 -
           static_cast<int>(std::ceil(2.0 * std::log2(bandwidth) - 1e-9));
  if (k0 < 1)
    throw std::invalid_argument("regularity margin K0 = 2K-1-ceil(2*log2 B) must be >= 1");

  PrototypeFilterPair pair;
  pair.bandwidth = bandwidth;
  pair.delay = static_cast<double>(taps - 1) / (4.0 * bandwidth);
  pair.regularity = k0;

  pair.h.resize(taps);
  double energy = 0.0;
  for (int q = 0; q < taps; ++q) {
    pair.h[q] = sinc(q - pair.delay);
    energy += pair.h[q] * pair.h[q];
  }
  double scale = 1.0 / std::sqrt(energy);
  for (double& v : pair.h) v *= scale;

  pair.g.resize(taps);
  for (int q = 0; q < taps; ++q) {
    double sign = (q % 2 == 0) ? 1.0 : -1.0;
    pair.g[q] = sign * pair.h[taps - 1 - q];
  }
  return pair;
}

double max_orthonormality_residual(const PrototypeFilterPair& pair) {
  // Worst even-lag autocorrelation of the lowpass prototype. The QMF
  // construction ties g to h, so h alone determines the residual.
  int q = static_cast<int>(pair.h.size());
  double worst = 0.0;
  for (int m = 1; m <= q / 2; ++m) {
    worst = std::max(worst, std::abs(shifted_dot(pair.h, pair.h, 2 * m)));
  }
  return worst;
}

WaveletPacketTree build_packet_tree(const PrototypeFilterPair& pair, int groups) {
  if (groups < 2) throw std::invalid_argument("group count Z must be >= 2");
  int levels = 0;
  while ((1 << levels) < groups) ++levels;

  WaveletPacketTree tree;
  tree.levels = levels;
  tree.leaf_shift = 1 << levels;
  tree.leaf_filters.reserve(groups);

  for (int z = 0; z < groups; ++z) {
    // Bit path from root (most significant) to leaf; stage i contributes the
    // chosen filter upsampled by 2^(i-1).
    std::vector<double> f{1.0};
    for (int stage = 1; stage <= levels; ++stage) {
      int bit = (z >> (levels - stage)) & 1;
      const std::vector<double>& b = bit ? pair.g : pair.h;
      f = convolve_upsampled(f, b, 1 << (stage - 1));
    }
    tree.leaf_filters.push_back(std::move(f));
  }
  return tree;
}

double max_leaf_cross_correlation(const WaveletPacketTree& tree, int max_slot_lag) {
  double worst = 0.0;
  int z = static_cast<int>(tree.leaf_filters.size());
  for (int z1 = 0; z1 < z; ++z1) {
    for (int z2 = z1 + 1; z2 < z; ++z2) {
      for (int j = -max_slot_lag; j <= max_slot_lag; ++j) {
        double c = shifted_dot(tree.leaf_filters[z1], tree.leaf_filters[z2],
                               j * tree.leaf_shift);
        worst = std::max(worst, std::abs(c));
      }
    }
  }
  return worst;
}

std::string to_string(ScalingKind kind) {
  switch (kind) {
    case ScalingKind::Haar: return "haar";
    case ScalingKind::Shannon: return "shannon";
    case ScalingKind::Spline: return "spline";
  }
  return "unknown";
}

ScalingKind scaling_kind_from_string(const std::string& name) {
  if (name == "haar") return ScalingKind::Haar;
  if (name == "shannon") return ScalingKind::Shannon;
  if (name == "spline") return ScalingKind::Spline;
  throw std::invalid_argument("unknown scaling function: " + name);
}

double evaluate_scaling(ScalingKind kind, double t, double extent) {
  switch (kind) {
    case ScalingKind::Haar:
      return (t >= 0.0 && t < 1.0) ? 1.0 : 0.0;
    case ScalingKind::Shannon:
      return (std::abs(t) <= extent) ? sinc(t) : 0.0;
    case ScalingKind::Spline:
      return (std::abs(t) <= 1.0) ? 1.0 - std::abs(t) : 0.0;
  }
  return 0.0;
}

ScalingFunction sample_scaling_function(ScalingKind kind, double grid_step,
                                        double extent) {
  if (!(grid_step > 0.0) || grid_step > 0.25)
    throw std::invalid_argument("grid_step must be in (0, 1/4]");
  double cells = 1.0 / grid_step;
  if (std::abs(cells - std::round(cells)) > 1e-9)
    throw std::invalid_argument("grid_step must divide the unit interval evenly");
  if (!(extent > 0.0)) throw std::invalid_argument("extent must be positive");

  ScalingFunction sf;
  sf.kind = kind;
  sf.grid_step = grid_step;
  sf.extent = extent;
  switch (kind) {
    case ScalingKind::Haar:
      sf.support_min = 0.0;
      sf.support_max = 1.0;
      break;
    case ScalingKind::Shannon:
      sf.support_min = -extent;
      sf.support_max = extent;
      break;
    case ScalingKind::Spline:
      sf.support_min = -1.0;
      sf.support_max = 1.0;
      break;
  }
  long n = std::lround((sf.support_max - sf.support_min) / grid_step);
  sf.samples.resize(n + 1);
  for (long i = 0; i <= n; ++i) {
    double t = sf.support_min + i * grid_step;
    sf.samples[i] = evaluate_scaling(kind, t, extent);
  }
  if (kind == ScalingKind::Shannon) {
    // Energy of the discarded sinc tails: integral of sinc^2 is 1, the kept
    // part is estimated on the same grid.
    double kept = 0.0;
    for (double v : sf.samples) kept += v * v;
    kept *= grid_step;
    sf.truncation_error = std::max(0.0, 1.0 - kept);
  }
  return sf;
}

double AutocorrelationTable::operator()(double tau) const {
  double at = std::abs(tau);
  if (at >= max_lag) return 0.0;
  double pos = at / lag_step;
  size_t i = static_cast<size_t>(pos);
  double frac = pos - static_cast<double>(i);
  if (i + 1 >= values.size()) return values.back() * (1.0 - frac);
  return values[i] * (1.0 - frac) + values[i + 1] * frac;
}

AutocorrelationTable autocorrelation(const ScalingFunction& sf) {
  if (sf.samples.empty()) throw std::invalid_argument("empty scaling function");
  AutocorrelationTable table;
  table.lag_step = sf.grid_step;
  table.max_lag = sf.support_max - sf.support_min;
  long lags = std::lround(table.max_lag / sf.grid_step);
  if (lags < 1) throw std::invalid_argument("scaling support shorter than one lag step");
  table.values.resize(lags + 1);
  long n = static_cast<long>(sf.samples.size());
  for (long lag = 0; lag <= lags; ++lag) {
    double acc = 0.0;
    for (long i = 0; i + lag < n; ++i) acc += sf.samples[i] * sf.samples[i + lag];
    table.values[lag] = acc;
  }
  double peak = table.values[0];
  if (!(peak > 0.0)) throw std::invalid_argument("degenerate pulse energy");
  for (double& v : table.values) v /= peak;
  return table;
}

}  // namespace wpdm
