#pragma once

#include <string>
#include <vector>

namespace wpdm {

// Residual tolerance for near-orthonormality of the truncated prototype pair
// and of the derived leaf filters.
inline constexpr double kOrthTolerance = 0.05;

// Two-channel prototype pair. h is a unit-energy truncated-sinc lowpass with
// fractional delay D = (Q-1)/(4B); g is its alternating-sign mirror.
struct PrototypeFilterPair {
  std::vector<double> h;
  std::vector<double> g;
  double bandwidth = 0.0;   // B, in units of the symbol rate
  double delay = 0.0;       // D
  int regularity = 0;       // K0 = 2K - 1 - ceil(2 log2 B)
};

// taps = Q (even), order = K with 1 <= K <= Q/2, bandwidth = B > 0.
// Throws std::invalid_argument when the parameters violate those bounds or
// leave the regularity margin K0 below 1.
PrototypeFilterPair design_prototype_filters(int taps, int order, double bandwidth);

// Largest off-zero autocorrelation / cross-correlation magnitude of (h, g) at
// even shifts; the designed pair keeps this at or below kOrthTolerance.
double max_orthonormality_residual(const PrototypeFilterPair& pair);

// Binary analysis/synthesis tree expanded to its equivalent per-leaf FIR
// filters. Leaves are in natural binary path order (root choice is the most
// significant bit; bit 0 -> h, bit 1 -> g).
struct WaveletPacketTree {
  int levels = 0;       // L = ceil(log2 Z)
  int leaf_shift = 0;   // 2^L, in symbol slots of the root grid
  std::vector<std::vector<double>> leaf_filters;  // Z entries
};

// groups = Z >= 2. For non-power-of-two Z the full 2^L tree is built and the
// first Z leaves are kept.
WaveletPacketTree build_packet_tree(const PrototypeFilterPair& pair, int groups);

// Brute-force max |<f_z1[. - j*leaf_shift], f_z2>| over distinct leaves (and
// nonzero shifts of the same leaf) for |j| <= max_slot_lag.
double max_leaf_cross_correlation(const WaveletPacketTree& tree, int max_slot_lag = 4);

enum class ScalingKind { Haar, Shannon, Spline };

std::string to_string(ScalingKind kind);
ScalingKind scaling_kind_from_string(const std::string& name);

// Closed-form pulse evaluation. Haar: 1 on [0,1). Shannon: sinc(t) truncated
// to |t| <= extent. Spline: 1-|t| on [-1,1].
double evaluate_scaling(ScalingKind kind, double t, double extent = 16.0);

struct ScalingFunction {
  ScalingKind kind = ScalingKind::Haar;
  double grid_step = 0.125;
  double extent = 16.0;          // Shannon truncation half-width, in T0 units
  double support_min = 0.0;      // grid start, in T0 units
  double support_max = 0.0;
  std::vector<double> samples;   // values on [support_min, support_max] step grid_step
  double truncation_error = 0.0; // energy lost to truncation (Shannon only)
};

// grid_step must divide the unit interval evenly and be <= 1/4.
ScalingFunction sample_scaling_function(ScalingKind kind, double grid_step,
                                        double extent = 16.0);

// Normalized autocorrelation R(tau) of a sampled pulse, R(0) = 1, symmetric,
// linearly interpolated between lag grid points and zero beyond max_lag.
struct AutocorrelationTable {
  double lag_step = 0.0;
  double max_lag = 0.0;
  std::vector<double> values;  // R(0), R(step), ..., R(max_lag)

  double operator()(double tau) const;
};

AutocorrelationTable autocorrelation(const ScalingFunction& sf);

}  // namespace wpdm
