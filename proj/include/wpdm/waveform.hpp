#pragma once

#include <vector>

#include "wpdm/mat.hpp"
#include "wpdm/wavelet.hpp"

namespace wpdm {

// Sample grid: OSF samples per root symbol interval T0. Grid index i sits at
// time i/OSF (in T0 units); t0_seconds only carries physical units outward.
struct SamplingParams {
  double t0_seconds = 1e-3;
  int osf = 8;
};

// Symbol interval of a tree level, in seconds: 2^level * T0.
double symbol_interval(int level, double t0_seconds);

// Unit-energy sampled symbol template for one leaf:
//   w(t) = sum_q f[q] * phi(t - q - delta),  normalized so sum w^2 * dt = 1.
struct LeafWaveform {
  std::vector<double> samples;
  int start = 0;  // grid index of samples[0] (negative for acausal pulses)
};

LeafWaveform make_leaf_waveform(const std::vector<double>& leaf_filter,
                                ScalingKind kind, double extent, int osf,
                                double delta = 0.0);

// Hard local decisions of one group's sensors, BPSK-mapped to {+1, -1}.
struct SensorDecisionFrame {
  int group = 0;
  std::vector<int> symbols;
};

// One group's waveform-coded frame. Sensor m owns TDM slot m: its symbol
// template starts slot_stride samples after sensor m-1's. Templates are much
// longer than a slot, so neighbouring symbols overlap in time by design.
struct EncodedFrame {
  int group = 0;
  std::vector<double> coded_symbols;  // s_m = x_m * (unit template gain)
  LeafWaveform waveform;              // shared unit-energy template
  int slot_stride = 0;                // leaf_shift * osf
  std::vector<int> slot_offsets;      // grid origin of sensor m's symbol
  std::vector<double> samples;        // superposed frame, samples[0] at `start`
  int start = 0;
  SamplingParams sampling;
};

EncodedFrame encode_group(const SensorDecisionFrame& frame,
                          const WaveletPacketTree& tree,
                          const ScalingFunction& sf, SamplingParams sp);

// Hot-path overload for callers that hold a precomputed template.
EncodedFrame encode_group(const SensorDecisionFrame& frame,
                          const LeafWaveform& waveform, int leaf_shift,
                          SamplingParams sp);

// Orthogonally co-scheduled groups on a shared grid (superposition; slot
// order is deterministic by group index).
struct MultiplexedSignal {
  std::vector<EncodedFrame> frames;
  std::vector<double> samples;  // sum over groups
  int start = 0;
  int length = 0;
  SamplingParams sampling;
};

MultiplexedSignal multiplex_groups(std::vector<EncodedFrame> frames);

// Matched-filter bank plus (optionally) a solve against the known template
// Gram. The Gram step is what the receiver's knowledge of the pulse
// autocorrelation buys: it removes inter-slot leakage when the scaling
// function's integer shifts are not orthogonal (spline), and is a near-no-op
// for Haar/Shannon.
struct ReconstructionBank {
  int groups = 0;
  int sensors = 0;
  int slot_stride = 0;
  double dt = 0.0;
  int frame_start = 0;
  int frame_length = 0;
  std::vector<LeafWaveform> templates;  // receiver templates, one per group
  bool decorrelate = true;
  CholeskyReal gram;  // over all (group, sensor) templates when decorrelate
};

ReconstructionBank make_reconstruction_bank(const WaveletPacketTree& tree,
                                            const ScalingFunction& sf,
                                            SamplingParams sp, int sensors,
                                            int groups, double delta = 0.0,
                                            bool decorrelate = true);

// Per-sensor statistics recovered for one group, before detection.
struct RecoveredFrame {
  int group = 0;
  CMatrix antenna_statistics;  // N x M
  std::vector<double> r;       // per-sensor antenna-average of the real part
};

// received holds one column per grid sample; received_start names the grid
// index of column 0. Template taps falling outside the received span are
// clipped.
std::vector<RecoveredFrame> reconstruct(const CMatrix& received,
                                        const ReconstructionBank& bank,
                                        int received_start);

// Convenience wrapper matching the encode-side arguments.
std::vector<RecoveredFrame> reconstruct(const CMatrix& received,
                                        const MultiplexedSignal& mux,
                                        const WaveletPacketTree& tree,
                                        const ScalingFunction& sf,
                                        double delta = 0.0,
                                        bool decorrelate = true);

// Correlation gain between the receiver template at offset delta and the
// transmit template (slot-aligned); equals 1 at delta = 0.
double template_gain(const ReconstructionBank& bank, const EncodedFrame& frame);

}  // namespace wpdm
