#pragma once

#include <string>

#include "wpdm/mat.hpp"
#include "wpdm/rng.hpp"

namespace wpdm {

enum class NoiseKind { GaussianOnly, BernoulliGaussian, ClassA };

std::string to_string(NoiseKind kind);
NoiseKind noise_kind_from_string(const std::string& name);

// Two-component mixture: with probability 1 - p_impulse a background complex
// Gaussian of total variance gaussian_var, otherwise the impulsive component
// of the selected family. All variances are total complex-sample variances,
// split evenly between real and imaginary parts.
struct NoiseModelSpec {
  NoiseKind kind = NoiseKind::GaussianOnly;
  double gaussian_var = 1.0;    // background variance
  double gamma_ratio = 0.25;    // background-to-impulse variance ratio
  double impulse_index = 0.1;   // A: mean impulse count per event window
  double bernoulli_rho = 0.3;   // gate probability of the gated family
  double occurrence_freq = 1.0; // impulse occurrence frequency scale
  double p_impulse = 0.0;       // mixture probability of the impulsive branch
  int slots = 8;                // symbol slots entering the gated closed form

  double impulse_var() const { return gaussian_var / gamma_ratio; }
  NoiseModelSpec scaled(double factor) const;  // scales both variances
};

void validate(const NoiseModelSpec& spec);

// Closed-form combined variance used by the detection model:
//   ClassA:            gaussian_var + sum_{k=1..5} impulse_var / (k A)
//   BernoulliGaussian: gaussian_var + slots * impulse_var / rho
//   GaussianOnly:      gaussian_var
double combined_variance(const NoiseModelSpec& spec);

// True per-sample variance of the generator's mixture (calibration target).
double mixture_mean_variance(const NoiseModelSpec& spec);

// E[sqrt(kappa) | kappa >= 1] for kappa ~ Poisson(a), by series.
double conditional_sqrt_poisson_mean(double a);

struct NoiseRealization {
  CMatrix e;                 // rows x cols complex samples
  long impulsive_columns = 0;  // time samples that drew the impulsive branch
  long total_columns = 0;
};

// Draws the mixture branch (and the per-event kappa or gate) once per time
// sample (column) and shares it across all rows: impulsive events are
// common-mode across a colocated antenna array. Amplitudes are independent
// complex Gaussians per entry.
NoiseRealization sample_noise(const NoiseModelSpec& spec, int rows, int cols,
                              SubstreamRng& rng);

// Sample mean of |e|^2 over `draws` single-row samples, generated in chunks.
// Calibration check against mixture_mean_variance.
double monte_carlo_mixture_variance(const NoiseModelSpec& spec, long draws,
                                    SubstreamRng& rng);

}  // namespace wpdm
