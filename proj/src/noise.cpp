#include "wpdm/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wpdm {

std::string to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::GaussianOnly: return "gaussian";
    case NoiseKind::BernoulliGaussian: return "bernoulli_gaussian";
    case NoiseKind::ClassA: return "class_a";
  }
  return "unknown";
}

NoiseKind noise_kind_from_string(const std::string& name) {
  if (name == "gaussian") return NoiseKind::GaussianOnly;
  if (name == "bernoulli_gaussian") return NoiseKind::BernoulliGaussian;
  if (name == "class_a") return NoiseKind::ClassA;
  throw std::invalid_argument("unknown noise kind: " + name);
}

NoiseModelSpec NoiseModelSpec::scaled(double factor) const {
  if (!(factor > 0.0)) throw std::invalid_argument("scale factor must be positive");
  NoiseModelSpec out = *this;
  out.gaussian_var *= factor;  // impulse_var tracks via the fixed ratio
  return out;
}

void validate(const NoiseModelSpec& spec) {
  if (!(spec.gaussian_var > 0.0))
    throw std::invalid_argument("background variance must be positive");
  if (!(spec.gamma_ratio > 0.0))
    throw std::invalid_argument("variance ratio must be positive");
  if (!(spec.p_impulse >= 0.0 && spec.p_impulse <= 1.0))
    throw std::invalid_argument("mixture probability must lie in [0, 1]");
  if (spec.kind == NoiseKind::ClassA && !(spec.impulse_index > 0.0))
    throw std::invalid_argument("impulse index A must be positive");
  if (spec.kind == NoiseKind::BernoulliGaussian) {
    if (!(spec.bernoulli_rho > 0.0 && spec.bernoulli_rho < 1.0))
      throw std::invalid_argument("gate probability must lie in (0, 1)");
    if (!(spec.occurrence_freq > 0.0))
      throw std::invalid_argument("occurrence frequency must be positive");
    if (spec.slots < 1) throw std::invalid_argument("slot count must be >= 1");
  }
}

double combined_variance(const NoiseModelSpec& spec) {
  validate(spec);
  switch (spec.kind) {
    case NoiseKind::GaussianOnly:
      return spec.gaussian_var;
    case NoiseKind::BernoulliGaussian:
      return spec.gaussian_var +
             static_cast<double>(spec.slots) * spec.impulse_var() / spec.bernoulli_rho;
    case NoiseKind::ClassA: {
      double acc = spec.gaussian_var;
      for (int k = 1; k <= 5; ++k)
        acc += spec.impulse_var() / (k * spec.impulse_index);
      return acc;
    }
  }
  throw std::invalid_argument("unknown noise kind");
}

double conditional_sqrt_poisson_mean(double a) {
  if (!(a > 0.0)) throw std::invalid_argument("rate must be positive");
  double denom = -std::expm1(-a);
  double term = std::exp(-a) * a;
  double acc = 0.0;
  for (int k = 1; k < 400; ++k) {
    acc += std::sqrt(static_cast<double>(k)) * term;
    term *= a / (k + 1);
    if (term < 1e-18 && k > static_cast<int>(a) + 8) break;
  }
  return acc / denom;
}

double mixture_mean_variance(const NoiseModelSpec& spec) {
  validate(spec);
  double p = spec.p_impulse;
  switch (spec.kind) {
    case NoiseKind::GaussianOnly:
      return spec.gaussian_var;
    case NoiseKind::BernoulliGaussian:
      return (1.0 - p) * spec.gaussian_var +
             p * spec.bernoulli_rho * spec.occurrence_freq * spec.impulse_var();
    case NoiseKind::ClassA:
      return (1.0 - p) * spec.gaussian_var +
             p * conditional_sqrt_poisson_mean(spec.impulse_index) *
                 spec.impulse_var() / spec.impulse_index;
  }
  throw std::invalid_argument("unknown noise kind");
}

NoiseRealization sample_noise(const NoiseModelSpec& spec, int rows, int cols,
                              SubstreamRng& rng) {
  validate(spec);
  if (rows < 1 || cols < 1)
    throw std::invalid_argument("noise shape must be positive");

  NoiseRealization out;
  out.e = CMatrix(rows, cols);
  out.total_columns = cols;

  constexpr double half = 0.70710678118654752440;  // split variance re/im
  for (int t = 0; t < cols; ++t) {
    bool impulsive =
        spec.p_impulse > 0.0 && rng.next_double() < spec.p_impulse;
    double sigma;  // per-entry amplitude std dev (sqrt of total variance)
    if (!impulsive) {
      sigma = std::sqrt(spec.gaussian_var);
    } else {
      ++out.impulsive_columns;
      switch (spec.kind) {
        case NoiseKind::GaussianOnly:
          sigma = std::sqrt(spec.gaussian_var);
          break;
        case NoiseKind::BernoulliGaussian: {
          bool gate = rng.next_double() < spec.bernoulli_rho;
          sigma = gate ? std::sqrt(spec.occurrence_freq * spec.impulse_var())
                       : 0.0;
          break;
        }
        case NoiseKind::ClassA: {
          uint32_t kappa = rng.next_poisson_ge1(spec.impulse_index);
          sigma = std::sqrt(std::sqrt(static_cast<double>(kappa)) *
                            spec.impulse_var() / spec.impulse_index);
          break;
        }
        default:
          throw std::invalid_argument("unknown noise kind");
      }
    }
    double amp = sigma * half;
    for (int n = 0; n < rows; ++n) {
      if (amp == 0.0) {
        out.e.at(n, t) = cplx(0.0, 0.0);
      } else {
        out.e.at(n, t) =
            cplx(amp * rng.next_gaussian(), amp * rng.next_gaussian());
      }
    }
  }
  return out;
}

double monte_carlo_mixture_variance(const NoiseModelSpec& spec, long draws,
                                    SubstreamRng& rng) {
  if (draws < 1) throw std::invalid_argument("draw count must be positive");
  const int chunk = 10000;
  double acc = 0.0;
  long done = 0;
  while (done < draws) {
    int cols = static_cast<int>(std::min<long>(chunk, draws - done));
    NoiseRealization r = sample_noise(spec, 1, cols, rng);
    for (const cplx& v : r.e.a) acc += std::norm(v);
    done += cols;
  }
  return acc / static_cast<double>(draws);
}

}  // namespace wpdm
