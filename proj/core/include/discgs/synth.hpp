#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "discgs/rng.hpp"
#include "discgs/types.hpp"

namespace discgs {

struct GmmComponent {
  double weight = 1.0;
  Vector mean;
  Matrix covariance;
};

/// A finite Gaussian mixture to sample synthetic data from.
struct GmmSpec {
  std::vector<GmmComponent> components;
  std::size_t n = 0;
  std::uint64_t seed = 0;

  Eigen::Index dim() const;
  /// Weights positive and summing to 1 within 1e-9, shared dimension,
  /// positive-definite covariances, n >= 1.
  void validate() const;
};

struct LabeledData {
  DataMatrix data;
  Labels labels;
};

/// Draws n points: a component per point from the mixture weights, then the
/// point from that component's Gaussian. Deterministic per spec.seed.
LabeledData generate_gmm(const GmmSpec& spec);

/// Truncated stick-breaking weights from stick fractions v_1..v_T:
/// pi_k = v_k prod_{l<k} (1 - v_l) for k < T, and the last atom takes all the
/// remaining mass, so the weights sum to 1.
std::vector<double> stick_breaking_weights(std::span<const double> fractions);

/// Draws v_k ~ Beta(1, alpha) i.i.d. for k = 1..T and returns the weights.
std::vector<double> sample_stick_breaking(double alpha, int truncation, Rng& rng);

/// Named benchmark mixtures: "synth-2-separated" (two unit Gaussians at
/// (-10,-10) and (10,10), n = 200) and "synth-20k" .. "synth-100k",
/// "synth-1m" (K = 10, d = 2, equal weights, identity covariances, means
/// drawn once uniformly in [-20, 20]^2). `seed` drives point sampling only.
/// Throws InvalidArgument listing the known names for an unknown preset.
GmmSpec preset(std::string_view name, std::uint64_t seed);
std::vector<std::string> preset_names();

}  // namespace discgs
