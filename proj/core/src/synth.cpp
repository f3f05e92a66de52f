#include "discgs/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "discgs/error.hpp"

namespace discgs {

Eigen::Index GmmSpec::dim() const {
  return components.empty() ? 0 : components.front().mean.size();
}

void GmmSpec::validate() const {
  if (components.empty()) throw InvalidArgument("mixture has no components");
  if (n < 1) throw InvalidArgument("mixture sample size must be >= 1");
  const auto d = dim();
  if (d < 1) throw InvalidArgument("mixture dimension must be >= 1");
  double total = 0.0;
  for (const auto& c : components) {
    if (!(c.weight > 0.0)) throw InvalidArgument("mixture weights must be positive");
    if (c.mean.size() != d || c.covariance.rows() != d || c.covariance.cols() != d) {
      throw InvalidArgument("mixture components disagree in dimension");
    }
    Eigen::LLT<Matrix> llt(c.covariance);
    if (llt.info() != Eigen::Success) {
      throw InvalidArgument("mixture covariance is not positive-definite");
    }
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument("mixture weights must sum to 1");
}

LabeledData generate_gmm(const GmmSpec& spec) {
  spec.validate();
  const auto d = spec.dim();
  std::vector<Matrix> factors;
  std::vector<double> cdf;
  double acc = 0.0;
  for (const auto& c : spec.components) {
    factors.emplace_back(Eigen::LLT<Matrix>(c.covariance).matrixL());
    acc += c.weight;
    cdf.push_back(acc);
  }

  Rng rng(mix64(spec.seed));
  std::normal_distribution<double> normal(0.0, 1.0);
  LabeledData out;
  out.data.resize(static_cast<Eigen::Index>(spec.n), d);
  out.labels.resize(spec.n);
  Vector z(d);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const double u = uniform01(rng) * acc;
    std::size_t k = 0;
    while (k + 1 < cdf.size() && u >= cdf[k]) ++k;
    for (Eigen::Index r = 0; r < d; ++r) z(r) = normal(rng);
    out.data.row(static_cast<Eigen::Index>(i)) =
        (spec.components[k].mean + factors[k] * z).transpose();
    out.labels[i] = static_cast<int>(k);
  }
  return out;
}

std::vector<double> stick_breaking_weights(std::span<const double> fractions) {
  if (fractions.empty()) throw InvalidArgument("stick-breaking truncation must be >= 1");
  std::vector<double> weights(fractions.size());
  double remaining = 1.0;
  double assigned = 0.0;
  for (std::size_t k = 0; k + 1 < fractions.size(); ++k) {
    const double v = fractions[k];
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("stick fraction outside [0, 1]");
    weights[k] = v * remaining;
    remaining *= 1.0 - v;
    assigned += weights[k];
  }
  // Rounding can push the assigned mass an ulp past 1.
  weights.back() = std::max(0.0, 1.0 - assigned);
  return weights;
}

std::vector<double> sample_stick_breaking(double alpha, int truncation, Rng& rng) {
  if (!(alpha > 0.0)) throw InvalidArgument("alpha must be > 0");
  if (truncation < 1) throw InvalidArgument("stick-breaking truncation must be >= 1");
  std::gamma_distribution<double> head(1.0, 1.0);
  std::gamma_distribution<double> tail(alpha, 1.0);
  std::vector<double> v(static_cast<std::size_t>(truncation));
  for (auto& vk : v) {
    const double a = head(rng);
    const double b = tail(rng);
    vk = a / (a + b);
  }
  return stick_breaking_weights(v);
}

namespace {

constexpr std::uint64_t kLayoutSeed = 0x5eedc0de;

GmmSpec ten_component_layout(std::size_t n, std::uint64_t seed) {
  Rng layout(kLayoutSeed);
  GmmSpec spec;
  spec.n = n;
  spec.seed = seed;
  for (int k = 0; k < 10; ++k) {
    GmmComponent c;
    c.weight = 0.1;
    c.mean = Vector(2);
    c.mean(0) = -20.0 + 40.0 * uniform01(layout);
    c.mean(1) = -20.0 + 40.0 * uniform01(layout);
    c.covariance = Matrix::Identity(2, 2);
    spec.components.push_back(std::move(c));
  }
  return spec;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"synth-2-separated", "synth-20k", "synth-40k", "synth-60k",
          "synth-80k",         "synth-100k", "synth-1m"};
}

GmmSpec preset(std::string_view name, std::uint64_t seed) {
  if (name == "synth-2-separated") {
    GmmSpec spec;
    spec.n = 200;
    spec.seed = seed;
    for (double m : {-10.0, 10.0}) {
      spec.components.push_back({0.5, Vector::Constant(2, m), Matrix::Identity(2, 2)});
    }
    return spec;
  }
  if (name == "synth-20k") return ten_component_layout(20'000, seed);
  if (name == "synth-40k") return ten_component_layout(40'000, seed);
  if (name == "synth-60k") return ten_component_layout(60'000, seed);
  if (name == "synth-80k") return ten_component_layout(80'000, seed);
  if (name == "synth-100k") return ten_component_layout(100'000, seed);
  if (name == "synth-1m") return ten_component_layout(1'000'000, seed);
  std::string known;
  for (const auto& p : preset_names()) known += (known.empty() ? "" : ", ") + p;
  throw InvalidArgument("unknown preset '" + std::string(name) + "'; known presets: " + known);
}

}  // namespace discgs
