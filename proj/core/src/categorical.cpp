#include "discgs/categorical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "discgs/error.hpp"

namespace discgs {

double log_sum_exp(std::span<const double> v) {
  if (v.empty()) return -std::numeric_limits<double>::infinity();
  const double m = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(m)) return m;
  double acc = 0.0;
  for (double x : v) acc += std::exp(x - m);
  return m + std::log(acc);
}

std::size_t sample_log_categorical(std::span<const double> log_weights, double u) {
  if (log_weights.empty()) throw InvalidArgument("categorical draw over zero outcomes");
  const double norm = log_sum_exp(log_weights);
  if (!std::isfinite(norm)) throw InvalidArgument("categorical weights are not finite");
  double cdf = 0.0;
  for (std::size_t k = 0; k < log_weights.size(); ++k) {
    cdf += std::exp(log_weights[k] - norm);
    if (u < cdf) return k;
  }
  // Rounding left cdf slightly below 1; fall back to the last positive outcome.
  for (std::size_t k = log_weights.size(); k-- > 0;) {
    if (std::isfinite(log_weights[k])) return k;
  }
  return log_weights.size() - 1;
}

}  // namespace discgs
