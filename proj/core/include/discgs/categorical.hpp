#pragma once

#include <cstddef>
#include <span>

namespace discgs {

/// log(sum(exp(v))) with max-shift. -inf for an empty span or all -inf.
double log_sum_exp(std::span<const double> v);

/// Inverse-CDF draw from the categorical distribution with unnormalized
/// log-weights `log_weights`, consuming the single uniform `u` in [0, 1).
std::size_t sample_log_categorical(std::span<const double> log_weights, double u);

}  // namespace discgs
