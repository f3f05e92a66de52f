#pragma once

#include <optional>

#include "discgs/sufficient_stats.hpp"
#include "discgs/types.hpp"

namespace discgs {

/// Normal-Inverse-Wishart hyper-parameters (mu, kappa, nu, psi). Used both as
/// the base distribution G0 and as per-cluster posteriors.
struct NiwParams {
  Vector mu;
  double kappa = 1.0;
  double nu = 2.0;
  Matrix psi;

  Eigen::Index dim() const noexcept { return mu.size(); }

  /// Throws InvalidArgument unless kappa > 0, nu > d - 1, psi is d x d,
  /// symmetric within 1e-12 and positive-definite.
  void validate() const;
};

/// DP concentration plus base distribution.
struct ModelHyperParams {
  double alpha = 1.0;
  NiwParams g0;

  void validate() const;
};

/// Natural log of the multivariate gamma function Gamma_d(a); a > (d-1)/2.
double log_multigamma(int d, double a);

/// log|A| for symmetric positive-definite A via Cholesky. Throws
/// NumericalDegeneracy (with a minimum-eigenvalue estimate) otherwise.
double log_det_spd(const Matrix& a);

/// Conjugate update of `prior` by the points summarized in `s`. Returns the
/// prior unchanged when s is empty.
NiwParams niw_posterior(const NiwParams& prior, const SufficientStats& s);

/// log p(x_1..x_n | prior) with the cluster parameters integrated out.
/// Zero for empty stats.
double log_marginal(const SufficientStats& s, const NiwParams& prior);

/// log p(batch | cluster, prior): joint predictive of a batch of points given
/// the points already in `cluster`. A single point is a batch of size 1.
double log_posterior_predictive(const SufficientStats& batch, const SufficientStats& cluster,
                                const NiwParams& prior);

/// log p(batch | prior); the "new cluster" term.
double log_prior_predictive(const SufficientStats& batch, const NiwParams& prior);

struct PriorDiagnostics {
  bool ridge_applied = false;
  double ridge = 0.0;
};

/// Data-driven prior: mu0 = empirical mean, psi0 = empirical covariance
/// (n - 1 divisor), kappa0 = 1, nu0 = d + 1. When the covariance's smallest
/// eigenvalue is below 1e-9 * trace / d a ridge of 1e-6 * trace / d is added.
NiwParams default_prior(const DataMatrix& data, PriorDiagnostics* diagnostics = nullptr);

/// Cached NIW posterior of one cluster: parameters plus Cholesky factor and
/// the constants needed to evaluate predictives without refactorizing.
class ClusterPosterior {
 public:
  ClusterPosterior() = default;
  /// Posterior of `prior` updated by `stats` (the prior itself when empty).
  ClusterPosterior(const NiwParams& prior, const SufficientStats& stats);

  const NiwParams& params() const noexcept { return params_; }
  double log_det_psi() const noexcept { return log_det_psi_; }

  /// log p(x | cluster). Uses the matrix determinant lemma on the rank-1
  /// update of psi; `scratch` must have size d and is overwritten.
  double log_point_predictive(const Eigen::Ref<const Vector>& x, Vector& scratch) const;

  /// log p(batch | cluster) through a fresh factorization of the updated psi.
  double log_batch_predictive(const SufficientStats& batch) const;

 private:
  NiwParams params_;
  Matrix chol_lower_;
  double log_det_psi_ = 0.0;
  // Constant part of the single-point predictive.
  double point_const_ = 0.0;
};

}  // namespace discgs
