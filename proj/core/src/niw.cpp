#include "discgs/niw.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "discgs/error.hpp"

namespace discgs {
namespace {

constexpr double kLogPi = 1.1447298858494002;  // log(pi)

double min_eigenvalue(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) return std::numeric_limits<double>::quiet_NaN();
  return eig.eigenvalues().minCoeff();
}

// Factorizes `a` into `lower` and returns log|a|.
double cholesky_log_det(const Matrix& a, Matrix& lower) {
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() == Eigen::Success) {
    lower = llt.matrixL();
    const auto diag = lower.diagonal().array();
    if ((diag > 0.0).all() && diag.isFinite().all()) return 2.0 * diag.log().sum();
  }
  const double lam = min_eigenvalue(a);
  throw NumericalDegeneracy(
      "scale matrix is not positive-definite (min eigenvalue " + std::to_string(lam) + ")", lam);
}

// The shared closed form: log of the NIW normalizer ratio between the
// updated parameters and the parameters being conditioned on.
double niw_log_ratio(Eigen::Index d, long n, double kappa0, double nu0, double log_det0,
                     double kappa1, double nu1, double log_det1) {
  const double dd = static_cast<double>(d);
  const int di = static_cast<int>(d);
  return -0.5 * static_cast<double>(n) * dd * kLogPi +
         0.5 * dd * (std::log(kappa0) - std::log(kappa1)) + log_multigamma(di, 0.5 * nu1) -
         log_multigamma(di, 0.5 * nu0) + 0.5 * nu0 * log_det0 - 0.5 * nu1 * log_det1;
}

void check_same_dim(Eigen::Index a, Eigen::Index b) {
  if (a != b) {
    throw InvalidArgument("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace

void NiwParams::validate() const {
  const auto d = dim();
  if (d < 1) throw InvalidArgument("NIW: dimension must be >= 1");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw InvalidArgument("NIW: kappa must be > 0");
  if (!(nu > static_cast<double>(d) - 1.0) || !std::isfinite(nu)) {
    throw InvalidArgument("NIW: nu must exceed d - 1");
  }
  if (psi.rows() != d || psi.cols() != d) throw InvalidArgument("NIW: psi must be d x d");
  if (!mu.allFinite() || !psi.allFinite()) throw InvalidArgument("NIW: non-finite parameters");
  const double scale = std::max(1.0, psi.cwiseAbs().maxCoeff());
  if ((psi - psi.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw InvalidArgument("NIW: psi is not symmetric");
  }
  Eigen::LLT<Matrix> llt(psi);
  if (llt.info() != Eigen::Success) throw InvalidArgument("NIW: psi is not positive-definite");
}

void ModelHyperParams::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("alpha must be > 0");
  g0.validate();
}

double log_multigamma(int d, double a) {
  if (d < 1) throw InvalidArgument("log_multigamma: d must be >= 1");
  if (!(a > 0.5 * (d - 1))) {
    throw InvalidArgument("log_multigamma: a must exceed (d-1)/2");
  }
  double out = 0.25 * d * (d - 1) * kLogPi;
  for (int j = 1; j <= d; ++j) out += std::lgamma(a + 0.5 * (1 - j));
  return out;
}

double log_det_spd(const Matrix& a) {
  Matrix lower;
  return cholesky_log_det(a, lower);
}

NiwParams niw_posterior(const NiwParams& prior, const SufficientStats& s) {
  check_same_dim(prior.dim(), s.dim());
  if (s.empty()) return prior;
  const double n = static_cast<double>(s.count());
  NiwParams post;
  post.kappa = prior.kappa + n;
  post.nu = prior.nu + n;
  post.mu = (prior.kappa * prior.mu + s.sum()) / post.kappa;
  const Vector diff = prior.mu - s.mean();
  post.psi = prior.psi + s.scatter() + (prior.kappa * n / post.kappa) * (diff * diff.transpose());
  post.psi = 0.5 * (post.psi + post.psi.transpose());
  return post;
}

double log_marginal(const SufficientStats& s, const NiwParams& prior) {
  check_same_dim(prior.dim(), s.dim());
  if (s.empty()) return 0.0;
  const NiwParams post = niw_posterior(prior, s);
  return niw_log_ratio(prior.dim(), s.count(), prior.kappa, prior.nu, log_det_spd(prior.psi),
                       post.kappa, post.nu, log_det_spd(post.psi));
}

double log_posterior_predictive(const SufficientStats& batch, const SufficientStats& cluster,
                                const NiwParams& prior) {
  check_same_dim(batch.dim(), cluster.dim());
  if (cluster.empty()) throw InvalidArgument("posterior predictive needs a non-empty cluster");
  return ClusterPosterior(prior, cluster).log_batch_predictive(batch);
}

double log_prior_predictive(const SufficientStats& batch, const NiwParams& prior) {
  return log_marginal(batch, prior);
}

NiwParams default_prior(const DataMatrix& data, PriorDiagnostics* diagnostics) {
  const auto n = data.rows();
  const auto d = data.cols();
  if (n < 2) throw InvalidArgument("default prior needs at least 2 observations");
  if (d < 1) throw InvalidArgument("default prior needs dimension >= 1");

  NiwParams prior;
  prior.mu = data.colwise().mean().transpose();
  const Matrix centered = data.rowwise() - prior.mu.transpose();
  prior.psi = (centered.transpose() * centered) / static_cast<double>(n - 1);
  prior.psi = 0.5 * (prior.psi + prior.psi.transpose());
  prior.kappa = 1.0;
  prior.nu = static_cast<double>(d) + 1.0;

  const double trace = prior.psi.trace();
  if (!(trace > 0.0) || !std::isfinite(trace)) {
    throw NumericalDegeneracy("data has zero variance; cannot build a default prior", 0.0);
  }
  PriorDiagnostics diag;
  const double per_dim = trace / static_cast<double>(d);
  if (min_eigenvalue(prior.psi) < 1e-9 * per_dim) {
    diag.ridge_applied = true;
    diag.ridge = 1e-6 * per_dim;
    prior.psi.diagonal().array() += diag.ridge;
  }
  Eigen::LLT<Matrix> llt(prior.psi);
  if (llt.info() != Eigen::Success) {
    const double lam = min_eigenvalue(prior.psi);
    throw NumericalDegeneracy("empirical covariance is degenerate even after regularization", lam);
  }
  if (diagnostics != nullptr) *diagnostics = diag;
  return prior;
}

ClusterPosterior::ClusterPosterior(const NiwParams& prior, const SufficientStats& stats)
    : params_(niw_posterior(prior, stats)) {
  log_det_psi_ = cholesky_log_det(params_.psi, chol_lower_);
  const double d = static_cast<double>(params_.dim());
  const double kappa = params_.kappa;
  const double nu = params_.nu;
  // Gamma_d((nu+1)/2) / Gamma_d(nu/2) telescopes to a ratio of two scalar
  // gamma functions.
  point_const_ = -0.5 * d * kLogPi + 0.5 * d * (std::log(kappa) - std::log(kappa + 1.0)) +
                 std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * (nu + 1.0 - d)) -
                 0.5 * log_det_psi_;
}

double ClusterPosterior::log_point_predictive(const Eigen::Ref<const Vector>& x,
                                              Vector& scratch) const {
  scratch = x - params_.mu;
  chol_lower_.triangularView<Eigen::Lower>().solveInPlace(scratch);
  const double q = scratch.squaredNorm();
  const double c = params_.kappa / (params_.kappa + 1.0);
  // nu/2 log|psi| - (nu+1)/2 (log|psi| + log1p(c q)) folded into point_const_.
  return point_const_ - 0.5 * (params_.nu + 1.0) * std::log1p(c * q);
}

double ClusterPosterior::log_batch_predictive(const SufficientStats& batch) const {
  check_same_dim(params_.dim(), batch.dim());
  if (batch.empty()) return 0.0;
  const NiwParams updated = niw_posterior(params_, batch);
  Matrix lower;
  const double log_det_updated = cholesky_log_det(updated.psi, lower);
  return niw_log_ratio(params_.dim(), batch.count(), params_.kappa, params_.nu, log_det_psi_,
                       updated.kappa, updated.nu, log_det_updated);
}

}  // namespace discgs
