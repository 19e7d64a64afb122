#include "gausscap/teleport.hpp"

#include <algorithm>
#include <string>

#include "gausscap/error.hpp"

namespace gausscap {

TeleportResource::TeleportResource(Matrix cm, double tol) : cm_(std::move(cm)) {
  const int n = mode_count(cm_, "resource.cm");
  if (n % 2 != 0) {
    throw InvalidArgument("resource.cm: needs equal receiver and sender halves, got " +
                          std::to_string(n) + " modes");
  }
  if (!is_valid_cm(cm_, tol)) throw InvalidState("resource.cm: not a valid covariance matrix");
  cm_ = 0.5 * (cm_ + cm_.transpose()).eval();
}

GainMatrix GainMatrix::identity(int n_modes) {
  return {Matrix::Identity(2 * n_modes, 2 * n_modes)};
}

Matrix reflection_lambda(int n_modes) {
  Vector diag(2 * n_modes);
  for (int k = 0; k < n_modes; ++k) {
    diag(2 * k) = 1.0;
    diag(2 * k + 1) = -1.0;
  }
  return diag.asDiagonal();
}

namespace {

void check_gain(const TeleportResource& resource, const GainMatrix& gain) {
  const int d = 2 * resource.n_a();
  if (gain.matrix.rows() != d || gain.matrix.cols() != d) {
    throw InvalidArgument("gain: must be " + std::to_string(d) + "x" + std::to_string(d) +
                          " to match the resource");
  }
  if (!gain.matrix.allFinite()) throw InvalidArgument("gain: non-finite entries");
}

}  // namespace

GaussianChannel teleport_channel(const TeleportResource& resource, const GainMatrix& gain) {
  check_gain(resource, gain);
  const Matrix& g = gain.matrix;
  const Matrix lambda = reflection_lambda(resource.n_a());
  const Matrix cross = resource.gamma_c() * lambda * g;
  Matrix y = resource.gamma_a() + cross + cross.transpose() +
             g.transpose() * lambda.transpose() * resource.gamma_b() * lambda * g;
  y = 0.5 * (y + y.transpose()).eval();
  return GaussianChannel::unvalidated(g.transpose(), y);
}

GaussianState characteristic_action(const TeleportResource& resource, const GainMatrix& gain,
                                    const GaussianState& input) {
  check_gain(resource, gain);
  const int n = resource.n_a();
  if (input.n_modes() != n) throw InvalidArgument("input: mode count does not match the resource");
  const Matrix& g = gain.matrix;
  // The resource factor is evaluated at L xi with L = [I; Lambda G], so it
  // contributes L^T Gamma L to the quadratic form.
  Matrix l(4 * n, 2 * n);
  l.topRows(2 * n) = Matrix::Identity(2 * n, 2 * n);
  l.bottomRows(2 * n) = reflection_lambda(n) * g;
  Matrix cm = g.transpose() * input.cm() * g + l.transpose() * resource.cm() * l;
  cm = 0.5 * (cm + cm.transpose()).eval();
  return {g.transpose() * input.mean(), cm, 1e-8};
}

CertifiedRateReport certify_from_moments(const Matrix& cm, int n_a, std::optional<GainMatrix> gain,
                                         const OptimizerOptions& opts) {
  const int n = mode_count(cm, "cm");
  if (n_a < 1 || n_a >= n) {
    throw InvalidArgument("modes_a: must lie in [1, " + std::to_string(n - 1) + "], got " +
                          std::to_string(n_a));
  }
  if (!is_symmetric(cm, 1e-9)) throw InvalidMeasurement("cm: not symmetric");
  Matrix repaired = 0.5 * (cm + cm.transpose());
  CertifiedRateReport rep;
  const double lo = uncertainty_min_eigenvalue(repaired);
  if (lo < 0.0) {
    if (lo < -kProjectionLimit) {
      throw InvalidMeasurement("cm: violates cm + i*sigma >= 0 by " + std::to_string(-lo) +
                               ", beyond the projection limit " + std::to_string(kProjectionLimit));
    }
    rep.projection_epsilon = -lo * (1.0 + 1e-9) + 1e-15;
    repaired += rep.projection_epsilon * Matrix::Identity(2 * n, 2 * n);
  }

  std::vector<int> a_modes(n_a);
  for (int k = 0; k < n_a; ++k) a_modes[k] = k;
  const double bound = entropy(select_modes(repaired, a_modes)) - entropy(repaired);
  rep.entropy_bound = std::max(0.0, bound);
  rep.certified_rate = rep.entropy_bound;

  if (2 * n_a != n) {
    rep.diagnostic = "unequal halves: teleportation channel not constructed";
    return rep;
  }
  const TeleportResource resource(repaired, 1e-8);
  const GainMatrix g = gain.value_or(GainMatrix::identity(n_a));
  rep.teleport = teleport_channel(resource, g);
  if (n_a == 1) {
    CapacityReport bounds = capacity_bounds(rep.teleport, opts);
    if (!bounds.lower.infinite) rep.certified_rate = std::max(rep.certified_rate, bounds.lower.bits);
    rep.teleport_bounds = std::move(bounds);
  } else {
    rep.diagnostic = "multimode teleportation channel: capacity bounds not evaluated";
  }
  return rep;
}

}  // namespace gausscap
