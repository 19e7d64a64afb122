#include "gausscap/gaussian_state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gausscap/error.hpp"

namespace gausscap {

GaussianState::GaussianState(Vector mean, Matrix cm, double tol)
    : mean_(std::move(mean)), cm_(std::move(cm)) {
  const int n = mode_count(cm_, "cm");
  if (mean_.size() != 2 * n) {
    throw InvalidArgument("mean: length " + std::to_string(mean_.size()) +
                          " does not match cm dimension " + std::to_string(2 * n));
  }
  if (!cm_.allFinite() || !mean_.allFinite()) throw InvalidState("cm/mean: non-finite entries");
  if (!is_symmetric(cm_, tol)) throw InvalidState("cm: not symmetric within tolerance");
  cm_ = 0.5 * (cm_ + cm_.transpose()).eval();
  const double lo = uncertainty_min_eigenvalue(cm_);
  if (lo < -scaled_tolerance(tol, cm_)) {
    throw InvalidState("cm: violates cm + i*sigma >= 0 (min eigenvalue " + std::to_string(lo) + ")");
  }
}

void ModePartition::validate(int n_modes) const {
  std::vector<int> seen(n_modes, 0);
  for (int idx : subset_a) {
    if (idx < 0 || idx >= n_modes) {
      throw InvalidArgument("partition: mode index " + std::to_string(idx) + " out of range [0," +
                            std::to_string(n_modes) + ")");
    }
    if (seen[idx]++) throw InvalidArgument("partition: duplicate mode index " + std::to_string(idx));
  }
}

std::vector<int> ModePartition::complement(int n_modes) const {
  validate(n_modes);
  std::vector<int> out;
  for (int k = 0; k < n_modes; ++k) {
    if (std::find(subset_a.begin(), subset_a.end(), k) == subset_a.end()) out.push_back(k);
  }
  return out;
}

GaussianState vacuum(int n_modes) {
  if (n_modes < 1) throw InvalidArgument("n_modes: must be >= 1");
  return {Vector::Zero(2 * n_modes), Matrix::Identity(2 * n_modes, 2 * n_modes)};
}

GaussianState thermal(double mean_photons) {
  if (!(mean_photons >= 0.0)) {
    throw InvalidArgument("mean_photons: must be >= 0, got " + std::to_string(mean_photons));
  }
  return {Vector::Zero(2), (2.0 * mean_photons + 1.0) * Matrix::Identity(2, 2)};
}

GaussianState coherent(const Vector& mean) {
  const auto n = mean.size();
  if (n == 0 || n % 2 != 0) throw InvalidArgument("mean: length must be even and positive");
  return {mean, Matrix::Identity(n, n)};
}

GaussianState two_mode_squeezed(double r) {
  if (!(r >= 0.0)) throw InvalidArgument("r: squeezing must be >= 0");
  const double c = std::cosh(2.0 * r);
  const double s = kTmsCrossSign * std::sinh(2.0 * r);
  Matrix cm = Matrix::Zero(4, 4);
  cm.diagonal().setConstant(c);
  cm(0, 2) = cm(2, 0) = s;
  cm(1, 3) = cm(3, 1) = -s;
  return {Vector::Zero(4), cm};
}

Matrix select_modes(const Matrix& cm, const std::vector<int>& modes) {
  const auto k = static_cast<Eigen::Index>(modes.size());
  Matrix out(2 * k, 2 * k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      out.block(2 * i, 2 * j, 2, 2) = cm.block(2 * modes[i], 2 * modes[j], 2, 2);
    }
  }
  return out;
}

Vector select_modes(const Vector& mean, const std::vector<int>& modes) {
  Vector out(2 * modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i) out.segment(2 * i, 2) = mean.segment(2 * modes[i], 2);
  return out;
}

GaussianState partial_trace(const GaussianState& state, const ModePartition& keep) {
  keep.validate(state.n_modes());
  if (keep.subset_a.empty()) throw InvalidArgument("partition: must keep at least one mode");
  return {select_modes(state.mean(), keep.subset_a), select_modes(state.cm(), keep.subset_a)};
}

double mode_entropy(double nu) {
  const double b = 0.5 * (nu - 1.0);
  if (b <= 0.0) return 0.0;
  const double xlogx = b * std::log2(b);
  if (b < 0.5e-6) {
    // (1+b) ln(1+b) = b + b^2/2 - b^3/6 + ...
    return (b + 0.5 * b * b - b * b * b / 6.0) / std::numbers::ln2 - xlogx;
  }
  return (1.0 + b) * std::log2(1.0 + b) - xlogx;
}

double thermal_entropy(double mean_photons) { return mode_entropy(2.0 * mean_photons + 1.0); }

double entropy(const Matrix& cm) {
  const int n = mode_count(cm, "cm");
  if (n == 1) {
    const double det = cm(0, 0) * cm(1, 1) - cm(0, 1) * cm(1, 0);
    if (!(det > 0.0) || cm(0, 0) <= 0.0) throw InvalidState("cm: not positive definite");
    return mode_entropy(std::sqrt(det));
  }
  double s = 0.0;
  for (double nu : symplectic_eigenvalues(cm)) s += mode_entropy(nu);
  return s;
}

double entropy(const GaussianState& state) { return entropy(state.cm()); }

double conditional_entropy(const GaussianState& state, const ModePartition& partition) {
  const auto b = partition.complement(state.n_modes());
  const double joint = entropy(state.cm());
  if (b.empty()) return joint;
  return joint - entropy(select_modes(state.cm(), b));
}

double mean_photons(const Matrix& cm, const Vector& mean) {
  const int n = mode_count(cm, "cm");
  return (cm.trace() - 2.0 * n) / 4.0 + mean.squaredNorm() / 2.0;
}

double mean_photons(const GaussianState& state) { return mean_photons(state.cm(), state.mean()); }

GaussianState purification(const GaussianState& state) {
  const int n = state.n_modes();
  const Williamson w = williamson(state.cm());
  Matrix core = Matrix::Zero(4 * n, 4 * n);
  for (int k = 0; k < n; ++k) {
    const double nu = std::max(w.nu[k], 1.0);
    const double cross = kTmsCrossSign * std::sqrt(std::max(0.0, nu * nu - 1.0));
    const int sys = 2 * k;
    const int anc = 2 * (n + k);
    core(sys, sys) = core(sys + 1, sys + 1) = nu;
    core(anc, anc) = core(anc + 1, anc + 1) = nu;
    core(sys, anc) = core(anc, sys) = cross;
    core(sys + 1, anc + 1) = core(anc + 1, sys + 1) = -cross;
  }
  const Matrix lift = direct_sum(w.symplectic, Matrix::Identity(2 * n, 2 * n));
  Matrix cm = lift * core * lift.transpose();
  cm = 0.5 * (cm + cm.transpose()).eval();
  Vector mean = Vector::Zero(4 * n);
  mean.head(2 * n) = state.mean();
  return {mean, cm, 1e-7};
}

GaussianState gaussification_reference(const Vector& mean, const Matrix& cm) { return {mean, cm}; }

}  // namespace gausscap
