#pragma once

#include <vector>

#include "gausscap/symplectic.hpp"

namespace gausscap {

/// Sign of the cross-correlation block of the two-mode squeezed state,
/// Gamma_C = kTmsCrossSign * sinh(2r) * diag(1,-1). Shared with the
/// teleportation module: with Lambda = diag(1,-1,...) and unit gain this sign
/// makes the added noise 2 e^{-2r} I, which vanishes as r grows.
inline constexpr double kTmsCrossSign = -1.0;

/// First and second moments of a Gaussian state. The covariance matrix
/// satisfies cm + i sigma >= 0; the vacuum has cm = I.
class GaussianState {
 public:
  /// Validates symmetry and the uncertainty relation at `tol`.
  GaussianState(Vector mean, Matrix cm, double tol = kDefaultTol);

  int n_modes() const { return static_cast<int>(cm_.rows() / 2); }
  const Vector& mean() const { return mean_; }
  const Matrix& cm() const { return cm_; }

 private:
  Vector mean_;
  Matrix cm_;
};

/// Ordered subset of mode indices ("A"); the complement ("B") keeps the
/// original order.
struct ModePartition {
  std::vector<int> subset_a;

  /// Throws InvalidArgument on duplicates or out-of-range indices.
  void validate(int n_modes) const;
  std::vector<int> complement(int n_modes) const;
};

GaussianState vacuum(int n_modes);
GaussianState thermal(double mean_photons);
GaussianState coherent(const Vector& mean);
GaussianState two_mode_squeezed(double r);

/// Rows/columns of the listed modes, in the listed order.
Matrix select_modes(const Matrix& cm, const std::vector<int>& modes);
Vector select_modes(const Vector& mean, const std::vector<int>& modes);

GaussianState partial_trace(const GaussianState& state, const ModePartition& keep);

/// Entropy in bits of one mode with symplectic eigenvalue nu:
/// h(nu) = (nu+1)/2 log2((nu+1)/2) - (nu-1)/2 log2((nu-1)/2).
double mode_entropy(double nu);

/// g(N) = (N+1) log2(N+1) - N log2 N, the entropy of a thermal state.
double thermal_entropy(double mean_photons);

double entropy(const Matrix& cm);
double entropy(const GaussianState& state);

/// S(AB) - S(B), with A = partition.subset_a and B its complement.
double conditional_entropy(const GaussianState& state, const ModePartition& partition);

/// (tr cm - 2N)/4 + |d|^2/2.
double mean_photons(const Matrix& cm, const Vector& mean);
double mean_photons(const GaussianState& state);

/// Pure 2N-mode state whose first N modes reproduce `state`. Ancilla modes
/// are appended after the system modes.
GaussianState purification(const GaussianState& state);

/// The Gaussian state carrying exactly the moments (mean, cm).
GaussianState gaussification_reference(const Vector& mean, const Matrix& cm);

}  // namespace gausscap
