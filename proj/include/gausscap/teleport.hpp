#pragma once

#include <optional>

#include "gausscap/capacity.hpp"

namespace gausscap {

/// Centered bipartite resource for teleportation. The receiver holds the
/// first n_a modes (block A), the sender the remaining n_a modes (block B).
class TeleportResource {
 public:
  explicit TeleportResource(Matrix cm, double tol = kDefaultTol);

  int n_a() const { return static_cast<int>(cm_.rows() / 4); }
  const Matrix& cm() const { return cm_; }
  Matrix gamma_a() const { return cm_.topLeftCorner(2 * n_a(), 2 * n_a()); }
  Matrix gamma_b() const { return cm_.bottomRightCorner(2 * n_a(), 2 * n_a()); }
  Matrix gamma_c() const { return cm_.topRightCorner(2 * n_a(), 2 * n_a()); }

 private:
  Matrix cm_;
};

/// Gain of the displacement step. The matrix of displacement transformations
/// is sqrt(2) * matrix; the standard protocol uses matrix = I.
struct GainMatrix {
  Matrix matrix;

  static GainMatrix identity(int n_modes);
};

/// Lambda = diag(1, -1, 1, -1, ...).
Matrix reflection_lambda(int n_modes);

/// Gaussian channel realized by teleporting through `resource`. In the
/// cm -> X cm X^T + Y convention, X = G^T and
/// Y = Gamma_A + Gamma_C Lambda G + (Gamma_C Lambda G)^T + G^T Lambda Gamma_B Lambda G.
/// Returned unvalidated; it is CP whenever the resource is a valid state.
GaussianChannel teleport_channel(const TeleportResource& resource, const GainMatrix& gain);

/// Output moments from the characteristic-function product
/// chi_out(xi) = chi_in(G xi) * chi_resource(xi (+) Lambda G xi).
GaussianState characteristic_action(const TeleportResource& resource, const GainMatrix& gain,
                                    const GaussianState& input);

struct CertifiedRateReport {
  double entropy_bound = 0.0;  ///< max{0, S(Gamma_A) - S(Gamma)}
  GaussianChannel teleport = identity_channel(1);
  std::optional<CapacityReport> teleport_bounds;  ///< single-mode resources only
  double certified_rate = 0.0;
  double projection_epsilon = 0.0;  ///< multiple of I added to repair the CM
  std::string diagnostic;
};

/// Largest violation of cm + i sigma >= 0 that is silently repaired.
inline constexpr double kProjectionLimit = 1e-6;

/// Certifies an achievable rate for an unknown channel from the covariance
/// matrix of (T (x) id)(psi). Modes [0, n_a) are the channel output, the rest
/// the reference. Throws InvalidMeasurement when the CM violates the
/// uncertainty relation by more than kProjectionLimit.
CertifiedRateReport certify_from_moments(const Matrix& cm, int n_a,
                                         std::optional<GainMatrix> gain = std::nullopt,
                                         const OptimizerOptions& opts = {});

}  // namespace gausscap
