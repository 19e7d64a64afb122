#pragma once

#include "gausscap/gaussian_state.hpp"

namespace gausscap {

/// Gaussian channel acting as cm -> X cm X^T + Y, mean -> X mean.
///
/// X is 2*n_out x 2*n_in and Y is 2*n_out square. Capacity routines require
/// n_in == n_out; rectangular channels appear as conjugate channels of
/// dilations. A channel is either validated (complete positivity was checked
/// at construction) or explicitly flagged unvalidated.
class GaussianChannel {
 public:
  /// Throws InvalidArgument if shapes mismatch, Y is not symmetric, or the
  /// channel is not completely positive at `tol`.
  GaussianChannel(Matrix x, Matrix y, double tol = kDefaultTol);

  /// Shape-checked only. Used for channels derived from measured data, which
  /// are CP-checked separately with their own tolerance.
  static GaussianChannel unvalidated(Matrix x, Matrix y);

  int n_in() const { return static_cast<int>(x_.cols() / 2); }
  int n_out() const { return static_cast<int>(x_.rows() / 2); }
  /// Mode count of a square channel; throws InvalidArgument otherwise.
  int n_modes() const;
  const Matrix& x() const { return x_; }
  const Matrix& y() const { return y_; }
  bool validated() const { return validated_; }

 private:
  struct Unchecked {};
  GaussianChannel(Matrix x, Matrix y, Unchecked);

  Matrix x_;
  Matrix y_;
  bool validated_ = false;
};

Matrix apply(const GaussianChannel& channel, const Matrix& cm);
GaussianState apply_state(const GaussianChannel& channel, const GaussianState& state);

GaussianChannel identity_channel(int n_modes);

/// X = sqrt(eta) I, Y = (1 - eta) I for eta in (0, 1].
GaussianChannel attenuation(double eta);
/// X = sqrt(eta) I, Y = (eta - 1) I for eta > 1.
GaussianChannel amplification(double eta);
/// attenuation() or amplification() depending on eta.
GaussianChannel lossy_or_amplifying(double eta);

/// X = I, Y as given (must be positive semidefinite).
GaussianChannel classical_noise(const Matrix& y);

/// Smallest eigenvalue of Y + i sigma_out - i X sigma_in X^T.
double cp_min_eigenvalue(const GaussianChannel& channel);
bool is_cp(const GaussianChannel& channel, double tol = kDefaultTol);

/// Sequential composition: `first` is applied, then `second`.
GaussianChannel compose(const GaussianChannel& second, const GaussianChannel& first);

/// Unitary Stinespring representation with a vacuum environment.
///
/// The symplectic matrix acts on (environment, system) with blocks
///   S = [[A, B], [C, D]],  A: env->env, B: sys->env, C: env->sys, D: sys->sys.
/// The induced channel is X = D, Y = C C^T; the conjugate channel is
/// X_c = B, Y_c = A A^T.
class Dilation {
 public:
  Dilation(int n_env, int n_sys, Matrix s, double tol = kDefaultTol);

  int n_env() const { return n_env_; }
  int n_sys() const { return n_sys_; }
  const Matrix& s() const { return s_; }

  Matrix a() const { return s_.topLeftCorner(2 * n_env_, 2 * n_env_); }
  Matrix b() const { return s_.topRightCorner(2 * n_env_, 2 * n_sys_); }
  Matrix c() const { return s_.bottomLeftCorner(2 * n_sys_, 2 * n_env_); }
  Matrix d() const { return s_.bottomRightCorner(2 * n_sys_, 2 * n_sys_); }

  GaussianChannel induced_channel() const;

 private:
  int n_env_;
  int n_sys_;
  Matrix s_;
};

/// Dilation of a single-mode channel.
///
/// Attenuators, amplifiers and symplectic unitaries get one environment mode.
/// Other channels with det X > 0 are reduced to an isotropic core by
/// symplectic pre/post-processing; a core with excess noise uses a two-mode
/// environment (attenuator followed by amplifier). det X < 0 yields a
/// phase-conjugating core. Throws NotImplemented for multimode channels,
/// det X = 0, and rank-deficient noise.
Dilation dilation_of(const GaussianChannel& channel, double tol = kDefaultTol);

/// Dilation of `second` after `first`; environment modes of `first` come
/// first.
Dilation compose(const Dilation& second, const Dilation& first);

/// System -> environment map of a dilation.
GaussianChannel conjugate_channel(const Dilation& dilation);

/// Environment output block of S (cm_env (+) cm) S^T for vacuum environment.
Matrix environment_output(const Dilation& dilation, const Matrix& cm);

struct MinimalNoiseSplit {
  GaussianChannel classical;  ///< X = I, Y = Y - Y_min
  GaussianChannel minimal;    ///< X = X, Y = Y_min
};

/// channel = classical o minimal with the minimal part saturating the CP
/// inequality. For single modes Y_min = |1 - det X| Y / sqrt(det Y), which is
/// the normal-form minimal noise |1 - det X| I mapped back to the channel's
/// frame. Throws NumericalFailure if no valid split exists within tol.
MinimalNoiseSplit minimal_noise_split(const GaussianChannel& channel, double tol = kDefaultTol);

}  // namespace gausscap
