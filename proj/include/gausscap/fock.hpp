#pragma once

#include <complex>
#include <vector>

#include "gausscap/channel.hpp"

namespace gausscap {

inline constexpr int kDefaultCutoff = 25;
inline constexpr int kMaxCutoff = 60;

/// Truncated Fock-space density matrix of one or two modes. Two-mode basis
/// index is n_a * cutoff + n_b.
///
/// `trace_deficit` is 1 - tr(rho), the weight lost to truncation.
/// `truncation_error` accumulates bounds on weight mis-evolved by truncated
/// unitaries (population in sectors that the truncated generator cuts).
class FockState {
 public:
  FockState(int n_modes, int cutoff, CMatrix rho, double truncation_error = 0.0);

  /// Skips the positivity check; for images of valid states under
  /// positivity-preserving maps (tensor products, unitaries, partial traces).
  static FockState derived(int n_modes, int cutoff, CMatrix rho, double truncation_error);

  int n_modes() const { return n_modes_; }
  int cutoff() const { return cutoff_; }
  const CMatrix& rho() const { return rho_; }
  double trace_deficit() const { return trace_deficit_; }
  double truncation_error() const { return truncation_error_; }

 private:
  struct Trusted {};
  FockState(int n_modes, int cutoff, CMatrix rho, double truncation_error, Trusted);
  void check_shape_and_trace();

  int n_modes_;
  int cutoff_;
  CMatrix rho_;
  double trace_deficit_;
  double truncation_error_;
};

/// Truncation weight above which moments and evolutions refuse to proceed.
inline constexpr double kTruncationLimit = 0.01;

FockState fock_vacuum(int n_modes, int cutoff = kDefaultCutoff);
FockState fock_number(int n, int cutoff = kDefaultCutoff);
/// Pure single-mode state sum_n amplitudes[n] |n>, normalized.
FockState fock_pure(const std::vector<std::complex<double>>& amplitudes, int cutoff = kDefaultCutoff);
FockState fock_coherent(std::complex<double> alpha, int cutoff = kDefaultCutoff);
FockState fock_thermal(double mean_photons, int cutoff = kDefaultCutoff);
/// sum_n (-tanh r)^n |n n> / cosh r, matching two_mode_squeezed(r).
FockState fock_two_mode_squeezed(double r, int cutoff = kDefaultCutoff);

FockState tensor(const FockState& a, const FockState& b);
/// Keeps mode `keep` (0 or 1) of a two-mode state.
FockState partial_trace(const FockState& state, int keep);

struct Moments {
  Vector mean;
  Matrix cm;
};

/// d_k = tr(rho R_k), cm_kl = tr(rho {R_k - d_k, R_l - d_l}) with
/// Q = (a + a^dag)/sqrt2, P = (a - a^dag)/(i sqrt2). Uses normal-ordered
/// expectation values, which are exact in the truncated space.
Moments moments_of(const FockState& state);

double fock_mean_photons(const FockState& state);

/// Conjugation by the beam-splitter unitary whose Heisenberg action is
/// beamsplitter_symplectic(eta).
FockState apply_bs(const FockState& state, double eta);

/// Conjugation by exp(r (a^dag b^dag - a b)); Heisenberg action is
/// two_mode_squeezer_symplectic(r).
FockState apply_two_mode_squeezing(const FockState& state, double r);

/// Attenuation via a beam splitter with a vacuum ancilla. Other channels
/// throw NotImplemented.
FockState apply_channel_fock(const FockState& state, const GaussianChannel& channel);

/// Amplification with gain eta > 1 via two-mode squeezing with a vacuum
/// ancilla.
FockState apply_amplifier_fock(const FockState& state, double eta);

/// rho (x) rho through a 50:50 beam splitter, keeping the sum port. Centered
/// covariance is preserved exactly; the mean is scaled by sqrt(2).
FockState gaussification_round(const FockState& state);

double trace_distance(const FockState& a, const FockState& b);

/// Single-mode Gaussian state with moments (mean, cm) built by displacing a
/// squeezed, rotated thermal state in an enlarged working space and
/// truncating to `cutoff`.
FockState gaussian_reference_fock(const Vector& mean, const Matrix& cm, int cutoff = kDefaultCutoff);

/// Trace distances to the Gaussian reference of the input after each of
/// `rounds` gaussification rounds.
std::vector<double> gaussify(const FockState& input, int rounds);

}  // namespace gausscap
