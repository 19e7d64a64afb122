#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gausscap/channel.hpp"

namespace gausscap {

enum class Verdict { Degradable, AntiDegradable, Both, Neither, Inconclusive };

/// Which degradability test produced a verdict.
///   ComplementaryCP: (I + i sigma) - K (I + i sigma) K^T >= 0 with
///                    K = C^T D^{-T} sigma D^{-1} C, needs a dilation.
///   NoiseProduct:    (2 X sigma X^T sigma^T - I) Y >= 0, valid when the
///                    environment is as large as the system.
enum class Criterion { ComplementaryCP, NoiseProduct };

const char* to_string(Verdict v);
const char* to_string(Criterion c);

struct Classification {
  Verdict verdict = Verdict::Inconclusive;
  Criterion criterion = Criterion::NoiseProduct;
  CMatrix witness;       ///< criterion matrix
  double min_eig = 0.0;  ///< extreme (real parts of) eigenvalues of the witness
  double max_eig = 0.0;
  std::string diagnostic;
};

inline constexpr double kClassifyTol = 1e-8;

/// Noise-product test on (X, Y). For single modes this is the decisive test
/// when the channel admits a one-mode environment; see classify(channel).
Classification classify_noise_product(const GaussianChannel& channel, double tol = kClassifyTol);

/// Complementary-CP test on a dilation. Inconclusive when D is singular.
Classification classify(const Dilation& dilation, double tol = kClassifyTol);

/// Picks the test: single-mode channels saturating the CP bound (one-mode
/// environment) with invertible Y use the noise-product test; everything else
/// goes through dilation_of and the complementary-CP test. Never throws on
/// unsupported structure; returns Inconclusive with a diagnostic instead.
Classification classify(const GaussianChannel& channel, double tol = kClassifyTol);

/// Capacity in bits per use; `infinite` marks the noiseless limit.
struct Rate {
  double bits = 0.0;
  bool infinite = false;

  static Rate finite(double b) { return {b, false}; }
  static Rate unbounded() { return {0.0, true}; }
};

bool operator<=(const Rate& a, const Rate& b);

/// max{0, log2|eta| - log2|1 - eta|}, infinite at eta = 1. Accepts any real
/// (used with eta = det X, which may be negative).
Rate lossy_rate(double eta);

/// Closed form for attenuation/amplification; throws for eta <= 0.
Rate capacity_lossy(double eta);

/// J = S(T(cm)) - S(T_c(cm)) for a dilation with vacuum environment.
double coherent_information_gaussian(const Matrix& cm, const Dilation& dilation);

/// J = S(T(cm)) - S((T (x) id)(psi)) with psi a Gaussian purification of cm.
/// Needs only (X, Y); independent of any dilation.
double coherent_information_purified(const Matrix& cm, const GaussianChannel& channel);

enum class CapacityMethod { ClosedForm, DegradableGaussianOpt, BoundsOnly, Certified };
const char* to_string(CapacityMethod m);

/// Input found by the single-mode optimizer:
/// cm = (2 n_th + 1) R(phi) diag(e^{2s}, e^{-2s}) R(phi)^T.
struct OptimizerState {
  Matrix input_cm;
  double n_th = 0.0;
  double squeezing = 0.0;
  double angle = 0.0;
  double mean_photons = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct CapacityReport {
  CapacityMethod method = CapacityMethod::ClosedForm;
  std::optional<Rate> value;  ///< present when the capacity is known exactly
  Rate lower;
  Rate upper;
  std::optional<Verdict> verdict;
  std::optional<OptimizerState> optimizer;
  std::string diagnostic;
};

/// Single-mode Gaussian input with the given parameters.
Matrix gaussian_input_cm(double n_th, double squeezing, double angle);

struct OptimizerOptions {
  double extrapolation_tol = 1e-4;  ///< successive Richardson estimates
  double max_photons_cap = 1e6;
  double line_tol = 1e-10;          ///< golden-section bracket width
  int max_sweeps = 60;
};

/// Maximizes a single-mode coherent-information functional over Gaussian
/// inputs with mean photon number <= budget.
OptimizerState maximize_gaussian_input(const std::function<double(const Matrix&)>& objective,
                                       double budget, const OptimizerOptions& opts = {});

/// Capacity of a degradable single-mode channel, optionally under a mean
/// photon constraint. Throws PreconditionError unless the dilation classifies
/// as Degradable or Both; Both yields exactly 0.
CapacityReport capacity_degradable(const GaussianChannel& channel, const Dilation& dilation,
                                   std::optional<double> max_photons = std::nullopt,
                                   const OptimizerOptions& opts = {});

/// Interval [lower, upper] for any CP single-mode channel: the upper end from
/// the minimal-noise factor (closed form at eta = det X), the lower end from
/// the best Gaussian coherent information found.
CapacityReport capacity_bounds(const GaussianChannel& channel, const OptimizerOptions& opts = {});

struct BroadbandMode {
  double omega = 1.0;
  double eta = 1.0;
};

struct BroadbandSpec {
  std::vector<BroadbandMode> modes;
  double energy = 0.0;
};

struct BroadbandResult {
  std::vector<double> allocation;  ///< mean photons N_i per mode
  std::vector<double> mode_bits;   ///< J_i(N_i)
  double total_bits = 0.0;
  double multiplier = 0.0;         ///< Lagrange multiplier lambda
  double kkt_residual = 0.0;       ///< max_i |dJ_i/dN_i - lambda omega_i| over active modes
  double energy_residual = 0.0;    ///< |sum omega_i N_i - E| / max(E, 1e-300)
};

/// dJ/dN for J(N) = g(eta N) - g((1 - eta) N).
double thermal_rate_derivative(double eta, double n);

/// Maximizes sum_i g(eta_i N_i) - g((1 - eta_i) N_i) subject to
/// sum_i omega_i N_i = E, N_i >= 0. Modes with eta_i <= 1/2 get nothing.
BroadbandResult broadband_capacity(const BroadbandSpec& spec);

struct LengthPoint {
  double l_over_la = 0.0;
  Rate q;
};

/// Capacity of the lossy channel with eta = exp(-l/l_a) on each grid point.
std::vector<LengthPoint> transmission_length_curve(const std::vector<double>& l_over_la);

}  // namespace gausscap
