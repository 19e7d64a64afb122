#include "gausscap/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Sparse>
#include <unsupported/Eigen/MatrixFunctions>

#include "gausscap/error.hpp"

namespace gausscap {

namespace {

using Complex = std::complex<double>;
using SparseR = Eigen::SparseMatrix<double>;

constexpr Complex kI{0.0, 1.0};
constexpr int kPsdCheckMaxDim = 1024;

int dimension(int n_modes, int cutoff) { return n_modes == 1 ? cutoff : cutoff * cutoff; }

void check_cutoff(int cutoff) {
  if (cutoff < 2 || cutoff > kMaxCutoff) {
    throw InvalidArgument("cutoff: must lie in [2, " + std::to_string(kMaxCutoff) + "], got " +
                          std::to_string(cutoff));
  }
}

/// Lowering operator of one mode, stored row-wise: row x maps to column
/// col[x] with value val[x] (col = -1 when the row is empty).
struct Lowering {
  std::vector<int> col;
  std::vector<double> val;
};

Lowering lowering(int n_modes, int cutoff, int mode) {
  const int dim = dimension(n_modes, cutoff);
  Lowering op{std::vector<int>(dim, -1), std::vector<double>(dim, 0.0)};
  const int stride = (n_modes == 2 && mode == 0) ? cutoff : 1;
  for (int x = 0; x < dim; ++x) {
    const int n = (n_modes == 2 && mode == 0) ? x / cutoff : x % cutoff;
    if (n + 1 < cutoff) {
      op.col[x] = x + stride;
      op.val[x] = std::sqrt(static_cast<double>(n + 1));
    }
  }
  return op;
}

/// tr(rho a)
Complex expect_a(const CMatrix& rho, const Lowering& a) {
  Complex s = 0.0;
  for (std::size_t x = 0; x < a.col.size(); ++x) {
    if (a.col[x] >= 0) s += a.val[x] * rho(a.col[x], x);
  }
  return s;
}

/// tr(rho a_j a_k)
Complex expect_aa(const CMatrix& rho, const Lowering& aj, const Lowering& ak) {
  Complex s = 0.0;
  for (std::size_t x = 0; x < aj.col.size(); ++x) {
    const int y = aj.col[x];
    if (y < 0) continue;
    const int z = ak.col[y];
    if (z < 0) continue;
    s += aj.val[x] * ak.val[y] * rho(z, x);
  }
  return s;
}

/// tr(rho a_j^dag a_k) = tr(a_k rho a_j^dag)
Complex expect_adag_a(const CMatrix& rho, const Lowering& aj, const Lowering& ak) {
  Complex s = 0.0;
  for (std::size_t x = 0; x < aj.col.size(); ++x) {
    const int y = ak.col[x];
    const int z = aj.col[x];
    if (y < 0 || z < 0) continue;
    s += ak.val[x] * aj.val[x] * rho(y, z);
  }
  return s;
}

CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

/// exp(generator) for an anti-Hermitian generator, through the Hermitian
/// eigendecomposition of i * generator.
CMatrix unitary_exp(const CMatrix& generator) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(kI * generator));
  const Eigen::VectorXcd phases = (-kI * es.eigenvalues().cast<Complex>()).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// U A U^T for real sparse U, computed as (U (U A)^T)^T so the sparse factor
/// stays on the left.
Matrix real_conjugate(const SparseR& u, const Matrix& a) {
  const Matrix ua = u * a;
  return (u * ua.transpose()).transpose();
}

FockState conjugate(const FockState& state, const SparseR& u, double extra_error) {
  CMatrix out(state.rho().rows(), state.rho().cols());
  out.real() = real_conjugate(u, state.rho().real());
  out.imag() = real_conjugate(u, state.rho().imag());
  return FockState::derived(state.n_modes(), state.cutoff(), hermitian_part(out),
                            state.truncation_error() + extra_error);
}

void require_two_mode(const FockState& s, const char* op) {
  if (s.n_modes() != 2) throw InvalidArgument(std::string(op) + ": two-mode state required");
}

}  // namespace

FockState::FockState(int n_modes, int cutoff, CMatrix rho, double truncation_error)
    : n_modes_(n_modes), cutoff_(cutoff), rho_(std::move(rho)), truncation_error_(truncation_error) {
  check_shape_and_trace();
  if (rho_.rows() <= kPsdCheckMaxDim && hermitian_min_eigenvalue(rho_) < -1e-9) {
    throw InvalidState("rho: not positive semidefinite");
  }
}

FockState::FockState(int n_modes, int cutoff, CMatrix rho, double truncation_error, Trusted)
    : n_modes_(n_modes), cutoff_(cutoff), rho_(std::move(rho)), truncation_error_(truncation_error) {
  check_shape_and_trace();
}

FockState FockState::derived(int n_modes, int cutoff, CMatrix rho, double truncation_error) {
  return {n_modes, cutoff, std::move(rho), truncation_error, Trusted{}};
}

void FockState::check_shape_and_trace() {
  if (n_modes_ != 1 && n_modes_ != 2) throw InvalidArgument("n_modes: Fock states support 1 or 2 modes");
  check_cutoff(cutoff_);
  const int dim = dimension(n_modes_, cutoff_);
  if (rho_.rows() != dim || rho_.cols() != dim) {
    throw InvalidArgument("rho: must be " + std::to_string(dim) + "x" + std::to_string(dim) +
                          " for cutoff " + std::to_string(cutoff_));
  }
  if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > 1e-10) throw InvalidState("rho: not Hermitian");
  rho_ = hermitian_part(rho_);
  const double tr = rho_.trace().real();
  if (tr > 1.0 + 1e-8) throw InvalidState("rho: trace " + std::to_string(tr) + " exceeds 1");
  trace_deficit_ = std::max(0.0, 1.0 - tr);
}

FockState fock_vacuum(int n_modes, int cutoff) {
  check_cutoff(cutoff);
  const int dim = dimension(n_modes, cutoff);
  CMatrix rho = CMatrix::Zero(dim, dim);
  rho(0, 0) = 1.0;
  return {n_modes, cutoff, rho};
}

FockState fock_pure(const std::vector<Complex>& amplitudes, int cutoff) {
  check_cutoff(cutoff);
  if (amplitudes.size() > static_cast<std::size_t>(cutoff)) {
    throw InvalidArgument("amplitudes: more entries than the cutoff");
  }
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(cutoff);
  for (std::size_t n = 0; n < amplitudes.size(); ++n) psi(n) = amplitudes[n];
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw InvalidArgument("amplitudes: zero vector");
  psi /= norm;
  return {1, cutoff, psi * psi.adjoint()};
}

FockState fock_number(int n, int cutoff) {
  if (n < 0 || n >= cutoff) throw InvalidArgument("n: must lie in [0, cutoff)");
  std::vector<Complex> amps(n + 1, 0.0);
  amps[n] = 1.0;
  return fock_pure(amps, cutoff);
}

FockState fock_coherent(Complex alpha, int cutoff) {
  check_cutoff(cutoff);
  Eigen::VectorXcd psi(cutoff);
  Complex amp = std::exp(-0.5 * std::norm(alpha));
  for (int n = 0; n < cutoff; ++n) {
    psi(n) = amp;
    amp *= alpha / std::sqrt(static_cast<double>(n + 1));
  }
  return {1, cutoff, psi * psi.adjoint()};
}

FockState fock_thermal(double mean_photons, int cutoff) {
  check_cutoff(cutoff);
  if (!(mean_photons >= 0.0)) throw InvalidArgument("mean_photons: must be >= 0");
  CMatrix rho = CMatrix::Zero(cutoff, cutoff);
  const double ratio = mean_photons / (mean_photons + 1.0);
  double p = 1.0 / (mean_photons + 1.0);
  for (int n = 0; n < cutoff; ++n) {
    rho(n, n) = p;
    p *= ratio;
  }
  return {1, cutoff, rho};
}

FockState fock_two_mode_squeezed(double r, int cutoff) {
  check_cutoff(cutoff);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(cutoff * cutoff);
  const double t = -std::tanh(r);
  double amp = 1.0 / std::cosh(r);
  for (int n = 0; n < cutoff; ++n) {
    psi(n * cutoff + n) = amp;
    amp *= t;
  }
  return {2, cutoff, psi * psi.adjoint()};
}

FockState tensor(const FockState& a, const FockState& b) {
  if (a.n_modes() != 1 || b.n_modes() != 1) throw InvalidArgument("tensor: single-mode factors required");
  if (a.cutoff() != b.cutoff()) throw InvalidArgument("tensor: cutoffs differ");
  const int c = a.cutoff();
  CMatrix rho(c * c, c * c);
  for (int i = 0; i < c; ++i) {
    for (int j = 0; j < c; ++j) rho.block(i * c, j * c, c, c) = a.rho()(i, j) * b.rho();
  }
  return FockState::derived(2, c, rho, a.truncation_error() + b.truncation_error());
}

FockState partial_trace(const FockState& state, int keep) {
  require_two_mode(state, "partial_trace");
  if (keep != 0 && keep != 1) throw InvalidArgument("keep: mode index must be 0 or 1");
  const int c = state.cutoff();
  CMatrix out = CMatrix::Zero(c, c);
  const CMatrix& rho = state.rho();
  for (int i = 0; i < c; ++i) {
    for (int j = 0; j < c; ++j) {
      Complex s = 0.0;
      for (int k = 0; k < c; ++k) {
        s += keep == 0 ? rho(i * c + k, j * c + k) : rho(k * c + i, k * c + j);
      }
      out(i, j) = s;
    }
  }
  return FockState::derived(1, c, out, state.truncation_error());
}

Moments moments_of(const FockState& state) {
  if (state.trace_deficit() > kTruncationLimit) {
    throw TruncationError("moments_of: trace deficit " + std::to_string(state.trace_deficit()) +
                          " exceeds " + std::to_string(kTruncationLimit));
  }
  const int m = state.n_modes();
  const CMatrix& rho = state.rho();
  std::vector<Lowering> ops;
  for (int j = 0; j < m; ++j) ops.push_back(lowering(m, state.cutoff(), j));

  // R_k = u_k a_j + conj(u_k) a_j^dag for the mode j = k / 2.
  const double s2 = 1.0 / std::numbers::sqrt2;
  auto coeff = [&](int k) { return k % 2 == 0 ? Complex(s2, 0.0) : Complex(0.0, -s2); };

  Moments out{Vector(2 * m), Matrix(2 * m, 2 * m)};
  std::vector<Complex> a1(m);
  for (int j = 0; j < m; ++j) a1[j] = expect_a(rho, ops[j]);
  for (int k = 0; k < 2 * m; ++k) out.mean(k) = 2.0 * (coeff(k) * a1[k / 2]).real();

  for (int k = 0; k < 2 * m; ++k) {
    for (int l = k; l < 2 * m; ++l) {
      const int j = k / 2;
      const int n = l / 2;
      const Complex uk = coeff(k);
      const Complex ul = coeff(l);
      // {R_k, R_l} = 2 Re[ 2 u_k u_l a_j a_n + u_k conj(u_l) (2 a_n^dag a_j + delta_jn) ].
      const Complex x = 2.0 * uk * ul * expect_aa(rho, ops[j], ops[n]) +
                        uk * std::conj(ul) *
                            (2.0 * expect_adag_a(rho, ops[n], ops[j]) + (j == n ? 1.0 : 0.0));
      const double anti = 2.0 * x.real();
      out.cm(k, l) = out.cm(l, k) = anti - 2.0 * out.mean(k) * out.mean(l);
    }
  }
  return out;
}

double fock_mean_photons(const FockState& state) {
  double total = 0.0;
  for (int j = 0; j < state.n_modes(); ++j) {
    const Lowering a = lowering(state.n_modes(), state.cutoff(), j);
    total += expect_adag_a(state.rho(), a, a).real();
  }
  return total;
}

FockState apply_bs(const FockState& state, double eta) {
  require_two_mode(state, "apply_bs");
  if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidArgument("eta: must lie in [0,1]");
  const int c = state.cutoff();
  const double theta = std::acos(std::sqrt(eta));
  std::vector<Eigen::Triplet<double>> trips;
  double lost = 0.0;
  // exp(theta (a^dag b - a b^dag)) conserves n_a + n_b; exact for sectors
  // N < c, which fit entirely inside the truncated space.
  for (int total = 0; total <= 2 * (c - 1); ++total) {
    const int na_min = std::max(0, total - (c - 1));
    const int na_max = std::min(c - 1, total);
    const int size = na_max - na_min + 1;
    if (total >= c) {
      for (int na = na_min; na <= na_max; ++na) {
        const int idx = na * c + (total - na);
        lost += state.rho()(idx, idx).real();
      }
    }
    Matrix gen = Matrix::Zero(size, size);
    for (int i = 0; i < size; ++i) {
      const int na = na_min + i;
      const int nb = total - na;
      if (i + 1 < size) gen(i + 1, i) = std::sqrt(static_cast<double>(nb) * (na + 1));
      if (i > 0) gen(i - 1, i) = -std::sqrt(static_cast<double>(na) * (nb + 1));
    }
    const Matrix u = (theta * gen).exp();
    for (int i = 0; i < size; ++i) {
      for (int k = 0; k < size; ++k) {
        if (u(i, k) != 0.0) {
          const int row = (na_min + i) * c + (total - na_min - i);
          const int col = (na_min + k) * c + (total - na_min - k);
          trips.emplace_back(row, col, u(i, k));
        }
      }
    }
  }
  if (lost > kTruncationLimit) {
    throw TruncationError("apply_bs: weight " + std::to_string(lost) +
                          " in photon-number sectors cut by the cutoff");
  }
  SparseR u(c * c, c * c);
  u.setFromTriplets(trips.begin(), trips.end());
  return conjugate(state, u, lost);
}

FockState apply_two_mode_squeezing(const FockState& state, double r) {
  require_two_mode(state, "apply_two_mode_squeezing");
  const int c = state.cutoff();
  std::vector<Eigen::Triplet<double>> trips;
  // exp(r (a^dag b^dag - a b)) conserves n_a - n_b; each chain is cut at the
  // top of the truncated space.
  for (int diff = -(c - 1); diff <= c - 1; ++diff) {
    const int na0 = std::max(0, diff);
    const int size = c - std::abs(diff);
    Matrix gen = Matrix::Zero(size, size);
    for (int i = 0; i + 1 < size; ++i) {
      const int na = na0 + i;
      const int nb = na - diff;
      const double w = std::sqrt(static_cast<double>(na + 1) * (nb + 1));
      gen(i + 1, i) = w;
      gen(i, i + 1) = -w;
    }
    const Matrix u = (r * gen).exp();
    for (int i = 0; i < size; ++i) {
      for (int k = 0; k < size; ++k) {
        if (u(i, k) != 0.0) {
          trips.emplace_back((na0 + i) * c + (na0 + i - diff), (na0 + k) * c + (na0 + k - diff), u(i, k));
        }
      }
    }
  }
  SparseR u(c * c, c * c);
  u.setFromTriplets(trips.begin(), trips.end());
  FockState out = conjugate(state, u, 0.0);
  // Weight that reached the top two levels of either mode was shaped by the
  // cut; use it as the error estimate.
  double edge = 0.0;
  for (int na = 0; na < c; ++na) {
    for (int nb = 0; nb < c; ++nb) {
      if (na >= c - 2 || nb >= c - 2) edge += out.rho()(na * c + nb, na * c + nb).real();
    }
  }
  if (edge > kTruncationLimit) {
    throw TruncationError("apply_two_mode_squeezing: weight " + std::to_string(edge) +
                          " at the cutoff edge");
  }
  return FockState::derived(2, c, out.rho(), state.truncation_error() + edge);
}

FockState apply_channel_fock(const FockState& state, const GaussianChannel& channel) {
  if (state.n_modes() != 1) throw InvalidArgument("apply_channel_fock: single-mode state required");
  if (channel.n_in() != 1 || channel.n_out() != 1) {
    throw NotImplemented("apply_channel_fock: only single-mode attenuation is simulated");
  }
  const double eta = channel.x()(0, 0) * channel.x()(0, 0);
  const Matrix expect_x = std::sqrt(eta) * Matrix::Identity(2, 2);
  const Matrix expect_y = (1.0 - eta) * Matrix::Identity(2, 2);
  if (!(channel.x()(0, 0) > 0.0) || eta > 1.0 + 1e-12 ||
      (channel.x() - expect_x).cwiseAbs().maxCoeff() > 1e-12 ||
      (channel.y() - expect_y).cwiseAbs().maxCoeff() > 1e-12) {
    throw NotImplemented("apply_channel_fock: only attenuation channels are simulated");
  }
  const FockState joint = tensor(state, fock_vacuum(1, state.cutoff()));
  return partial_trace(apply_bs(joint, std::min(1.0, eta)), 0);
}

FockState apply_amplifier_fock(const FockState& state, double eta) {
  if (state.n_modes() != 1) throw InvalidArgument("apply_amplifier_fock: single-mode state required");
  if (!(eta >= 1.0)) throw InvalidArgument("eta: amplifier gain must be >= 1");
  const FockState joint = tensor(state, fock_vacuum(1, state.cutoff()));
  return partial_trace(apply_two_mode_squeezing(joint, std::acosh(std::sqrt(eta))), 0);
}

FockState gaussification_round(const FockState& state) {
  if (state.n_modes() != 1) throw InvalidArgument("gaussification_round: single-mode state required");
  return partial_trace(apply_bs(tensor(state, state), 0.5), 0);
}

double trace_distance(const FockState& a, const FockState& b) {
  if (a.rho().rows() != b.rho().rows()) throw InvalidArgument("trace_distance: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(a.rho() - b.rho()), Eigen::EigenvaluesOnly);
  return std::min(1.0, 0.5 * es.eigenvalues().cwiseAbs().sum());
}

FockState gaussian_reference_fock(const Vector& mean, const Matrix& cm, int cutoff) {
  check_cutoff(cutoff);
  if (cm.rows() != 2 || cm.cols() != 2 || mean.size() != 2) {
    throw InvalidArgument("gaussian_reference_fock: single-mode moments required");
  }
  const GaussianState g(mean, cm);
  const double nu = std::sqrt(g.cm().determinant());
  Eigen::SelfAdjointEigenSolver<Matrix> es(g.cm() / nu);
  const double squeeze = 0.25 * std::log(es.eigenvalues()(1) / es.eigenvalues()(0));
  const Eigen::Vector2d axis = es.eigenvectors().col(1);
  const double theta = std::atan2(axis(1), axis(0));

  const int w = std::min(cutoff + 60, 4 * kMaxCutoff);
  CMatrix a = CMatrix::Zero(w, w);
  for (int n = 1; n < w; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  const CMatrix ad = a.adjoint();

  const double n_th = 0.5 * (nu - 1.0);
  CMatrix rho = CMatrix::Zero(w, w);
  if (n_th <= 0.0) {
    rho(0, 0) = 1.0;
  } else {
    const double ratio = n_th / (n_th + 1.0);
    double p = 1.0 / (n_th + 1.0);
    for (int n = 0; n < w; ++n) {
      rho(n, n) = p;
      p *= ratio;
    }
  }
  // Heisenberg actions: exp(s (a^dag^2 - a^2)/2) -> diag(e^s, e^-s);
  // exp(i theta a^dag a) -> rotation by theta; D(alpha) shifts a by alpha.
  const CMatrix u_sq = unitary_exp(0.5 * squeeze * (ad * ad - a * a));
  Eigen::VectorXcd phases(w);
  for (int n = 0; n < w; ++n) phases(n) = std::exp(kI * (theta * n));
  const Complex alpha = Complex(mean(0), mean(1)) / std::numbers::sqrt2;
  const CMatrix u_disp = unitary_exp(alpha * ad - std::conj(alpha) * a);
  const CMatrix u = u_disp * phases.asDiagonal() * u_sq;
  rho = u * rho * u.adjoint();
  const CMatrix truncated = hermitian_part(rho.topLeftCorner(cutoff, cutoff));
  FockState out(1, cutoff, truncated);
  if (out.trace_deficit() > kTruncationLimit) {
    throw TruncationError("gaussian_reference_fock: moments too large for cutoff " +
                          std::to_string(cutoff) + " (trace deficit " +
                          std::to_string(out.trace_deficit()) + ")");
  }
  return out;
}

std::vector<double> gaussify(const FockState& input, int rounds) {
  if (input.n_modes() != 1) throw InvalidArgument("gaussify: single-mode input required");
  if (rounds < 1) throw InvalidArgument("rounds: must be >= 1");
  const Moments m = moments_of(input);
  std::vector<double> distances;
  FockState current = input;
  for (int k = 1; k <= rounds; ++k) {
    current = gaussification_round(current);
    const Vector mean = std::pow(std::numbers::sqrt2, k) * m.mean;
    distances.push_back(trace_distance(current, gaussian_reference_fock(mean, m.cm, input.cutoff())));
  }
  return distances;
}

}  // namespace gausscap
