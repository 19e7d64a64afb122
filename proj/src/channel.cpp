#include "gausscap/channel.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "gausscap/error.hpp"

namespace gausscap {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

Eigen::Matrix2d pauli_z() { return Eigen::Vector2d(1.0, -1.0).asDiagonal(); }

void check_shapes(const Matrix& x, const Matrix& y) {
  if (x.rows() == 0 || x.cols() == 0 || x.rows() % 2 != 0 || x.cols() % 2 != 0) {
    throw InvalidArgument("X: dimensions must be even and positive, got " +
                          std::to_string(x.rows()) + "x" + std::to_string(x.cols()));
  }
  if (y.rows() != x.rows() || y.cols() != x.rows()) {
    throw InvalidArgument("Y: must be " + std::to_string(x.rows()) + "x" +
                          std::to_string(x.rows()) + " to match X, got " +
                          std::to_string(y.rows()) + "x" + std::to_string(y.cols()));
  }
  if (!x.allFinite() || !y.allFinite()) throw InvalidArgument("X/Y: non-finite entries");
}

}  // namespace

GaussianChannel::GaussianChannel(Matrix x, Matrix y, Unchecked)
    : x_(std::move(x)), y_(std::move(y)) {
  check_shapes(x_, y_);
}

GaussianChannel::GaussianChannel(Matrix x, Matrix y, double tol)
    : GaussianChannel(std::move(x), std::move(y), Unchecked{}) {
  if (!is_symmetric(y_, tol)) throw InvalidArgument("Y: not symmetric within tolerance");
  y_ = 0.5 * (y_ + y_.transpose()).eval();
  const double lo = cp_min_eigenvalue(*this);
  if (lo < -scaled_tolerance(tol, y_ + x_ * x_.transpose())) {
    throw InvalidArgument("channel: violates complete positivity Y + i sigma - i X sigma X^T >= 0 "
                          "(min eigenvalue " + std::to_string(lo) + ")");
  }
  validated_ = true;
}

GaussianChannel GaussianChannel::unvalidated(Matrix x, Matrix y) {
  return GaussianChannel(std::move(x), std::move(y), Unchecked{});
}

int GaussianChannel::n_modes() const {
  if (n_in() != n_out()) {
    throw InvalidArgument("channel: expected equal input and output mode counts, got " +
                          std::to_string(n_in()) + " -> " + std::to_string(n_out()));
  }
  return n_in();
}

Matrix apply(const GaussianChannel& channel, const Matrix& cm) {
  if (cm.rows() != channel.x().cols() || cm.cols() != channel.x().cols()) {
    throw InvalidArgument("cm: dimension " + std::to_string(cm.rows()) +
                          " does not match channel input " + std::to_string(channel.x().cols()));
  }
  return channel.x() * cm * channel.x().transpose() + channel.y();
}

GaussianState apply_state(const GaussianChannel& channel, const GaussianState& state) {
  return {channel.x() * state.mean(), apply(channel, state.cm()), 1e-8};
}

GaussianChannel identity_channel(int n_modes) {
  const int d = 2 * n_modes;
  return {Matrix::Identity(d, d), Matrix::Zero(d, d)};
}

GaussianChannel attenuation(double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw InvalidArgument("eta: attenuation requires 0 < eta <= 1, got " + std::to_string(eta));
  }
  return {std::sqrt(eta) * Matrix::Identity(2, 2), (1.0 - eta) * Matrix::Identity(2, 2)};
}

GaussianChannel amplification(double eta) {
  if (!(eta > 1.0)) {
    throw InvalidArgument("eta: amplification requires eta > 1, got " + std::to_string(eta));
  }
  return {std::sqrt(eta) * Matrix::Identity(2, 2), (eta - 1.0) * Matrix::Identity(2, 2)};
}

GaussianChannel lossy_or_amplifying(double eta) {
  return eta > 1.0 ? amplification(eta) : attenuation(eta);
}

GaussianChannel classical_noise(const Matrix& y) {
  mode_count(y, "Y");
  if (!is_symmetric(y)) throw InvalidArgument("Y: not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> es(y, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -scaled_tolerance(kDefaultTol, y)) {
    throw InvalidArgument("Y: classical noise must be positive semidefinite");
  }
  return {Matrix::Identity(y.rows(), y.rows()), y};
}

double cp_min_eigenvalue(const GaussianChannel& channel) {
  const Matrix sig_out = symplectic_form(channel.n_out());
  const Matrix sig_in = symplectic_form(channel.n_in());
  const Matrix& x = channel.x();
  const Matrix anti = sig_out - x * sig_in * x.transpose();
  const CMatrix h = channel.y().cast<std::complex<double>>() + kI * anti.cast<std::complex<double>>();
  return hermitian_min_eigenvalue(0.5 * (h + h.adjoint()));
}

bool is_cp(const GaussianChannel& channel, double tol) {
  const Matrix scale = channel.y() + channel.x() * channel.x().transpose();
  return cp_min_eigenvalue(channel) >= -scaled_tolerance(tol, scale);
}

GaussianChannel compose(const GaussianChannel& second, const GaussianChannel& first) {
  if (second.x().cols() != first.x().rows()) {
    throw InvalidArgument("compose: output of first (" + std::to_string(first.n_out()) +
                          " modes) does not match input of second (" +
                          std::to_string(second.n_in()) + " modes)");
  }
  Matrix x = second.x() * first.x();
  Matrix y = second.x() * first.y() * second.x().transpose() + second.y();
  if (first.validated() && second.validated()) return {std::move(x), std::move(y), 1e-8};
  return GaussianChannel::unvalidated(std::move(x), std::move(y));
}

Dilation::Dilation(int n_env, int n_sys, Matrix s, double tol)
    : n_env_(n_env), n_sys_(n_sys), s_(std::move(s)) {
  if (n_env_ < 1 || n_sys_ < 1) throw InvalidArgument("dilation: n_env and n_sys must be >= 1");
  if (s_.rows() != 2 * (n_env_ + n_sys_) || s_.cols() != s_.rows()) {
    throw InvalidArgument("S: must be " + std::to_string(2 * (n_env_ + n_sys_)) + " square for n_env=" +
                          std::to_string(n_env_) + ", n_sys=" + std::to_string(n_sys_));
  }
  if (!is_symplectic(s_, tol)) {
    throw InvalidArgument("S: not symplectic (residual " + std::to_string(symplectic_residual(s_)) + ")");
  }
}

GaussianChannel Dilation::induced_channel() const {
  const Matrix c_block = c();
  return {d(), c_block * c_block.transpose(), 1e-8};
}

GaussianChannel conjugate_channel(const Dilation& dilation) {
  const Matrix a = dilation.a();
  return {dilation.b(), a * a.transpose(), 1e-8};
}

Matrix environment_output(const Dilation& dilation, const Matrix& cm) {
  const Matrix a = dilation.a();
  const Matrix b = dilation.b();
  return a * a.transpose() + b * cm * b.transpose();
}

namespace {

/// Places `s`, acting on the listed modes, into an identity of `n_total` modes.
Matrix embed(const Matrix& s, const std::vector<int>& modes, int n_total) {
  Matrix out = Matrix::Identity(2 * n_total, 2 * n_total);
  for (std::size_t i = 0; i < modes.size(); ++i) {
    for (std::size_t j = 0; j < modes.size(); ++j) {
      out.block(2 * modes[i], 2 * modes[j], 2, 2) = s.block(2 * i, 2 * j, 2, 2);
    }
  }
  return out;
}

Dilation attenuator_dilation(double eta) {
  const double t = std::sqrt(eta);
  const double r = std::sqrt(1.0 - eta);
  const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
  Matrix s(4, 4);
  s << t * id, -r * id, r * id, t * id;
  return {1, 1, s};
}

Dilation amplifier_dilation(double gain) {
  return {1, 1, two_mode_squeezer_symplectic(std::acosh(std::sqrt(gain)))};
}

/// X = x I, Y = mu I with x > 0 and mu >= |1 - x^2|.
Dilation isotropic_core(double x, double mu, double tol) {
  const double x2 = x * x;
  if (mu < std::abs(1.0 - x2) - tol * std::max(1.0, x2)) {
    throw InvalidArgument("channel: noise " + std::to_string(mu) +
                          " below the CP bound |1 - det X| = " + std::to_string(std::abs(1.0 - x2)));
  }
  if (std::abs(x2 - 1.0) <= tol && mu <= tol) return {1, 1, Matrix::Identity(4, 4)};
  const double gain = 0.5 * (mu + 1.0 + x2);
  const double eta = std::min(1.0, x2 / gain);
  if (std::abs(gain - 1.0) <= tol) return attenuator_dilation(std::min(1.0, x2));
  if (std::abs(eta - 1.0) <= tol) return amplifier_dilation(x2);
  return compose(amplifier_dilation(gain), attenuator_dilation(eta));
}

/// X = x Z, Y = mu I with mu >= 1 + x^2.
Dilation conjugating_core(double x, double mu, double tol) {
  const double floor = 1.0 + x * x;
  if (mu < floor - tol * floor) {
    throw InvalidArgument("channel: noise " + std::to_string(mu) + " below the CP bound 1 + |det X| = " +
                          std::to_string(floor));
  }
  const Eigen::Matrix2d z = pauli_z();
  const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
  Matrix s(4, 4);
  s << x * z, std::sqrt(floor) * id, std::sqrt(floor) * id, x * z;
  Dilation core{1, 1, s};
  if (mu - floor <= tol * floor) return core;
  return compose(isotropic_core(1.0, mu - floor, tol), core);
}

bool is_multiple_of_identity(const Matrix& m, double tol) {
  const double c = 0.5 * m.trace();
  return (m - c * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= tol * std::max(1.0, std::abs(c));
}

}  // namespace

Dilation compose(const Dilation& second, const Dilation& first) {
  if (second.n_sys() != first.n_sys()) throw InvalidArgument("compose: system sizes differ");
  const int n_sys = first.n_sys();
  const int e1 = first.n_env();
  const int e2 = second.n_env();
  const int total = e1 + e2 + n_sys;
  std::vector<int> first_modes;
  std::vector<int> second_modes;
  for (int k = 0; k < e1; ++k) first_modes.push_back(k);
  for (int k = 0; k < e2; ++k) second_modes.push_back(e1 + k);
  for (int k = 0; k < n_sys; ++k) {
    first_modes.push_back(e1 + e2 + k);
    second_modes.push_back(e1 + e2 + k);
  }
  const Matrix s = embed(second.s(), second_modes, total) * embed(first.s(), first_modes, total);
  return {e1 + e2, n_sys, s};
}

Dilation dilation_of(const GaussianChannel& channel, double tol) {
  if (channel.n_in() != 1 || channel.n_out() != 1) {
    throw NotImplemented("dilation_of: only single-mode channels are synthesized; supply S for "
                         "multimode dilations");
  }
  const Matrix& x = channel.x();
  const Matrix& y = channel.y();
  const double det_x = x.determinant();
  if (std::abs(det_x) <= tol) {
    throw NotImplemented("dilation_of: det X = 0 (measure-and-prepare type) is not supported");
  }
  const double mag = std::sqrt(std::abs(det_x));

  if (det_x > 0.0 && is_multiple_of_identity(x, tol) && is_multiple_of_identity(y, tol)) {
    const double sign = x(0, 0) >= 0.0 ? 1.0 : -1.0;
    Dilation core = isotropic_core(mag, 0.5 * y.trace(), tol);
    if (sign > 0.0) return core;
    // A rotation by pi (X -> -X) leaves Y unchanged.
    const Matrix post = direct_sum(Matrix::Identity(2 * core.n_env(), 2 * core.n_env()),
                                   -Matrix::Identity(2, 2));
    return {core.n_env(), 1, post * core.s()};
  }

  const Eigen::Matrix2d z = pauli_z();
  // X = mag * S' (det X > 0) or X = mag * S' Z (det X < 0) with det S' = 1.
  const Matrix s_prime = det_x > 0.0 ? Matrix(x / mag) : Matrix(x * z / mag);
  const Matrix s_inv = s_prime.inverse();
  const Matrix y_frame = s_inv * y * s_inv.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (y_frame + y_frame.transpose()));
  Matrix v = es.eigenvectors();
  if (v.determinant() < 0.0) v.col(0) = -v.col(0).eval();
  const double y_small = es.eigenvalues()(0);
  const double y_large = es.eigenvalues()(1);

  if (y_large <= tol) {
    if (det_x > 0.0 && std::abs(det_x - 1.0) <= tol) {
      return {1, 1, direct_sum(Matrix::Identity(2, 2), x)};
    }
    throw InvalidArgument("channel: Y = 0 requires a symplectic X");
  }
  if (y_small <= tol * y_large) {
    throw NotImplemented("dilation_of: rank-deficient noise Y is not supported");
  }
  const double mu = std::sqrt(y_small * y_large);
  const double k = std::pow(y_large / y_small, 0.25);
  // Y_frame = V diag(y_large', y_small') V^T; eigenvalues ascend, so put the
  // squeeze factor on the second axis.
  const Matrix squeeze = Eigen::Vector2d(1.0 / k, k).asDiagonal();
  const Matrix post = s_prime * v * squeeze;
  const Matrix pre_base = squeeze.inverse() * v.transpose();

  Dilation core = det_x > 0.0 ? isotropic_core(mag, mu, tol) : conjugating_core(mag, mu, tol);
  const Matrix pre = det_x > 0.0 ? pre_base : Matrix(z * pre_base * z);
  const int e = core.n_env();
  const Matrix id_env = Matrix::Identity(2 * e, 2 * e);
  const Matrix s = direct_sum(id_env, post) * core.s() * direct_sum(id_env, pre);
  return {e, 1, s, std::max(tol, 1e-8)};
}

MinimalNoiseSplit minimal_noise_split(const GaussianChannel& channel, double tol) {
  if (channel.n_in() != 1 || channel.n_out() != 1) {
    throw InvalidArgument("minimal_noise_split: single-mode channel required");
  }
  const Matrix& x = channel.x();
  const Matrix& y = channel.y();
  const double tau = x.determinant();
  const double det_y = y.determinant();
  const double excess = std::abs(1.0 - tau);
  Matrix y_min = Matrix::Zero(2, 2);
  if (excess > tol) {
    if (!(det_y > 0.0) || std::sqrt(det_y) < excess * (1.0 - 1e-9) - tol) {
      throw NumericalFailure("minimal_noise_split: det Y = " + std::to_string(det_y) +
                             " below (1 - det X)^2 = " + std::to_string(excess * excess) +
                             "; channel is not CP");
    }
    y_min = (excess / std::sqrt(det_y)) * y;
  }
  const Matrix y_rest = y - y_min;
  Eigen::SelfAdjointEigenSolver<Matrix> es(y_rest, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -scaled_tolerance(tol, y)) {
    throw NumericalFailure("minimal_noise_split: residual noise Y - Y_min is not PSD");
  }
  return {GaussianChannel(Matrix::Identity(2, 2), y_rest, 1e-8), GaussianChannel(x, y_min, 1e-8)};
}

}  // namespace gausscap
