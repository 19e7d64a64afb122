#include "gausscap/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gausscap/error.hpp"

namespace gausscap {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

Eigen::Matrix2d pauli_z() { return Eigen::Vector2d(1.0, -1.0).asDiagonal(); }

}  // namespace

double scaled_tolerance(double tol, const Matrix& m) {
  const double scale = m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
  return tol * std::max(1.0, scale);
}

int mode_count(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw InvalidArgument(std::string(what) + ": must be square, got " + std::to_string(m.rows()) +
                          "x" + std::to_string(m.cols()));
  }
  if (m.rows() == 0 || m.rows() % 2 != 0) {
    throw InvalidArgument(std::string(what) + ": dimension must be even and positive, got " +
                          std::to_string(m.rows()));
  }
  return static_cast<int>(m.rows() / 2);
}

Matrix symplectic_form(int n_modes) {
  if (n_modes < 1) {
    throw InvalidArgument("n_modes: must be >= 1, got " + std::to_string(n_modes));
  }
  Matrix sigma = Matrix::Zero(2 * n_modes, 2 * n_modes);
  for (int k = 0; k < n_modes; ++k) {
    sigma(2 * k, 2 * k + 1) = 1.0;
    sigma(2 * k + 1, 2 * k) = -1.0;
  }
  return sigma;
}

double symplectic_residual(const Matrix& s) {
  const Matrix sigma = symplectic_form(mode_count(s, "S"));
  return (s * sigma * s.transpose() - sigma).cwiseAbs().maxCoeff();
}

bool is_symplectic(const Matrix& s, double tol) {
  return symplectic_residual(s) <= scaled_tolerance(tol, s * s.transpose());
}

bool is_symmetric(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= scaled_tolerance(tol, m);
}

double hermitian_min_eigenvalue(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double hermitian_max_eigenvalue(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

double uncertainty_min_eigenvalue(const Matrix& cm) {
  const Matrix sigma = symplectic_form(mode_count(cm, "cm"));
  const CMatrix h = cm.cast<std::complex<double>>() + kI * sigma.cast<std::complex<double>>();
  return hermitian_min_eigenvalue(h);
}

bool is_valid_cm(const Matrix& cm, double tol) {
  if (!is_symmetric(cm, tol)) return false;
  return uncertainty_min_eigenvalue(cm) >= -scaled_tolerance(tol, cm);
}

Matrix spd_sqrt(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success) throw NumericalFailure("spd_sqrt: eigensolver failed");
  if (es.eigenvalues().minCoeff() <= 0.0) {
    throw InvalidState("cm: not positive definite (min eigenvalue " +
                       std::to_string(es.eigenvalues().minCoeff()) + ")");
  }
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() *
         es.eigenvectors().transpose();
}

namespace {

void require_spd(const Matrix& cm) {
  mode_count(cm, "cm");
  if (!is_symmetric(cm, kDefaultTol)) throw InvalidState("cm: not symmetric");
}

}  // namespace

std::vector<double> symplectic_eigenvalues(const Matrix& cm) {
  require_spd(cm);
  const int n = static_cast<int>(cm.rows() / 2);
  const Matrix sym = 0.5 * (cm + cm.transpose());
  const Matrix root = spd_sqrt(sym);
  // i * root * sigma * root is Hermitian with spectrum {+nu_k, -nu_k}.
  const Matrix anti = root * symplectic_form(n) * root;
  const CMatrix h = kI * anti.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  std::vector<double> nu(n);
  for (int k = 0; k < n; ++k) nu[k] = es.eigenvalues()(2 * n - 1 - k);
  return nu;
}

Williamson williamson(const Matrix& cm) {
  require_spd(cm);
  const int n = static_cast<int>(cm.rows() / 2);
  const Matrix sym = 0.5 * (cm + cm.transpose());
  const Matrix root = spd_sqrt(sym);
  const Matrix inv_root = root.inverse();
  const Matrix anti = inv_root * symplectic_form(n) * inv_root;
  const CMatrix h = kI * anti.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  if (es.info() != Eigen::Success) throw NumericalFailure("williamson: eigensolver failed");

  // Spectrum is {+-mu_k} with mu_k = 1/nu_k, ascending. Index n is the
  // smallest positive mu, i.e. the largest nu. For eigenvector v = u + iw,
  // (sqrt2 u, -sqrt2 w) is an orthonormal pair bringing `anti` to mu_k J.
  Matrix orth(2 * n, 2 * n);
  std::vector<double> nu(n);
  for (int k = 0; k < n; ++k) {
    const int idx = n + k;
    const double mu = es.eigenvalues()(idx);
    const Eigen::VectorXcd v = es.eigenvectors().col(idx);
    orth.col(2 * k) = std::sqrt(2.0) * v.real();
    orth.col(2 * k + 1) = -std::sqrt(2.0) * v.imag();
    nu[k] = 1.0 / mu;
  }
  Vector scale(2 * n);
  for (int k = 0; k < n; ++k) scale(2 * k) = scale(2 * k + 1) = 1.0 / std::sqrt(nu[k]);
  return {root * orth * scale.asDiagonal(), nu};
}

Matrix beamsplitter_symplectic(double eta, int modes_per_arm) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw InvalidArgument("eta: transmissivity must lie in [0,1], got " + std::to_string(eta));
  }
  if (modes_per_arm < 1) throw InvalidArgument("modes_per_arm: must be >= 1");
  const int d = 2 * modes_per_arm;
  const double t = std::sqrt(eta);
  const double r = std::sqrt(1.0 - eta);
  Matrix s(2 * d, 2 * d);
  s << t * Matrix::Identity(d, d), r * Matrix::Identity(d, d), -r * Matrix::Identity(d, d),
      t * Matrix::Identity(d, d);
  return s;
}

Matrix two_mode_squeezer_symplectic(double r) {
  Matrix s(4, 4);
  const Eigen::Matrix2d z = pauli_z();
  s << std::cosh(r) * Eigen::Matrix2d::Identity(), std::sinh(r) * z, std::sinh(r) * z,
      std::cosh(r) * Eigen::Matrix2d::Identity();
  return s;
}

Matrix rotation_symplectic(double phi) {
  Matrix s(2, 2);
  s << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  return s;
}

Matrix squeezer_symplectic(double s) {
  return Eigen::Vector2d(std::exp(s), std::exp(-s)).asDiagonal();
}

Matrix direct_sum(const Matrix& a, const Matrix& b) {
  Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

Matrix embed_single_mode(const Matrix& block, int mode, int n_modes) {
  Matrix out = Matrix::Identity(2 * n_modes, 2 * n_modes);
  out.block(2 * mode, 2 * mode, 2, 2) = block;
  return out;
}

}  // namespace gausscap
