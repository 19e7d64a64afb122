#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace gausscap {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;

/// Absolute tolerance on constraint residuals; rescaled by max|entry| for
/// matrices with large entries (see scaled_tolerance).
inline constexpr double kDefaultTol = 1e-9;

/// tol * max(1, max|m_ij|).
double scaled_tolerance(double tol, const Matrix& m);

/// Number of modes of a 2N x 2N matrix. Throws InvalidArgument when the
/// matrix is not square or has odd dimension. `what` names the field.
int mode_count(const Matrix& m, const char* what = "matrix");

/// sigma = direct sum of N copies of [[0,1],[-1,0]] in (Q1,P1,...,QN,PN) order.
Matrix symplectic_form(int n_modes);

/// max|S sigma S^T - sigma|.
double symplectic_residual(const Matrix& s);
bool is_symplectic(const Matrix& s, double tol = kDefaultTol);

bool is_symmetric(const Matrix& m, double tol = kDefaultTol);

/// Smallest eigenvalue of the Hermitian matrix cm + i sigma.
double uncertainty_min_eigenvalue(const Matrix& cm);

/// Heisenberg condition cm + i sigma >= -tol (tol rescaled by the entries).
bool is_valid_cm(const Matrix& cm, double tol = kDefaultTol);

/// Symplectic spectrum, one value per mode, descending. Throws InvalidState
/// if cm is not symmetric positive definite.
std::vector<double> symplectic_eigenvalues(const Matrix& cm);

/// cm = S diag(nu_1,nu_1,...,nu_N,nu_N) S^T with S symplectic and nu
/// descending.
struct Williamson {
  Matrix symplectic;
  std::vector<double> nu;
};
Williamson williamson(const Matrix& cm);

/// Two arms of `modes_per_arm` modes each (arm A first):
/// (x_A, x_B) -> (sqrt(eta) x_A + sqrt(1-eta) x_B, -sqrt(1-eta) x_A + sqrt(eta) x_B).
Matrix beamsplitter_symplectic(double eta, int modes_per_arm = 1);

/// [[cosh r I, sinh r Z], [sinh r Z, cosh r I]] with Z = diag(1,-1).
Matrix two_mode_squeezer_symplectic(double r);

/// Phase-space rotation [[cos, -sin], [sin, cos]].
Matrix rotation_symplectic(double phi);

/// diag(e^s, e^-s).
Matrix squeezer_symplectic(double s);

Matrix direct_sum(const Matrix& a, const Matrix& b);

/// Embeds a 2x2 single-mode block acting on `mode` into an N-mode identity.
Matrix embed_single_mode(const Matrix& block, int mode, int n_modes);

/// Smallest / largest eigenvalue of a Hermitian matrix.
double hermitian_min_eigenvalue(const CMatrix& h);
double hermitian_max_eigenvalue(const CMatrix& h);

/// Symmetric square root of a symmetric positive definite matrix.
Matrix spd_sqrt(const Matrix& m);

}  // namespace gausscap
