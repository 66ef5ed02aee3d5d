#pragma once

// Dense kernels shared by the operator layer. Hermitian eigenproblems go to
// LAPACK's divide-and-conquer drivers; matrices with an exactly zero
// imaginary part take the real symmetric path, which is several times faster.

#include <Eigen/Dense>
#include <complex>

namespace qgibbs {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
struct HermitianEig {
  RealVector values;
  Matrix vectors;
  /// Set when the input was real symmetric; vectors then has no imaginary part.
  bool real = false;
  RealMatrix real_vectors;

  /// V f(Λ) V† for a precomputed diagonal f(Λ).
  Matrix reconstruct(const RealVector& diag) const;
  Matrix reconstruct(const Eigen::VectorXcd& diag) const;
};

HermitianEig eigh(const Matrix& h);
RealVector eigvalsh(const Matrix& h);
RealVector singular_values(const Matrix& m);

/// a * b, through a real product when both factors are real.
Matrix product(const Matrix& a, const Matrix& b);

bool is_real(const Matrix& m);
double max_abs(const Matrix& m);
/// max |M - M†| entry.
double hermiticity_defect(const Matrix& m);
/// Cheap lower bound on the operator norm: max(max|entry|, ‖M‖_F / √dim).
double norm_scale(const Matrix& m);
/// (M + M†) / 2.
Matrix hermitize(const Matrix& m);

}  // namespace qgibbs
