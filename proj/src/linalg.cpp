#include "qgibbs/linalg.hpp"

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "qgibbs/errors.hpp"

namespace qgibbs {

namespace {

void check_info(lapack_int info, const char* what) {
  if (info != 0)
    throw InvariantViolation(std::string(what) + " failed with info " + std::to_string(info));
}

}  // namespace

Matrix HermitianEig::reconstruct(const RealVector& diag) const {
  if (real) {
    RealMatrix scaled = real_vectors * diag.asDiagonal();
    RealMatrix out = scaled * real_vectors.transpose();
    return out.cast<cplx>();
  }
  return vectors * diag.asDiagonal() * vectors.adjoint();
}

Matrix HermitianEig::reconstruct(const Eigen::VectorXcd& diag) const {
  return vectors * diag.asDiagonal() * vectors.adjoint();
}

HermitianEig eigh(const Matrix& h) {
  const lapack_int n = static_cast<lapack_int>(h.rows());
  HermitianEig out;
  out.values.resize(n);
  if (n == 0) return out;
  if (is_real(h)) {
    RealMatrix a = h.real();
    check_info(LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', n, a.data(), n, out.values.data()),
               "dsyevd");
    out.vectors = a.cast<cplx>();
    out.real = true;
    out.real_vectors = std::move(a);
  } else {
    out.vectors = h;
    check_info(LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'U', n, out.vectors.data(), n,
                              out.values.data()),
               "zheevd");
  }
  return out;
}

RealVector eigvalsh(const Matrix& h) {
  const lapack_int n = static_cast<lapack_int>(h.rows());
  RealVector w(n);
  if (n == 0) return w;
  if (is_real(h)) {
    RealMatrix a = h.real();
    check_info(LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'U', n, a.data(), n, w.data()), "dsyevd");
  } else {
    Matrix a = h;
    check_info(LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'U', n, a.data(), n, w.data()), "zheevd");
  }
  return w;
}

RealVector singular_values(const Matrix& m) {
  const lapack_int rows = static_cast<lapack_int>(m.rows());
  const lapack_int cols = static_cast<lapack_int>(m.cols());
  RealVector s(std::min(rows, cols));
  if (s.size() == 0) return s;
  if (is_real(m)) {
    RealMatrix a = m.real();
    check_info(LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'N', rows, cols, a.data(), rows, s.data(),
                              nullptr, 1, nullptr, 1),
               "dgesdd");
    return s;
  }
  Matrix a = m;
  check_info(LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', rows, cols, a.data(), rows, s.data(),
                            nullptr, 1, nullptr, 1),
             "zgesdd");
  return s;
}

Matrix product(const Matrix& a, const Matrix& b) {
  if (is_real(a) && is_real(b)) {
    RealMatrix ra = a.real(), rb = b.real();
    RealMatrix out = ra * rb;
    return out.cast<cplx>();
  }
  return a * b;
}

bool is_real(const Matrix& m) {
  const cplx* p = m.data();
  for (Eigen::Index i = 0; i < m.size(); ++i)
    if (p[i].imag() != 0.0) return false;
  return true;
}

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

double hermiticity_defect(const Matrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return m.size() ? (m - m.adjoint()).cwiseAbs().maxCoeff() : 0.0;
}

double norm_scale(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return std::max(max_abs(m), m.norm() / std::sqrt(double(m.rows())));
}

Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace qgibbs
