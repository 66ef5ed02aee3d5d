#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qgibbs/lattice.hpp"
#include "qgibbs/linalg.hpp"

namespace qgibbs {

/// Largest dense Hilbert-space dimension the library will allocate.
inline constexpr std::int64_t kDimensionCap = std::int64_t(1) << 14;

/// Throws DimensionCapExceeded when `region` is too large to hold densely.
void require_within_cap(const Region& region);

/// Index bookkeeping for a subset `part` of a region `whole`.
///
/// A basis index of `whole` (sites in increasing order, first site most
/// significant) decomposes as part_offset[a] + rest_offset[r], where a runs
/// over basis states of `part` and r over basis states of whole \ part.
struct SubsystemSplit {
  SubsystemSplit(const Region& whole, const Region& part);

  Region rest;
  std::vector<std::int64_t> part_offset;
  std::vector<std::int64_t> rest_offset;
};

/// A dense operator on the Hilbert space of its support.
class Operator {
 public:
  Operator() = default;
  Operator(Region support, Matrix matrix);

  static Operator identity(const Region& support);
  static Operator zero(const Region& support);

  const Region& support() const { return support_; }
  const Matrix& matrix() const { return matrix_; }
  Eigen::Index dim() const { return matrix_.rows(); }

  /// max |M - M†| ≤ tol · (norm scale of M).
  bool is_hermitian(double tol = 1e-12) const;
  cplx trace() const { return matrix_.trace(); }
  Operator adjoint() const { return Operator(support_, matrix_.adjoint()); }

 private:
  Region support_;
  Matrix matrix_;
};

/// Unit-trace Hermitian operator. Trace and Hermiticity are checked on
/// construction; positivity is checked by check_positive().
class DensityOperator {
 public:
  DensityOperator() = default;
  explicit DensityOperator(Operator op);
  DensityOperator(Region support, Matrix matrix);

  static DensityOperator maximally_mixed(const Region& support);
  /// |v><v| / <v|v>.
  static DensityOperator pure(const Region& support, const Eigen::VectorXcd& v);

  const Region& support() const { return op_.support(); }
  const Matrix& matrix() const { return op_.matrix(); }
  const Operator& op() const { return op_; }
  Eigen::Index dim() const { return op_.dim(); }

  double min_eigenvalue() const;
  /// Throws InvariantViolation when the minimum eigenvalue is below -tol.
  void check_positive(double tol = 1e-10) const;

 private:
  Operator op_;
};

/// op ⊗ 1 on `target` (op's support must be contained in target).
Operator embed(const Operator& op, const Region& target);

/// Trace out everything but `keep`.
Operator partial_trace(const Operator& op, const Region& keep);
DensityOperator partial_trace(const DensityOperator& rho, const Region& keep);

/// Tensor product of operators on disjoint supports.
Operator tensor_product(const Operator& a, const Operator& b);
DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b);

/// (K ⊗ 1) M where M acts on `support` ⊇ supp K.
Matrix apply_left(const Operator& k, const Matrix& m, const Region& support);
/// (K ⊗ 1) M (K ⊗ 1)†.
Matrix sandwich(const Operator& k, const Matrix& m, const Region& support);

/// f(H) through the eigendecomposition of a Hermitian H.
Operator hermitian_function(const Operator& h, const std::function<double(double)>& f);

struct Norms {
  double operator_norm = 0;
  double trace_norm = 0;
};

/// Singular-value norms; Hermitian inputs use eigenvalues directly.
Norms norms(const Matrix& m);
Norms norms(const Operator& op);
double trace_norm(const Matrix& m);
double operator_norm(const Matrix& m);

/// ‖√ρ √σ‖₁.
double fidelity(const DensityOperator& rho, const DensityOperator& sigma);

/// Entropy in bits of a spectrum; eigenvalues below 1e-14 contribute zero.
double entropy_bits(const RealVector& eigenvalues);
double von_neumann_entropy(const DensityOperator& rho);

/// Single-qubit Pauli matrix for 'I', 'X', 'Y' or 'Z'.
Matrix pauli(char which);

}  // namespace qgibbs
