#include "qgibbs/operator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qgibbs/errors.hpp"

namespace qgibbs {

void require_within_cap(const Region& region) {
  if (region.dimension() > kDimensionCap)
    throw DimensionCapExceeded("region " + region.describe() + " has Hilbert dimension above " +
                               std::to_string(kDimensionCap));
}

SubsystemSplit::SubsystemSplit(const Region& whole, const Region& part) {
  if (!whole.contains(part))
    throw InvalidArgument("subsystem " + part.describe() + " not contained in " +
                          whole.describe());
  rest = whole - part;
  const std::int64_t d = whole.lattice().site_dim();
  const auto& sites = whole.sites();
  const int n = whole.size();
  part_offset = {0};
  rest_offset = {0};
  std::int64_t stride = 1;
  std::vector<std::int64_t> strides(n);
  for (int p = n - 1; p >= 0; --p) {
    strides[p] = stride;
    stride *= d;
  }
  for (int p = 0; p < n; ++p) {
    auto& target = part.contains(sites[p]) ? part_offset : rest_offset;
    std::vector<std::int64_t> next;
    next.reserve(target.size() * d);
    for (std::int64_t o : target)
      for (std::int64_t k = 0; k < d; ++k) next.push_back(o + k * strides[p]);
    target = std::move(next);
  }
}

// ------------------------------------------------------------ Operator

Operator::Operator(Region support, Matrix matrix)
    : support_(std::move(support)), matrix_(std::move(matrix)) {
  require_within_cap(support_);
  const auto d = support_.dimension();
  if (matrix_.rows() != d || matrix_.cols() != d)
    throw InvalidArgument("operator matrix is " + std::to_string(matrix_.rows()) + "x" +
                          std::to_string(matrix_.cols()) + " but its support has dimension " +
                          std::to_string(d));
}

Operator Operator::identity(const Region& support) {
  require_within_cap(support);
  const auto d = support.dimension();
  return Operator(support, Matrix::Identity(d, d));
}

Operator Operator::zero(const Region& support) {
  require_within_cap(support);
  const auto d = support.dimension();
  return Operator(support, Matrix::Zero(d, d));
}

bool Operator::is_hermitian(double tol) const {
  return hermiticity_defect(matrix_) <= tol * norm_scale(matrix_);
}

// ----------------------------------------------------- DensityOperator

DensityOperator::DensityOperator(Operator op) {
  const Matrix& m = op.matrix();
  const cplx tr = m.trace();
  if (std::abs(tr - 1.0) > 1e-10)
    throw InvariantViolation("density operator trace " + std::to_string(tr.real()) + "+" +
                             std::to_string(tr.imag()) + "i differs from 1");
  if (hermiticity_defect(m) > 1e-10)
    throw InvariantViolation("density operator is not Hermitian");
  op_ = Operator(op.support(), hermitize(m));
}

DensityOperator::DensityOperator(Region support, Matrix matrix)
    : DensityOperator(Operator(std::move(support), std::move(matrix))) {}

DensityOperator DensityOperator::maximally_mixed(const Region& support) {
  require_within_cap(support);
  const auto d = support.dimension();
  return DensityOperator(support, Matrix::Identity(d, d) / double(d));
}

DensityOperator DensityOperator::pure(const Region& support, const Eigen::VectorXcd& v) {
  const double n2 = v.squaredNorm();
  if (n2 <= 0) throw InvalidArgument("zero state vector");
  return DensityOperator(support, v * v.adjoint() / n2);
}

double DensityOperator::min_eigenvalue() const {
  return dim() ? eigvalsh(matrix())(0) : 0.0;
}

void DensityOperator::check_positive(double tol) const {
  const double lo = min_eigenvalue();
  if (lo < -tol)
    throw InvariantViolation("density operator has eigenvalue " + std::to_string(lo));
}

// ---------------------------------------------------- tensor structure

Operator embed(const Operator& op, const Region& target) {
  if (op.support() == target) return op;
  require_within_cap(target);
  SubsystemSplit split(target, op.support());
  const auto d = target.dimension();
  Matrix out = Matrix::Zero(d, d);
  const Matrix& m = op.matrix();
  const auto dp = static_cast<Eigen::Index>(split.part_offset.size());
  for (std::int64_t r : split.rest_offset)
    for (Eigen::Index b = 0; b < dp; ++b) {
      const auto col = split.part_offset[b] + r;
      for (Eigen::Index a = 0; a < dp; ++a) out(split.part_offset[a] + r, col) = m(a, b);
    }
  return Operator(target, std::move(out));
}

Operator partial_trace(const Operator& op, const Region& keep) {
  if (keep == op.support()) return op;
  SubsystemSplit split(op.support(), keep);
  const auto dk = static_cast<Eigen::Index>(split.part_offset.size());
  Matrix out = Matrix::Zero(dk, dk);
  const Matrix& m = op.matrix();
  for (Eigen::Index b = 0; b < dk; ++b)
    for (std::int64_t r : split.rest_offset) {
      const auto col = split.part_offset[b] + r;
      for (Eigen::Index a = 0; a < dk; ++a) out(a, b) += m(split.part_offset[a] + r, col);
    }
  return Operator(keep, std::move(out));
}

DensityOperator partial_trace(const DensityOperator& rho, const Region& keep) {
  return DensityOperator(partial_trace(rho.op(), keep));
}

Operator tensor_product(const Operator& a, const Operator& b) {
  if (!a.support().disjoint(b.support()))
    throw InvalidArgument("tensor product of operators with overlapping supports");
  const Region whole = a.support() | b.support();
  require_within_cap(whole);
  SubsystemSplit split(whole, a.support());
  const auto d = whole.dimension();
  Matrix out(d, d);
  const Matrix& ma = a.matrix();
  const Matrix& mb = b.matrix();
  const auto da = ma.rows(), db = mb.rows();
  for (Eigen::Index j = 0; j < da; ++j)
    for (Eigen::Index s = 0; s < db; ++s) {
      const auto col = split.part_offset[j] + split.rest_offset[s];
      for (Eigen::Index i = 0; i < da; ++i)
        for (Eigen::Index r = 0; r < db; ++r)
          out(split.part_offset[i] + split.rest_offset[r], col) = ma(i, j) * mb(r, s);
    }
  return Operator(whole, std::move(out));
}

DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b) {
  if (a.support().empty()) return b;
  if (b.support().empty()) return a;
  return DensityOperator(tensor_product(a.op(), b.op()));
}

Matrix apply_left(const Operator& k, const Matrix& m, const Region& support) {
  if (k.support() == support) return k.matrix() * m;
  SubsystemSplit split(support, k.support());
  const auto dk = static_cast<Eigen::Index>(split.part_offset.size());
  const auto dr = static_cast<Eigen::Index>(split.rest_offset.size());
  const auto d = m.rows();
  if (d != dk * dr) throw InvalidArgument("apply_left: matrix does not match its support");
  // Reorder rows so the sites of K vary fastest; then one product handles
  // every (rest index, column) pair at once.
  std::vector<Eigen::Index> perm(d);
  for (Eigen::Index r = 0; r < dr; ++r)
    for (Eigen::Index a = 0; a < dk; ++a)
      perm[a + dk * r] = split.part_offset[a] + split.rest_offset[r];

  const auto cols = m.cols();
  if (is_real(k.matrix()) && is_real(m)) {
    RealMatrix kr = k.matrix().real();
    RealMatrix shuffled(d, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
      for (Eigen::Index i = 0; i < d; ++i) shuffled(i, c) = m(perm[i], c).real();
    RealMatrix prod(d, cols);
    Eigen::Map<RealMatrix>(prod.data(), dk, dr * cols).noalias() =
        kr * Eigen::Map<const RealMatrix>(shuffled.data(), dk, dr * cols);
    Matrix out(d, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
      for (Eigen::Index i = 0; i < d; ++i) out(perm[i], c) = prod(i, c);
    return out;
  }
  Matrix shuffled(d, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index i = 0; i < d; ++i) shuffled(i, c) = m(perm[i], c);
  Matrix prod(d, cols);
  Eigen::Map<Matrix>(prod.data(), dk, dr * cols).noalias() =
      k.matrix() * Eigen::Map<const Matrix>(shuffled.data(), dk, dr * cols);
  Matrix out(d, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index i = 0; i < d; ++i) out(perm[i], c) = prod(i, c);
  return out;
}

Matrix sandwich(const Operator& k, const Matrix& m, const Region& support) {
  Matrix km = apply_left(k, m, support);
  Matrix kmk = apply_left(k, km.adjoint(), support);
  return kmk.adjoint();
}

Operator hermitian_function(const Operator& h, const std::function<double(double)>& f) {
  if (!h.is_hermitian())
    throw InvalidArgument("hermitian_function applied to a non-Hermitian operator");
  HermitianEig eig = eigh(h.matrix());
  RealVector fv = eig.values.unaryExpr([&](double x) { return f(x); });
  return Operator(h.support(), eig.reconstruct(fv));
}

// --------------------------------------------------------------- norms

Norms norms(const Matrix& m) {
  Norms n;
  if (m.size() == 0) return n;
  if (m.rows() == m.cols() && hermiticity_defect(m) <= 1e-12 * norm_scale(m)) {
    RealVector w = eigvalsh(hermitize(m));
    n.operator_norm = w.cwiseAbs().maxCoeff();
    n.trace_norm = w.cwiseAbs().sum();
  } else {
    RealVector s = singular_values(m);
    n.operator_norm = s.maxCoeff();
    n.trace_norm = s.sum();
  }
  return n;
}

Norms norms(const Operator& op) { return norms(op.matrix()); }
double trace_norm(const Matrix& m) { return norms(m).trace_norm; }
double operator_norm(const Matrix& m) { return norms(m).operator_norm; }

double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
  if (!(rho.support() == sigma.support()))
    throw InvalidArgument("fidelity of states on different supports");
  // √ρ σ √ρ shares its spectrum with √Λ (V†σV) √Λ for ρ = V Λ V†.
  HermitianEig eig = eigh(rho.matrix());
  RealVector root = eig.values.cwiseMax(0.0).cwiseSqrt();
  Matrix m = product(product(eig.vectors.adjoint(), sigma.matrix()), eig.vectors);
  m = root.asDiagonal() * m * root.asDiagonal();
  RealVector w = eigvalsh(hermitize(m));
  double f = 0;
  for (Eigen::Index i = 0; i < w.size(); ++i) f += std::sqrt(std::max(w(i), 0.0));
  return std::min(f, 1.0);
}

double entropy_bits(const RealVector& eigenvalues) {
  double s = 0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const double p = eigenvalues(i);
    if (p > 1e-14) s -= p * std::log2(p);
  }
  return s;
}

double von_neumann_entropy(const DensityOperator& rho) {
  if (rho.dim() <= 1) return 0.0;
  return entropy_bits(eigvalsh(rho.matrix()));
}

Matrix pauli(char which) {
  Matrix p = Matrix::Zero(2, 2);
  switch (which) {
    case 'I': p << 1, 0, 0, 1; break;
    case 'X': p << 0, 1, 1, 0; break;
    case 'Y': p << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case 'Z': p << 1, 0, 0, -1; break;
    default: throw InvalidArgument(std::string("unknown Pauli label ") + which);
  }
  return p;
}

}  // namespace qgibbs
