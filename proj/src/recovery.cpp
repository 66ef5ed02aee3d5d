#include "qgibbs/recovery.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "qgibbs/errors.hpp"
#include "qgibbs/gibbs.hpp"

namespace qgibbs {

std::string Rotation::describe() const {
  if (kind == Kind::Integrated) return "integrated";
  std::ostringstream os;
  os << "t=" << t;
  return os.str();
}

std::vector<QuadraturePoint> rotation_quadrature(double* mass_error) {
  constexpr int kPoints = 51;
  constexpr double kHalfWidth = 20.0;
  const double h = 2 * kHalfWidth / (kPoints - 1);
  std::vector<QuadraturePoint> out;
  double mass = 0;
  for (int k = 0; k < kPoints; ++k) {
    const double t = -kHalfWidth + k * h;
    double w = h * (M_PI / 2) / (std::cosh(M_PI * t) + 1);
    if (k == 0 || k == kPoints - 1) w /= 2;
    out.push_back({t, w});
    mass += w;
  }
  for (auto& p : out) p.weight /= mass;
  if (mass_error) *mass_error = std::abs(1 - mass);
  return out;
}

namespace {

// σ^{power}, with power = (1+it)/2 · sign, on the support of σ only.
Matrix support_power(const HermitianEig& eig, double sign, double t) {
  const double cut = kPseudoInverseCutoff * std::max(eig.values.maxCoeff(), 0.0);
  if (t == 0) {
    RealVector d(eig.values.size());
    for (Eigen::Index k = 0; k < d.size(); ++k) {
      const double l = eig.values(k);
      d(k) = l > cut ? std::pow(l, sign * 0.5) : 0.0;
    }
    return eig.reconstruct(d);
  }
  Eigen::VectorXcd d(eig.values.size());
  for (Eigen::Index k = 0; k < d.size(); ++k) {
    const double l = eig.values(k);
    d(k) = l > cut ? std::exp(sign * cplx(0.5, 0.5 * t) * std::log(l)) : cplx(0);
  }
  return eig.reconstruct(d);
}

}  // namespace

RecoveryChannel RecoveryChannel::petz(const DensityOperator& sigma_ab, const Region& a,
                                      const Region& b, Rotation rotation) {
  if (!a.disjoint(b)) throw InvalidArgument("erased region and shield overlap");
  if (!((a | b) == sigma_ab.support()))
    throw InvalidArgument("reference state must live on erased region + shield");

  Factor f;
  f.erased = a;
  f.shield = b;
  f.reference = sigma_ab;
  f.rotation = rotation;

  const HermitianEig eig_ab = eigh(sigma_ab.matrix());
  const DensityOperator sigma_b = partial_trace(sigma_ab, b);
  const HermitianEig eig_b = eigh(sigma_b.matrix());
  {
    const double cut = kPseudoInverseCutoff * std::max(eig_b.values.maxCoeff(), 0.0);
    RealVector d = (eig_b.values.array() > cut).cast<double>();
    f.support_projector = Operator(b, eig_b.reconstruct(d));
  }

  std::vector<QuadraturePoint> nodes;
  if (rotation.kind == Rotation::Kind::Integrated)
    nodes = rotation_quadrature(&f.quadrature_error);
  else
    nodes = {{rotation.t, 1.0}};
  for (const auto& node : nodes) {
    Operator pos(a | b, support_power(eig_ab, 1.0, node.t));
    Operator neg(b, support_power(eig_b, -1.0, node.t));
    f.kraus.emplace_back(a | b, product(pos.matrix(), embed(neg, a | b).matrix()));
    f.weights.push_back(node.weight);
  }

  RecoveryChannel r;
  r.erased_ = a;
  r.shield_ = b;
  r.factors_.push_back(std::move(f));
  return r;
}

const DensityOperator& RecoveryChannel::reference() const {
  if (factors_.size() != 1) throw InvalidArgument("composite channel has several references");
  return factors_[0].reference;
}

double RecoveryChannel::quadrature_error() const {
  double e = 0;
  for (const auto& f : factors_) e = std::max(e, f.quadrature_error);
  return e;
}

Operator RecoveryChannel::apply_factor(const Factor& f, const Operator& x) {
  if (!x.support().contains(f.shield))
    throw InvalidArgument("recovery input does not hold the shield " + f.shield.describe());
  if (!x.support().disjoint(f.erased))
    throw InvalidArgument("recovery input already holds the erased region " +
                          f.erased.describe());
  const Operator ext = f.erased.empty() ? x : tensor_product(x, Operator::identity(f.erased));
  const auto d = ext.dim();
  Matrix out = Matrix::Zero(d, d);
  for (std::size_t k = 0; k < f.kraus.size(); ++k)
    out += f.weights[k] * sandwich(f.kraus[k], ext.matrix(), ext.support());
  return Operator(ext.support(), std::move(out));
}

Operator RecoveryChannel::map(const Operator& x) const {
  Operator cur = x;
  for (const auto& f : factors_) cur = apply_factor(f, cur);
  return cur;
}

Operator RecoveryChannel::shield_support_projector() const {
  if (factors_.size() != 1) throw InvalidArgument("composite channel");
  return factors_[0].support_projector;
}

Matrix RecoveryChannel::choi_matrix() const {
  if (factors_.size() != 1) throw InvalidArgument("Choi matrix of a composite channel");
  const Factor& f = factors_[0];
  const auto db = f.shield.dimension();
  const auto dab = (f.erased | f.shield).dimension();
  Matrix choi = Matrix::Zero(db * dab, db * dab);
  for (Eigen::Index i = 0; i < db; ++i)
    for (Eigen::Index j = 0; j < db; ++j) {
      Matrix e = Matrix::Zero(db, db);
      e(i, j) = 1;
      Operator img = apply_factor(f, Operator(f.shield, e));
      choi.block(i * dab, j * dab, dab, dab) = img.matrix();
    }
  return choi;
}

RecoveryOutput apply_recovery(const RecoveryChannel& r, const DensityOperator& state) {
  Operator out = r.map(state.op());
  RecoveryOutput res;
  res.trace_before = out.trace().real();
  if (!(res.trace_before > 1e-300))
    throw InvariantViolation("recovery annihilated the input state");
  res.trace_loss = std::abs(1 - res.trace_before);
  res.flagged = res.trace_loss > 1e-8;
  res.state = DensityOperator(out.support(), hermitize(out.matrix() / res.trace_before));
  return res;
}

RecoveryError recovery_error(const DensityOperator& sigma, const Region& a, const Region& b,
                             const Region& c, const RecoveryChannel& r) {
  if (!((a | b | c) == sigma.support()) || !a.disjoint(b) || !a.disjoint(c) || !b.disjoint(c))
    throw InvalidArgument("A, B, C must partition the state's support");
  if (!(r.erased() == a) || !(r.shield() == b))
    throw InvalidArgument("recovery channel acts on different regions");
  if (r.num_factors() == 1) {
    DensityOperator sab = partial_trace(sigma, a | b);
    if (max_abs(sab.matrix() - r.reference().matrix()) > 1e-10)
      throw InvalidArgument("recovery channel was built from a different reference state");
  }
  RecoveryOutput rec = apply_recovery(r, partial_trace(sigma, b | c));
  RecoveryError e;
  e.trace_distance = trace_norm(sigma.matrix() - rec.state.matrix());
  e.fidelity = fidelity(sigma, rec.state);
  e.trace_loss = rec.trace_loss;

  FrCheck& fr = e.fr;
  const double tol = 1e-9;
  fr.cmi = cmi(sigma, a, b, c);
  fr.minus_two_log_f = e.fidelity > 0 ? -2 * std::log2(e.fidelity) : INFINITY;
  fr.trace_term = e.trace_distance * e.trace_distance / (4 * std::log(2.0));
  fr.converse_rhs = 13 * std::log2(double((a | b).dimension())) * std::sqrt(e.trace_distance);
  fr.fidelity_bound = fr.cmi >= fr.minus_two_log_f - tol;
  fr.trace_bound = fr.cmi >= fr.trace_term - tol;
  fr.converse = fr.cmi <= fr.converse_rhs + tol;
  if (!fr.converse)
    throw InvariantViolation("converse recovery bound violated: I(A:C|B) = " +
                             std::to_string(fr.cmi) + " > " + std::to_string(fr.converse_rhs));
  return e;
}

RecoveryChannel union_compose(const RecoveryChannel& r1, const RecoveryChannel& r2) {
  const Region s1 = r1.erased() | r1.shield();
  const Region s2 = r2.erased() | r2.shield();
  if (!s1.disjoint(s2))
    throw InvalidArgument("union_compose needs channels on disjoint regions");

  RecoveryChannel out;
  out.factors_ = r1.factors_;
  out.factors_.insert(out.factors_.end(), r2.factors_.begin(), r2.factors_.end());
  out.erased_ = r1.erased() | r2.erased();
  out.shield_ = r1.shield() | r2.shield();

  // Order check on a fixed full-rank probe state of the joint shield.
  const Region shield = out.shield_;
  require_within_cap(shield | out.erased_);
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> normal;
  const auto d = shield.dimension();
  Matrix g(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = cplx(normal(rng), normal(rng));
  Matrix probe = g * g.adjoint() + Matrix::Identity(d, d);
  probe /= probe.trace().real();
  const Operator x(shield, probe);

  Operator forward = x, backward = x;
  for (const auto& f : r1.factors_) forward = RecoveryChannel::apply_factor(f, forward);
  for (const auto& f : r2.factors_) forward = RecoveryChannel::apply_factor(f, forward);
  for (const auto& f : r2.factors_) backward = RecoveryChannel::apply_factor(f, backward);
  for (const auto& f : r1.factors_) backward = RecoveryChannel::apply_factor(f, backward);
  const double gap = max_abs(forward.matrix() - backward.matrix());
  if (gap > 1e-12 * std::max(1.0, max_abs(forward.matrix())))
    throw InvariantViolation("recovery channels on disjoint supports failed to commute (" +
                             std::to_string(gap) + ")");
  return out;
}

}  // namespace qgibbs
