#include "qgibbs/belief_propagation.hpp"

#include <cmath>

#include "qgibbs/errors.hpp"

namespace qgibbs {

BPOperator::BPOperator(const Operator& h0, const Operator& v, double beta)
    : region_(h0.support()), v_support_(v.support()), beta_(beta) {
  if (!std::isfinite(beta) || beta < 0)
    throw InvalidArgument("inverse temperature must be finite and non-negative");
  if (!h0.is_hermitian() || !v.is_hermitian())
    throw InvalidArgument("belief propagation needs Hermitian H0 and V");
  if (!region_.contains(v_support_))
    throw InvalidArgument("perturbation acts outside the Hamiltonian's region");

  const Matrix& m0 = h0.matrix();
  const Matrix h = m0 + embed(v, region_).matrix();
  HermitianEig eig = eigh(hermitize(h));
  HermitianEig eig0 = eigh(hermitize(m0));
  const double c = eig.values(0);
  auto shifted = [&](const HermitianEig& e, double factor) {
    RealVector d = (factor * beta * (e.values.array() - c)).exp();
    return e.reconstruct(d);
  };
  sigma_ = shifted(eig, -1.0);
  sigma0_ = shifted(eig0, -1.0);
  eta_ = Operator(region_, product(shifted(eig, -0.5), shifted(eig0, 0.5)));
  z_ = sigma_.trace().real();
  z0_ = sigma0_.trace().real();

  Matrix rebuilt = product(product(eta_.matrix(), sigma0_), eta_.matrix().adjoint());
  residual_ = trace_norm(hermitize(sigma_ - rebuilt));
  eta_norm_ = operator_norm(eta_.matrix());
  eta_reference_ = std::exp(beta * operator_norm(v.matrix()) / 2);
}

Region BPOperator::ball_region(double radius) const {
  if (radius < 0) throw InvalidArgument("localization radius must be non-negative");
  return ball(v_support_, radius, region_);
}

std::shared_ptr<const Operator> BPOperator::localize(double radius) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = localized_.find(radius);
    if (it != localized_.end()) return it->second;
  }
  const Region b = ball_region(radius);
  Operator reduced = partial_trace(eta_, b);
  const double rest_dim = double(region_.dimension()) / double(b.dimension());
  Operator local(b, reduced.matrix() / rest_dim);
  auto value = std::make_shared<const Operator>(embed(local, region_));
  std::lock_guard<std::mutex> lock(mu_);
  return localized_.emplace(radius, value).first->second;
}

BPOperator::Locality BPOperator::locality(double radius) const {
  Locality out;
  out.radius = radius;
  auto local = localize(radius);
  const Matrix& el = local->matrix();
  Matrix approx = product(product(el, sigma0_), el.adjoint());
  const double t = approx.trace().real();
  out.gamma = trace_norm(hermitize(sigma_ / z_ - approx / t));
  out.eta_error = operator_norm(eta_.matrix() - el);
  out.bound = 2 * out.eta_error * (eta_norm_ + operator_norm(el)) * z0_ / z_;
  return out;
}

BPOperator exact_bp_operator(const Operator& h0, const Operator& v, double beta) {
  return BPOperator(h0, v, beta);
}

BPProfile bp_decay_profile(const LocalHamiltonian& h, double beta, const Region& sites,
                           const std::vector<double>& radii, PerturbationMode mode,
                           const Region* x) {
  const Region region = x ? *x : Region::all(h.lattice());
  if (!region.contains(sites)) throw InvalidArgument("perturbation sites outside the region");
  std::vector<Operator> v_terms, h0_terms;
  for (const auto& t : h.terms_within(region)) {
    const bool selected = mode == PerturbationMode::Touching ? !t.support().disjoint(sites)
                                                              : sites.contains(t.support());
    (selected ? v_terms : h0_terms).push_back(t);
  }
  Region v_support = Region::none(h.lattice());
  for (const auto& t : v_terms) v_support = v_support | t.support();

  BPOperator bp(sum_terms(h0_terms, region), sum_terms(v_terms, v_support), beta);
  if (bp.identity_residual() > 1e-10)
    throw InvariantViolation("belief-propagation identity residual " +
                             std::to_string(bp.identity_residual()));

  BPProfile out;
  out.profile.kind = "bp";
  out.eta_norm = bp.eta_norm();
  out.eta_norm_reference = bp.eta_norm_reference();
  out.eta_norm_exceeds_reference = bp.eta_norm() > bp.eta_norm_reference() * (1 + 1e-12);
  out.identity_residual = bp.identity_residual();
  for (double r : radii) {
    auto loc = bp.locality(r);
    if (loc.gamma > loc.bound * (1 + 1e-9) + 1e-12)
      throw InvariantViolation("belief-propagation error exceeds its operator bound at radius " +
                               std::to_string(r));
    DecaySample s;
    s.ell = r;
    s.value = loc.gamma;
    s.aux = loc.eta_error;
    s.context = "V on " + v_support.describe();
    out.profile.samples.push_back(s);
  }
  out.profile.fit = decay_fit(out.profile);
  return out;
}

}  // namespace qgibbs
