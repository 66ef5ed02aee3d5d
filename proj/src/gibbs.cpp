#include "qgibbs/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qgibbs/errors.hpp"

namespace qgibbs {

namespace {

// Gibbs state of a block whose terms form one connected cluster.
GibbsState gibbs_block(const std::vector<Operator>& terms, double beta, const Region& x) {
  GibbsState g;
  g.beta = beta;
  const auto d = x.dimension();
  if (terms.empty() || beta == 0.0) {
    g.state = DensityOperator::maximally_mixed(x);
    g.log_partition = std::log(double(d));
    g.entropy_bits = std::log2(double(d));
    if (terms.empty()) g.energies = RealVector::Zero(d);
    return g;
  }
  Operator hx = sum_terms(terms, x);
  HermitianEig eig = eigh(hx.matrix());
  const double e0 = eig.values(0);
  RealVector w = (-beta * (eig.values.array() - e0)).exp();
  const double z = w.sum();
  RealVector p = w / z;
  g.state = DensityOperator(x, hermitize(eig.reconstruct(p)));
  g.energies = eig.values;
  g.log_partition = std::log(z) - beta * e0;
  g.entropy_bits = entropy_bits(p);
  return g;
}

// All sums e_i + f_j, ascending.
RealVector kron_sum(const RealVector& e, const RealVector& f) {
  RealVector out(e.size() * f.size());
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < e.size(); ++i)
    for (Eigen::Index j = 0; j < f.size(); ++j) out(k++) = e(i) + f(j);
  std::sort(out.data(), out.data() + out.size());
  return out;
}

}  // namespace

GibbsState compute_gibbs(const LocalHamiltonian& h, double beta, const Region& x) {
  if (!std::isfinite(beta) || beta < 0)
    throw InvalidArgument("inverse temperature must be finite and non-negative");
  require_within_cap(x);
  const auto terms = h.terms_within(x);

  // Term-connected clusters of X; sites without terms are their own cluster.
  const auto& sites = x.sites();
  std::vector<int> parent(sites.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto pos = [&](int s) {
    return static_cast<int>(std::lower_bound(sites.begin(), sites.end(), s) - sites.begin());
  };
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (const auto& t : terms) {
    const auto& ts = t.support().sites();
    for (std::size_t k = 1; k < ts.size(); ++k) parent[find(pos(ts[k]))] = find(pos(ts[0]));
  }
  std::map<int, std::vector<int>> groups;
  for (std::size_t i = 0; i < sites.size(); ++i) groups[find(int(i))].push_back(sites[i]);
  if (groups.size() <= 1) return gibbs_block(terms, beta, x);

  std::vector<Region> blocks;
  for (auto& [root, members] : groups) blocks.emplace_back(x.lattice_ptr(), members);
  std::sort(blocks.begin(), blocks.end(),
            [](const Region& a, const Region& b) { return a.sites().front() < b.sites().front(); });

  GibbsState total;
  total.beta = beta;
  bool first = true;
  bool have_energies = true;
  for (const auto& block : blocks) {
    std::vector<Operator> local;
    for (const auto& t : terms)
      if (block.contains(t.support())) local.push_back(t);
    GibbsState g = gibbs_block(local, beta, block);
    if (first) {
      total.state = g.state;
      total.energies = g.energies;
      first = false;
    } else {
      total.state = tensor_product(total.state, g.state);
      if (have_energies && g.energies.size() && total.energies.size() &&
          total.energies.size() * g.energies.size() <= kDimensionCap)
        total.energies = kron_sum(total.energies, g.energies);
      else
        have_energies = false;
    }
    if (!g.energies.size()) have_energies = false;
    total.log_partition += g.log_partition;
    total.entropy_bits += g.entropy_bits;
  }
  if (!have_energies) total.energies.resize(0);
  return total;
}

// --------------------------------------------------------------- cache

GibbsCache::GibbsCache(std::size_t max_bytes) : max_bytes_(max_bytes) {}

namespace {

std::size_t entry_bytes(const GibbsState& g) { return sizeof(cplx) * g.state.matrix().size(); }

}  // namespace

std::shared_ptr<const GibbsState> GibbsCache::get(const LocalHamiltonian& h, double beta,
                                                  const Region& x) {
  Key key{h.hash(), beta, x.sites()};
  std::promise<std::shared_ptr<const GibbsState>> promise;
  {
    std::unique_lock<std::mutex> lock(mu_);
    auto it = entries_.find(key);
    if (it != entries_.end()) {
      ++hits_;
      Entry e = it->second;
      lock.unlock();  // another thread may still be computing this entry
      return e.get();
    }
    entries_.emplace(key, promise.get_future().share());
    order_.push_back(key);
  }
  std::shared_ptr<const GibbsState> value;
  try {
    value = std::make_shared<const GibbsState>(compute_gibbs(h, beta, x));
  } catch (...) {
    promise.set_exception(std::current_exception());
    std::lock_guard<std::mutex> lock(mu_);
    entries_.erase(key);
    order_.erase(std::remove(order_.begin(), order_.end(), key), order_.end());
    throw;
  }
  promise.set_value(value);
  std::lock_guard<std::mutex> lock(mu_);
  if (entries_.count(key)) bytes_ += entry_bytes(*value);
  // Oldest finished entries go first; the one just inserted is always kept.
  for (std::size_t i = 0; bytes_ > max_bytes_ && i < order_.size();) {
    if (order_[i] == key) {
      ++i;
      continue;
    }
    auto victim = entries_.find(order_[i]);
    if (victim->second.wait_for(std::chrono::seconds(0)) != std::future_status::ready) {
      ++i;
      continue;
    }
    bytes_ -= entry_bytes(*victim->second.get());
    entries_.erase(victim);
    order_.erase(order_.begin() + i);
  }
  return value;
}

std::size_t GibbsCache::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_.size();
}

std::size_t GibbsCache::hits() const {
  std::lock_guard<std::mutex> lock(mu_);
  return hits_;
}

void GibbsCache::clear() {
  std::lock_guard<std::mutex> lock(mu_);
  entries_.clear();
  order_.clear();
  bytes_ = 0;
}

GibbsCache& shared_gibbs_cache() {
  static GibbsCache cache;
  return cache;
}

std::shared_ptr<const GibbsState> gibbs(const LocalHamiltonian& h, double beta,
                                        const Region& x) {
  return shared_gibbs_cache().get(h, beta, x);
}

DensityOperator gibbs_state(const LocalHamiltonian& h, double beta, const Region& x) {
  return gibbs(h, beta, x)->state;
}

// ---------------------------------------------------------- clustering

namespace {

cplx trace_product(const Matrix& a, const Matrix& b) {
  return (a.transpose().array() * b.array()).sum();
}

double region_entropy(const DensityOperator& rho, const Region& r) {
  if (r.empty()) return 0.0;
  return von_neumann_entropy(partial_trace(rho, r));
}

void require_inside(const DensityOperator& rho, const Region& r, const char* what) {
  if (!rho.support().contains(r))
    throw InvalidArgument(std::string(what) + " region not inside the state's support");
}

}  // namespace

double covariance(const DensityOperator& sigma, const Operator& f, const Operator& g) {
  if (!f.support().disjoint(g.support()))
    throw InvalidArgument("covariance needs observables on disjoint regions");
  require_inside(sigma, f.support() | g.support(), "observable");
  const Region s = f.support() | g.support();
  Operator rs = partial_trace(sigma.op(), s);
  const cplx joint = trace_product(rs.matrix(), tensor_product(f, g).matrix());
  const cplx ef = trace_product(partial_trace(rs, f.support()).matrix(), f.matrix());
  const cplx eg = trace_product(partial_trace(rs, g.support()).matrix(), g.matrix());
  return std::abs(joint - ef * eg);
}

double clustering_upper(const DensityOperator& rho, const Region& a, const Region& b) {
  if (!a.disjoint(b)) throw InvalidArgument("clustering regions overlap");
  require_inside(rho, a | b, "clustering");
  if (a.empty() || b.empty()) return 0.0;
  DensityOperator ab = partial_trace(rho, a | b);
  DensityOperator prod = tensor_product(partial_trace(ab, a), partial_trace(ab, b));
  return trace_norm(ab.matrix() - prod.matrix());
}

namespace {

// Nontrivial single-site probes: Paulis for qubits, clock/shift products otherwise.
std::vector<Matrix> site_probes(int d) {
  if (d == 2) return {pauli('X'), pauli('Y'), pauli('Z')};
  Matrix shift = Matrix::Zero(d, d), clock = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    shift((k + 1) % d, k) = 1;
    clock(k, k) = std::polar(1.0, 2 * M_PI * k / d);
  }
  std::vector<Matrix> out;
  Matrix sa = Matrix::Identity(d, d);
  for (int a = 0; a < d; ++a, sa = shift * sa) {
    Matrix m = sa;
    for (int b = 0; b < d; ++b, m = m * clock)
      if (a || b) out.push_back(m);
  }
  return out;
}

std::vector<std::vector<int>> site_subsets(const Region& r, int max_weight) {
  std::vector<std::vector<int>> out;
  const auto& s = r.sites();
  for (std::size_t i = 0; i < s.size(); ++i) {
    out.push_back({s[i]});
    if (max_weight >= 2)
      for (std::size_t j = i + 1; j < s.size(); ++j) out.push_back({s[i], s[j]});
  }
  return out;
}

// Every full-weight string on `sites` (in site order).
std::vector<Matrix> strings_on(const std::vector<Matrix>& probes, std::size_t nsites) {
  std::vector<Matrix> out = {Matrix::Identity(1, 1)};
  for (std::size_t k = 0; k < nsites; ++k) {
    std::vector<Matrix> next;
    for (const auto& s : out)
      for (const auto& p : probes) {
        Matrix m(s.rows() * p.rows(), s.cols() * p.cols());
        for (Eigen::Index i = 0; i < s.rows(); ++i)
          for (Eigen::Index j = 0; j < s.cols(); ++j)
            m.block(i * p.rows(), j * p.cols(), p.rows(), p.cols()) = s(i, j) * p;
        next.push_back(std::move(m));
      }
    out = std::move(next);
  }
  return out;
}

}  // namespace

double clustering_lower(const DensityOperator& rho, const Region& a, const Region& b,
                        int max_weight) {
  if (!a.disjoint(b)) throw InvalidArgument("clustering regions overlap");
  require_inside(rho, a | b, "clustering");
  if (a.empty() || b.empty() || max_weight < 1) return 0.0;
  const auto probes = site_probes(a.lattice().site_dim());
  const auto lat = a.lattice_ptr();
  DensityOperator ab = partial_trace(rho, a | b);
  double best = 0;
  for (const auto& sa : site_subsets(a, max_weight)) {
    const Region ra(lat, sa);
    const auto pa = strings_on(probes, sa.size());
    for (const auto& sb : site_subsets(b, max_weight)) {
      const Region rb(lat, sb);
      Operator joint = partial_trace(ab.op(), ra | rb);
      Operator ma = partial_trace(joint, ra), mb = partial_trace(joint, rb);
      const auto pb = strings_on(probes, sb.size());
      std::vector<cplx> eb;
      for (const auto& q : pb) eb.push_back(trace_product(mb.matrix(), q));
      for (const auto& p : pa) {
        const cplx ea = trace_product(ma.matrix(), p);
        Operator op_p(ra, p);
        for (std::size_t k = 0; k < pb.size(); ++k) {
          const cplx e = trace_product(joint.matrix(),
                                       tensor_product(op_p, Operator(rb, pb[k])).matrix());
          best = std::max(best, std::abs(e - ea * eb[k]));
        }
      }
    }
  }
  return best;
}

DecayProfile clustering_profile(const LocalHamiltonian& h, double beta, const Region& x,
                                const PairFamily& family, const std::vector<double>& ells) {
  DecayProfile profile;
  profile.kind = "clustering";
  auto rho = gibbs(h, beta, x);
  for (double ell : ells) {
    DecaySample sample;
    sample.ell = ell;
    for (const auto& pair : family(ell)) {
      if (!x.contains(pair.a | pair.b))
        throw InvalidArgument("clustering pair outside the region " + x.describe());
      if (pair.a.empty() || pair.b.empty()) continue;
      if (distance(pair.a, pair.b) < ell - 1e-9)
        throw InvalidArgument("clustering pair " + pair.a.describe() + "/" + pair.b.describe() +
                              " closer than the claimed separation");
      const double up = clustering_upper(rho->state, pair.a, pair.b);
      const double lo = clustering_lower(rho->state, pair.a, pair.b);
      if (up > sample.value || sample.context.empty()) {
        sample.value = std::max(sample.value, up);
        sample.context = pair.context;
      }
      sample.aux = std::max(sample.aux, lo);
    }
    profile.samples.push_back(sample);
  }
  profile.fit = decay_fit(profile);
  return profile;
}

PairFamily anchor_pairs(const Region& x, const std::vector<int>& anchors) {
  return [x, anchors](double ell) {
    std::vector<RegionPair> out;
    for (int i : anchors) {
      Region a(x.lattice_ptr(), {i});
      if (!x.contains(a)) throw InvalidArgument("anchor outside the region");
      Region b = beyond(a, ell, x);
      if (b.empty()) continue;
      out.push_back({a, b, "anchor " + std::to_string(i)});
    }
    return out;
  };
}

// ------------------------------------------------------------ entropies

double mutual_information(const DensityOperator& rho, const Region& a) {
  require_inside(rho, a, "mutual information");
  const Region rest = rho.support() - a;
  const double mi =
      region_entropy(rho, a) + region_entropy(rho, rest) - von_neumann_entropy(rho);
  return std::max(mi, 0.0);
}

std::vector<AreaLawEntry> area_law_report(const LocalHamiltonian& h, double beta,
                                          const std::vector<Region>& regions) {
  const Region all = Region::all(h.lattice());
  auto rho = gibbs(h, beta, all);
  std::vector<AreaLawEntry> out;
  for (const auto& r : regions) {
    AreaLawEntry e;
    e.region = r;
    e.mutual_information = mutual_information(rho->state, r);
    e.boundary = boundary_sites(r, all).size();
    e.ratio = e.boundary ? e.mutual_information / e.boundary : 0.0;
    out.push_back(e);
  }
  return out;
}

double cmi_raw(const DensityOperator& rho, const Region& a, const Region& b, const Region& c) {
  if (!a.disjoint(b) || !a.disjoint(c) || !b.disjoint(c))
    throw InvalidArgument("conditional mutual information needs disjoint regions");
  const Region abc = a | b | c;
  require_inside(rho, abc, "conditional mutual information");
  DensityOperator r = partial_trace(rho, abc);
  return region_entropy(r, a | b) + region_entropy(r, b | c) - region_entropy(r, b) -
         region_entropy(r, abc);
}

double cmi(const DensityOperator& rho, const Region& a, const Region& b, const Region& c) {
  const double raw = cmi_raw(rho, a, b, c);
  if (raw < -kCmiTolerance)
    throw InvariantViolation("strong subadditivity violated: I(A:C|B) = " +
                             std::to_string(raw));
  return std::max(raw, 0.0);
}

void validate_tripartition(const Tripartition& t, double width) {
  if (!t.a.disjoint(t.b) || !t.a.disjoint(t.c) || !t.b.disjoint(t.c))
    throw InvalidArgument("tripartition regions overlap");
  if (!((t.a | t.b | t.c) == t.x))
    throw InvalidArgument("tripartition does not cover " + t.x.describe());
  if (!t.a.empty() && !t.c.empty() && distance(t.a, t.c) <= width + 1e-9)
    throw InvalidArgument("shield narrower than " + std::to_string(width) + " between " +
                          t.a.describe() + " and " + t.c.describe());
}

DecayProfile markov_profile(const LocalHamiltonian& h, double beta,
                            const TripartitionFamily& family, const std::vector<double>& ells) {
  DecayProfile profile;
  profile.kind = "markov";
  for (double ell : ells) {
    DecaySample sample;
    sample.ell = ell;
    for (const auto& t : family(ell)) {
      validate_tripartition(t, ell);
      auto rho = gibbs(h, beta, t.x);
      const double v = cmi(rho->state, t.a, t.b, t.c);
      if (v > sample.value || sample.context.empty()) {
        sample.value = std::max(sample.value, v);
        sample.context = t.context;
      }
    }
    profile.samples.push_back(sample);
  }
  profile.fit = decay_fit(profile);
  return profile;
}

double local_indistinguishability(const LocalHamiltonian& h, double beta, const Region& a,
                                  const Region& b, const Region& c) {
  if (!a.disjoint(b) || !a.disjoint(c) || !b.disjoint(c))
    throw InvalidArgument("local indistinguishability needs disjoint regions");
  if (c.empty()) return 0.0;
  auto full = gibbs(h, beta, a | b | c);
  auto shielded = gibbs(h, beta, a | b);
  return trace_norm(partial_trace(full->state, a).matrix() -
                    partial_trace(shielded->state, a).matrix());
}

Tripartition shielded_tripartition(const Region& x, const Region& a, double width,
                                   std::string context) {
  Tripartition t;
  t.x = x;
  t.a = a;
  t.b = annulus(a, width, x);
  t.c = x - a - t.b;
  t.context = std::move(context);
  return t;
}

}  // namespace qgibbs
