#include "qgibbs/patch_circuit.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "qgibbs/belief_propagation.hpp"
#include "qgibbs/errors.hpp"

namespace qgibbs {

std::vector<Region> CircuitPlan::reference_regions() const {
  std::vector<Region> out;
  for (const auto& s : stages)
    if (std::find(out.begin(), out.end(), s.reference) == out.end()) out.push_back(s.reference);
  return out;
}

namespace {

void require_disjoint_channels(const Stage& stage) {
  for (std::size_t i = 0; i < stage.channels.size(); ++i)
    for (std::size_t j = i + 1; j < stage.channels.size(); ++j) {
      const auto& a = stage.channels[i];
      const auto& b = stage.channels[j];
      if (!(a.erased | a.shield).disjoint(b.erased | b.shield))
        throw InvariantViolation("stage " + stage.name + " has overlapping channels");
    }
}

}  // namespace

CircuitPlan build_plan(const LocalHamiltonian& h, double beta, int r, int ell) {
  if (!std::isfinite(beta) || beta < 0)
    throw InvalidArgument("inverse temperature must be finite and non-negative");
  CircuitPlan plan;
  plan.hamiltonian = h;
  plan.beta = beta;
  plan.tiling = tiling_plan(h.lattice(), r, ell);
  const Tiling& t = plan.tiling;
  const Region everything = Region::all(h.lattice());

  if (!t.stage_c.empty()) {
    Stage c;
    c.name = "C";
    c.reference = t.stage_c;
    // Clusters that no term connects, so ρ^C is the product of its marginals.
    const double link = std::max(double(ell), h.range() + 1e-6);
    for (const auto& comp : clusters(t.stage_c, link)) {
      ChannelSpec spec;
      spec.kind = ChannelSpec::Kind::Replacement;
      spec.erased = comp;
      spec.shield = Region::none(h.lattice());
      spec.inner = comp;
      c.channels.push_back(spec);
    }
    plan.stages.push_back(std::move(c));
  }

  for (int g = t.num_b_groups() - 1; g >= 0; --g) {
    Stage b;
    b.name = "B" + std::to_string(g);
    b.reference = t.b_ambient[g];
    for (std::size_t j = 0; j < t.stage_b.size(); ++j) {
      const auto& tile = t.stage_b[j];
      if (tile.group != g) continue;
      ChannelSpec spec;
      spec.erased = tile.core;
      spec.shield = tile.outer - tile.core;
      spec.inner = tile.inner;
      spec.tile = static_cast<int>(j);
      b.channels.push_back(spec);
    }
    if (!b.channels.empty()) plan.stages.push_back(std::move(b));
  }

  Stage a;
  a.name = "A";
  a.reference = everything;
  for (std::size_t j = 0; j < t.stage_a.size(); ++j) {
    const auto& tile = t.stage_a[j];
    ChannelSpec spec;
    spec.erased = tile.core;
    spec.shield = tile.outer - tile.core;
    spec.inner = tile.inner;
    spec.tile = static_cast<int>(j);
    a.channels.push_back(spec);
  }
  plan.stages.push_back(std::move(a));

  for (const auto& s : plan.stages) {
    require_within_cap(s.reference);
    for (const auto& ch : s.channels)
      if (!s.reference.contains(ch.erased | ch.shield))
        throw InvariantViolation("channel of stage " + s.name + " reaches outside its reference");
    require_disjoint_channels(s);
  }
  return plan;
}

DensityOperator run_stage(const CircuitPlan& plan, int stage_index, const DensityOperator& state,
                          double* max_trace_loss, bool reverse_tile_order) {
  const Stage& stage = plan.stages.at(stage_index);
  auto ref = gibbs(plan.hamiltonian, plan.beta, stage.reference);
  const Region full = state.support();
  std::vector<const ChannelSpec*> order;
  for (const auto& ch : stage.channels) order.push_back(&ch);
  if (reverse_tile_order) std::reverse(order.begin(), order.end());

  DensityOperator cur = state;
  double loss = 0;
  for (const ChannelSpec* ch : order) {
    DensityOperator kept = partial_trace(cur, full - ch->erased);
    if (ch->kind == ChannelSpec::Kind::Replacement) {
      cur = tensor_product(kept, partial_trace(ref->state, ch->erased));
    } else {
      RecoveryChannel r = RecoveryChannel::petz(partial_trace(ref->state, ch->erased | ch->shield),
                                                ch->erased, ch->shield);
      RecoveryOutput out = apply_recovery(r, kept);
      loss = std::max(loss, out.trace_loss);
      cur = std::move(out.state);
    }
  }
  if (max_trace_loss) *max_trace_loss = loss;
  return cur;
}

Premises measure_premises(const CircuitPlan& plan) {
  Premises p;
  const LocalHamiltonian& h = plan.hamiltonian;
  const double half = plan.tiling.buffer / 2.0;
  for (const auto& stage : plan.stages) {
    if (stage.name == "C") continue;
    const Region& x = stage.reference;
    auto rho = gibbs(h, plan.beta, x);
    std::set<int> anchors;
    for (const auto& ch : stage.channels) {
      const Region rest = x - ch.erased - ch.shield;
      p.delta = std::max(p.delta, cmi(rho->state, ch.erased, ch.shield, rest));
      if (!ch.inner.empty() && !(ch.inner == x)) {
        const Region edge = boundary_sites(ch.inner, x);
        anchors.insert(edge.sites().begin(), edge.sites().end());
      }
    }
    for (int c : anchors) {
      const Region site(h.lattice(), {c});
      const Region far = beyond(site, half, x);
      if (!far.empty()) p.epsilon = std::max(p.epsilon, clustering_upper(rho->state, site, far));
      BPProfile bp = bp_decay_profile(h, plan.beta, site, {half}, PerturbationMode::Touching, &x);
      p.gamma = std::max(p.gamma, bp.profile.samples.front().value);
    }
  }
  return p;
}

RunResult run_plan(const CircuitPlan& plan, const DensityOperator& psi, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const Region everything = Region::all(plan.hamiltonian.lattice());
  if (!(psi.support() == everything))
    throw InvalidArgument("input state must live on the whole lattice");
  auto rho = gibbs(plan.hamiltonian, plan.beta, everything);

  RunResult res;
  PreparationReport& rep = res.report;
  rep.num_a_tiles = plan.num_a_tiles();
  rep.num_b_tiles = plan.num_b_tiles();
  rep.ell = plan.tiling.buffer;
  rep.r = plan.tiling.tile_size;

  DensityOperator cur = psi;
  const int n = options.stage_limit ? std::min<int>(*options.stage_limit, plan.stages.size())
                                    : static_cast<int>(plan.stages.size());
  for (int s = 0; s < n; ++s) {
    StageRecord rec;
    rec.name = plan.stages[s].name;
    rec.channels = static_cast<int>(plan.stages[s].channels.size());
    cur = run_stage(plan, s, cur, &rec.max_trace_loss, options.reverse_tile_order);
    rec.distance_to_target = trace_norm(cur.matrix() - rho->state.matrix());
    const Region& x = plan.stages[s].reference;
    auto ref = gibbs(plan.hamiltonian, plan.beta, x);
    rec.distance_to_reference =
        x == everything ? rec.distance_to_target
                        : trace_norm(partial_trace(cur, x).matrix() - ref->state.matrix());
    rep.stages.push_back(rec);
  }
  rep.distance = trace_norm(cur.matrix() - rho->state.matrix());

  if (options.measure_premises) {
    Premises p = measure_premises(plan);
    rep.premises = p;
    const Lattice& lat = *plan.hamiltonian.lattice();
    const int d = lat.num_dimensions();
    const double total = p.delta + p.epsilon + p.gamma;
    rep.rhs_unit = d * std::pow(double(lat.side_length()), d) * total;
    rep.rhs_1d_unit = plan.num_a_tiles() * total;
  }
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  res.state = std::move(cur);
  return res;
}

RunResult prepare_1d(const LocalHamiltonian& h, double beta, int ell, const DensityOperator& psi,
                     int r) {
  const Lattice& lat = *h.lattice();
  if (lat.num_dimensions() != 1) throw InvalidArgument("prepare_1d needs a one-dimensional lattice");
  if (r == 0) r = std::min(4 * ell, lat.num_sites());
  CircuitPlan plan = build_plan(h, beta, r, ell);
  return run_plan(plan, psi);
}

DensityOperator ground_state(const LocalHamiltonian& h) {
  Operator hm = h.assemble();
  HermitianEig eig = eigh(hm.matrix());
  return DensityOperator::pure(hm.support(), eig.vectors.col(0));
}

// ------------------------------------------------------------- schedule

DepthSchedule depth_schedule(double side, int dimension, double target,
                             const std::vector<DecayFit>& fits) {
  DepthSchedule s;
  s.side = side;
  s.dimension = dimension;
  s.target = target;
  if (dimension < 1) throw InvalidArgument("dimension must be positive");
  if (!(side >= 1)) throw InvalidArgument("side length must be at least 1");
  if (!(target > 0)) throw InvalidArgument("target error must be positive");

  if (target >= 1)
    s.strictly_local_depth = target >= 2 ? 0 : -1;
  else
    s.strictly_local_depth =
        dimension * static_cast<int>(std::ceil(std::log(side) / std::log(1 / target) - 1e-12));
  if (target >= 2) {
    s.feasible = true;
    s.reason = "target at or above the trivial trace-distance bound";
    return s;
  }
  if (fits.empty()) {
    s.reason = "no decay fits supplied";
    return s;
  }
  for (const auto& f : fits) {
    if (!f.decaying()) {
      s.reason = "a decay fit is missing or not decaying";
      return s;
    }
    if (f.form == DecayForm::PowerLaw && f.c2 <= dimension) {
      s.reason = "power-law decay not faster than 1/l^D";
      return s;
    }
  }
  auto err = [&](double l) {
    double e = 0;
    for (const auto& f : fits) e += f(l);
    return e;
  };
  auto next = [&](double l) { return std::pow(target / (dimension * err(l)), 1.0 / dimension); };

  constexpr int kSearch = 1000000;
  int base = 0;
  for (int l = 1; l <= kSearch; ++l)
    if (next(l) > l) {
      base = l;
      break;
    }
  if (!base) {
    s.reason = "patch size never grows under the fitted decay";
    return s;
  }
  s.scales.push_back(base);
  while (s.scales.back() < side) {
    const double nxt = next(s.scales.back());
    if (!(nxt > s.scales.back())) {
      s.reason = "patch growth stalled";
      return s;
    }
    s.scales.push_back(nxt);
  }
  s.feasible = true;
  s.levels = static_cast<int>(s.scales.size()) - 1;
  s.depth = (dimension + 1) * s.levels;
  return s;
}

}  // namespace qgibbs
