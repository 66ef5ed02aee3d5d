// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "oracles.hpp"
#include "qgibbs/belief_propagation.hpp"
#include "qgibbs/errors.hpp"
#include "qgibbs/gibbs.hpp"
#include "qgibbs/patch_circuit.hpp"
#include "qgibbs/recovery.hpp"

using namespace qgibbs;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

// Smallest raw CMI seen anywhere in the gate.
double g_min_cmi = INFINITY;

double tracked_cmi(const DensityOperator& rho, const Region& a, const Region& b, const Region& c) {
  g_min_cmi = std::min(g_min_cmi, cmi_raw(rho, a, b, c));
  return cmi(rho, a, b, c);
}

Region sites(const LatticePtr& lat, std::vector<int> s) { return Region(lat, std::move(s)); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

Outcome commuting_exactness() {
  Outcome o;
  auto chain = make_lattice({10});
  auto ising = build_model("classical_ising", {}, chain);
  const Region all = Region::all(chain);
  double worst_delta = 0, worst_gamma = 0, worst_petz = 0;
  for (double beta : {0.3, 0.8}) {
    auto rho = gibbs(ising, beta, all);
    for (int anchor : {0, 4}) {
      const Region a = sites(chain, {anchor});
      for (double ell : {1.0, 2.0, 3.0}) {
        Tripartition t = shielded_tripartition(all, a, ell);
        worst_delta = std::max(worst_delta, tracked_cmi(rho->state, t.a, t.b, t.c));
        // Petz on the bulk site, where the shield has two sides.
        if (anchor == 0) continue;
        RecoveryChannel r = RecoveryChannel::petz(partial_trace(rho->state, t.a | t.b), t.a, t.b);
        worst_petz = std::max(worst_petz, recovery_error(rho->state, t.a, t.b, t.c, r).trace_distance);
      }
      DecayProfile d = markov_profile(
          ising, beta,
          [&](double ell) { return std::vector<Tripartition>{shielded_tripartition(all, a, ell)}; },
          {1, 2, 3, 4});
      for (const auto& s : d.samples) worst_delta = std::max(worst_delta, s.value);
    }
    // Couplings have range 1, so every radius ≥ 1 is beyond it.
    BPProfile site = bp_decay_profile(ising, beta, sites(chain, {5}), {1, 2, 3});
    for (const auto& s : site.profile.samples) worst_gamma = std::max(worst_gamma, s.value);
  }
  o.require(worst_delta <= 1e-10, "delta " + fmt(worst_delta));
  o.require(worst_gamma <= 1e-10, "gamma " + fmt(worst_gamma));
  o.require(worst_petz <= 1e-9, "petz " + fmt(worst_petz));
  o.detail = "max delta=" + fmt(worst_delta) + " gamma=" + fmt(worst_gamma) +
             " petz=" + fmt(worst_petz) + (o.detail.empty() ? "" : " [" + o.detail + "]");
  return o;
}

Outcome commuting_preparation() {
  Outcome o;
  auto chain = make_lattice({10});
  auto ising = build_model("classical_ising", {}, chain);
  CircuitPlan plan = build_plan(ising, 0.8, 4, 1);
  RunResult res = run_plan(plan, DensityOperator::maximally_mixed(Region::all(chain)));
  o.require(res.report.distance <= 1e-7, "distance too large");
  o.detail = "distance=" + fmt(res.report.distance) + (o.pass ? "" : " [" + o.detail + "]");
  return o;
}

Outcome noncommuting_monotonicity() {
  Outcome o;
  auto chain = make_lattice({10});
  auto tfim = build_model("transverse_field_ising", {{"g", 1.0}}, chain);
  const Region all = Region::all(chain);
  const double beta = 0.3;
  const std::vector<double> ells{1, 2, 3};
  const Region a = sites(chain, {0, 1});

  std::vector<double> li, dist;
  RunOptions opt;
  opt.measure_premises = false;
  for (double ell : ells) {
    Tripartition t = shielded_tripartition(all, a, ell);
    li.push_back(local_indistinguishability(tfim, beta, t.a, t.b, t.c));
    tracked_cmi(gibbs(tfim, beta, all)->state, t.a, t.b, t.c);
    CircuitPlan plan = build_plan(tfim, beta, 7, static_cast<int>(ell));
    dist.push_back(run_plan(plan, DensityOperator::maximally_mixed(all), opt).report.distance);
  }
  o.require(strictly_decreasing(li), "LI not strictly decreasing");
  o.require(strictly_decreasing(dist), "distance not strictly decreasing");

  DecayProfile eps = clustering_profile(tfim, beta, all, anchor_pairs(all, {0}), ells);
  DecayProfile del = markov_profile(
      tfim, beta,
      [&](double ell) { return std::vector<Tripartition>{shielded_tripartition(all, a, ell)}; }, ells);
  BPProfile gam = bp_decay_profile(tfim, beta, sites(chain, {5}), ells);
  const DecayFit* fits[] = {&eps.fit, &del.fit, &gam.profile.fit};
  const char* names[] = {"epsilon", "delta", "gamma"};
  std::string rates;
  for (int k = 0; k < 3; ++k) {
    o.require(fits[k]->fitted && fits[k]->c2 > 0, std::string(names[k]) + " fit not decaying");
    rates += std::string(" c2_") + names[k] + "=" + (fits[k]->fitted ? fmt(fits[k]->c2) : "n/a");
  }
  o.detail = "LI=" + fmt(li[0]) + "," + fmt(li[1]) + "," + fmt(li[2]) + " distance=" + fmt(dist[0]) +
             "," + fmt(dist[1]) + "," + fmt(dist[2]) + rates +
             (o.pass ? "" : " [" + o.detail + "]");
  return o;
}

Outcome covariance_oracle() {
  Outcome o;
  const int n = 10;
  const double beta = 0.4;
  auto chain = make_lattice({n});
  auto rho = gibbs(build_model("classical_ising", {}, chain), beta, Region::all(chain));
  double worst = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double c = covariance(rho->state, Operator(sites(chain, {i}), pauli('Z')),
                                  Operator(sites(chain, {j}), pauli('Z')));
      worst = std::max(worst, std::abs(c - std::pow(std::tanh(beta), j - i)));
    }
  o.require(worst <= 1e-8, "mismatch");
  o.detail = "max |cov - tanh^d|=" + fmt(worst) + " over 45 pairs";
  return o;
}

Outcome fr_battery() {
  Outcome o;
  int instances = 0, converse_ok = 0, fidelity_ok = 0;
  auto check = [&](const DensityOperator& sigma, const Region& a, const Region& b, const Region& c,
                   Rotation rot) {
    ++instances;
    tracked_cmi(sigma, a, b, c);
    RecoveryChannel r = RecoveryChannel::petz(partial_trace(sigma, a | b), a, b, rot);
    try {
      RecoveryError e = recovery_error(sigma, a, b, c, r);
      if (e.fr.converse) ++converse_ok;
      if (e.fr.fidelity_bound) ++fidelity_ok;
    } catch (const InvariantViolation&) {
    }
  };

  std::mt19937_64 rng(2024);
  const int shapes[][3] = {{1, 1, 1}, {1, 2, 1}, {2, 1, 1}, {1, 1, 2}, {2, 2, 1}, {1, 2, 2}, {2, 1, 2}, {1, 3, 1}};
  for (const auto& s : shapes) {
    auto lat = make_lattice({s[0] + s[1] + s[2]});
    std::vector<double> p = oracle::markov_chain(s[0], s[1], s[2], rng);
    Matrix m = Matrix::Zero(p.size(), p.size());
    for (std::size_t i = 0; i < p.size(); ++i) m(i, i) = p[i];
    DensityOperator sigma(Region::all(lat), m);
    check(sigma, Region::interval(lat, 0, s[0] - 1), Region::interval(lat, s[0], s[0] + s[1] - 1),
          Region::interval(lat, s[0] + s[1], s[0] + s[1] + s[2] - 1), Rotation::plain());
  }

  for (int n : {3, 4, 5}) {
    auto lat = make_lattice({n});
    DensityOperator g(Region::all(lat), oracle::ghz(n));
    check(g, sites(lat, {0}), sites(lat, {1}), Region::interval(lat, 2, n - 1), Rotation::plain());
    check(g, sites(lat, {0}), Region::interval(lat, 1, n - 2), sites(lat, {n - 1}),
          Rotation::integrated());
  }

  auto chain = make_lattice({8});
  auto tfim = build_model("transverse_field_ising", {}, chain);
  const Region all = Region::all(chain);
  for (double beta : {0.3, 0.7, 1.5}) {
    auto rho = gibbs(tfim, beta, all);
    for (double ell : {1.0, 2.0}) {
      Tripartition t = shielded_tripartition(all, sites(chain, {3}), ell);
      check(rho->state, t.a, t.b, t.c, Rotation::plain());
      check(rho->state, t.a, t.b, t.c, Rotation::integrated());
    }
  }

  o.require(instances >= 20, "too few instances");
  o.require(converse_ok == instances, "converse failed");
  o.detail = std::to_string(converse_ok) + "/" + std::to_string(instances) +
             " satisfy the converse (" + std::to_string(fidelity_ok) + " also the fidelity bound)";
  return o;
}

Outcome union_property() {
  Outcome o;
  auto chain = make_lattice({10});
  auto tfim = build_model("transverse_field_ising", {}, chain);
  const Region all = Region::all(chain);
  auto rho = gibbs(tfim, 0.5, all);
  const Region a1 = sites(chain, {2}), b1 = sites(chain, {1, 3});
  const Region a2 = sites(chain, {7}), b2 = sites(chain, {6, 8});
  auto err = [&](const Region& a, const Region& b, const RecoveryChannel& r) {
    tracked_cmi(rho->state, a, b, all - a - b);
    return recovery_error(rho->state, a, b, all - a - b, r).trace_distance;
  };
  RecoveryChannel r1 = RecoveryChannel::petz(partial_trace(rho->state, a1 | b1), a1, b1);
  RecoveryChannel r2 = RecoveryChannel::petz(partial_trace(rho->state, a2 | b2), a2, b2);
  const double e1 = err(a1, b1, r1), e2 = err(a2, b2, r2);
  const double e12 = err(a1 | a2, b1 | b2, union_compose(r1, r2));
  o.require(e12 <= e1 + e2 + 1e-9, "union error exceeds the sum");
  o.detail = "e12=" + fmt(e12) + " e1+e2=" + fmt(e1 + e2);
  return o;
}

Outcome bp_identity() {
  Outcome o;
  double worst_residual = 0;
  auto c8 = make_lattice({8});
  auto tfim = build_model("transverse_field_ising", {}, c8);
  // Radius 3 already covers the chain, so the profile stops at 2.
  BPProfile p = bp_decay_profile(tfim, 0.5, sites(c8, {3, 4}), {0, 1, 2},
                                 PerturbationMode::Contained);
  worst_residual = std::max(worst_residual, p.identity_residual);
  for (int s : {0, 3})
    worst_residual = std::max(worst_residual,
                              bp_decay_profile(tfim, 0.5, sites(c8, {s}), {1}).identity_residual);
  auto heis = build_model("heisenberg", {}, c8);
  worst_residual = std::max(
      worst_residual,
      bp_decay_profile(heis, 0.5, sites(c8, {3, 4}), {1}, PerturbationMode::Contained).identity_residual);

  bool monotone = true;
  double largest_log = 0;
  for (std::size_t i = 0; i < p.profile.samples.size(); ++i) {
    if (i && p.profile.samples[i].value > p.profile.samples[i - 1].value) monotone = false;
    largest_log = std::max(largest_log, std::abs(std::log(p.profile.samples[i].value)));
  }
  const DecayFit& f = p.profile.fit;
  o.require(worst_residual <= 1e-10, "identity residual");
  o.require(monotone, "gamma not non-increasing");
  o.require(f.fitted && f.c2 > 0 && f.residual < 0.1 * largest_log, "fit");
  o.detail = "residual=" + fmt(worst_residual) + " fit c2=" + (f.fitted ? fmt(f.c2) : "n/a") +
             " rms=" + fmt(f.residual) + " vs 10% of " + fmt(largest_log);
  return o;
}

Outcome input_independence_and_schedule() {
  Outcome o;
  auto chain = make_lattice({10});
  auto tfim = build_model("transverse_field_ising", {}, chain);
  CircuitPlan plan = build_plan(tfim, 0.3, 4, 1);
  RunOptions opt;
  opt.measure_premises = false;
  RunResult mixed = run_plan(plan, DensityOperator::maximally_mixed(Region::all(chain)), opt);
  RunResult ground = run_plan(plan, ground_state(tfim), opt);
  const double gap = trace_norm(mixed.state.matrix() - ground.state.matrix());
  o.require(gap <= 1e-9, "inputs disagree");

  int mismatched = 0, checked = 0;
  for (int dim : {1, 2})
    for (int k = 4; k <= 20; ++k) {
      const double side = std::ldexp(1.0, k);
      for (double c : {0.5, 1.0, 2.0}) {
        DecayFit f;
        f.fitted = true;
        f.c1 = 1;
        f.c2 = c;
        ++checked;
        if (depth_schedule(side, dim, 0.01, {f}).levels !=
            oracle::exponential_levels(side, dim, 0.01, 1, c))
          ++mismatched;
      }
      for (int m = 1; m <= 6; ++m) {
        ++checked;
        const int expect = dim * ((k + m - 1) / m);
        if (depth_schedule(side, dim, std::ldexp(1.0, -m), {}).strictly_local_depth != expect)
          ++mismatched;
      }
    }
  o.require(mismatched == 0, std::to_string(mismatched) + " schedule mismatches");
  o.detail = "input gap=" + fmt(gap) + ", schedule " + std::to_string(checked - mismatched) + "/" +
             std::to_string(checked) + " match";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
    double budget_seconds;
  };
  const Criterion criteria[] = {
      {"commuting exactness", commuting_exactness, 30},
      {"commuting preparation", commuting_preparation, 60},
      {"non-commuting monotonicity", noncommuting_monotonicity, 300},
      {"covariance oracle", covariance_oracle, 0},
      {"recovery bound battery", fr_battery, 0},
      {"union of recoveries", union_property, 0},
      {"belief-propagation identity", bp_identity, 0},
      {"input independence and depth schedule", input_independence_and_schedule, 0},
  };
  int failures = 0;
  int index = 0;
  for (const auto& c : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("error: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0 && secs > c.budget_seconds) {
      o.pass = false;
      o.detail += " [over " + fmt(c.budget_seconds) + " s]";
    }
    // Strong subadditivity is a suite-wide condition, reported with the battery.
    if (index == 5) {
      if (g_min_cmi < -kCmiTolerance) o.pass = false;
      o.detail += "; min raw CMI so far=" + fmt(g_min_cmi);
    }
    if (!o.pass) ++failures;
    std::printf("%s %d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", index, c.name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("SSA over the whole gate: min raw CMI=%s %s\n", fmt(g_min_cmi).c_str(),
              g_min_cmi >= -kCmiTolerance ? "ok" : "violated");
  if (g_min_cmi < -kCmiTolerance) ++failures;
  return failures ? 1 : 0;
}
