#include "qgibbs/commands.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <random>
#include <sstream>

#include "qgibbs/belief_propagation.hpp"
#include "qgibbs/errors.hpp"
#include "qgibbs/gibbs.hpp"
#include "qgibbs/patch_circuit.hpp"
#include "qgibbs/recovery.hpp"
#include "qgibbs/report.hpp"

namespace qgibbs {

using nlohmann::json;

json config_to_json(const RunConfig& cfg) {
  json j = {{"command", cfg.command}, {"beta", cfg.beta}, {"ells", cfg.ells},
            {"seed", cfg.seed}};
  if (cfg.spec_file.empty()) {
    j["model"] = cfg.model;
    j["params"] = cfg.params;
    j["dims"] = cfg.dims;
    j["periodic"] = cfg.periodic;
  } else {
    j["spec_file"] = cfg.spec_file;
  }
  if (cfg.command == "clustering" || cfg.command == "markov" || cfg.command == "recover")
    j["anchor"] = cfg.anchor;
  if (cfg.command == "bp") {
    j["sites"] = cfg.sites;
    j["mode"] = cfg.mode;
  }
  if (cfg.command == "recover") j["rotation"] = cfg.rotation;
  if (cfg.command == "prepare") {
    j["r"] = cfg.r;
    j["schedule_only"] = cfg.schedule_only;
    j["input_state"] = cfg.input_state;
    if (cfg.schedule_only) {
      j["target"] = cfg.target;
      j["side"] = cfg.side;
      j["fits"] = cfg.fits;
    }
  }
  return j;
}

LocalHamiltonian load_model(const RunConfig& cfg) {
  if (!cfg.spec_file.empty()) return load_hamiltonian(cfg.spec_file);
  std::vector<bool> periodic(cfg.dims.size(), cfg.periodic);
  return build_model(cfg.model, cfg.params, make_lattice(cfg.dims, periodic));
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const DimensionCapExceeded*>(&e)) return 2;
  if (dynamic_cast<const InvariantViolation*>(&e)) return 3;
  return 1;
}

namespace {

struct Context {
  const RunConfig& cfg;
  LocalHamiltonian h;
  Region all;
  std::filesystem::path out;

  void write(const std::string& name, const std::string& text) const {
    write_text((out / name).string(), text);
  }
};

int anchor_site(const Context& c) {
  const int a = c.cfg.anchor < 0 ? 0 : c.cfg.anchor;
  if (a >= c.all.size()) throw InvalidArgument("anchor site outside the lattice");
  return a;
}

int central_site(const Lattice& lat) {
  std::vector<int> mid;
  for (int d : lat.dims()) mid.push_back(d / 2);
  return lat.site_index(mid);
}

json gibbs_command(const Context& c) {
  auto g = gibbs(c.h, c.cfg.beta, c.all);
  RealVector pops = eigvalsh(g->state.matrix());
  std::vector<double> sorted(pops.data(), pops.data() + pops.size());
  std::sort(sorted.rbegin(), sorted.rend());
  sorted.resize(std::min<std::size_t>(sorted.size(), 16));
  json j = {{"sites", c.all.size()},
            {"dimension", c.all.dimension()},
            {"log_partition", g->log_partition},
            {"entropy_bits", g->entropy_bits},
            {"largest_populations", sorted}};
  if (g->energies.size()) {
    j["ground_energy"] = g->energies(0);
    j["highest_energy"] = g->energies(g->energies.size() - 1);
  }
  return j;
}

json clustering_command(const Context& c) {
  const int a = anchor_site(c);
  DecayProfile p = clustering_profile(c.h, c.cfg.beta, c.all, anchor_pairs(c.all, {a}),
                                      c.cfg.ells);
  // Seeded duality spot-check: random unit-norm probes never beat the bound.
  std::mt19937_64 rng(c.cfg.seed);
  std::normal_distribution<double> normal;
  const int d = c.h.lattice()->site_dim();
  auto random_probe = [&](int site) {
    Matrix m(d, d);
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k) m(i, k) = cplx(normal(rng), normal(rng));
    m = hermitize(m);
    return Operator(Region(c.h.lattice(), {site}), m / operator_norm(m));
  };
  auto rho = gibbs(c.h, c.cfg.beta, c.all);
  json probes = json::array();
  for (const auto& s : p.samples) {
    const Region site(c.h.lattice(), {a});
    const Region far = beyond(site, s.ell, c.all);
    double best = 0;
    for (int k = 0; k < 4 && !far.empty(); ++k) {
      const int partner = far.sites()[rng() % far.size()];
      const double cov = covariance(rho->state, random_probe(a), random_probe(partner));
      if (cov > s.value + 1e-12)
        throw InvariantViolation("random probe covariance exceeds the trace-norm bound");
      best = std::max(best, cov);
    }
    probes.push_back({{"ell", s.ell}, {"max_probe_covariance", best}});
  }
  c.write("clustering.csv", profile_csv(p));
  json j = profile_to_json(p);
  j["random_probes"] = probes;
  return j;
}

json markov_command(const Context& c) {
  const Region a(c.h.lattice(), {anchor_site(c)});
  auto family = [&](double ell) {
    return std::vector<Tripartition>{
        shielded_tripartition(c.all, a, ell, "A=" + a.describe())};
  };
  DecayProfile p = markov_profile(c.h, c.cfg.beta, family, c.cfg.ells);
  c.write("markov.csv", profile_csv(p));
  return profile_to_json(p);
}

json bp_command(const Context& c) {
  std::vector<int> sites = c.cfg.sites;
  if (sites.empty()) sites = {central_site(*c.h.lattice())};
  const Region s(c.h.lattice(), sites);
  PerturbationMode mode;
  if (c.cfg.mode == "touching") mode = PerturbationMode::Touching;
  else if (c.cfg.mode == "contained") mode = PerturbationMode::Contained;
  else throw InvalidArgument("mode must be 'touching' or 'contained'");
  BPProfile bp = bp_decay_profile(c.h, c.cfg.beta, s, c.cfg.ells, mode);
  c.write("bp.csv", profile_csv(bp.profile));
  json j = profile_to_json(bp.profile);
  j["eta_norm"] = bp.eta_norm;
  j["eta_norm_reference"] = bp.eta_norm_reference;
  j["eta_norm_exceeds_reference"] = bp.eta_norm_exceeds_reference;
  j["identity_residual"] = bp.identity_residual;
  return j;
}

json recover_command(const Context& c) {
  Rotation rot;
  if (c.cfg.rotation == "plain") rot = Rotation::plain();
  else if (c.cfg.rotation == "integrated") rot = Rotation::integrated();
  else throw InvalidArgument("rotation must be 'plain' or 'integrated'");
  const Region a(c.h.lattice(), {anchor_site(c)});
  auto rho = gibbs(c.h, c.cfg.beta, c.all);
  json rows = json::array();
  DecayProfile p;
  p.kind = "recovery";
  for (double ell : c.cfg.ells) {
    Tripartition t = shielded_tripartition(c.all, a, ell);
    RecoveryChannel r =
        RecoveryChannel::petz(partial_trace(rho->state, t.a | t.b), t.a, t.b, rot);
    RecoveryError e = recovery_error(rho->state, t.a, t.b, t.c, r);
    json row = recovery_to_json(e);
    row["ell"] = ell;
    row["erased"] = region_to_json(t.a);
    row["shield"] = region_to_json(t.b);
    rows.push_back(row);
    p.samples.push_back({ell, e.trace_distance, e.fr.cmi, "cmi in aux"});
  }
  p.fit = decay_fit(p);
  c.write("recover.csv", profile_csv(p));
  return {{"rotation", rot.describe()}, {"instances", rows}, {"fit", fit_to_json(p.fit)}};
}

DecayFit parse_fit(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() < 2 || parts.size() > 3)
    throw InvalidArgument("fit must be written c1:c2 or c1:c2:power, got '" + text + "'");
  DecayFit f;
  try {
    f.c1 = std::stod(parts[0]);
    f.c2 = std::stod(parts[1]);
  } catch (const std::exception&) {
    throw InvalidArgument("fit coefficients must be numbers: '" + text + "'");
  }
  if (parts.size() == 3) {
    if (parts[2] == "power") f.form = DecayForm::PowerLaw;
    else if (parts[2] != "exp") throw InvalidArgument("fit form must be exp or power");
  }
  f.fitted = true;
  f.n_used = 0;
  return f;
}

json prepare_command(const Context& c) {
  const Lattice& lat = *c.h.lattice();
  if (c.cfg.schedule_only) {
    std::vector<DecayFit> fits;
    json sources = json::array();
    if (!c.cfg.fits.empty()) {
      for (const auto& f : c.cfg.fits) fits.push_back(parse_fit(f));
      sources.push_back("supplied");
    } else {
      const int a = anchor_site(c);
      DecayProfile eps = clustering_profile(c.h, c.cfg.beta, c.all, anchor_pairs(c.all, {a}),
                                            c.cfg.ells);
      const Region ar(c.h.lattice(), {a});
      DecayProfile del = markov_profile(
          c.h, c.cfg.beta,
          [&](double ell) { return std::vector<Tripartition>{shielded_tripartition(c.all, ar, ell)}; },
          c.cfg.ells);
      fits = {eps.fit, del.fit};
      sources.push_back(profile_to_json(eps));
      sources.push_back(profile_to_json(del));
    }
    const double side = c.cfg.side > 0 ? c.cfg.side : lat.side_length();
    DepthSchedule s = depth_schedule(side, lat.num_dimensions(), c.cfg.target, fits);
    json j = schedule_to_json(s);
    j["fit_sources"] = sources;
    c.write("schedule.csv", [&] {
      std::ostringstream os;
      os << "level,scale\n";
      for (std::size_t k = 0; k < s.scales.size(); ++k)
        os << k << ',' << format_double(s.scales[k]) << '\n';
      return os.str();
    }());
    return j;
  }

  DensityOperator psi;
  if (c.cfg.input_state == "mixed") psi = DensityOperator::maximally_mixed(c.all);
  else if (c.cfg.input_state == "ground") psi = ground_state(c.h);
  else throw InvalidArgument("input state must be 'mixed' or 'ground'");

  double max_ell = 0;
  for (double e : c.cfg.ells) max_ell = std::max(max_ell, e);
  const int r = c.cfg.r > 0 ? c.cfg.r
                            : std::min(lat.side_length(), static_cast<int>(4 * max_ell));
  json runs = json::array();
  DecayProfile p;
  p.kind = "preparation";
  for (double e : c.cfg.ells) {
    const int ell = static_cast<int>(e);
    if (ell != e || ell < 1) throw InvalidArgument("prepare needs integer buffer widths >= 1");
    CircuitPlan plan = build_plan(c.h, c.cfg.beta, r, ell);
    RunResult res = run_plan(plan, psi);
    json run = preparation_to_json(res.report);
    run["plan"] = plan_to_json(plan);
    runs.push_back(run);
    p.samples.push_back({e, res.report.distance, res.report.rhs_unit, "r=" + std::to_string(r)});
  }
  p.fit = decay_fit(p);
  c.write("prepare.csv", profile_csv(p));
  return {{"runs", runs}, {"fit", fit_to_json(p.fit)}};
}

}  // namespace

json execute(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  if (!std::isfinite(cfg.beta) || cfg.beta < 0)
    throw InvalidArgument("beta must be finite and non-negative");
  if (cfg.ells.empty()) throw InvalidArgument("at least one ell value is required");
  for (double e : cfg.ells)
    if (!std::isfinite(e) || e < 0) throw InvalidArgument("ell values must be non-negative");

  Context c{cfg, load_model(cfg), {}, cfg.out};
  c.all = Region::all(c.h.lattice());
  std::filesystem::create_directories(c.out);

  json body;
  if (cfg.command == "gibbs") body = gibbs_command(c);
  else if (cfg.command == "clustering") body = clustering_command(c);
  else if (cfg.command == "markov") body = markov_command(c);
  else if (cfg.command == "bp") body = bp_command(c);
  else if (cfg.command == "recover") body = recover_command(c);
  else if (cfg.command == "prepare") body = prepare_command(c);
  else throw InvalidArgument("unknown command '" + cfg.command + "'");

  const json config = config_to_json(cfg);
  json report = {{"version", kVersion},
                 {"config", config},
                 {"config_hash", config_hash(config)},
                 {"model_hash", c.h.hash()},
                 {"result", body}};
  const std::string name = cfg.command == "prepare" && cfg.schedule_only ? "schedule" : cfg.command;
  c.write(name + ".json", report.dump(2) + "\n");
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json timing = {{"command", cfg.command}, {"wall_seconds", seconds}};
  c.write("timing.json", timing.dump(2) + "\n");
  return report;
}

}  // namespace qgibbs
