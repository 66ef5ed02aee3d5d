#include "qgibbs/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qgibbs/errors.hpp"

namespace qgibbs {

using nlohmann::json;

namespace {

// JSON has no NaN/inf; keep them readable as strings.
json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

json region_to_json(const Region& r) { return r.sites(); }

json fit_to_json(const DecayFit& fit) {
  json j;
  j["fitted"] = fit.fitted;
  j["form"] = fit.form == DecayForm::PowerLaw ? "power_law" : "exponential";
  j["samples_used"] = fit.n_used;
  if (fit.fitted) {
    j["c1"] = number(fit.c1);
    j["c2"] = number(fit.c2);
    j["residual"] = number(fit.residual);
  }
  return j;
}

json profile_to_json(const DecayProfile& profile) {
  json samples = json::array();
  for (const auto& s : profile.samples)
    samples.push_back(
        {{"ell", number(s.ell)}, {"value", number(s.value)}, {"aux", number(s.aux)},
         {"context", s.context}});
  return {{"kind", profile.kind}, {"samples", samples}, {"fit", fit_to_json(profile.fit)}};
}

std::string format_double(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string profile_csv(const DecayProfile& profile) {
  std::ostringstream os;
  os << "ell,value,aux,context\n";
  for (const auto& s : profile.samples) {
    std::string ctx = s.context;
    for (char& c : ctx)
      if (c == ',' || c == '\n') c = ';';
    os << format_double(s.ell) << ',' << format_double(s.value) << ',' << format_double(s.aux)
       << ',' << ctx << '\n';
  }
  return os.str();
}

json plan_to_json(const CircuitPlan& plan) {
  json stages = json::array();
  for (const auto& s : plan.stages) {
    json channels = json::array();
    for (const auto& c : s.channels)
      channels.push_back(
          {{"kind", c.kind == ChannelSpec::Kind::Replacement ? "replacement" : "recovery"},
           {"erased", region_to_json(c.erased)},
           {"shield", region_to_json(c.shield)},
           {"inner", region_to_json(c.inner)},
           {"tile", c.tile}});
    stages.push_back(
        {{"name", s.name}, {"reference", region_to_json(s.reference)}, {"channels", channels}});
  }
  const Lattice& lat = *plan.hamiltonian.lattice();
  return {{"dims", lat.dims()},
          {"periodic", lat.periodic_flags()},
          {"beta", plan.beta},
          {"r", plan.tiling.tile_size},
          {"ell", plan.tiling.buffer},
          {"model_hash", plan.hamiltonian.hash()},
          {"num_a_tiles", plan.num_a_tiles()},
          {"num_b_tiles", plan.num_b_tiles()},
          {"stages", stages}};
}

json preparation_to_json(const PreparationReport& r) {
  json stages = json::array();
  for (const auto& s : r.stages)
    stages.push_back({{"name", s.name},
                      {"channels", s.channels},
                      {"distance_to_target", number(s.distance_to_target)},
                      {"distance_to_reference", number(s.distance_to_reference)},
                      {"max_trace_loss", number(s.max_trace_loss)}});
  json j = {{"distance", number(r.distance)},
            {"ell", r.ell},
            {"r", r.r},
            {"num_a_tiles", r.num_a_tiles},
            {"num_b_tiles", r.num_b_tiles},
            {"stages", stages}};
  if (r.premises) {
    j["premises"] = {{"delta", number(r.premises->delta)},
                     {"epsilon_half", number(r.premises->epsilon)},
                     {"gamma_half", number(r.premises->gamma)}};
    j["rhs_unit"] = number(r.rhs_unit);
    j["rhs_1d_unit"] = number(r.rhs_1d_unit);
  }
  if (r.bound_constant) {
    j["bound_constant"] = number(*r.bound_constant);
    j["rhs"] = number(*r.bound_constant * r.rhs_unit);
  }
  return j;
}

json schedule_to_json(const DepthSchedule& s) {
  json scales = json::array();
  for (double v : s.scales) scales.push_back(number(v));
  return {{"feasible", s.feasible},   {"reason", s.reason},
          {"side", number(s.side)},   {"dimension", s.dimension},
          {"target", number(s.target)}, {"scales", scales},
          {"levels", s.levels},       {"depth", s.depth},
          {"strictly_local_depth", s.strictly_local_depth}};
}

json recovery_to_json(const RecoveryError& e) {
  return {{"trace_distance", number(e.trace_distance)},
          {"fidelity", number(e.fidelity)},
          {"trace_loss", number(e.trace_loss)},
          {"cmi_bits", number(e.fr.cmi)},
          {"minus_two_log2_fidelity", number(e.fr.minus_two_log_f)},
          {"trace_term", number(e.fr.trace_term)},
          {"converse_rhs", number(e.fr.converse_rhs)},
          {"fidelity_bound_holds", e.fr.fidelity_bound},
          {"trace_bound_holds", e.fr.trace_bound},
          {"converse_holds", e.fr.converse}};
}

std::string config_hash(const json& config) {
  const std::string text = config.dump();
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(text.data(), text.size())));
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << text;
  if (!out) throw InvalidArgument("failed writing " + path);
}

}  // namespace qgibbs
