#pragma once

#include <string>

#include <json.hpp>

#include "qgibbs/belief_propagation.hpp"
#include "qgibbs/patch_circuit.hpp"
#include "qgibbs/recovery.hpp"

namespace qgibbs {

inline constexpr const char* kVersion = "0.1.0";

nlohmann::json region_to_json(const Region& r);
nlohmann::json fit_to_json(const DecayFit& fit);
nlohmann::json profile_to_json(const DecayProfile& profile);
/// CSV with header ell,value,aux,context.
std::string profile_csv(const DecayProfile& profile);

nlohmann::json plan_to_json(const CircuitPlan& plan);
/// Everything except wall-clock time, so identical runs give identical text.
nlohmann::json preparation_to_json(const PreparationReport& report);
nlohmann::json schedule_to_json(const DepthSchedule& schedule);
nlohmann::json recovery_to_json(const RecoveryError& error);

/// 16 hex digits of FNV-1a over the compact dump of `config`.
std::string config_hash(const nlohmann::json& config);

/// Shortest round-trip text for a double.
std::string format_double(double v);

void write_text(const std::string& path, const std::string& text);

}  // namespace qgibbs
