#pragma once

#include <string>

#include <json.hpp>

#include "config.hpp"
#include "wazkit/egress.hpp"
#include "wazkit/integrate.hpp"
#include "wazkit/witness.hpp"

namespace wazkit {
namespace cli {

/// Provenance envelope shared by every report: tool, version, command and
/// the fully resolved configuration.
nlohmann::ordered_json report_envelope(const std::string& command, const Experiment& exp);

nlohmann::ordered_json outcome_json(const EgressOutcome& outcome);
nlohmann::ordered_json scan_json(const ScanReport& report);
nlohmann::ordered_json bisect_json(const BisectResult& result, const std::string& witness_csv,
                                   const std::string& witness_svg);
nlohmann::ordered_json stability_json(const StabilityReport& report);

void write_json(const std::string& path, const nlohmann::ordered_json& j);
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

}  // namespace cli
}  // namespace wazkit
