#include "report.hpp"

#include <cstdio>
#include <fstream>

#include "wazkit/version.hpp"

namespace wazkit {
namespace cli {

using nlohmann::ordered_json;

ordered_json report_envelope(const std::string& command, const Experiment& exp) {
  ordered_json j;
  j["tool"] = "wazkit";
  j["version"] = kVersion;
  j["command"] = command;
  j["config"] = exp.resolved;
  return j;
}

ordered_json outcome_json(const EgressOutcome& outcome) {
  ordered_json j;
  j["kind"] = outcome_kind(outcome);
  if (const auto* ex = std::get_if<Exited>(&outcome)) {
    j["sigma"] = ex->sigma;
    j["face"] = ex->face;
    j["exit_state"] = ex->exit.state;
    j["exit_time"] = ex->exit.time;
  } else if (const auto* s = std::get_if<Survived>(&outcome)) {
    j["horizon"] = s->horizon;
  } else if (const auto* c = std::get_if<ConvergedToTarget>(&outcome)) {
    j["entry_time"] = c->entry_time;
  }
  return j;
}

namespace {
ordered_json entry_json(const ScanEntry& e) {
  ordered_json j;
  j["state"] = e.p.state;
  j["t"] = e.p.time;
  j["kind"] = to_string(e.c.kind);
  if (!e.c.face.empty()) j["face"] = e.c.face;
  if (!e.c.corner_faces.empty()) j["faces"] = e.c.corner_faces;
  j["first_nonzero"] = e.c.first_nonzero;
  if (!e.c.derivs.empty()) j["derivs"] = e.c.derivs;
  return j;
}
}  // namespace

ordered_json scan_json(const ScanReport& report) {
  ordered_json j;
  j["sampled"] = report.sampled;
  j["skipped"] = report.skipped;
  j["order"] = report.order;
  j["deriv_tol"] = report.deriv_tol;
  ordered_json tallies = ordered_json::object();
  for (const auto& [face, counts] : report.tallies) {
    ordered_json per = ordered_json::object();
    for (const auto& [kind, n] : counts) per[to_string(kind)] = n;
    tallies[face] = per;
  }
  j["tallies"] = tallies;
  j["violations"] = ordered_json::array();
  for (const auto& e : report.violations) j["violations"].push_back(entry_json(e));
  j["undetermined"] = ordered_json::array();
  for (const auto& e : report.undetermined) j["undetermined"].push_back(entry_json(e));
  j["corners"] = ordered_json::array();
  for (const auto& e : report.corners) j["corners"].push_back(entry_json(e));
  j["certifies"] = report.certifies();
  return j;
}

ordered_json bisect_json(const BisectResult& result, const std::string& witness_csv,
                         const std::string& witness_svg) {
  ordered_json j;
  j["bracket"] = {result.s_lo, result.s_hi};
  j["iterations"] = result.iterations;
  j["early_unresolved"] = result.early_unresolved;
  j["witness_start"] = result.witness.samples().front().state;
  j["witness_outcome"] = outcome_json(result.witness_outcome);
  if (result.min_distance_to_eq) j["min_distance_to_eq"] = *result.min_distance_to_eq;
  j["continuation"] = {{"restarts", result.restarts}, {"max_jump", result.max_jump}};
  j["witness_samples"] = result.witness.samples().size();
  if (!witness_csv.empty()) j["witness_csv"] = witness_csv;
  if (!witness_svg.empty()) j["witness_svg"] = witness_svg;
  return j;
}

ordered_json stability_json(const StabilityReport& report) {
  ordered_json j;
  j["radius_v"] = report.radius_v;
  j["radius_u"] = report.radius_u;
  j["t0_grid"] = report.t0_grid;
  j["samples"] = report.samples;
  j["sampler"] = report.sampler;
  j["x0"] = report.eq.x0;
  ordered_json mask = ordered_json::array();
  for (bool b : report.eq.mask) mask.push_back(b);
  j["mask"] = mask;
  j["failures"] = ordered_json::array();
  for (const auto& f : report.failures) {
    ordered_json e;
    e["x"] = f.x;
    e["t0"] = f.t0;
    e["escape_time"] = f.escape_time;
    e["cause"] = f.cause;
    j["failures"].push_back(e);
  }
  j["passed"] = report.passed();
  return j;
}

void write_json(const std::string& path, const ordered_json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  const std::size_t dim = traj.samples().empty() ? 0 : traj.samples().front().state.size();
  out << "t";
  for (std::size_t i = 1; i <= dim; ++i) out << ",x" << i;
  out << "\n";
  char buf[32];
  for (const ExtPoint& p : traj.samples()) {
    std::snprintf(buf, sizeof(buf), "%.17g", p.time);
    out << buf;
    for (double x : p.state) {
      std::snprintf(buf, sizeof(buf), "%.17g", x);
      out << "," << buf;
    }
    out << "\n";
  }
}

}  // namespace cli
}  // namespace wazkit
