#include "wazkit/witness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "wazkit/egress.hpp"

namespace wazkit {

void OmegaCriteria::validate() const {
  if (!(horizon > 0.0)) throw SpecError("criteria horizon must be positive");
  if (class_b.faces.empty()) throw SpecError("class B needs at least one exit face");
  if (const auto* a = std::get_if<ExitsThroughFaces>(&class_a)) {
    if (a->faces.empty()) throw SpecError("class A exit form needs at least one face");
    for (const auto& fa : a->faces)
      for (const auto& fb : class_b.faces)
        if (fa == fb) throw SpecError("class A and class B face sets must be disjoint");
  } else {
    const auto& conv = std::get<ConvergesToEquilibrium>(class_a);
    if (!(conv.eps_enter > 0.0) || !(conv.eps_stay >= conv.eps_enter))
      throw SpecError("convergence criterion needs 0 < eps_enter <= eps_stay");
  }
}

const EquilibriumSpec* OmegaCriteria::equilibrium() const {
  if (const auto* conv = std::get_if<ConvergesToEquilibrium>(&class_a)) return &conv->eq;
  return nullptr;
}

const char* to_string(OmegaClass c) {
  switch (c) {
    case OmegaClass::ClassA: return "class_a";
    case OmegaClass::ClassB: return "class_b";
    case OmegaClass::Unresolved: return "unresolved";
  }
  return "unknown";
}

namespace {

bool face_listed(const std::vector<std::string>& faces, const std::string& name) {
  return std::find(faces.begin(), faces.end(), name) != faces.end();
}

OmegaClass label_outcome(const EgressOutcome& outcome, const OmegaCriteria& criteria) {
  if (std::holds_alternative<ConvergedToTarget>(outcome)) {
    return std::holds_alternative<ConvergesToEquilibrium>(criteria.class_a) ? OmegaClass::ClassA
                                                                            : OmegaClass::Unresolved;
  }
  if (const auto* ex = std::get_if<Exited>(&outcome)) {
    if (const auto* a = std::get_if<ExitsThroughFaces>(&criteria.class_a))
      if (face_listed(a->faces, ex->face)) return OmegaClass::ClassA;
    if (face_listed(criteria.class_b.faces, ex->face)) return OmegaClass::ClassB;
    return OmegaClass::Unresolved;
  }
  return OmegaClass::Unresolved;  // Survived without matched convergence
}

std::optional<ConvergenceCriterion> convergence_of(const OmegaCriteria& criteria) {
  if (const auto* conv = std::get_if<ConvergesToEquilibrium>(&criteria.class_a))
    return ConvergenceCriterion{conv->eq, conv->eps_enter, conv->eps_stay};
  return std::nullopt;
}

struct Probe {
  OmegaClass cls;
  IntegrationResult run;
};

/// Classify a start (x, t0) against the criteria, integrating to the
/// absolute end time criteria.horizon (times on Gamma are 0).
Probe classify_from(const FieldSpec& field, const RegionSpec& region, const StateVec& x, double t0,
                    const OmegaCriteria& criteria, const IntegratorConfig& cfg, double t_end_abs) {
  IntegratorConfig local = cfg;
  local.horizon = std::max(t_end_abs - t0, 1e-12);
  Probe p{OmegaClass::Unresolved,
          integrate_until_egress(field, region, x, t0, local, convergence_of(criteria))};
  p.cls = label_outcome(p.run.outcome, criteria);
  return p;
}

double state_distance(const StateVec& a, const StateVec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

StateVec midpoint(const StateVec& a, const StateVec& b) {
  StateVec m(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) m[i] = 0.5 * (a[i] + b[i]);
  return m;
}

/// Continue the witness from the final bracket to the horizon. The two
/// bracket trajectories are advanced until they separate by shadow_width;
/// there the bracket is rebuilt by bisection on the straight segment between
/// their states (each probe is a genuine forward trajectory classified by
/// its own fate), and the march continues. The witness is the midpoint of
/// the pair, a concatenation of near-trajectory arcs with jumps bounded by
/// the separation at each restart.
void continue_witness(const FieldSpec& field, const RegionSpec& region, const OmegaCriteria& criteria,
                      const IntegratorConfig& cfg, const GammaCurve& curve, const WitnessOptions& opt,
                      BisectResult& out) {
  const double t_end = criteria.horizon;
  StateVec lo = gamma_eval(curve, out.s_lo).state;
  StateVec hi = gamma_eval(curve, out.s_hi).state;
  double tau = 0.0;

  Trajectory witness;
  const auto conv = convergence_of(criteria);

  auto abort_with_side = [&](const IntegrationResult& side_run, double from_t) {
    for (const ExtPoint& p : side_run.trajectory.samples())
      if (p.time >= from_t && (witness.empty() || p.time > witness.t_end()))
        witness.append_sample(p);
    out.witness = std::move(witness);
    if (const auto* ex = std::get_if<Exited>(&side_run.outcome))
      out.witness_outcome = Exited{ex->exit.time, ex->exit, ex->face};
    else
      out.witness_outcome = side_run.outcome;
  };

  for (;;) {
    IntegratorConfig side_cfg = cfg;
    side_cfg.horizon = std::max(t_end - tau, 1e-12);
    IntegrationResult run_a = integrate_until_egress(field, region, lo, tau, side_cfg, conv);
    IntegrationResult run_b = integrate_until_egress(field, region, hi, tau, side_cfg, conv);
    const double end_a = run_a.trajectory.t_end();
    const double end_b = run_b.trajectory.t_end();
    const double t_max = std::min(end_a, end_b);

    // March over the union of both sides' sample times (a side resting near
    // an equilibrium takes huge steps; the other side's grid keeps the
    // separation check honest), emitting pair midpoints while tight.
    std::vector<double> times;
    for (const ExtPoint& pa : run_a.trajectory.samples())
      if (pa.time >= tau && pa.time <= t_max) times.push_back(pa.time);
    for (const ExtPoint& pb : run_b.trajectory.samples())
      if (pb.time >= tau && pb.time <= t_max) times.push_back(pb.time);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());

    double t_div = t_max;
    bool separated = false;
    double last_close = tau;
    for (double ts : times) {
      const double sep =
          state_distance(run_a.trajectory.state_at(ts), run_b.trajectory.state_at(ts));
      if (sep > opt.shadow_width) {
        separated = true;
        t_div = last_close;
        break;
      }
      last_close = ts;
    }

    const bool finished = !separated && t_max >= t_end - 1e-12;
    double restart_t = t_end;
    if (!finished) {
      if (separated) {
        restart_t = std::max(t_div, tau + 1e-9 * std::max(1.0, std::abs(tau)));
        restart_t = std::min(restart_t, t_max);
      } else {
        // One side ended (exited) while still tight: re-bracket just before.
        restart_t = tau + 0.995 * (t_max - tau);
      }
    }

    // Emit the pair midpoints, but never past the restart point.
    for (double ts : times) {
      if (ts > restart_t) break;
      ExtPoint mid;
      mid.time = ts;
      mid.state = midpoint(run_a.trajectory.state_at(ts), run_b.trajectory.state_at(ts));
      if (witness.empty() || mid.time > witness.t_end()) witness.append_sample(mid);
    }

    if (finished) {
      out.witness = std::move(witness);
      out.witness_outcome = Survived{criteria.horizon};
      return;
    }
    if (!(restart_t > tau)) {
      abort_with_side(run_a, tau);
      return;
    }

    StateVec a = run_a.trajectory.state_at(restart_t);
    StateVec b = run_b.trajectory.state_at(restart_t);
    const StateVec old_mid = midpoint(a, b);

    // Transversal bisection; the endpoints keep their labels by the
    // semigroup property of the flow. Probes classify against an extended
    // horizon (2T): near the end of the span "survives to T" says little, so
    // the probe must either resolve within 2T or genuinely persist.
    bool done = false;
    for (int it = 0; it < 120 && state_distance(a, b) > opt.shadow_refine; ++it) {
      const StateVec m = midpoint(a, b);
      Probe probe;
      try {
        probe = classify_from(field, region, m, restart_t, criteria, cfg, 2.0 * t_end);
      } catch (const Error&) {
        abort_with_side(run_a, restart_t);
        return;
      }
      if (probe.cls == OmegaClass::ClassA) {
        a = m;
      } else if (probe.cls == OmegaClass::ClassB) {
        b = m;
      } else {
        if (std::holds_alternative<Exited>(probe.run.outcome)) {
          abort_with_side(probe.run, restart_t);
          return;
        }
        // Still unresolved at twice the horizon: the probe trajectory itself
        // is the witness tail (truncated to the nominal span).
        for (const ExtPoint& p : probe.run.trajectory.samples())
          if ((witness.empty() || p.time > witness.t_end()) && p.time <= t_end + 1e-9)
            witness.append_sample(p);
        out.witness = std::move(witness);
        out.witness_outcome = Survived{criteria.horizon};
        out.max_jump = std::max(out.max_jump, state_distance(old_mid, m));
        ++out.restarts;
        done = true;
        break;
      }
    }
    if (done) return;

    out.max_jump = std::max(out.max_jump, state_distance(old_mid, midpoint(a, b)));
    lo = std::move(a);
    hi = std::move(b);
    tau = restart_t;
    if (++out.restarts > opt.max_restarts) {
      IntegratorConfig side_cfg2 = cfg;
      side_cfg2.horizon = std::max(t_end - tau, 1e-12);
      IntegrationResult rest = integrate_until_egress(field, region, lo, tau, side_cfg2, conv);
      abort_with_side(rest, tau);
      return;
    }
  }
}

}  // namespace

OmegaLabel omega_classify(const FieldSpec& field, const RegionSpec& region, const GammaCurve& curve,
                          double s, const OmegaCriteria& criteria, const IntegratorConfig& cfg) {
  criteria.validate();
  const ExtPoint p = gamma_eval(curve, s);
  try {
    const Probe probe = classify_from(field, region, p.state, p.time, criteria, cfg, criteria.horizon);
    return OmegaLabel{probe.cls, probe.run.outcome};
  } catch (const IntegrationError& e) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), " (at s = %.17g)", s);
    throw IntegrationError(e.kind, e.what() + std::string(buf), e.last_state, e.t);
  }
}

BisectResult bisect_gamma(const FieldSpec& field, const RegionSpec& region, const GammaCurve& curve,
                          const OmegaCriteria& criteria, const IntegratorConfig& cfg,
                          const WitnessOptions& options) {
  criteria.validate();
  if (!(options.s_tol > 0.0)) throw SpecError("s_tol must be positive");

  const OmegaLabel l0 = omega_classify(field, region, curve, 0.0, criteria, cfg);
  if (l0.cls != OmegaClass::ClassA)
    throw BracketError("Gamma(0) classified " + std::string(to_string(l0.cls)) + ", expected class A",
                       "gamma(0)");
  const OmegaLabel l1 = omega_classify(field, region, curve, 1.0, criteria, cfg);
  if (l1.cls != OmegaClass::ClassB)
    throw BracketError("Gamma(1) classified " + std::string(to_string(l1.cls)) + ", expected class B",
                       "gamma(1)");

  BisectResult res;
  res.s_lo = 0.0;
  res.s_hi = 1.0;

  std::optional<IntegrationResult> early;
  while (res.s_hi - res.s_lo > options.s_tol) {
    const double mid = 0.5 * (res.s_lo + res.s_hi);
    ++res.iterations;
    const ExtPoint p = gamma_eval(curve, mid);
    Probe probe = classify_from(field, region, p.state, p.time, criteria, cfg, criteria.horizon);
    if (probe.cls == OmegaClass::Unresolved) {
      // Retry once with a doubled horizon before accepting the survivor.
      probe = classify_from(field, region, p.state, p.time, criteria, cfg, 2.0 * criteria.horizon);
      if (probe.cls == OmegaClass::Unresolved) {
        if (std::holds_alternative<Exited>(probe.run.outcome))
          throw Error("bisection midpoint exited through a face not named by the criteria");
        early = std::move(probe.run);
        break;
      }
    }
    if (probe.cls == OmegaClass::ClassA)
      res.s_lo = mid;
    else
      res.s_hi = mid;
  }

  if (early) {
    res.early_unresolved = true;
    res.witness = std::move(early->trajectory);
    res.witness_outcome = early->outcome;
  } else {
    continue_witness(field, region, criteria, cfg, curve, options, res);
  }

  if (const EquilibriumSpec* eq = criteria.equilibrium()) {
    double best = std::numeric_limits<double>::infinity();
    for (const ExtPoint& p : res.witness.samples()) best = std::min(best, masked_distance(p.state, *eq));
    res.min_distance_to_eq = best;
  }
  return res;
}

StabilityReport verify_uniform_stability(const FieldSpec& field, const EquilibriumSpec& eq,
                                         double radius_v, double radius_u,
                                         const std::vector<double>& t0_grid, std::size_t n_samples,
                                         const IntegratorConfig& cfg) {
  eq.validate();
  if (eq.dim() != field.dim) throw SpecError("equilibrium dimension does not match the field");
  if (!(radius_v >= 0.0) || !(radius_v < radius_u))
    throw SpecError("stability probe needs 0 <= radius_v < radius_u");
  if (t0_grid.empty()) throw SpecError("stability probe needs at least one t0");

  // The U-ball as a one-face region; egress detection then reports the first
  // escape time directly.
  std::string g_src;
  {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", radius_u * radius_u);
    g_src = buf;
    for (std::size_t i = 0; i < field.dim; ++i) {
      if (!eq.mask[i]) continue;
      std::snprintf(buf, sizeof(buf), " - (x%zu - %.17g)^2", i + 1, eq.x0[i]);
      g_src += buf;
    }
  }
  const RegionSpec ball = RegionSpec::make(field.symbols, {{"u_ball", g_src}}, field.params);

  // Masked coordinates that actually vary.
  std::vector<std::size_t> coords;
  for (std::size_t i = 0; i < field.dim; ++i)
    if (eq.mask[i]) coords.push_back(i);

  StabilityReport report;
  report.eq = eq;
  report.radius_v = radius_v;
  report.radius_u = radius_u;
  report.t0_grid = t0_grid;
  report.samples = n_samples;

  for (double t0 : t0_grid) {
    std::size_t accepted = 0;
    std::size_t index = 0;
    while (accepted < n_samples) {
      ++index;
      std::vector<double> u(coords.size());
      double norm2 = 0.0;
      for (std::size_t a = 0; a < coords.size(); ++a) {
        u[a] = 2.0 * halton(index, a == 0 ? 2u : a == 1 ? 3u : a == 2 ? 5u : 7u) - 1.0;
        norm2 += u[a] * u[a];
      }
      if (norm2 > 1.0) continue;  // deterministic rejection onto the ball
      ++accepted;

      StateVec x = eq.x0;
      for (std::size_t a = 0; a < coords.size(); ++a) x[coords[a]] += radius_v * u[a];

      try {
        const IntegrationResult run = integrate_until_egress(field, ball, x, t0, cfg);
        if (const auto* ex = std::get_if<Exited>(&run.outcome))
          report.failures.push_back(StabilityFailure{x, t0, ex->sigma, "escaped"});
      } catch (const IntegrationError& e) {
        report.failures.push_back(StabilityFailure{x, t0, 0.0, e.what()});
      }
    }
  }
  return report;
}

std::vector<FamilyEntry> family_sweep(const FieldSpec& field, const RegionSpec& region,
                                      const std::vector<GammaCurve>& curves, const OmegaCriteria& criteria,
                                      const IntegratorConfig& cfg, const WitnessOptions& options) {
  std::vector<FamilyEntry> out;
  out.reserve(curves.size());
  for (std::size_t i = 0; i < curves.size(); ++i) {
    FamilyEntry entry;
    entry.index = i;
    try {
      entry.result = bisect_gamma(field, region, curves[i], criteria, cfg, options);
    } catch (const Error& e) {
      entry.error = e.what();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace wazkit
