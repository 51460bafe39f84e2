#include "wazkit/integrate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace wazkit {

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw SpecError("integrator tolerances must be positive");
  if (!(event_tol > 0.0)) throw SpecError("event_tol must be positive");
  if (!(grazing_window > 0.0)) throw SpecError("grazing_window must be positive");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw SpecError("horizon must be positive and finite");
  if (max_step < 0.0) throw SpecError("max_step must be non-negative");
  if (max_steps <= 0) throw SpecError("max_steps must be positive");
}

const char* outcome_kind(const EgressOutcome& o) {
  if (std::holds_alternative<Exited>(o)) return "exited";
  if (std::holds_alternative<Survived>(o)) return "survived";
  return "converged";
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr int kStages = 7;
constexpr double kC[kStages] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[kStages][6] = {
    {0, 0, 0, 0, 0, 0},
    {1.0 / 5, 0, 0, 0, 0, 0},
    {3.0 / 40, 9.0 / 40, 0, 0, 0, 0},
    {44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656, 0},
    {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
// 5th-order weights equal the last A row (FSAL); 4th-order embedded weights:
constexpr double kB4[kStages] = {5179.0 / 57600, 0.0,           7571.0 / 16695, 393.0 / 640,
                                 -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

constexpr int kSub = 8;  // dense subsamples per accepted step for event scans
constexpr int kEventBisectCap = 80;

class FaceEvaluator {
 public:
  explicit FaceEvaluator(const RegionSpec& region) : region_(&region) {
    buffer_.assign(region.symbols.size(), 0.0);
    dim_ = region.symbols.size() - 1 - region.params.size();
    std::size_t slot = dim_ + 1;
    for (const auto& [k, v] : region.params) buffer_[slot++] = v;
  }

  void values(const StateVec& x, double t, std::vector<double>& out) {
    for (std::size_t i = 0; i < dim_; ++i) buffer_[i] = x[i];
    buffer_[dim_] = t;
    out.resize(region_->faces.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = region_->faces[i].g.eval(buffer_);
  }

  double one(std::size_t face, const StateVec& x, double t) {
    for (std::size_t i = 0; i < dim_; ++i) buffer_[i] = x[i];
    buffer_[dim_] = t;
    return region_->faces[face].g.eval(buffer_);
  }

 private:
  const RegionSpec* region_;
  std::vector<double> buffer_;
  std::size_t dim_ = 0;
};

double error_norm(const StateVec& y0, const StateVec& y1, const StateVec& delta, double atol, double rtol) {
  double s = 0.0;
  for (std::size_t i = 0; i < y0.size(); ++i) {
    if (!std::isfinite(y1[i]) || !std::isfinite(delta[i])) return std::numeric_limits<double>::infinity();
    const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double e = delta[i] / sc;
    s += e * e;
  }
  return std::sqrt(s / static_cast<double>(y0.size()));
}

double scaled_norm(const StateVec& v, const StateVec& ref, double atol, double rtol) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double sc = atol + rtol * std::abs(ref[i]);
    const double e = v[i] / sc;
    s += e * e;
  }
  return std::sqrt(s / static_cast<double>(v.size()));
}

double initial_step(FieldEvaluator& f, const StateVec& y0, const StateVec& f0, double t0, double span,
                    const IntegratorConfig& cfg) {
  const double d0 = scaled_norm(y0, y0, cfg.abs_tol, cfg.rel_tol);
  const double d1 = scaled_norm(f0, y0, cfg.abs_tol, cfg.rel_tol);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, span);

  double d2 = 0.0;
  try {
    StateVec y1(y0.size()), f1;
    for (std::size_t i = 0; i < y0.size(); ++i) y1[i] = y0[i] + h0 * f0[i];
    f(y1, t0 + h0, f1);
    StateVec df(y0.size());
    for (std::size_t i = 0; i < y0.size(); ++i) df[i] = f1[i] - f0[i];
    d2 = scaled_norm(df, y0, cfg.abs_tol, cfg.rel_tol) / h0;
  } catch (const EvalError&) {
    d2 = std::numeric_limits<double>::infinity();
  }

  double h1;
  if (!std::isfinite(d2))
    h1 = h0 * 1e-3;
  else if (std::max(d1, d2) <= 1e-15)
    h1 = std::max(1e-6, h0 * 1e-3);
  else
    h1 = std::pow(0.01 / std::max(d1, d2), 0.2);

  double h = std::min(100.0 * h0, h1);
  if (cfg.max_step > 0.0) h = std::min(h, cfg.max_step);
  return std::min(h, span);
}

struct ConvergenceState {
  const ConvergenceCriterion* crit = nullptr;
  bool entered = false;
  double entry_time = 0.0;  // relative to t0
  bool violated = false;
};

struct EventHit {
  double theta = 0.0;
  double t = 0.0;
  std::size_t face = 0;
  StateVec state;
};

// Bisect the dense polynomial for the crossing g = 0 in [theta_a, theta_b]
// with g(theta_a) > 0 >= g(theta_b); stops once |g| <= event_tol. The
// returned point sits on the non-positive side, so the reported exit is on
// the boundary within event_tol.
EventHit refine_crossing(const Trajectory::DenseSegment& seg, FaceEvaluator& faces, std::size_t face,
                         double theta_a, double theta_b, double event_tol) {
  double theta = theta_b;
  StateVec x = dense_eval(seg, theta);
  double g = faces.one(face, x, seg.t0 + theta * seg.h);
  for (int it = 0; it < kEventBisectCap && std::abs(g) > event_tol; ++it) {
    const double mid = 0.5 * (theta_a + theta_b);
    StateVec xm = dense_eval(seg, mid);
    const double gm = faces.one(face, xm, seg.t0 + mid * seg.h);
    if (gm > 0.0) {
      theta_a = mid;
    } else {
      theta_b = mid;
      theta = mid;
      x = std::move(xm);
      g = gm;
    }
  }
  EventHit hit;
  hit.theta = theta;
  hit.t = seg.t0 + theta * seg.h;
  hit.face = face;
  hit.state = std::move(x);
  return hit;
}

// Ternary search for the minimum of g over [lo, hi] on the dense polynomial.
std::pair<double, double> refine_minimum(const Trajectory::DenseSegment& seg, FaceEvaluator& faces,
                                         std::size_t face, double lo, double hi) {
  for (int it = 0; it < 60; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    const StateVec x1 = dense_eval(seg, m1);
    const StateVec x2 = dense_eval(seg, m2);
    const double g1 = faces.one(face, x1, seg.t0 + m1 * seg.h);
    const double g2 = faces.one(face, x2, seg.t0 + m2 * seg.h);
    if (g1 < g2)
      hi = m2;
    else
      lo = m1;
  }
  const double theta = 0.5 * (lo + hi);
  const StateVec x = dense_eval(seg, theta);
  return {theta, faces.one(face, x, seg.t0 + theta * seg.h)};
}

IntegrationResult integrate_core(const FieldSpec& field, const RegionSpec* region, const StateVec& x0,
                                 double t0, const IntegratorConfig& cfg,
                                 const std::optional<ConvergenceCriterion>& convergence) {
  cfg.validate();
  if (x0.size() != field.dim) throw ArgumentError("initial state dimension mismatch");
  if (!all_finite(x0) || !std::isfinite(t0)) throw ArgumentError("initial data must be finite");

  IntegrationResult res;
  Trajectory& traj = res.trajectory;

  std::optional<FaceEvaluator> faces;
  std::vector<double> g_prev, g_sub;
  if (region != nullptr) {
    faces.emplace(*region);

    const MembershipResult m = region_membership(ExtPoint{x0, t0}, *region);
    if (m.where == Membership::Outside)
      throw ArgumentError("integrate_until_egress: start point lies outside the region");
    if (m.where == Membership::OnBoundary) {
      // sigma = 0 for boundary starts; report the tightest active face.
      faces->values(x0, t0, g_prev);
      std::size_t best = 0;
      double best_g = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < g_prev.size(); ++i) {
        if (std::abs(g_prev[i]) <= region->boundary_tol && g_prev[i] < best_g) {
          best = i;
          best_g = g_prev[i];
        }
      }
      traj.append_sample(ExtPoint{x0, t0});
      res.outcome = Exited{0.0, ExtPoint{x0, t0}, region->faces[best].name};
      return res;
    }
    faces->values(x0, t0, g_prev);
  }

  ConvergenceState conv;
  if (convergence) {
    if (!(convergence->eps_enter > 0.0) || !(convergence->eps_stay >= convergence->eps_enter))
      throw SpecError("convergence criterion needs 0 < eps_enter <= eps_stay");
    conv.crit = &*convergence;
    if (masked_distance(x0, conv.crit->eq) <= conv.crit->eps_enter) {
      conv.entered = true;
      conv.entry_time = 0.0;
    }
  }

  FieldEvaluator f(field);
  const double t_end = t0 + cfg.horizon;
  double t = t0;
  StateVec y = x0;

  std::array<StateVec, kStages> k;
  for (auto& s : k) s.resize(field.dim);
  f(y, t, k[0]);
  if (!all_finite(k[0]))
    throw IntegrationError(IntegrationError::Kind::Divergence, "field is not finite at the start", y, t);

  double h = initial_step(f, y, k[0], t, t_end - t0, cfg);
  traj.append_sample(ExtPoint{y, t});

  StateVec y_stage(field.dim), y_new(field.dim), delta(field.dim);
  long steps = 0;
  bool saw_nonfinite = false;

  while (t < t_end) {
    if (++steps > cfg.max_steps)
      throw IntegrationError(IntegrationError::Kind::StepLimit, "step limit exceeded", y, t);

    h = std::min(h, t_end - t);
    if (cfg.max_step > 0.0) h = std::min(h, cfg.max_step);
    const double h_floor = 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1.0);
    if (h < h_floor) {
      double scale = 0.0;
      for (double v : y) scale = std::max(scale, std::abs(v));
      // Finite-time blowup shrinks the step while the state is still finite;
      // report it as divergence once the state has left any physical range.
      if (saw_nonfinite || scale > 1e10)
        throw IntegrationError(IntegrationError::Kind::Divergence, "state diverged", y, t);
      throw IntegrationError(IntegrationError::Kind::StepUnderflow,
                             "step size underflow (stiffness or discontinuity)", y, t);
    }

    // Stages 2..7; k1 is fresh via FSAL.
    for (int s = 1; s < kStages; ++s) {
      for (std::size_t i = 0; i < field.dim; ++i) {
        double acc = 0.0;
        for (int j = 0; j < s; ++j) acc += kA[s][j] * k[static_cast<std::size_t>(j)][i];
        y_stage[i] = y[i] + h * acc;
      }
      f(y_stage, t + kC[s] * h, k[static_cast<std::size_t>(s)]);
    }
    // 5th-order solution is stage 7's argument (kA[6] row = b coefficients).
    for (std::size_t i = 0; i < field.dim; ++i) {
      double acc = 0.0;
      for (int j = 0; j < 6; ++j) acc += kA[6][j] * k[static_cast<std::size_t>(j)][i];
      y_new[i] = y[i] + h * acc;
    }
    for (std::size_t i = 0; i < field.dim; ++i) {
      double e4 = 0.0;
      for (int j = 0; j < kStages; ++j) e4 += kB4[j] * k[static_cast<std::size_t>(j)][i];
      delta[i] = y[i] + h * e4 - y_new[i];
    }

    const double err = error_norm(y, y_new, delta, cfg.abs_tol, cfg.rel_tol);
    if (!(err <= 1.0)) {
      if (!std::isfinite(err)) saw_nonfinite = true;
      const double factor = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
      h *= factor;
      continue;  // k[0] is untouched by the rejected stages
    }
    saw_nonfinite = false;

    Trajectory::DenseSegment seg;
    seg.t0 = t;
    seg.h = h;
    seg.y0 = y;
    seg.k.assign(k.begin(), k.end());

    bool exited = false;
    EventHit hit;

    if (faces) {
      // Sample every face over the dense segment, then refine crossings and
      // near-tangencies.
      std::array<StateVec, kSub> xs;
      for (int j = 1; j <= kSub; ++j) xs[static_cast<std::size_t>(j - 1)] = dense_eval(seg, static_cast<double>(j) / kSub);

      const std::size_t nf = region->faces.size();
      std::vector<std::array<double, kSub + 1>> gv(nf);
      for (std::size_t fi = 0; fi < nf; ++fi) {
        gv[fi][0] = g_prev[fi];
        for (int j = 1; j <= kSub; ++j)
          gv[fi][static_cast<std::size_t>(j)] =
              faces->one(fi, xs[static_cast<std::size_t>(j - 1)], t + h * static_cast<double>(j) / kSub);
      }

      for (std::size_t fi = 0; fi < nf; ++fi) {
        for (int j = 0; j < kSub; ++j) {
          const double ga = gv[fi][static_cast<std::size_t>(j)];
          const double gb = gv[fi][static_cast<std::size_t>(j + 1)];
          if (ga > 0.0 && gb <= 0.0) {
            const EventHit cand = refine_crossing(seg, *faces, fi, static_cast<double>(j) / kSub,
                                                  static_cast<double>(j + 1) / kSub, cfg.event_tol);
            if (!exited || cand.theta < hit.theta) {
              hit = cand;
              exited = true;
            }
            break;  // only the first crossing per face matters
          }
        }
      }

      // Grazing scan: local minima that could dip toward the face without
      // crossing (or cross between samples, which the refinement exposes).
      // A parabola through the three samples estimates the true minimum; it
      // filters out minima that stay far above the window.
      for (std::size_t fi = 0; fi < nf; ++fi) {
        for (int j = 0; j <= kSub; ++j) {
          const double gl = gv[fi][static_cast<std::size_t>(std::max(j - 1, 0))];
          const double gm = gv[fi][static_cast<std::size_t>(j)];
          const double gr = gv[fi][static_cast<std::size_t>(std::min(j + 1, kSub))];
          if (!(gm <= gl && gm <= gr)) continue;
          double est = gm;
          const double curv = gl + gr - 2.0 * gm;
          if (curv > 0.0) {
            const double slope = gr - gl;
            est = gm - slope * slope / (8.0 * curv);
          }
          if (est > 2.0 * cfg.grazing_window) continue;
          const auto [theta_min, g_min] =
              refine_minimum(seg, *faces, fi, static_cast<double>(std::max(j - 1, 0)) / kSub,
                             static_cast<double>(std::min(j + 1, kSub)) / kSub);
          if (g_min < 0.0) {
            // The dip actually crosses between samples: the down-crossing is
            // an exit.
            const EventHit cand =
                refine_crossing(seg, *faces, fi, static_cast<double>(j - 1) / kSub, theta_min, cfg.event_tol);
            if (!exited || cand.theta < hit.theta) {
              hit = cand;
              exited = true;
            }
          } else if (g_min >= 0.0 && g_min <= cfg.grazing_window &&
                     (!exited || seg.t0 + theta_min * seg.h < hit.t)) {
            const double t_min = seg.t0 + theta_min * seg.h;
            bool duplicate = false;
            for (const GrazingEvent& prev : traj.grazing())
              if (prev.face == region->faces[fi].name && std::abs(prev.t - t_min) <= seg.h)
                duplicate = true;
            if (!duplicate)
              traj.add_grazing(GrazingEvent{t_min, region->faces[fi].name, g_min});
          }
        }
      }

      if (!exited) {
        for (std::size_t fi = 0; fi < nf; ++fi) g_prev[fi] = gv[fi][kSub];
      }
    }

    // Convergence monitoring on the same dense grid.
    if (conv.crit != nullptr) {
      const double t_stop = exited ? hit.t : t + h;
      for (int j = 1; j <= kSub; ++j) {
        const double theta = static_cast<double>(j) / kSub;
        const double tj = t + h * theta;
        if (tj > t_stop) break;
        const StateVec xj = dense_eval(seg, theta);
        const double dist = masked_distance(xj, conv.crit->eq);
        if (!conv.entered && dist <= conv.crit->eps_enter) {
          // Refine the entry time on the dense polynomial.
          double lo = theta - 1.0 / kSub, hi = theta;
          for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double dm = masked_distance(dense_eval(seg, mid), conv.crit->eq);
            if (dm <= conv.crit->eps_enter)
              hi = mid;
            else
              lo = mid;
          }
          conv.entered = true;
          conv.entry_time = (t + h * hi) - t0;
        } else if (conv.entered && dist > conv.crit->eps_stay) {
          conv.violated = true;
        }
      }
    }

    traj.append_segment(std::move(seg));

    if (exited) {
      traj.append_sample(ExtPoint{hit.state, hit.t});
      res.outcome = Exited{hit.t - t0, ExtPoint{hit.state, hit.t}, region->faces[hit.face].name};
      return res;
    }

    t += h;
    y = y_new;
    k[0] = k[kStages - 1];  // FSAL
    traj.append_sample(ExtPoint{y, t});

    const double grow = err > 0.0 ? std::min(5.0, 0.9 * std::pow(err, -0.2)) : 5.0;
    h *= std::max(0.2, grow);
  }

  if (conv.crit != nullptr && conv.entered && !conv.violated)
    res.outcome = ConvergedToTarget{conv.entry_time};
  else
    res.outcome = Survived{cfg.horizon};
  return res;
}

}  // namespace

IntegrationResult integrate_until_egress(const FieldSpec& field, const RegionSpec& region, const StateVec& x0,
                                         double t0, const IntegratorConfig& cfg,
                                         const std::optional<ConvergenceCriterion>& convergence) {
  if (!(region.symbols == field.symbols))
    throw SpecError("region and field use different symbol declarations");
  return integrate_core(field, &region, x0, t0, cfg, convergence);
}

Trajectory integrate_to(const FieldSpec& field, const StateVec& x0, double t0, double t1,
                        const IntegratorConfig& cfg) {
  if (!(t1 > t0)) throw ArgumentError("integrate_to requires t1 > t0");
  IntegratorConfig local = cfg;
  local.horizon = t1 - t0;
  return integrate_core(field, nullptr, x0, t0, local, std::nullopt).trajectory;
}

}  // namespace wazkit
