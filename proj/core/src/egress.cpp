#include "wazkit/egress.hpp"

#include <algorithm>
#include <cmath>

namespace wazkit {

const char* to_string(EgressKind k) {
  switch (k) {
    case EgressKind::Ingress: return "ingress";
    case EgressKind::StrictEgress: return "strict_egress";
    case EgressKind::EgressNotStrict: return "egress_not_strict";
    case EgressKind::ExternallyTangent: return "externally_tangent";
    case EgressKind::Undetermined: return "undetermined";
    case EgressKind::Corner: return "corner";
  }
  return "unknown";
}

Classification classify_point(const FieldSpec& field, const RegionSpec& region, const ExtPoint& p, int K,
                              double deriv_tol) {
  if (K < 1) throw ArgumentError("classify_point requires K >= 1");
  if (!(deriv_tol > 0.0)) throw ArgumentError("deriv_tol must be positive");

  const MembershipResult m = region_membership(p, region);
  if (m.where != Membership::OnBoundary)
    throw ArgumentError("classify_point: point is not on the boundary");

  Classification c;
  if (m.active_faces.size() > 1) {
    c.kind = EgressKind::Corner;
    c.corner_faces = m.active_faces;
    return c;
  }
  c.face = m.active_faces.front();

  const LieChain chain = lie_derivatives(field, region.face(c.face).g, p, K);
  c.derivs = chain.derivs;

  int kstar = 0;
  for (int k = 1; k <= K; ++k) {
    if (std::abs(chain.d(k)) > deriv_tol) {
      kstar = k;
      break;
    }
  }
  c.first_nonzero = kstar;
  if (kstar == 0) {
    c.kind = EgressKind::Undetermined;
    return c;
  }
  const double d = chain.d(kstar);
  if (kstar % 2 == 1)
    c.kind = d < 0.0 ? EgressKind::StrictEgress : EgressKind::Ingress;
  else
    c.kind = d > 0.0 ? EgressKind::EgressNotStrict : EgressKind::ExternallyTangent;
  return c;
}

double grid_point(double lo, double hi, std::size_t i, std::size_t n) {
  if (n <= 1) return 0.5 * (lo + hi);
  const double num = lo * static_cast<double>(n - 1 - i) + hi * static_cast<double>(i);
  return num / static_cast<double>(n - 1);
}

double halton(std::size_t index, unsigned base) {
  double f = 1.0, r = 0.0;
  std::size_t i = index;
  while (i > 0) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

namespace {

constexpr unsigned kHaltonBases[] = {2, 3, 5, 7, 11, 13};

// Solve g = 0 for the pinned coordinate by bisection inside the bracket.
// Returns false when the bracket carries no sign change.
bool pin_to_face(const RegionSpec& region, std::size_t face, ExtPoint& p, std::size_t coord, double lo,
                 double hi) {
  auto g_at = [&](double v) {
    ExtPoint q = p;
    q.state[coord] = v;
    std::vector<double> slots = region.slot_values(q);
    return region.faces[face].g.eval(slots);
  };
  double ga = g_at(lo);
  double gb = g_at(hi);
  if (ga == 0.0) {
    p.state[coord] = lo;
    return true;
  }
  if (gb == 0.0) {
    p.state[coord] = hi;
    return true;
  }
  if (ga * gb > 0.0) return false;
  double a = lo, b = hi;
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    const double gm = g_at(m);
    if (gm == 0.0 || 0.5 * (b - a) < 1e-15 * std::max(1.0, std::abs(m))) {
      p.state[coord] = m;
      return true;
    }
    if ((gm < 0.0) == (ga < 0.0)) {
      a = m;
      ga = gm;
    } else {
      b = m;
    }
  }
  p.state[coord] = 0.5 * (a + b);
  return true;
}

std::size_t state_dim(const RegionSpec& region) {
  return region.symbols.size() - 1 - region.params.size();
}

}  // namespace

ScanReport scan_boundary(const FieldSpec& field, const RegionSpec& region,
                         const std::vector<FaceSampler>& samplers, int K, double deriv_tol) {
  ScanReport report;
  report.order = K;
  report.deriv_tol = deriv_tol;
  const std::size_t dim = state_dim(region);

  for (const FaceSampler& sampler : samplers) {
    const std::size_t face = region.face_index(sampler.face);
    if (sampler.pin_coord >= dim) throw SpecError("sampler pin coordinate out of range");
    for (const auto& ax : sampler.axes) {
      if (ax.coord >= dim) throw SpecError("sampler axis coordinate out of range");
      if (ax.coord == sampler.pin_coord) throw SpecError("sampler axis equals the pinned coordinate");
      if (ax.count == 0) throw SpecError("sampler axis count must be positive");
    }

    // Enumerate the grid (odometer over the axes) or a Halton set.
    std::size_t points = 1;
    if (sampler.quasi_count > 0) {
      points = sampler.quasi_count;
    } else {
      for (const auto& ax : sampler.axes) points *= ax.count;
    }

    for (double t : sampler.t_values) {
      for (std::size_t idx = 0; idx < points; ++idx) {
        ExtPoint p;
        p.state.assign(dim, 0.0);
        p.time = t;
        if (sampler.quasi_count > 0) {
          for (std::size_t a = 0; a < sampler.axes.size(); ++a) {
            const auto& ax = sampler.axes[a];
            const double u = halton(idx + 1, kHaltonBases[a % 6]);
            p.state[ax.coord] = ax.lo + u * (ax.hi - ax.lo);
          }
        } else {
          std::size_t rest = idx;
          for (const auto& ax : sampler.axes) {
            const std::size_t i = rest % ax.count;
            rest /= ax.count;
            p.state[ax.coord] = grid_point(ax.lo, ax.hi, i, ax.count);
          }
        }

        if (!pin_to_face(region, face, p, sampler.pin_coord, sampler.pin_lo, sampler.pin_hi)) {
          ++report.skipped;
          continue;
        }

        Classification c;
        try {
          c = classify_point(field, region, p, K, deriv_tol);
        } catch (const ArgumentError&) {
          // Pinned onto this face but outside W w.r.t. another face.
          ++report.skipped;
          continue;
        }
        ++report.sampled;
        report.tallies[sampler.face][c.kind] += 1;
        report.entries.push_back(ScanEntry{p, c});
        switch (c.kind) {
          case EgressKind::EgressNotStrict: report.violations.push_back(ScanEntry{p, c}); break;
          case EgressKind::Undetermined: report.undetermined.push_back(ScanEntry{p, c}); break;
          case EgressKind::Corner: report.corners.push_back(ScanEntry{p, c}); break;
          default: break;
        }
      }
    }
  }
  return report;
}

ExtPoint egress_section_point(const RegionSpec& region, const FieldSpec& field, std::string_view face,
                              const ExtPoint& hint, int K, double deriv_tol) {
  const std::size_t fi = region.face_index(face);
  const std::size_t dim = state_dim(region);
  if (hint.state.size() != dim) throw ArgumentError("hint dimension mismatch");

  // Pin along the coordinate with the largest |dg/dx_i| at the hint.
  std::vector<double> slots = region.slot_values(hint);
  std::size_t pin = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < dim; ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(hint.state[i]));
    std::vector<double> s1 = slots, s2 = slots;
    s1[i] += h;
    s2[i] -= h;
    const double d = std::abs(region.faces[fi].g.eval(s1) - region.faces[fi].g.eval(s2));
    if (d > best) {
      best = d;
      pin = i;
    }
  }

  const double span = std::max(1.0, std::abs(hint.state[pin]));
  auto try_candidate = [&](ExtPoint q) -> std::optional<ExtPoint> {
    q.time = 0.0;
    for (double widen = 0.25; widen <= 4.0; widen *= 2.0) {
      ExtPoint pinned = q;
      if (!pin_to_face(region, fi, pinned, pin, q.state[pin] - widen * span, q.state[pin] + widen * span))
        continue;
      try {
        const Classification c = classify_point(field, region, pinned, K, deriv_tol);
        if (c.kind == EgressKind::StrictEgress && c.face == face) return pinned;
      } catch (const ArgumentError&) {
      }
      return std::nullopt;
    }
    return std::nullopt;
  };

  if (auto found = try_candidate(hint)) return *found;

  // Walk outward along the remaining coordinates.
  for (int step = 1; step <= 64; ++step) {
    const double delta = 0.1 * static_cast<double>(step) * step;
    for (std::size_t i = 0; i < dim; ++i) {
      if (i == pin) continue;
      for (double sign : {1.0, -1.0}) {
        ExtPoint q = hint;
        q.state[i] += sign * delta;
        if (auto found = try_candidate(q)) return *found;
      }
    }
  }
  throw NotFoundError("no strict egress point found near the hint on face '" + std::string(face) + "'");
}

}  // namespace wazkit
