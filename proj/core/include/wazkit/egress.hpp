#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "wazkit/field.hpp"
#include "wazkit/region.hpp"
#include "wazkit/types.hpp"

namespace wazkit {

/// Boundary status decided by the sign of the first nonvanishing Lie
/// derivative of the active face function:
///   k* odd,  d < 0  -> StrictEgress      (inside before, strictly outside after)
///   k* odd,  d > 0  -> Ingress
///   k* even, d > 0  -> EgressNotStrict   (internal tangency: egress, not strict)
///   k* even, d < 0  -> ExternallyTangent (outside on both sides)
///   all |d_k| <= deriv_tol up to K -> Undetermined
enum class EgressKind { Ingress, StrictEgress, EgressNotStrict, ExternallyTangent, Undetermined, Corner };

const char* to_string(EgressKind k);

struct Classification {
  EgressKind kind = EgressKind::Undetermined;
  std::string face;                       // the single active face (empty for Corner)
  std::vector<std::string> corner_faces;  // >= 2 active faces
  int first_nonzero = 0;                  // k*; 0 when no derivative cleared deriv_tol
  std::vector<double> derivs;             // d_1..d_K
};

Classification classify_point(const FieldSpec& field, const RegionSpec& region, const ExtPoint& p,
                              int K = 4, double deriv_tol = 1e-9);

/// Deterministic sampler for one face: a grid (or Halton set) over boxes in
/// the non-pinned coordinates crossed with a list of t values; the pinned
/// coordinate is solved from g = 0 by bisection inside pin_bracket.
struct FaceSampler {
  std::string face;
  std::size_t pin_coord = 0;
  double pin_lo = 0.0;
  double pin_hi = 0.0;

  struct Axis {
    std::size_t coord = 0;
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 1;
  };
  std::vector<Axis> axes;
  std::vector<double> t_values{0.0};
  std::size_t quasi_count = 0;  // > 0: Halton points over the axis boxes instead of a grid
};

struct ScanEntry {
  ExtPoint p;
  Classification c;
};

struct ScanReport {
  std::size_t sampled = 0;
  std::size_t skipped = 0;  // samples whose pin root-finding failed
  int order = 0;
  double deriv_tol = 0.0;
  std::map<std::string, std::map<EgressKind, std::size_t>> tallies;  // per face
  std::vector<ScanEntry> entries;                                    // every classified sample
  std::vector<ScanEntry> violations;                                 // EgressNotStrict
  std::vector<ScanEntry> undetermined;
  std::vector<ScanEntry> corners;

  bool certifies() const { return violations.empty() && undetermined.empty(); }
};

/// Classify every sample of every sampler. A report with no violations is
/// sampling-based evidence (not proof) that every egress point is strict.
ScanReport scan_boundary(const FieldSpec& field, const RegionSpec& region,
                         const std::vector<FaceSampler>& samplers, int K = 4, double deriv_tol = 1e-9);

/// A t = 0 point on the named face classified StrictEgress, found by pinning
/// the hint onto the face and widening a search along it.
ExtPoint egress_section_point(const RegionSpec& region, const FieldSpec& field, std::string_view face,
                              const ExtPoint& hint, int K = 4, double deriv_tol = 1e-9);

/// Affine grid with exact endpoints; index i of n maps to
/// (lo*(n-1-i) + hi*i)/(n-1), so symmetric ranges contain 0 exactly.
double grid_point(double lo, double hi, std::size_t i, std::size_t n);

/// Deterministic Halton sequence value (1-based index) for the given base.
double halton(std::size_t index, unsigned base);

}  // namespace wazkit
