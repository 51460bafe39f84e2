#include "wazkit/region.hpp"

#include <cmath>

namespace wazkit {

RegionSpec RegionSpec::make(const SymbolTable& symbols,
                            const std::vector<std::pair<std::string, std::string>>& face_sources,
                            const std::map<std::string, double>& params, double boundary_tol) {
  if (face_sources.empty()) throw SpecError("a region needs at least one face");
  if (!(boundary_tol > 0.0)) throw SpecError("boundary_tol must be positive");
  RegionSpec r;
  r.boundary_tol = boundary_tol;
  r.params = params;
  r.symbols = symbols;
  for (const auto& [name, src] : face_sources) {
    if (name.empty()) throw SpecError("face name must not be empty");
    for (const auto& f : r.faces)
      if (f.name == name) throw SpecError("duplicate face name '" + name + "'");
    r.faces.push_back(BoundaryFace{name, Expr::parse(src, symbols)});
  }
  return r;
}

std::size_t RegionSpec::face_index(std::string_view name) const {
  for (std::size_t i = 0; i < faces.size(); ++i)
    if (faces[i].name == name) return i;
  throw ArgumentError("unknown face '" + std::string(name) + "'");
}

std::vector<double> RegionSpec::slot_values(const ExtPoint& p) const {
  std::vector<double> v(symbols.size(), 0.0);
  const std::size_t dim = symbols.size() - 1 - params.size();
  if (p.state.size() != dim) throw ArgumentError("state dimension mismatch");
  for (std::size_t i = 0; i < dim; ++i) v[i] = p.state[i];
  v[dim] = p.time;
  std::size_t slot = dim + 1;
  for (const auto& [k, val] : params) v[slot++] = val;
  return v;
}

std::vector<double> RegionSpec::face_values(const ExtPoint& p) const {
  const std::vector<double> slots = slot_values(p);
  std::vector<double> g(faces.size());
  for (std::size_t i = 0; i < faces.size(); ++i) g[i] = faces[i].g.eval(slots);
  return g;
}

MembershipResult region_membership(const ExtPoint& p, const RegionSpec& region) {
  if (!all_finite(p.state) || !std::isfinite(p.time))
    throw ArgumentError("region_membership: point must be finite");
  const std::vector<double> g = region.face_values(p);

  MembershipResult res;
  bool below = false;
  bool all_above = true;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] < -region.boundary_tol) below = true;
    if (!(g[i] > region.boundary_tol)) all_above = false;
    if (std::abs(g[i]) <= region.boundary_tol) res.active_faces.push_back(region.faces[i].name);
  }
  if (below) {
    res.where = Membership::Outside;
    res.active_faces.clear();
  } else if (all_above) {
    res.where = Membership::Inside;
  } else {
    res.where = Membership::OnBoundary;
  }
  return res;
}

const char* to_string(Membership m) {
  switch (m) {
    case Membership::Inside: return "inside";
    case Membership::OnBoundary: return "on_boundary";
    case Membership::Outside: return "outside";
  }
  return "unknown";
}

}  // namespace wazkit
