#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "wazkit/expr.hpp"
#include "wazkit/types.hpp"

namespace wazkit {

/// One smooth inequality g(x, t) > 0 of the region's defining conjunction.
struct BoundaryFace {
  std::string name;
  Expr g;
};

/// The open set W = { all faces g_i > 0 }. A point is on the boundary when
/// min g_i lies in the band [-boundary_tol, boundary_tol] and no face is
/// below -boundary_tol.
struct RegionSpec {
  std::vector<BoundaryFace> faces;
  double boundary_tol = 1e-10;
  std::map<std::string, double> params;
  SymbolTable symbols;

  static RegionSpec make(const SymbolTable& symbols,
                         const std::vector<std::pair<std::string, std::string>>& face_sources,
                         const std::map<std::string, double>& params, double boundary_tol = 1e-10);

  std::size_t face_index(std::string_view name) const;
  const BoundaryFace& face(std::string_view name) const { return faces[face_index(name)]; }

  /// Slot vector [x1.., t, params...] matching the symbol table.
  std::vector<double> slot_values(const ExtPoint& p) const;

  /// Face values g_i(p), declaration order.
  std::vector<double> face_values(const ExtPoint& p) const;
};

enum class Membership { Inside, OnBoundary, Outside };

struct MembershipResult {
  Membership where = Membership::Outside;
  std::vector<std::string> active_faces;  // |g_i| <= boundary_tol
};

MembershipResult region_membership(const ExtPoint& p, const RegionSpec& region);

const char* to_string(Membership m);

}  // namespace wazkit
