#include "wazkit/gamma.hpp"

#include <cmath>

namespace wazkit {

GammaCurve GammaCurve::segment(StateVec a, StateVec b) {
  if (a.empty() || a.size() != b.size()) throw SpecError("segment endpoints must share a nonzero dimension");
  if (!all_finite(a) || !all_finite(b)) throw SpecError("segment endpoints must be finite");
  GammaCurve c;
  c.data_ = Segment{std::move(a), std::move(b)};
  return c;
}

GammaCurve GammaCurve::polyline(std::vector<StateVec> vertices) {
  if (vertices.size() < 2) throw SpecError("polyline needs at least two vertices");
  const std::size_t dim = vertices.front().size();
  if (dim == 0) throw SpecError("polyline vertices must have nonzero dimension");
  for (const StateVec& v : vertices) {
    if (v.size() != dim) throw SpecError("polyline vertices must share a dimension");
    if (!all_finite(v)) throw SpecError("polyline vertices must be finite");
  }
  GammaCurve c;
  c.data_ = Polyline{std::move(vertices)};
  return c;
}

GammaCurve GammaCurve::parametric(std::vector<std::string> coord_sources) {
  if (coord_sources.empty()) throw SpecError("parametric curve needs at least one coordinate");
  const SymbolTable symbols({"s"});
  Parametric p;
  p.coords.reserve(coord_sources.size());
  for (const std::string& src : coord_sources) p.coords.push_back(Expr::parse(src, symbols));
  GammaCurve c;
  c.data_ = std::move(p);
  return c;
}

std::size_t GammaCurve::dim() const {
  if (const auto* s = std::get_if<Segment>(&data_)) return s->a.size();
  if (const auto* p = std::get_if<Polyline>(&data_)) return p->vertices.front().size();
  return std::get<Parametric>(data_).coords.size();
}

ExtPoint gamma_eval(const GammaCurve& curve, double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw ArgumentError("gamma_eval: s must lie in [0, 1]");

  ExtPoint p;
  p.time = 0.0;

  if (const auto* seg = std::get_if<GammaCurve::Segment>(&curve.data_)) {
    if (s == 0.0) {
      p.state = seg->a;
      return p;
    }
    if (s == 1.0) {
      p.state = seg->b;
      return p;
    }
    p.state.resize(seg->a.size());
    for (std::size_t i = 0; i < p.state.size(); ++i)
      p.state[i] = (1.0 - s) * seg->a[i] + s * seg->b[i];
    return p;
  }

  if (const auto* poly = std::get_if<GammaCurve::Polyline>(&curve.data_)) {
    const auto& v = poly->vertices;
    const std::size_t nseg = v.size() - 1;
    if (s == 1.0) {
      p.state = v.back();
      return p;
    }
    const double scaled = s * static_cast<double>(nseg);
    const std::size_t k = std::min(static_cast<std::size_t>(std::floor(scaled)), nseg - 1);
    const double u = scaled - static_cast<double>(k);
    if (u == 0.0) {
      p.state = v[k];
      return p;
    }
    p.state.resize(v[k].size());
    for (std::size_t i = 0; i < p.state.size(); ++i)
      p.state[i] = (1.0 - u) * v[k][i] + u * v[k + 1][i];
    return p;
  }

  const auto& par = std::get<GammaCurve::Parametric>(curve.data_);
  const double values[1] = {s};
  p.state.resize(par.coords.size());
  for (std::size_t i = 0; i < p.state.size(); ++i) p.state[i] = par.coords[i].eval(values);
  return p;
}

}  // namespace wazkit
