#include "config.hpp"

#include <fstream>

namespace wazkit {
namespace cli {

using nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ConfigError("config: " + msg); }

double as_number(const ordered_json& j, const std::string& where) {
  if (!j.is_number()) fail(where + " must be a number");
  return j.get<double>();
}

StateVec as_state(const ordered_json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where + " must be a non-empty array of numbers");
  StateVec v;
  for (const auto& e : j) v.push_back(as_number(e, where));
  return v;
}

/// Resolve a coordinate name ("x1".."xn" or "t") to a slot index; t -> -1.
int axis_slot(const std::string& name, std::size_t dim) {
  if (name == "t") return -1;
  if (name.size() >= 2 && name[0] == 'x') {
    const int idx = std::atoi(name.c_str() + 1);
    if (idx >= 1 && static_cast<std::size_t>(idx) <= dim) return idx - 1;
  }
  fail("unknown coordinate '" + name + "'");
  return 0;
}

GammaCurve parse_gamma(const ordered_json& j) {
  if (!j.is_object() || !j.contains("kind")) fail("gamma needs a 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "segment") {
    return GammaCurve::segment(as_state(j.at("from"), "gamma.from"), as_state(j.at("to"), "gamma.to"));
  }
  if (kind == "polyline") {
    std::vector<StateVec> vertices;
    for (const auto& v : j.at("vertices")) vertices.push_back(as_state(v, "gamma.vertices"));
    return GammaCurve::polyline(vertices);
  }
  if (kind == "parametric") {
    std::vector<std::string> coords;
    for (const auto& c : j.at("coords")) coords.push_back(c.get<std::string>());
    return GammaCurve::parametric(coords);
  }
  fail("gamma kind must be segment, polyline or parametric");
  return GammaCurve::segment({0.0}, {1.0});
}

OmegaCriteria parse_criteria(const ordered_json& j, const models::ModelBundle& bundle,
                             const OmegaCriteria& base, bool have_base) {
  OmegaCriteria c = have_base ? base : OmegaCriteria{};
  if (j.contains("horizon")) c.horizon = as_number(j.at("horizon"), "criteria.horizon");
  auto parse_exit = [](const ordered_json& side, const std::string& where) {
    ExitsThroughFaces e;
    for (const auto& f : side.at("faces")) e.faces.push_back(f.get<std::string>());
    if (e.faces.empty()) fail(where + " needs at least one face");
    return e;
  };
  if (j.contains("class_a")) {
    const auto& a = j.at("class_a");
    const std::string kind = a.at("kind").get<std::string>();
    if (kind == "exit") {
      c.class_a = parse_exit(a, "criteria.class_a");
    } else if (kind == "converge") {
      ConvergesToEquilibrium conv;
      if (a.contains("x0")) {
        conv.eq.x0 = as_state(a.at("x0"), "criteria.class_a.x0");
        conv.eq.mask.assign(conv.eq.x0.size(), true);
        if (a.contains("unmasked"))
          for (const auto& u : a.at("unmasked")) conv.eq.mask.at(u.get<std::size_t>() - 1) = false;
      } else if (bundle.equilibrium) {
        conv.eq = *bundle.equilibrium;
      } else {
        fail("criteria.class_a.converge needs x0 (the model declares no equilibrium)");
      }
      conv.eps_enter = as_number(a.at("eps_enter"), "criteria.class_a.eps_enter");
      conv.eps_stay = as_number(a.at("eps_stay"), "criteria.class_a.eps_stay");
      c.class_a = conv;
    } else {
      fail("criteria.class_a.kind must be exit or converge");
    }
  }
  if (j.contains("class_b")) c.class_b = parse_exit(j.at("class_b"), "criteria.class_b");
  return c;
}

std::vector<FaceSampler> parse_scan_faces(const ordered_json& arr, const models::ModelBundle& bundle) {
  std::vector<FaceSampler> out;
  for (const auto& f : arr) {
    FaceSampler s;
    s.face = f.at("face").get<std::string>();
    bundle.region.face_index(s.face);  // validates
    const int pin = axis_slot(f.at("pin").get<std::string>(), bundle.field.dim);
    if (pin < 0) fail("scan pin coordinate cannot be t");
    s.pin_coord = static_cast<std::size_t>(pin);
    const auto& range = f.at("pin_range");
    s.pin_lo = as_number(range.at(0), "scan.pin_range");
    s.pin_hi = as_number(range.at(1), "scan.pin_range");
    if (f.contains("axes")) {
      for (const auto& a : f.at("axes")) {
        FaceSampler::Axis ax;
        const int slot = axis_slot(a.at("var").get<std::string>(), bundle.field.dim);
        if (slot < 0) fail("scan axis cannot be t (use the t list)");
        ax.coord = static_cast<std::size_t>(slot);
        ax.lo = as_number(a.at("range").at(0), "scan.axes.range");
        ax.hi = as_number(a.at("range").at(1), "scan.axes.range");
        ax.count = a.at("count").get<std::size_t>();
        s.axes.push_back(ax);
      }
    }
    if (f.contains("t")) {
      s.t_values.clear();
      for (const auto& t : f.at("t")) s.t_values.push_back(as_number(t, "scan.t"));
    }
    if (f.contains("quasi_count")) s.quasi_count = f.at("quasi_count").get<std::size_t>();
    out.push_back(std::move(s));
  }
  return out;
}

models::ModelBundle build_custom(const ordered_json& sys) {
  if (!sys.contains("dim") || !sys.contains("rhs") || !sys.contains("faces"))
    fail("system needs dim, rhs and faces");
  models::ModelBundle b;
  b.name = "custom";
  b.description = "inline system";
  std::map<std::string, double> params;
  if (sys.contains("params"))
    for (const auto& [k, v] : sys.at("params").items()) params[k] = as_number(v, "system.params");
  b.params = params;
  const auto dim = sys.at("dim").get<std::size_t>();
  std::vector<std::string> rhs;
  for (const auto& r : sys.at("rhs")) rhs.push_back(r.get<std::string>());
  b.field = FieldSpec::make(dim, rhs, params);
  std::vector<std::pair<std::string, std::string>> faces;
  for (const auto& f : sys.at("faces"))
    faces.emplace_back(f.at("name").get<std::string>(), f.at("g").get<std::string>());
  const double btol = sys.contains("boundary_tol") ? as_number(sys.at("boundary_tol"), "boundary_tol") : 1e-10;
  b.region = RegionSpec::make(b.field.symbols, faces, params, btol);
  if (sys.contains("equilibrium")) {
    const auto& eq = sys.at("equilibrium");
    EquilibriumSpec e;
    e.x0 = as_state(eq.at("x0"), "equilibrium.x0");
    e.mask.assign(e.x0.size(), true);
    if (eq.contains("unmasked"))
      for (const auto& u : eq.at("unmasked")) e.mask.at(u.get<std::size_t>() - 1) = false;
    e.validate();
    b.equilibrium = e;
  }
  b.default_integrator = IntegratorConfig{};
  return b;
}

}  // namespace

Experiment load_experiment(const std::string& config_path, const CliOverrides& cli) {
  ordered_json j;
  {
    std::ifstream in(config_path);
    if (!in) fail("cannot open '" + config_path + "'");
    try {
      in >> j;
    } catch (const std::exception& e) {
      fail(std::string("invalid JSON: ") + e.what());
    }
  }
  if (!j.is_object()) fail("top level must be an object");

  Experiment exp;
  try {
    const std::string model = j.contains("model") ? j.at("model").get<std::string>() : "";
    if (model.empty()) fail("missing 'model'");

    models::ModelOverrides overrides;
    if (j.contains("params"))
      for (const auto& [k, v] : j.at("params").items()) overrides.params[k] = as_number(v, "params");
    for (const auto& [k, v] : cli.params) overrides.params[k] = v;
    if (j.contains("controllers"))
      for (const auto& [k, v] : j.at("controllers").items())
        overrides.controllers[k] = v.get<std::string>();

    if (model == "custom") {
      if (!j.contains("system")) fail("model 'custom' needs a 'system' section");
      if (!overrides.params.empty()) fail("for custom systems put parameters in system.params");
      if (!overrides.controllers.empty()) fail("custom systems have no controller slots");
      exp.bundle = build_custom(j.at("system"));
    } else {
      exp.bundle = models::build_model(model, overrides);
    }

    exp.integrator = exp.bundle.default_integrator;
    if (j.contains("integrator")) {
      const auto& ji = j.at("integrator");
      if (ji.contains("rel_tol")) exp.integrator.rel_tol = as_number(ji.at("rel_tol"), "integrator.rel_tol");
      if (ji.contains("abs_tol")) exp.integrator.abs_tol = as_number(ji.at("abs_tol"), "integrator.abs_tol");
      if (ji.contains("event_tol"))
        exp.integrator.event_tol = as_number(ji.at("event_tol"), "integrator.event_tol");
      if (ji.contains("grazing_window"))
        exp.integrator.grazing_window = as_number(ji.at("grazing_window"), "integrator.grazing_window");
      if (ji.contains("max_step")) exp.integrator.max_step = as_number(ji.at("max_step"), "integrator.max_step");
      if (ji.contains("horizon")) exp.integrator.horizon = as_number(ji.at("horizon"), "integrator.horizon");
    }

    exp.has_criteria = exp.bundle.default_criteria.horizon > 0.0;
    exp.criteria = exp.bundle.default_criteria;
    if (j.contains("criteria")) {
      exp.criteria = parse_criteria(j.at("criteria"), exp.bundle, exp.criteria, exp.has_criteria);
      exp.has_criteria = true;
    }

    exp.gamma = exp.bundle.default_gamma;
    exp.has_gamma = exp.gamma.dim() > 0;
    if (j.contains("gamma")) {
      exp.gamma = parse_gamma(j.at("gamma"));
      exp.has_gamma = true;
    }
    if (j.contains("gamma_family"))
      for (const auto& g : j.at("gamma_family")) exp.family.push_back(parse_gamma(g));

    exp.scan = exp.bundle.default_scan;
    if (j.contains("scan")) {
      const auto& js = j.at("scan");
      if (js.contains("K")) exp.scan_order = js.at("K").get<int>();
      if (js.contains("deriv_tol")) exp.scan_deriv_tol = as_number(js.at("deriv_tol"), "scan.deriv_tol");
      if (js.contains("faces")) exp.scan = parse_scan_faces(js.at("faces"), exp.bundle);
    }

    exp.stability = exp.bundle.default_stability;
    if (j.contains("stability")) {
      const auto& js = j.at("stability");
      models::StabilityDefaults st = exp.stability ? *exp.stability : models::StabilityDefaults{};
      if (js.contains("radius_v")) st.radius_v = as_number(js.at("radius_v"), "stability.radius_v");
      if (js.contains("radius_u")) st.radius_u = as_number(js.at("radius_u"), "stability.radius_u");
      if (js.contains("samples")) st.samples = js.at("samples").get<std::size_t>();
      if (js.contains("t0_grid")) {
        st.t0_grid.clear();
        for (const auto& t : js.at("t0_grid")) st.t0_grid.push_back(as_number(t, "stability.t0_grid"));
      }
      exp.stability = st;
    }
    if (exp.stability && !(exp.stability->radius_v < exp.stability->radius_u))
      fail("stability needs radius_v < radius_u");

    exp.witness = exp.bundle.default_witness;
    if (j.contains("find")) {
      const auto& jf = j.at("find");
      if (jf.contains("s_tol")) exp.witness.s_tol = as_number(jf.at("s_tol"), "find.s_tol");
      if (jf.contains("shadow_width"))
        exp.witness.shadow_width = as_number(jf.at("shadow_width"), "find.shadow_width");
      if (jf.contains("shadow_refine"))
        exp.witness.shadow_refine = as_number(jf.at("shadow_refine"), "find.shadow_refine");
    }

    if (j.contains("x0")) exp.x0 = as_state(j.at("x0"), "x0");
    if (j.contains("t0")) exp.t0 = as_number(j.at("t0"), "t0");

    if (j.contains("outputs")) {
      const auto& jo = j.at("outputs");
      if (jo.contains("dir")) exp.out_dir = jo.at("dir").get<std::string>();
      if (jo.contains("svg")) exp.svg = jo.at("svg").get<bool>();
      if (jo.contains("svg_axes")) {
        exp.svg_axes.clear();
        for (const auto& a : jo.at("svg_axes"))
          exp.svg_axes.push_back(axis_slot(a.get<std::string>(), exp.bundle.field.dim));
        if (exp.svg_axes.size() != 2) fail("outputs.svg_axes needs exactly two coordinates");
      }
    }

    // Command-line overrides win last.
    if (cli.horizon) {
      exp.integrator.horizon = *cli.horizon;
      exp.criteria.horizon = *cli.horizon;
    }
    if (cli.out_dir) exp.out_dir = *cli.out_dir;
    if (cli.x0) exp.x0 = *cli.x0;
    if (cli.t0) exp.t0 = *cli.t0;

    if (exp.svg_axes.empty()) {
      if (exp.bundle.field.dim >= 2)
        exp.svg_axes = {0, 1};
      else
        exp.svg_axes = {-1, 0};
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    fail(e.what());
  } catch (const nlohmann::json::exception& e) {
    fail(e.what());
  }

  // Full resolved provenance, embedded verbatim in every report.
  ordered_json r;
  r["model"] = exp.bundle.name;
  r["params"] = ordered_json::object();
  for (const auto& [k, v] : exp.bundle.params) r["params"][k] = v;
  if (!exp.bundle.controllers.empty()) {
    r["controllers"] = ordered_json::object();
    for (const auto& [k, v] : exp.bundle.controllers) r["controllers"][k] = v;
  }
  r["integrator"] = {{"rel_tol", exp.integrator.rel_tol},
                     {"abs_tol", exp.integrator.abs_tol},
                     {"event_tol", exp.integrator.event_tol},
                     {"grazing_window", exp.integrator.grazing_window},
                     {"max_step", exp.integrator.max_step},
                     {"horizon", exp.integrator.horizon}};
  r["boundary_tol"] = exp.bundle.region.boundary_tol;
  if (exp.has_criteria) {
    ordered_json jc;
    jc["horizon"] = exp.criteria.horizon;
    if (const auto* conv = std::get_if<ConvergesToEquilibrium>(&exp.criteria.class_a)) {
      jc["class_a"] = {{"kind", "converge"},
                       {"x0", conv->eq.x0},
                       {"eps_enter", conv->eps_enter},
                       {"eps_stay", conv->eps_stay}};
    } else {
      jc["class_a"] = {{"kind", "exit"}, {"faces", std::get<ExitsThroughFaces>(exp.criteria.class_a).faces}};
    }
    jc["class_b"] = {{"kind", "exit"}, {"faces", exp.criteria.class_b.faces}};
    r["criteria"] = jc;
  }
  r["find"] = {{"s_tol", exp.witness.s_tol},
               {"shadow_width", exp.witness.shadow_width},
               {"shadow_refine", exp.witness.shadow_refine}};
  if (j.contains("gamma")) r["gamma"] = j.at("gamma");
  if (j.contains("gamma_family")) r["gamma_family"] = j.at("gamma_family");
  r["scan"] = {{"K", exp.scan_order}, {"deriv_tol", exp.scan_deriv_tol}, {"faces", exp.scan.size()}};
  if (exp.stability)
    r["stability"] = {{"radius_v", exp.stability->radius_v},
                      {"radius_u", exp.stability->radius_u},
                      {"t0_grid", exp.stability->t0_grid},
                      {"samples", exp.stability->samples},
                      {"sampler", "halton-ball"}};
  exp.resolved = std::move(r);
  return exp;
}

}  // namespace cli
}  // namespace wazkit
