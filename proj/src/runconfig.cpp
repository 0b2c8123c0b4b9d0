#include "drw/runconfig.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

namespace drw {

using json = nlohmann::json;

namespace {

SoilModel soil_from_json(const json& j) {
  const std::string kind = j.value("kind", "");
  auto need = [&](const char* key) -> double {
    if (!j.contains(key)) throw ConfigError(std::string("soil model missing key: ") + key);
    return j.at(key).get<double>();
  };
  if (kind == "haverkamp") {
    return HaverkampParams{need("K_s"),     need("theta_s"), need("theta_r"), need("A_h"),
                           need("gamma_h"), need("alpha_h"), need("beta_h")};
  }
  if (kind == "van_genuchten") {
    return VanGenuchtenParams{need("K_s"),  need("theta_s"), need("theta_r"),
                              need("alpha_vg"), need("n_vg"), j.value("l_vg", 0.0)};
  }
  if (kind == "gardner") {
    return GardnerParams{need("K_s"), need("theta_s"), need("theta_r"), need("alpha_g")};
  }
  throw ConfigError("soil model kind must be haverkamp | van_genuchten | gardner, got '" +
                    kind + "'");
}

Problem problem_from_json(const json& j) {
  std::vector<std::string> missing;
  for (const char* key : {"grid", "soils", "initial_psi", "bc", "dt", "total_time"}) {
    if (!j.contains(key)) missing.push_back(key);
  }
  if (!missing.empty()) {
    std::string what = "problem spec missing keys:";
    for (const auto& k : missing) what += " " + k;
    throw ConfigError(what);
  }

  Problem p;
  p.name = j.value("name", "user_problem");
  p.units = unit_system_from_string(j.value("units", "cm-s"));
  const json& gj = j.at("grid");
  const std::string gkind = gj.value("kind", "cartesian");
  if (gkind == "cartesian") {
    p.grid = build_cartesian_grid(gj.at("extents").get<std::vector<double>>(),
                                  gj.at("cells").get<std::vector<int>>(),
                                  gj.value("vertical_axis", -2));
  } else if (gkind == "cylindrical") {
    const auto cells = gj.at("cells").get<std::vector<int>>();
    if (cells.size() != 3) throw ConfigError("cylindrical grid needs [n_r, n_az, n_z]");
    p.grid = build_cylindrical_grid(gj.at("radius").get<double>(), gj.at("depth").get<double>(),
                                    cells[0], cells[1], cells[2]);
  } else {
    throw ConfigError("grid kind must be cartesian | cylindrical");
  }

  for (const auto& sj : j.at("soils")) p.soils.push_back(soil_from_json(sj));
  p.soil_of_cell.assign(p.grid.num_cells(), 0);
  if (j.contains("layers")) {
    // Layered regions: {"axis": 0, "below": 30.0, "soil": 1} assigns soil 1
    // to every cell whose center coordinate on `axis` is < `below`.
    for (const auto& lj : j.at("layers")) {
      const int axis = lj.at("axis").get<int>();
      const double below = lj.at("below").get<double>();
      const int soil = lj.at("soil").get<int>();
      for (int i = 0; i < p.grid.num_cells(); ++i) {
        if (p.grid.center[i][axis] < below) p.soil_of_cell[i] = soil;
      }
    }
  }

  const double psi0 = j.at("initial_psi").get<double>();
  p.initial_psi = [psi0](const Vec3&) { return psi0; };

  p.dt = j.at("dt").get<double>();
  p.total_time = j.at("total_time").get<double>();
  const std::string kmode = j.value("k_mode", "arithmetic");
  if (kmode == "arithmetic") p.k_mode = FaceKMode::Arithmetic;
  else if (kmode == "geometric") p.k_mode = FaceKMode::Geometric;
  else if (kmode == "upwind") p.k_mode = FaceKMode::Upwind;
  else if (kmode == "harmonic") p.k_mode = FaceKMode::Harmonic;
  else throw ConfigError("k_mode must be arithmetic | geometric | upwind | harmonic");
  p.harmonic_at_material_interfaces = j.value("harmonic_at_material_interfaces", true);

  // Boundary conditions keyed by boundary group ("axis0-", "axis2+", ...).
  std::map<std::string, json> bc_by_group;
  for (const auto& bj : j.at("bc")) {
    if (!bj.contains("where")) throw ConfigError("bc entry missing key: where");
    bc_by_group[bj.at("where").get<std::string>()] = bj;
  }
  p.bc.resize(p.grid.boundary.size());
  std::set<std::string> used;
  for (std::size_t s = 0; s < p.grid.boundary.size(); ++s) {
    const BoundarySlot& slot = p.grid.boundary[s];
    const std::string key =
        "axis" + std::to_string(slot.axis) + (slot.sign > 0 ? "+" : "-");
    auto it = bc_by_group.find(key);
    if (it == bc_by_group.end())
      throw ConfigError("no boundary condition for group " + key);
    used.insert(key);
    const json& bj = it->second;
    const std::string kind = bj.value("kind", "");
    if (kind == "dirichlet") {
      const double v = bj.at("value").get<double>();
      p.bc[s] = DirichletBC{[v](double, const Vec3&) { return v; }};
    } else if (kind == "head_gradient") {
      p.bc[s] = HeadGradientBC{bj.value("value", 0.0)};
    } else if (kind == "flux") {
      const double v = bj.value("value", 0.0);
      p.bc[s] = FluxBC{[v](double) { return v; }};
    } else if (kind == "irrigation") {
      IrrigationSchedule sched;
      for (const auto& ej : bj.at("events")) {
        sched.events.push_back({ej.at("start").get<double>(), ej.at("duration").get<double>(),
                                ej.at("depth").get<double>()});
      }
      sched.validate();
      p.bc[s] = FluxBC{[sched](double t) { return irrigation_flux(sched, t); }};
    } else {
      throw ConfigError("bc kind must be dirichlet | head_gradient | flux | irrigation");
    }
  }
  for (const auto& [key, bj] : bc_by_group) {
    if (!used.count(key)) throw ConfigError("bc group " + key + " matches no boundary face");
  }

  if (j.contains("sink")) {
    const json& sj = j.at("sink");
    p.sink = FeddesParams{sj.at("S_max").get<double>(), sj.value("psi_1", -0.1),
                          sj.value("psi_2", -0.25), sj.value("psi_3", -5.0),
                          sj.value("psi_4", -80.0)};
  }
  p.validate();
  return p;
}

void read_lscheme(const json& j, LschemeConfig& c) {
  c.L0 = j.value("L0", c.L0);
  c.rho = j.value("rho", c.rho);
  c.tol = j.value("tol", c.tol);
  c.max_iters = j.value("max_iters", c.max_iters);
  c.dt = j.value("dt", c.dt);
  c.cond_threshold = j.value("cond_threshold", c.cond_threshold);
  c.cond_growth = j.value("cond_growth", c.cond_growth);
  c.cond_max_doublings = j.value("cond_max_doublings", c.cond_max_doublings);
  c.cond_check_every = j.value("cond_check_every", c.cond_check_every);
  c.adaptive = j.value("adaptive", c.adaptive);
  c.static_L = j.value("static_L", c.static_L);
  c.eps_psi = j.value("eps_psi", c.eps_psi);
  c.fixed_iterations = j.value("fixed_iterations", c.fixed_iterations);
}

}  // namespace

Problem RunConfig::make_problem() const {
  Problem p;
  if (!raw_json.empty()) {
    const json j = json::parse(raw_json);
    if (j.contains("problem") && j.at("problem").is_object()) {
      p = problem_from_json(j.at("problem"));
    } else {
      p = load_problem(problem_ref);
    }
  } else {
    p = load_problem(problem_ref);
  }
  if (!override_cells.empty()) {
    if (p.grid.coords == CoordinateSystem::Cylindrical) {
      if (override_cells.size() != 3)
        throw ConfigError("cylindrical cell override needs [n_r, n_az, n_z]");
      Problem re = cylindrical_field_problem(override_cells[0], override_cells[1],
                                             override_cells[2], p.dt, p.total_time);
      p = re;
    } else {
      std::vector<double> extents(p.grid.extents.begin(),
                                  p.grid.extents.begin() + p.grid.dim);
      if (static_cast<int>(override_cells.size()) != p.grid.dim)
        throw ConfigError("cell override rank does not match the problem grid");
      // Rebuild the benchmark at the new resolution.
      if (problem_ref == "celia_1d" || problem_ref == "celia_1d_coarse") {
        p = celia_problem(override_cells[0], p.dt, p.total_time);
      } else if (problem_ref == "hills_layered_1d") {
        p = hills_problem(override_cells[0], p.dt, p.total_time);
      } else if (problem_ref == "infiltration_2d") {
        p = infiltration2d_problem(override_cells[0], override_cells[1], p.dt, p.total_time);
      } else if (problem_ref == "tracy_3d") {
        p = tracy_problem({}, override_cells[0], override_cells[1], override_cells[2], p.dt,
                          p.total_time);
      } else {
        throw ConfigError("cell override unsupported for inline problem specs");
      }
    }
  }
  if (override_dt > 0.0) p.dt = override_dt;
  if (override_total_time > 0.0) p.total_time = override_total_time;
  return p;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open run config: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("malformed run config " + path + ": " + e.what());
  }

  RunConfig rc;
  rc.raw_json = j.dump();
  if (j.contains("problem") && j.at("problem").is_string())
    rc.problem_ref = j.at("problem").get<std::string>();
  else if (j.contains("problem"))
    rc.problem_ref.clear();
  rc.solver = j.value("solver", rc.solver);
  if (rc.solver != "lscheme" && rc.solver != "grw" && rc.solver != "drw")
    throw ConfigError("solver must be one of lscheme | grw | drw");
  rc.output_dir = j.value("output_dir", rc.output_dir);
  rc.seed = j.value("seed", rc.seed);

  if (j.contains("lscheme")) read_lscheme(j.at("lscheme"), rc.lscheme);
  if (j.contains("grw")) {
    const json& g = j.at("grw");
    rc.grw.static_L = g.value("static_L", rc.grw.static_L);
    rc.grw.tol = g.value("tol", rc.grw.tol);
    rc.grw.max_iters = g.value("max_iters", rc.grw.max_iters);
    rc.grw.fixed_iterations = g.value("fixed_iterations", rc.grw.fixed_iterations);
    rc.grw.dt = g.value("dt", rc.grw.dt);
    rc.grw.scale.per_unit_head = g.value("particle_scale", rc.grw.scale.per_unit_head);
    rc.grw.cond_check_every = g.value("cond_check_every", rc.grw.cond_check_every);
  }
  if (j.contains("drw")) {
    const json& d = j.at("drw");
    rc.drw_re_tol = d.value("re_tol", rc.drw_re_tol);
    rc.drw_decode_per_iterate = d.value("decode_per_iterate", rc.drw_decode_per_iterate);
    rc.forward_checkpoint = d.value("forward_checkpoint", rc.forward_checkpoint);
    rc.inverse_checkpoint = d.value("inverse_checkpoint", rc.inverse_checkpoint);
    if (d.contains("lscheme")) read_lscheme(d.at("lscheme"), rc.lscheme);
  }
  if (j.contains("train")) {
    const json& t = j.at("train");
    rc.train.learning_rate = t.value("learning_rate", rc.train.learning_rate);
    rc.train.epochs = t.value("epochs", rc.train.epochs);
    rc.train.batch_size = t.value("batch_size", rc.train.batch_size);
    rc.train.validation_fraction = t.value("validation_fraction", rc.train.validation_fraction);
    rc.train.seed = t.value("seed", rc.seed);
    if (t.contains("layer_sizes")) rc.arch.layer_sizes = t.at("layer_sizes").get<std::vector<int>>();
    rc.arch.leaky_slope = t.value("leaky_slope", rc.arch.leaky_slope);
  }
  if (j.contains("augment")) {
    const json& a = j.at("augment");
    if (a.contains("sigmas")) rc.augment.sigmas = a.at("sigmas").get<std::vector<double>>();
    if (a.contains("copies_per_sigma"))
      rc.augment.copies_per_sigma = a.at("copies_per_sigma").get<std::vector<int>>();
    rc.augment.target_rows = a.value("target_rows", rc.augment.target_rows);
    rc.augment.seed = a.value("seed", rc.seed);
  }
  if (j.contains("problem_overrides")) {
    const json& o = j.at("problem_overrides");
    if (o.contains("cells")) rc.override_cells = o.at("cells").get<std::vector<int>>();
    rc.override_dt = o.value("dt", 0.0);
    rc.override_total_time = o.value("total_time", 0.0);
  }
  if (j.contains("exports")) {
    const json& e = j.at("exports");
    rc.export_solution = e.value("solution", rc.export_solution);
    rc.export_trace = e.value("trace", rc.export_trace);
    rc.export_face_flux = e.value("face_flux", rc.export_face_flux);
    rc.export_grid = e.value("grid", rc.export_grid);
  }
  return rc;
}

RunConfig default_run_config(const std::string& benchmark) {
  RunConfig rc;
  rc.problem_ref = benchmark;
  rc.raw_json = json{{"problem", benchmark}}.dump();
  return rc;
}

}  // namespace drw
