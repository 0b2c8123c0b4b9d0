#include "drw/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace drw {

PipelineConfig pipeline_defaults(const std::string& benchmark) {
  PipelineConfig pc;
  pc.seed = 2024;
  pc.ref_head.tol = 1e-6;
  pc.ref_head.max_iters = 1000;
  pc.train.learning_rate = 1e-3;
  pc.train.seed = pc.seed;

  if (benchmark == "celia_1d") {
    pc.coarse = celia_coarse_problem();
    pc.deploy = celia_problem(100, 10.0, 360.0);
    pc.ref_particle.static_L = 3.5;
    pc.ref_particle.tol = 3.2e-5;
    pc.ref_particle.max_iters = 2000;
    // 1,640 originals -> exactly 17,104 rows.
    pc.augment.sigmas = {0.1, 0.2, 0.3, 0.4, 0.5};
    pc.augment.copies_per_sigma = {2, 2, 2, 2, 1};
    pc.augment.target_rows = 17104;
    pc.augment.seed = pc.seed;
    pc.arch = MlpSpec{{1, 256, 256, 256, 1}, 0.01};
    pc.train.epochs = 150;
    pc.train.batch_size = 32;
    pc.lscheme_deploy.tol = 3.2e-5;
    pc.lscheme_deploy.max_iters = 2000;
    pc.grw_deploy.static_L = 3.5;
    pc.grw_deploy.tol = 3.2e-5;
    pc.grw_deploy.max_iters = 500;
    pc.grw_deploy.fixed_iterations = true;
    pc.drw_deploy.re_tol = 3.2e-5;
    pc.drw_deploy.lscheme.max_iters = 500;
  } else if (benchmark == "hills_layered_1d") {
    pc.coarse = hills_problem(60, 1.0, 450.0);
    pc.deploy = pc.coarse;
    pc.ref_particle.static_L = 5.0;
    pc.ref_particle.tol = 1e-5;
    pc.ref_particle.max_iters = 2000;
    pc.augment.sigmas = {0.1, 0.3, 0.5};
    pc.augment.copies_per_sigma = {1, 1, 1};
    pc.augment.seed = pc.seed;
    pc.arch = MlpSpec{{1, 256, 256, 256, 1}, 0.01};
    pc.train.epochs = 100;
    pc.lscheme_deploy.tol = 1e-5;
    pc.lscheme_deploy.max_iters = 1000;
    pc.grw_deploy.static_L = 5.0;
    pc.grw_deploy.tol = 1e-5;
    pc.drw_deploy.re_tol = 1e-5;
  } else if (benchmark == "infiltration_2d") {
    // Reduced grids keep the chain at desk scale: 17x17 reference (1,734
    // rows with the initial level), 25x25 deployment, shortened horizon.
    pc.coarse = infiltration2d_problem(17, 17, 2520.0, 1.26e4);
    pc.deploy = infiltration2d_problem(25, 25, 10.0, 600.0);
    pc.ref_particle.static_L = 0.5;
    pc.ref_particle.tol = 1e-6;
    pc.ref_particle.max_iters = 500;
    pc.ref_particle.scale.per_unit_head = 1e10;
    // sigma^2 from 0.1 to 0.5; 26,010 = 1,734 x 15 rows.
    pc.augment.sigmas = {0.3162, 0.4472, 0.5477, 0.6325, 0.7071};
    pc.augment.copies_per_sigma = {3, 3, 3, 3, 2};
    pc.augment.target_rows = 26010;
    pc.augment.seed = pc.seed;
    pc.arch = MlpSpec{{1, 25, 25, 1}, 0.01};
    pc.train.epochs = 400;
    pc.lscheme_deploy.tol = 1e-6;
    pc.lscheme_deploy.max_iters = 500;
    pc.grw_deploy.static_L = 0.5;
    pc.grw_deploy.max_iters = 500;
    pc.grw_deploy.fixed_iterations = true;
    pc.drw_deploy.re_tol = 1e-6;
    pc.drw_deploy.lscheme.max_iters = 500;
    pc.drw_deploy.lscheme.fixed_iterations = true;
  } else if (benchmark == "tracy_3d") {
    pc.coarse = tracy_problem({}, 9, 9, 9, 8640.0, 86400.0);
    pc.deploy = tracy_problem({}, 9, 9, 9, 4320.0, 86400.0);
    pc.ref_particle.static_L = 0.5;
    pc.ref_particle.tol = 1e-9;
    pc.ref_particle.max_iters = 500;
    pc.augment.sigmas = {0.2, 0.4};
    pc.augment.copies_per_sigma = {1, 1};
    pc.augment.seed = pc.seed;
    pc.arch = MlpSpec{{1, 256, 256, 256, 1}, 0.01};
    pc.train.epochs = 80;
    pc.lscheme_deploy.tol = 1e-9;
    pc.lscheme_deploy.max_iters = 500;
    pc.grw_deploy.static_L = 0.5;
    pc.grw_deploy.tol = 1e-9;
    pc.grw_deploy.max_iters = 500;
    pc.drw_deploy.re_tol = 1e-9;
    pc.drw_deploy.lscheme.max_iters = 500;
  } else if (benchmark == "cylindrical_field") {
    pc.coarse = cylindrical_field_problem(3, 8, 6, 43200.0);
    pc.deploy = cylindrical_field_problem(3, 8, 6, 5400.0);
    pc.ref_particle.static_L = 0.5;
    pc.ref_particle.tol = 1e-6;
    pc.ref_particle.max_iters = 1000;
    pc.augment.sigmas = {0.05, 0.1};
    pc.augment.copies_per_sigma = {1, 1};
    pc.augment.seed = pc.seed;
    pc.arch = MlpSpec{{1, 256, 256, 256, 1}, 0.01};
    pc.train.epochs = 60;
    pc.lscheme_deploy.tol = 1e-6;
    pc.lscheme_deploy.max_iters = 1000;
    pc.grw_deploy.static_L = 0.5;
    pc.grw_deploy.tol = 1e-6;
    pc.grw_deploy.max_iters = 1000;
    pc.drw_deploy.re_tol = 1e-6;
    pc.drw_deploy.lscheme.max_iters = 1000;
  } else {
    throw ConfigError("no pipeline defaults for benchmark '" + benchmark + "'");
  }

  pc.drw_deploy.scale = pc.ref_particle.scale;
  pc.grw_deploy.scale = pc.ref_particle.scale;
  pc.train.seed = pc.seed;
  return pc;
}

TrainedMaps train_maps(const Dataset& ds, const MlpSpec& arch, const TrainConfig& cfg) {
  const std::vector<double> heads = ds.heads();
  const std::vector<double> counts = ds.counts();
  if (heads.empty()) throw ConfigError("reference dataset has no converged rows to train on");

  TrainedMaps maps;
  TrainConfig cfg_fwd = cfg;
  TrainConfig cfg_inv = cfg;
  cfg_inv.seed = cfg.seed + 1;
  maps.forward_result = train(counts, heads, arch, cfg_fwd);
  maps.inverse_result = train(heads, counts, arch, cfg_inv);
  maps.forward = maps.forward_result.net;
  maps.inverse = maps.inverse_result.net;
  maps.forward.particle_scale = ds.particle_scale;
  maps.inverse.particle_scale = ds.particle_scale;
  return maps;
}

void install_maps(DrwConfig& cfg, const TrainedMaps& maps) {
  cfg.forward = std::make_shared<MlpScalarMap>(maps.forward);
  cfg.inverse = std::make_shared<MlpScalarMap>(maps.inverse);
}

void install_linear_maps(DrwConfig& cfg) {
  cfg.forward = std::make_shared<LinearForwardMap>(cfg.scale);
  cfg.inverse = std::make_shared<LinearInverseMap>(cfg.scale);
}

namespace {

void write_header(std::ofstream& out, const std::string& schema, const std::string& digest,
                  std::uint64_t seed) {
  out << "# schema: " << schema << "\n";
  out << "# config: " << digest << "\n";
  out << "# seed: " << seed << "\n";
}

}  // namespace

void write_solution_csv(const SolveResult& result, const Problem& p, const std::string& path,
                        const std::string& digest, std::uint64_t seed) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write solution: " + path);
  write_header(out, "drw-solution-1", digest, seed);
  const bool particles = !result.n_history.empty();
  out << "time_index,cell_id,psi,theta" << (particles ? ",n_particles" : "") << "\n";
  char buf[256];
  for (std::size_t m = 0; m < result.psi_history.size(); ++m) {
    for (int i = 0; i < p.grid.num_cells(); ++i) {
      if (particles) {
        std::snprintf(buf, sizeof(buf), "%zu,%d,%.17g,%.17g,%.17g\n", m, i,
                      result.psi_history[m][i], result.theta_history[m][i],
                      result.n_history[m][i]);
      } else {
        std::snprintf(buf, sizeof(buf), "%zu,%d,%.17g,%.17g\n", m, i, result.psi_history[m][i],
                      result.theta_history[m][i]);
      }
      out << buf;
    }
  }
  if (!out) throw IoError("short write on solution: " + path);
}

void write_trace_csv(const SolveResult& result, const std::string& path,
                     const std::string& digest, std::uint64_t seed) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write trace: " + path);
  write_header(out, "drw-trace-1", digest, seed);
  out << "time_index,iterations,final_RE,kappa,L0_effective\n";
  char buf[256];
  for (const auto& s : result.steps) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%.17g,%.17g\n", s.time_index, s.sweeps,
                  s.final_re, s.kappa, s.L0_effective);
    out << buf;
  }
  if (!out) throw IoError("short write on trace: " + path);
}

void write_face_flux_csv(const SolveResult& result, const Problem& p, const std::string& path,
                         const std::string& digest, std::uint64_t seed) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write face fluxes: " + path);
  write_header(out, "drw-faceflux-1", digest, seed);
  out << "face_id,cell_id,axis,sign,area,q_normal\n";
  const Eigen::VectorXd& psi = result.final_state.psi;
  const double t = result.times.empty() ? 0.0 : result.times.back();
  char buf[256];
  for (int i = 0; i < p.grid.num_cells(); ++i) {
    const std::vector<double> q = face_fluxes(p, psi, i, t);
    const auto faces = p.grid.faces(i);
    for (std::size_t f = 0; f < faces.size(); ++f) {
      const int face_id = p.grid.face_offset[i] + static_cast<int>(f);
      std::snprintf(buf, sizeof(buf), "%d,%d,%d,%d,%.17g,%.17g\n", face_id, i, faces[f].axis,
                    faces[f].sign, faces[f].area, q[f]);
      out << buf;
    }
  }
  if (!out) throw IoError("short write on face fluxes: " + path);
}

void write_grid_csv(const Grid& grid, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write grid: " + path);
  out << "cell_id,x0,x1,x2,volume,elevation\n";
  char buf[256];
  for (int i = 0; i < grid.num_cells(); ++i) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g,%.17g\n", i, grid.center[i][0],
                  grid.center[i][1], grid.center[i][2], grid.volume[i], grid.elevation[i]);
    out << buf;
  }
}

void write_comparison_csv(const std::vector<RunReport>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write comparison table: " + path);
  out << "solver,avg_cell_iterations,avg_sweeps,avg_final_RE,avg_kappa,MB_percent,"
         "all_converged\n";
  char buf[512];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", r.solver.c_str(),
                  r.avg_cell_iterations, r.avg_sweeps, r.avg_final_re, r.avg_kappa,
                  r.mb ? r.mb->percent : std::numeric_limits<double>::quiet_NaN(),
                  r.all_converged ? 1 : 0);
    out << buf;
  }
  if (!out) throw IoError("short write on comparison table: " + path);
}

}  // namespace drw
