// Command-line driver: reference generation, augmentation, training, solves,
// full benchmark chains and report rendering.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "drw/runconfig.hpp"

namespace fs = std::filesystem;
using namespace drw;

namespace {

fs::path resolve_out(const std::string& out) {
  fs::path p(out);
  if (p.is_relative()) {
    if (const char* root = std::getenv("DRW_OUTPUT_ROOT")) p = fs::path(root) / p;
  }
  fs::create_directories(p);
  return p;
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

void require_file(const std::string& path, const std::string& what) {
  if (!fs::exists(path)) throw ConfigError("missing " + what + ": " + path);
}

struct SolveOutputs {
  SolveResult result;
  RunReport report;
};

SolveOutputs run_solver(const Problem& problem, const RunConfig& rc) {
  Timer timer;
  SolveOutputs out;
  if (rc.solver == "lscheme") {
    out.result = solve_lscheme(problem, rc.lscheme);
  } else if (rc.solver == "grw") {
    out.result = solve_grw(problem, rc.grw);
  } else {
    require_file(rc.forward_checkpoint, "forward checkpoint (drw.forward_checkpoint)");
    require_file(rc.inverse_checkpoint, "inverse checkpoint (drw.inverse_checkpoint)");
    DrwConfig dc;
    dc.lscheme = rc.lscheme;
    dc.re_tol = rc.drw_re_tol;
    dc.decode_per_iterate = rc.drw_decode_per_iterate;
    Mlp fwd = load_checkpoint(rc.forward_checkpoint);
    Mlp inv = load_checkpoint(rc.inverse_checkpoint);
    dc.scale.per_unit_head = fwd.particle_scale > 0 ? fwd.particle_scale : 1e10;
    dc.forward = std::make_shared<MlpScalarMap>(std::move(fwd));
    dc.inverse = std::make_shared<MlpScalarMap>(std::move(inv));
    out.result = solve_drw(problem, dc);
  }
  out.report = summarize(out.result, problem, rc.solver);
  out.report.seed = rc.seed;
  out.report.config_digest = rc.digest();
  out.report.wall_seconds = timer.seconds();
  return out;
}

void export_artifacts(const SolveOutputs& so, const Problem& problem, const RunConfig& rc,
                      const fs::path& dir, const std::string& prefix) {
  const std::string digest = rc.digest();
  if (rc.export_solution)
    write_solution_csv(so.result, problem, (dir / (prefix + "_solution.csv")).string(), digest,
                       rc.seed);
  if (rc.export_trace)
    write_trace_csv(so.result, (dir / (prefix + "_trace.csv")).string(), digest, rc.seed);
  if (rc.export_face_flux)
    write_face_flux_csv(so.result, problem, (dir / (prefix + "_faceflux.csv")).string(), digest,
                        rc.seed);
  if (rc.export_grid) write_grid_csv(problem.grid, (dir / (prefix + "_grid.csv")).string());
  write_report(so.report, (dir / (prefix + "_report.json")).string());
}

int cmd_generate_reference(const std::string& name, const std::string& out, std::uint64_t seed) {
  PipelineConfig pc = pipeline_defaults(name);
  pc.seed = seed;
  Dataset ds = generate_reference_solutions(pc.coarse, pc.ref_head, pc.ref_particle,
                                            pc.include_initial_level);
  ds.seed = seed;
  ds.config_digest = hex64(fnv1a(name + std::to_string(seed)));
  const fs::path dir = resolve_out(out);
  write_dataset_csv(ds, (dir / "reference.csv").string());
  std::cout << "reference: " << ds.rows.size() << " rows -> " << (dir / "reference.csv")
            << "\n";
  return 0;
}

int cmd_augment(const std::string& in, const std::string& out, const AugmentConfig& cfg) {
  require_file(in, "reference dataset");
  Dataset ds = read_dataset_csv(in);
  Dataset aug = augment(ds, cfg);
  aug.config_digest = ds.config_digest;
  write_dataset_csv(aug, out);
  std::cout << "augmented: " << ds.rows.size() << " -> " << aug.rows.size() << " rows -> " << out
            << "\n";
  return 0;
}

int cmd_train(const std::string& data, const std::string& out_fwd, const std::string& out_inv,
              const MlpSpec& arch, TrainConfig cfg, const std::string& from_fwd,
              const std::string& from_inv) {
  require_file(data, "training dataset");
  const Dataset ds = read_dataset_csv(data);
  const std::vector<double> heads = ds.heads();
  const std::vector<double> counts = ds.counts();

  Mlp fwd, inv;
  if (!from_fwd.empty() || !from_inv.empty()) {
    require_file(from_fwd, "pretrained forward checkpoint");
    require_file(from_inv, "pretrained inverse checkpoint");
    Mlp pf = load_checkpoint(from_fwd);
    Mlp pi = load_checkpoint(from_inv);
    TrainConfig ci = cfg;
    ci.seed = cfg.seed + 1;
    fwd = retrain(pf, counts, heads, cfg).net;
    inv = retrain(pi, heads, counts, ci).net;
  } else {
    TrainedMaps maps = train_maps(ds, arch, cfg);
    fwd = std::move(maps.forward);
    inv = std::move(maps.inverse);
    std::cout << "forward val MSE: "
              << (maps.forward_result.val_mse.empty() ? 0.0 : maps.forward_result.val_mse.back())
              << ", inverse val MSE: "
              << (maps.inverse_result.val_mse.empty() ? 0.0 : maps.inverse_result.val_mse.back())
              << "\n";
  }
  fwd.particle_scale = ds.particle_scale;
  inv.particle_scale = ds.particle_scale;
  save_checkpoint(fwd, out_fwd);
  save_checkpoint(inv, out_inv);
  std::cout << "checkpoints -> " << out_fwd << ", " << out_inv << "\n";
  return 0;
}

int cmd_solve(RunConfig rc, const std::string& out) {
  const fs::path dir = resolve_out(out.empty() ? rc.output_dir : out);
  const Problem problem = rc.make_problem();
  SolveOutputs so = run_solver(problem, rc);
  export_artifacts(so, problem, rc, dir, rc.solver);
  std::cout << "solve " << rc.solver << " on " << problem.name << ": steps=" << so.report.steps
            << " converged=" << (so.report.all_converged ? "yes" : "no")
            << (so.report.mb ? " MB=" + std::to_string(so.report.mb->percent) + "%" : "")
            << "\n";
  if (!so.report.all_converged && !rc.lscheme.fixed_iterations && !rc.grw.fixed_iterations) {
    std::cerr << "error: iteration cap reached before tolerance on at least one step\n";
    return 3;
  }
  return 0;
}

int cmd_benchmark(const std::string& name, const std::string& out, std::uint64_t seed) {
  const fs::path dir = resolve_out(out);
  PipelineConfig pc = pipeline_defaults(name);
  pc.seed = seed;
  pc.train.seed = seed;
  pc.augment.seed = seed;
  const std::string digest = hex64(fnv1a(name + std::to_string(seed)));

  std::cout << "[1/6] reference solutions (coarse grid)\n";
  Dataset ds = generate_reference_solutions(pc.coarse, pc.ref_head, pc.ref_particle,
                                            pc.include_initial_level);
  ds.seed = seed;
  ds.config_digest = digest;
  write_dataset_csv(ds, (dir / "reference.csv").string());

  std::cout << "[2/6] augmentation (" << ds.rows.size() << " rows)\n";
  Dataset aug = augment(ds, pc.augment);
  aug.config_digest = digest;
  write_dataset_csv(aug, (dir / "augmented.csv").string());

  std::cout << "[3/6] training on " << aug.rows.size() << " rows\n";
  TrainedMaps maps = train_maps(aug, pc.arch, pc.train);
  save_checkpoint(maps.forward, (dir / "forward.json").string());
  save_checkpoint(maps.inverse, (dir / "inverse.json").string());

  RunConfig rc = default_run_config(name);
  rc.seed = seed;
  std::vector<RunReport> rows;

  std::cout << "[4/6] adaptive L-scheme solve\n";
  rc.solver = "lscheme";
  rc.lscheme = pc.lscheme_deploy;
  SolveOutputs ls = run_solver(pc.deploy, rc);
  export_artifacts(ls, pc.deploy, rc, dir, "lscheme");
  rows.push_back(ls.report);

  std::cout << "[5/6] GRW baseline solve\n";
  rc.solver = "grw";
  rc.grw = pc.grw_deploy;
  SolveOutputs gr = run_solver(pc.deploy, rc);
  export_artifacts(gr, pc.deploy, rc, dir, "grw");
  rows.push_back(gr.report);

  std::cout << "[6/6] DRW solve\n";
  DrwConfig dc = pc.drw_deploy;
  install_maps(dc, maps);
  Timer timer;
  SolveResult drw_result = solve_drw(pc.deploy, dc);
  RunReport drw_report = summarize(drw_result, pc.deploy, "drw");
  drw_report.seed = seed;
  drw_report.config_digest = digest;
  drw_report.wall_seconds = timer.seconds();
  rc.solver = "drw";
  export_artifacts({drw_result, drw_report}, pc.deploy, rc, dir, "drw");
  rows.push_back(drw_report);

  write_comparison_csv(rows, (dir / "comparison.csv").string());
  std::cout << "benchmark artifacts in " << dir << "\n";
  return 0;
}

int cmd_report(const std::string& in) {
  const fs::path dir(in);
  if (!fs::is_directory(dir)) throw ConfigError("report input is not a directory: " + in);
  std::vector<RunReport> rows;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.size() > 12 && name.substr(name.size() - 12) == "_report.json") {
      rows.push_back(read_report(entry.path().string()));
    }
  }
  if (rows.empty()) throw ConfigError("no *_report.json artifacts in " + in);
  std::printf("%-10s %12s %10s %12s %10s %10s\n", "solver", "avg_iters", "sweeps", "final_RE",
              "kappa", "MB%");
  for (const auto& r : rows) {
    std::printf("%-10s %12.4g %10.4g %12.4g %10.4g %10.4g\n", r.solver.c_str(),
                r.avg_cell_iterations, r.avg_sweeps, r.avg_final_re, r.avg_kappa,
                r.mb ? r.mb->percent : std::numeric_limits<double>::quiet_NaN());
  }
  write_comparison_csv(rows, (dir / "comparison.csv").string());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Richards equation solver toolkit: adaptive L-scheme, GRW baseline, DRW"};
  app.require_subcommand(1);

  std::string config_path, problem = "celia_1d", out, in, data;
  std::string out_fwd = "forward.json", out_inv = "inverse.json", from_fwd, from_inv;
  std::string solver;
  std::uint64_t seed = 2024;
  bool seed_given = false;

  auto* gen = app.add_subcommand("generate-reference",
                                 "Coarse lscheme+GRW solves -> reference dataset CSV");
  gen->add_option("--problem", problem, "benchmark name")->required();
  gen->add_option("--out", out, "output directory")->required();
  gen->add_option("--seed", seed, "run seed");

  auto* aug = app.add_subcommand("augment", "Gaussian augmentation of a reference dataset");
  aug->add_option("--in", in, "reference CSV")->required();
  aug->add_option("--out", data, "augmented CSV path")->required();
  aug->add_option("--config", config_path, "run config JSON");
  aug->add_option("--seed", seed, "augmentation seed")->each([&](const std::string&) {
    seed_given = true;
  });

  auto* tr = app.add_subcommand("train", "Train the forward/inverse maps from a dataset");
  tr->add_option("--data", data, "training CSV")->required();
  tr->add_option("--out-forward", out_fwd, "forward checkpoint path");
  tr->add_option("--out-inverse", out_inv, "inverse checkpoint path");
  tr->add_option("--config", config_path, "run config JSON");
  tr->add_option("--from-forward", from_fwd, "pretrained forward checkpoint (retrain)");
  tr->add_option("--from-inverse", from_inv, "pretrained inverse checkpoint (retrain)");
  tr->add_option("--seed", seed, "training seed");
  int epochs_flag = 0;
  tr->add_option("--epochs", epochs_flag, "override epoch count");

  auto* sol = app.add_subcommand("solve", "Run one solver on a problem");
  sol->add_option("--problem", problem, "benchmark name");
  sol->add_option("--config", config_path, "run config JSON");
  sol->add_option("--solver", solver, "lscheme | grw | drw");
  sol->add_option("--forward", from_fwd, "forward checkpoint (drw)");
  sol->add_option("--inverse", from_inv, "inverse checkpoint (drw)");
  sol->add_option("--out", out, "output directory");
  sol->add_option("--seed", seed, "run seed");

  auto* ben = app.add_subcommand("benchmark", "Full chain for a named case study");
  ben->add_option("--name", problem, "benchmark name")->required();
  ben->add_option("--out", out, "output directory")->required();
  ben->add_option("--seed", seed, "run seed");

  auto* rep = app.add_subcommand("report", "Render tables from stored run reports");
  rep->add_option("--in", in, "artifact directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_generate_reference(problem, out, seed);
    if (aug->parsed()) {
      AugmentConfig cfg;
      if (!config_path.empty()) cfg = load_run_config(config_path).augment;
      if (seed_given) cfg.seed = seed;
      return cmd_augment(in, data, cfg);
    }
    if (tr->parsed()) {
      RunConfig rc = config_path.empty() ? RunConfig{} : load_run_config(config_path);
      rc.train.seed = seed;
      if (epochs_flag > 0) rc.train.epochs = epochs_flag;
      return cmd_train(data, out_fwd, out_inv, rc.arch, rc.train, from_fwd, from_inv);
    }
    if (sol->parsed()) {
      RunConfig rc = config_path.empty() ? default_run_config(problem) : load_run_config(config_path);
      if (sol->count("--problem")) rc.problem_ref = problem;
      if (!solver.empty()) rc.solver = solver;
      if (sol->count("--seed")) rc.seed = seed;
      if (!from_fwd.empty()) rc.forward_checkpoint = from_fwd;
      if (!from_inv.empty()) rc.inverse_checkpoint = from_inv;
      if (rc.solver != "lscheme" && rc.solver != "grw" && rc.solver != "drw")
        throw ConfigError("solver must be one of lscheme | grw | drw");
      return cmd_solve(rc, out);
    }
    if (ben->parsed()) return cmd_benchmark(problem, out, seed);
    if (rep->parsed()) return cmd_report(in);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
