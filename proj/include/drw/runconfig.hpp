#pragma once

#include <string>

#include "drw/pipeline.hpp"

namespace drw {

/// One run = one problem + one solver + the relevant config blocks, loaded
/// from a JSON file with CLI flags overriding file keys one-to-one.
struct RunConfig {
  std::string problem_ref = "celia_1d";  // benchmark name; "" when inline spec given
  std::string solver = "lscheme";        // lscheme | grw | drw
  std::string output_dir = ".";
  std::uint64_t seed = 2024;

  LschemeConfig lscheme;
  GrwConfig grw;
  double drw_re_tol = 1e-6;
  bool drw_decode_per_iterate = true;
  std::string forward_checkpoint;
  std::string inverse_checkpoint;

  MlpSpec arch;
  TrainConfig train;
  AugmentConfig augment;

  // Optional problem overrides (0 / empty = keep benchmark default).
  std::vector<int> override_cells;
  double override_dt = 0.0;
  double override_total_time = 0.0;

  bool export_solution = true;
  bool export_trace = true;
  bool export_face_flux = true;
  bool export_grid = false;

  std::string raw_json;  // canonical serialized form for the digest

  std::string digest() const { return hex64(fnv1a(raw_json + std::to_string(seed))); }

  Problem make_problem() const;
};

/// Parses the JSON run configuration; unknown solver/problem names and
/// missing required keys produce ConfigError with the offending keys listed.
RunConfig load_run_config(const std::string& path);

/// A RunConfig carrying only defaults for the given benchmark name.
RunConfig default_run_config(const std::string& benchmark);

}  // namespace drw
