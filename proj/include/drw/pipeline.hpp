#pragma once

#include "drw/benchmarks.hpp"
#include "drw/dataset.hpp"
#include "drw/diagnostics.hpp"
#include "drw/drw.hpp"

namespace drw {

/// Everything a benchmark chain needs: the coarse reference-generation
/// problem, the deployment problem, solver settings, the augmentation
/// schedule and the network/training configuration.
struct PipelineConfig {
  Problem coarse;
  Problem deploy;
  LschemeConfig ref_head;     // adaptive head solve for reference psi
  GrwConfig ref_particle;     // static-L particle solve for reference n
  bool include_initial_level = true;
  AugmentConfig augment;
  MlpSpec arch;
  TrainConfig train;
  LschemeConfig lscheme_deploy;
  GrwConfig grw_deploy;
  DrwConfig drw_deploy;  // forward/inverse filled in after training
  std::uint64_t seed = 0;
};

/// Paper-faithful defaults per named benchmark (reduced to desk scale where
/// the README says so).
PipelineConfig pipeline_defaults(const std::string& benchmark);

struct TrainedMaps {
  Mlp forward;   // n -> psi
  Mlp inverse;   // psi -> n
  TrainResult forward_result;
  TrainResult inverse_result;
};

/// Trains the two maps on a reference dataset (forward on (n, psi), inverse
/// on (psi, n)); stamps the particle scale into both checkpoints.
TrainedMaps train_maps(const Dataset& ds, const MlpSpec& arch, const TrainConfig& cfg);

/// Installs trained maps into a DRW config.
void install_maps(DrwConfig& cfg, const TrainedMaps& maps);

/// Installs the exact linear maps (the GRW proportionality assumption).
void install_linear_maps(DrwConfig& cfg);

/// Artifact writers. Every artifact starts with a header block carrying the
/// schema version, config digest and seed.
void write_solution_csv(const SolveResult& result, const Problem& p, const std::string& path,
                        const std::string& digest, std::uint64_t seed);
void write_trace_csv(const SolveResult& result, const std::string& path,
                     const std::string& digest, std::uint64_t seed);
void write_face_flux_csv(const SolveResult& result, const Problem& p, const std::string& path,
                         const std::string& digest, std::uint64_t seed);
void write_grid_csv(const Grid& grid, const std::string& path);

/// Comparison table mirroring the iteration/conditioning/mass-balance
/// summaries: one row per solver label.
void write_comparison_csv(const std::vector<RunReport>& rows, const std::string& path);

}  // namespace drw
