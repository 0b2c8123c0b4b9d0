#pragma once

#include <string>
#include <vector>

#include "drw/common.hpp"
#include "drw/mlp.hpp"

namespace drw {

/// One aligned (head, particle-count) reference pair.
struct ReferenceRow {
  int cell_id;
  int time_index;
  double psi;
  double n;
  bool converged;
};

/// Reference-solution dataset as produced by generate_reference_solutions and
/// consumed by training; persisted as CSV with a self-describing header.
struct Dataset {
  std::vector<ReferenceRow> rows;
  UnitSystem units = UnitSystem::CmSeconds;
  double particle_scale = 1e10;
  std::uint64_t seed = 0;
  std::string config_digest;

  /// Training columns; non-converged rows are excluded unless asked for.
  std::vector<double> heads(bool include_nonconverged = false) const;
  std::vector<double> counts(bool include_nonconverged = false) const;
};

void write_dataset_csv(const Dataset& ds, const std::string& path);
Dataset read_dataset_csv(const std::string& path);

/// Gaussian augmentation per AugmentConfig. Original rows are retained and
/// come first; each pass draws a fresh Z per row.
Dataset augment(const Dataset& ds, const AugmentConfig& cfg);

}  // namespace drw
