#include "drw/dataset.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace drw {

std::vector<double> Dataset::heads(bool include_nonconverged) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows)
    if (r.converged || include_nonconverged) out.push_back(r.psi);
  return out;
}

std::vector<double> Dataset::counts(bool include_nonconverged) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows)
    if (r.converged || include_nonconverged) out.push_back(r.n);
  return out;
}

void write_dataset_csv(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write dataset: " + path);
  char buf[512];
  out << "# schema: drw-reference-1\n";
  out << "# config: " << ds.config_digest << "\n";
  out << "# seed: " << ds.seed << "\n";
  std::snprintf(buf, sizeof(buf), "# particle_scale: %.17g\n", ds.particle_scale);
  out << buf;
  out << "cell_id,time_index,psi,n_particles,converged_flag,unit_system\n";
  const std::string unit = to_string(ds.units);
  for (const auto& r : ds.rows) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%.17g,%d,%s\n", r.cell_id, r.time_index, r.psi,
                  r.n, r.converged ? 1 : 0, unit.c_str());
    out << buf;
  }
  if (!out) throw IoError("short write on dataset: " + path);
}

Dataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read dataset: " + path);
  Dataset ds;
  std::string line;
  bool saw_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream is(line.substr(1));
      std::string key;
      is >> key;
      if (key == "config:") is >> ds.config_digest;
      if (key == "seed:") is >> ds.seed;
      if (key == "particle_scale:") is >> ds.particle_scale;
      continue;
    }
    if (!saw_header) {  // column header
      saw_header = true;
      continue;
    }
    ReferenceRow r;
    char unit[32] = {0};
    int conv = 0;
    if (std::sscanf(line.c_str(), "%d,%d,%lf,%lf,%d,%31s", &r.cell_id, &r.time_index, &r.psi, &r.n,
                    &conv, unit) != 6) {
      throw IoError("malformed dataset row in " + path + ": " + line);
    }
    r.converged = conv != 0;
    ds.units = unit_system_from_string(unit);
    ds.rows.push_back(r);
  }
  return ds;
}

Dataset augment(const Dataset& ds, const AugmentConfig& cfg) {
  cfg.validate();
  Dataset out = ds;
  out.seed = cfg.seed;
  Rng rng(cfg.seed);
  const double scale = ds.particle_scale;

  auto add_pass = [&](double sigma, std::size_t limit) {
    std::size_t added = 0;
    for (const auto& r : ds.rows) {
      if (added >= limit) break;
      const double z = sigma * rng.normal();
      ReferenceRow nr = r;
      nr.psi = r.psi + z;
      nr.n = r.n + scale * z;
      out.rows.push_back(nr);
      ++added;
    }
  };

  for (std::size_t si = 0; si < cfg.sigmas.size(); ++si) {
    for (int c = 0; c < cfg.copies_per_sigma[si]; ++c) add_pass(cfg.sigmas[si], ds.rows.size());
  }
  if (cfg.target_rows >= 0) {
    std::size_t si = 0;
    while (out.rows.size() < static_cast<std::size_t>(cfg.target_rows)) {
      add_pass(cfg.sigmas[si % cfg.sigmas.size()],
               static_cast<std::size_t>(cfg.target_rows) - out.rows.size());
      ++si;
    }
    if (out.rows.size() > static_cast<std::size_t>(cfg.target_rows)) {
      throw ConfigError("augment target_rows smaller than configured copies produce");
    }
  }
  return out;
}

}  // namespace drw
