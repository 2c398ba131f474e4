#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "config.hpp"
#include "tgf/catalog.hpp"

namespace tgf::cli {

struct Built {
  Example ex;
  std::optional<TypeDPair> pair;  // Euclidean Gauss charts
};

/// Throws tgf::Error when the construction itself fails.
Built build(const PipelineConfig& cfg);

struct Check {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Family invariant suite; every tolerance is multiplied by tol_scale.
std::vector<Check> run_checks(const Built& b, const PipelineConfig& cfg, double tol_scale = 1.0);
nlohmann::ordered_json report_json(const PipelineConfig& cfg, const std::vector<Check>& checks);

/// Manifest with the normalized config, chart data and the OBJ slicing rule.
nlohmann::ordered_json manifest_json(const PipelineConfig& cfg, const Built& b);

/// Sample table: parameters, point, normal, sorted A eigenvalues, nullity.
/// Gauss charts list every grid point; singular ones have empty geometry.
void write_samples_csv(const Built& b, std::ostream& out);
/// One row per sample: parameters, class, nu, tg residual, surfacelike flags.
void write_classify_csv(const Built& b, const PipelineConfig& cfg, std::ostream& out);
/// Quad grid over chart variables 0 and 1, the others at the domain midpoint.
void write_obj(const Built& b, const PipelineConfig& cfg, const std::vector<int>& project, std::ostream& out);

/// The command behind `export`; writes DIR/<name>.<format>. Returns the path.
std::filesystem::path export_format(const Built& b, const PipelineConfig& cfg, const std::string& format,
                                    const std::filesystem::path& dir);

}  // namespace tgf::cli
