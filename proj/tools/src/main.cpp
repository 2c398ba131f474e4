#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#ifdef TGF_CLI11_PACKAGE
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif

#include "config.hpp"
#include "pipeline.hpp"
#include "tgf/error.hpp"

namespace fs = std::filesystem;
using namespace tgf::cli;

namespace {

// exit codes: 0 pass, 1 verification failure, 2 config error, 3 construction error
constexpr int kFail = 1, kConfig = 2, kConstruction = 3;

fs::path output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("TGF_OUTPUT_DIR"); env && *env) return env;
  return "tgf_out";
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

int cmd_build(const std::string& config, const std::string& dir_flag) {
  const PipelineConfig cfg = load_config(config);
  const Built b = build(cfg);
  const fs::path dir = output_dir(dir_flag);
  fs::create_directories(dir);
  write_file(dir / "manifest.json", manifest_json(cfg, b).dump(2) + "\n");
  {
    std::ofstream out(dir / "samples.csv", std::ios::binary);
    write_samples_csv(b, out);
  }
  for (const auto& o : cfg.outputs) (void)export_format(b, cfg, o.format, dir);
  std::cout << dir.string() << "\n";
  return 0;
}

int cmd_verify(const std::string& config, double tol_scale) {
  const PipelineConfig cfg = load_config(config);
  const Built b = build(cfg);
  const auto checks = run_checks(b, cfg, tol_scale);
  const auto report = report_json(cfg, checks);
  std::cout << report.dump(2) << "\n";
  return report["pass"].get<bool>() ? 0 : kFail;
}

int cmd_classify(const std::string& config, const std::string& file) {
  const PipelineConfig cfg = load_config(config);
  const Built b = build(cfg);
  const fs::path path(file);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_classify_csv(b, cfg, out);
  return 0;
}

int cmd_export(const std::string& config, const std::string& format, const std::string& dir_flag) {
  const PipelineConfig cfg = load_config(config);
  const Built b = build(cfg);
  std::cout << export_format(b, cfg, format, output_dir(dir_flag)).string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Totally geodesic foliations: build, verify, classify and export hypersurface charts"};
  app.require_subcommand(1);

  std::string config, dir, file, format;
  double tol_scale = 1.0;

  auto* b = app.add_subcommand("build", "Sample a construction and write manifest.json and samples.csv");
  b->add_option("config", config, "Pipeline config (YAML)")->required();
  b->add_option("-o,--output", dir, "Output directory (default $TGF_OUTPUT_DIR or tgf_out)");

  auto* v = app.add_subcommand("verify", "Run the invariant suite and print a JSON report");
  v->add_option("config", config, "Pipeline config (YAML)")->required();
  v->add_option("--tol-scale", tol_scale, "Multiply every tolerance")->check(CLI::PositiveNumber);

  auto* c = app.add_subcommand("classify", "Per-sample trichotomy classes as CSV");
  c->add_option("config", config, "Pipeline config (YAML)")->required();
  c->add_option("-o,--output", file, "CSV file")->required();

  auto* e = app.add_subcommand("export", "Write an OBJ slice, the sample CSV or the JSON manifest");
  e->add_option("config", config, "Pipeline config (YAML)")->required();
  e->add_option("--format", format, "obj, csv or json")->required()->check(CLI::IsMember({"obj", "csv", "json"}));
  e->add_option("-o,--output", dir, "Output directory (default $TGF_OUTPUT_DIR or tgf_out)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : kConfig;
  }

  try {
    if (b->parsed()) return cmd_build(config, dir);
    if (v->parsed()) return cmd_verify(config, tol_scale);
    if (c->parsed()) return cmd_classify(config, file);
    return cmd_export(config, format, dir);
  } catch (const ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return kConfig;
  } catch (const tgf::Error& err) {
    std::cerr << "construction error: " << err.what() << "\n";
    return kConstruction;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kConstruction;
  }
}
