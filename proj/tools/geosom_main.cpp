#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "geosom/errors.hpp"
#include "geosom/pipeline.hpp"
#include "geosom/serialize.hpp"

namespace {

struct Overrides {
  std::string output_dir;
  std::string id_column, name_column;
  int components = -1, feature_count = -1;
  double sigma = -1.0;
  int rows = -1, cols = -1;
  double sigma0 = -1.0, theta0 = -1.0;
  long long iterations = -1;
  int k_min = -1, k_max = -1;
  long long seed = -1;
  int outcome = -1;  // tri-state: unset / off / on
};

void add_common(CLI::App* cmd, std::string& config_path, Overrides& ov) {
  cmd->add_option("--config", config_path, "pipeline config JSON")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", ov.output_dir, "override the output directory");
  cmd->add_option("--seed", ov.seed, "override the pipeline seed");
  cmd->add_option("--id-column", ov.id_column, "census id column");
  cmd->add_option("--name-column", ov.name_column, "census name column");
  cmd->add_option("--components", ov.components, "kernel PCA components");
  cmd->add_option("--feature-count", ov.feature_count,
                  "number of features to select");
  cmd->add_option("--sigma", ov.sigma,
                  "Gaussian kernel bandwidth (0 = median heuristic)");
  cmd->add_option("--rows", ov.rows, "SOM lattice rows");
  cmd->add_option("--cols", ov.cols, "SOM lattice columns");
  cmd->add_option("--sigma0", ov.sigma0, "initial neighborhood radius");
  cmd->add_option("--theta0", ov.theta0, "initial learning rate");
  cmd->add_option("--iterations", ov.iterations,
                  "total sample presentations");
  cmd->add_option("--k-min", ov.k_min, "smallest candidate cluster count");
  cmd->add_option("--k-max", ov.k_max, "largest candidate cluster count");
  cmd->add_flag("--outcome-features,!--no-outcome-features",
                [&ov](std::int64_t count) { ov.outcome = count > 0 ? 1 : 0; },
                "append population and case counts before training");
}

geosom::PipelineConfig resolve(const std::string& config_path,
                               const Overrides& ov) {
  geosom::PipelineConfig config = geosom::load_config(config_path);
  if (!ov.output_dir.empty()) config.output_dir = ov.output_dir;
  if (!ov.id_column.empty()) config.id_column = ov.id_column;
  if (!ov.name_column.empty()) config.name_column = ov.name_column;
  if (ov.components >= 0) config.components = ov.components;
  if (ov.feature_count >= 0) config.feature_count = ov.feature_count;
  if (ov.sigma >= 0.0) config.kernel_sigma = ov.sigma;
  if (ov.rows >= 0) config.som.rows = ov.rows;
  if (ov.cols >= 0) config.som.cols = ov.cols;
  if (ov.sigma0 >= 0.0) config.som.sigma0 = ov.sigma0;
  if (ov.theta0 >= 0.0) config.som.theta0 = ov.theta0;
  if (ov.iterations >= 0) config.som.iterations = ov.iterations;
  if (ov.k_min >= 0) config.k_min = ov.k_min;
  if (ov.k_max >= 0) config.k_max = ov.k_max;
  if (ov.seed >= 0) config.seed = static_cast<std::uint64_t>(ov.seed);
  if (ov.outcome >= 0) config.include_outcome_features = ov.outcome == 1;
  config.som.seed = config.seed;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geodemographic SOM clustering pipeline"};
  app.set_version_flag("--version", geosom::kToolVersion);
  app.require_subcommand(1);

  std::string config_path;
  Overrides ov;
  CLI::App* run = app.add_subcommand("run", "execute every phase");
  CLI::App* ingest =
      app.add_subcommand("ingest", "derive and standardize features");
  CLI::App* reduce =
      app.add_subcommand("reduce", "kernel PCA and feature selection");
  CLI::App* train = app.add_subcommand("train", "train the SOM");
  CLI::App* validate =
      app.add_subcommand("validate", "scan cluster counts and assign regions");
  CLI::App* report =
      app.add_subcommand("report", "aggregate cases per cluster");
  CLI::App* render =
      app.add_subcommand("render", "emit the GeoJSON and SVG choropleth");
  for (CLI::App* cmd :
       {run, ingest, reduce, train, validate, report, render}) {
    add_common(cmd, config_path, ov);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // bad arguments are validation errors
  }

  try {
    const geosom::PipelineConfig config = resolve(config_path, ov);
    if (run->parsed()) {
      geosom::run_pipeline(config);
      std::cout << "pipeline complete; artifacts in " << config.output_dir
                << '\n';
    } else if (ingest->parsed()) {
      geosom::phase_ingest(config);
    } else if (reduce->parsed()) {
      geosom::phase_reduce(config);
    } else if (train->parsed()) {
      geosom::phase_train(config);
    } else if (validate->parsed()) {
      geosom::phase_validate(config);
    } else if (report->parsed()) {
      geosom::phase_report(config, &std::cout);
    } else if (render->parsed()) {
      geosom::phase_render(config);
    }
  } catch (const geosom::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const geosom::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 3;
  } catch (const geosom::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
