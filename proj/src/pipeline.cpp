#include "geosom/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "geosom/csv.hpp"
#include "geosom/errors.hpp"
#include "geosom/geo.hpp"
#include "geosom/serialize.hpp"
#include "geosom/validity.hpp"

namespace geosom {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

void PipelineConfig::validate() const {
  if (census_path.empty() || recipe_path.empty() || output_dir.empty()) {
    throw ValidationError(
        "config needs census, recipe and output_dir paths");
  }
  if (components < 1) {
    throw ValidationError("components must be positive");
  }
  if (feature_count < 1) {
    throw ValidationError("feature_count must be positive");
  }
  if (!(hopkins_fraction > 0.0 && hopkins_fraction < 1.0)) {
    throw ValidationError("hopkins_fraction must lie in (0,1)");
  }
  if (k_min < 2 || k_min > k_max) {
    throw ValidationError("validity range requires 2 <= k_min <= k_max");
  }
  if (k_max > som.rows * som.cols) {
    throw ValidationError("k_max " + std::to_string(k_max) +
                          " exceeds the neuron count " +
                          std::to_string(som.rows * som.cols));
  }
  if (!(kernel_sigma >= 0.0)) {
    throw ValidationError("kernel sigma must be >= 0 (0 = median heuristic)");
  }
  // Iterations are resolved at train time; validate the rest now.
  SomConfig probe = som;
  probe.iterations = som.iterations > 0 ? som.iterations : 1;
  probe.validate();
}

namespace {

std::string resolve(const fs::path& base, const std::string& p) {
  if (p.empty()) return p;
  fs::path path(p);
  if (path.is_absolute()) return path.lexically_normal().string();
  return (base / path).lexically_normal().string();
}

void warn(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) {
    std::cerr << "warning: " << w << '\n';
  }
}

std::string out_path(const PipelineConfig& config, const char* name) {
  return (fs::path(config.output_dir) / name).string();
}

}  // namespace

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open " + path);
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError(path + ": invalid JSON: " + e.what());
  }
  if (j.value("format", "") != "geosom.config") {
    throw DataError(path + ": not a geosom.config document");
  }

  PipelineConfig config;
  const fs::path base = fs::absolute(fs::path(path)).parent_path();
  try {
    const auto& paths = j.at("paths");
    config.census_path = resolve(base, paths.value("census", ""));
    config.recipe_path = resolve(base, paths.value("recipe", ""));
    config.cases_path = resolve(base, paths.value("cases", ""));
    config.geometries_path = resolve(base, paths.value("geometries", ""));
    config.output_dir = resolve(base, paths.value("output_dir", ""));

    if (j.contains("ingest")) {
      const auto& ing = j["ingest"];
      config.id_column = ing.value("id_column", config.id_column);
      config.name_column = ing.value("name_column", config.name_column);
    }
    if (j.contains("geo")) {
      config.geometry_id_property =
          j["geo"].value("id_property", config.geometry_id_property);
    }
    if (j.contains("dimred")) {
      const auto& d = j["dimred"];
      const std::string kind =
          d.contains("kernel") ? d["kernel"].value("kind", "gaussian")
                               : "gaussian";
      if (kind == "gaussian") {
        config.kernel_kind = KernelKind::Gaussian;
      } else if (kind == "linear") {
        config.kernel_kind = KernelKind::Linear;
      } else {
        throw DataError(path + ": unknown kernel kind '" + kind + "'");
      }
      if (d.contains("kernel") && d["kernel"].contains("sigma") &&
          !d["kernel"]["sigma"].is_null()) {
        config.kernel_sigma = d["kernel"]["sigma"].get<double>();
      }
      config.components = d.value("components", config.components);
      config.feature_count = d.value("feature_count", config.feature_count);
      config.hopkins_fraction =
          d.value("hopkins_fraction", config.hopkins_fraction);
    }
    if (j.contains("som")) {
      const auto& s = j["som"];
      config.som.rows = s.value("rows", config.som.rows);
      config.som.cols = s.value("cols", config.som.cols);
      config.som.sigma0 = s.value("sigma0", config.som.sigma0);
      config.som.theta0 = s.value("theta0", config.som.theta0);
      if (s.contains("time_constant") && !s["time_constant"].is_null()) {
        config.som.time_constant = s["time_constant"].get<double>();
      }
      config.som.iterations = s.value("iterations", config.som.iterations);
    }
    if (j.contains("validity")) {
      config.k_min = j["validity"].value("k_min", config.k_min);
      config.k_max = j["validity"].value("k_max", config.k_max);
    }
    config.include_outcome_features =
        j.value("include_outcome_features", config.include_outcome_features);
    config.seed = j.value("seed", config.seed);
  } catch (const json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  config.som.seed = config.seed;
  return config;
}

// ---------------------------------------------------------------------------
// Phases
// ---------------------------------------------------------------------------

void phase_ingest(const PipelineConfig& config) {
  config.validate();
  fs::create_directories(config.output_dir);
  RawCensusTable raw =
      load_census(config.census_path, config.id_column, config.name_column);
  FeatureRecipe recipe = load_recipe(config.recipe_path);
  DeriveResult derived = derive_features(raw, recipe);
  derived.matrix.validate();

  StandardizeResult std_result = standardize(derived.matrix);
  if (!std_result.dropped.empty()) {
    std::string msg = "dropped constant feature(s):";
    for (const auto& name : std_result.dropped) msg += " " + name;
    warn({msg});
  }
  std_result.matrix.validate();

  save_matrix_csv(derived.matrix, out_path(config, artifact::kFeaturesRaw));
  save_matrix_csv(std_result.matrix, out_path(config, artifact::kFeaturesStd));
  save_population_csv(derived.matrix.row_ids, derived.population,
                      out_path(config, artifact::kPopulation));
  save_scaling_json(std_result.params, std_result.dropped,
                    out_path(config, artifact::kScaling));
}

void phase_reduce(const PipelineConfig& config) {
  config.validate();
  FeatureMatrix X = load_matrix_csv(out_path(config, artifact::kFeaturesStd));
  X.validate();

  KernelSpec spec;
  spec.kind = config.kernel_kind;
  spec.sigma = config.kernel_sigma;
  if (spec.kind == KernelKind::Gaussian && spec.sigma <= 0.0) {
    spec.sigma = median_pairwise_distance(X.values);
  }

  KernelModel model = fit_kpca(X, spec, config.components);
  Eigen::MatrixXd scores = project(model, X);
  Eigen::VectorXd fractions = explained_variance_fractions(model);

  const double h_before = hopkins(X, config.hopkins_fraction, config.seed);
  std::vector<std::string> score_names;
  for (int c = 0; c < config.components; ++c) {
    score_names.push_back("component_" + std::to_string(c + 1));
  }
  FeatureMatrix score_matrix =
      make_matrix(X.row_ids, score_names, scores, MatrixKind::RawPercent);
  const double h_after =
      hopkins(score_matrix, config.hopkins_fraction, config.seed);

  Eigen::VectorXd weights = leverage_weights(scores);
  Eigen::VectorXd wv = feature_weighted_variance(X, weights);
  RelevanceResult relevance = relevance_r2(X);
  const int count =
      std::min(config.feature_count, static_cast<int>(X.feature_names.size()));
  if (count < config.feature_count) {
    warn({"feature_count " + std::to_string(config.feature_count) +
          " exceeds available features; selecting all " +
          std::to_string(count)});
  }
  FeatureScoreReport report =
      select_features(X.feature_names, wv, relevance, fractions, count);

  save_kernel_model(model, out_path(config, artifact::kKernelModel));
  save_matrix_csv(score_matrix, out_path(config, artifact::kScores));
  save_feature_scores_csv(report, out_path(config, artifact::kFeatureScores));

  ordered_json j;
  j["format"] = "geosom.dimred_report";
  j["version"] = "1.0";
  j["kernel"] = {{"kind", spec.kind == KernelKind::Gaussian ? "gaussian"
                                                            : "linear"},
                 {"sigma", spec.sigma}};
  j["components"] = config.components;
  ordered_json fr = ordered_json::array();
  for (Eigen::Index i = 0; i < fractions.size(); ++i) fr.push_back(fractions(i));
  j["explained_variance_fractions"] = fr;
  j["hopkins"] = {{"fraction", config.hopkins_fraction},
                  {"before", h_before},
                  {"after", h_after}};
  j["selected_features"] = report.selected_names();
  std::ofstream out(out_path(config, artifact::kDimredReport),
                    std::ios::binary);
  if (!out) {
    throw DataError("cannot write " +
                    out_path(config, artifact::kDimredReport));
  }
  out << j.dump(2) << '\n';
}

void phase_train(const PipelineConfig& config) {
  config.validate();
  FeatureMatrix raw = load_matrix_csv(out_path(config, artifact::kFeaturesRaw));
  FeatureScoreReport scores =
      load_feature_scores_csv(out_path(config, artifact::kFeatureScores));

  const std::vector<std::string> selected = scores.selected_names();
  if (selected.empty()) {
    throw ValidationError("no features are marked selected");
  }
  std::vector<std::string> names;
  Eigen::MatrixXd values(raw.values.rows(),
                         static_cast<Eigen::Index>(selected.size()) +
                             (config.include_outcome_features ? 2 : 0));
  Eigen::Index col = 0;
  for (const auto& name : selected) {
    const int idx = raw.column(name);
    if (idx < 0) {
      throw ValidationError("selected feature '" + name +
                            "' is missing from the raw feature matrix");
    }
    values.col(col++) = raw.values.col(idx);
    names.push_back(name);
  }

  if (config.include_outcome_features) {
    // The two additional variables: raw population and outcome counts.
    for (const char* reserved : {"Population", "Cases"}) {
      if (raw.column(reserved) >= 0) {
        throw ValidationError(std::string("feature name '") + reserved +
                              "' collides with the appended outcome column");
      }
    }
    std::map<std::string, long long> population =
        load_population_csv(out_path(config, artifact::kPopulation));
    if (config.cases_path.empty()) {
      throw ValidationError(
          "include_outcome_features needs a cases path in the config");
    }
    std::vector<CaseRecord> cases = load_cases(config.cases_path);
    std::map<std::string, long long> cases_by_region;
    for (const auto& rec : cases) cases_by_region[rec.region_id] = rec.cases;

    Eigen::VectorXd pop_col(raw.values.rows()), case_col(raw.values.rows());
    for (Eigen::Index i = 0; i < raw.values.rows(); ++i) {
      const std::string& id = raw.row_ids[static_cast<std::size_t>(i)];
      const auto pit = population.find(id);
      if (pit == population.end()) {
        throw DataError("no population record for region '" + id + "'");
      }
      const auto cit = cases_by_region.find(id);
      if (cit == cases_by_region.end()) {
        throw DataError("no case record for region '" + id + "'");
      }
      pop_col(i) = static_cast<double>(pit->second);
      case_col(i) = static_cast<double>(cit->second);
    }
    values.col(col++) = pop_col;
    names.push_back("Population");
    values.col(col++) = case_col;
    names.push_back("Cases");
  }

  FeatureMatrix assembled = make_matrix(raw.row_ids, std::move(names),
                                        std::move(values),
                                        MatrixKind::RawPercent);
  StandardizeResult std_result = standardize(assembled);
  if (!std_result.dropped.empty()) {
    std::string msg = "dropped constant feature(s) before training:";
    for (const auto& name : std_result.dropped) msg += " " + name;
    warn({msg});
  }
  std_result.matrix.validate();

  SomConfig som_config = config.som;
  som_config.seed = config.seed;
  if (som_config.iterations == 0) {
    som_config.iterations = 20 * std_result.matrix.values.rows();
  }

  std::vector<std::string> warnings;
  SomModel model = train(std_result.matrix, som_config, &warnings);
  warn(warnings);

  save_matrix_csv(std_result.matrix, out_path(config, artifact::kSomInput));
  save_som_model(model, out_path(config, artifact::kSomModel));
}

void phase_validate(const PipelineConfig& config) {
  config.validate();
  SomModel model = load_som_model(out_path(config, artifact::kSomModel));
  FeatureMatrix X = load_matrix_csv(out_path(config, artifact::kSomInput));

  std::vector<std::string> warnings;
  ValidityReport report = scan_k(model, config.k_min, config.k_max, &warnings);
  warn(warnings);

  SuperClustering clustering = supercluster(model, report.chosen_k);
  ClusterAssignment assignment = assign_regions(model, clustering, X);

  save_validity_csv(report, out_path(config, artifact::kValidity));
  save_neuron_labels_csv(clustering, out_path(config, artifact::kNeuronLabels));
  save_assignment_csv(assignment, out_path(config, artifact::kAssignment));
}

void phase_report(const PipelineConfig& config, std::ostream* table) {
  config.validate();
  if (config.cases_path.empty()) {
    throw ValidationError("report needs a cases path in the config");
  }
  ClusterAssignment assignment =
      load_assignment_csv(out_path(config, artifact::kAssignment));
  std::vector<CaseRecord> cases = load_cases(config.cases_path);
  std::vector<ClusterSummary> summaries = aggregate_cases(assignment, cases);
  save_summaries_csv(summaries, out_path(config, artifact::kSummary));

  if (table) {
    char line[128];
    *table << "cluster  cases  population  cases/population\n";
    for (const auto& s : summaries) {
      std::snprintf(line, sizeof(line), "%7d  %5lld  %10lld  %16.4f\n",
                    s.cluster_id + 1, s.total_cases, s.total_population,
                    s.rate);
      *table << line;
    }
  }
}

void phase_render(const PipelineConfig& config) {
  config.validate();
  if (config.geometries_path.empty()) {
    throw ValidationError("render needs a geometries path in the config");
  }
  ClusterAssignment assignment =
      load_assignment_csv(out_path(config, artifact::kAssignment));
  std::vector<ClusterSummary> summaries =
      load_summaries_csv(out_path(config, artifact::kSummary));
  std::vector<RegionGeometry> geometries =
      load_geometries(config.geometries_path, config.geometry_id_property);

  RenderResult result = render_choropleth(
      assignment, geometries, summaries, out_path(config, artifact::kGeoJson),
      out_path(config, artifact::kSvg));
  if (!result.missing_geometry.empty()) {
    std::string msg = "assigned region(s) without geometry:";
    for (const auto& id : result.missing_geometry) msg += " " + id;
    warn({msg});
  }
  if (!result.unassigned.empty()) {
    std::string msg = "geometry region(s) without assignment:";
    for (const auto& id : result.unassigned) msg += " " + id;
    warn({msg});
  }
}

// ---------------------------------------------------------------------------
// Orchestration
// ---------------------------------------------------------------------------

namespace {

json config_snapshot(const PipelineConfig& c) {
  ordered_json j;
  j["paths"] = {{"census", c.census_path},
                {"recipe", c.recipe_path},
                {"cases", c.cases_path},
                {"geometries", c.geometries_path},
                {"output_dir", c.output_dir}};
  j["ingest"] = {{"id_column", c.id_column}, {"name_column", c.name_column}};
  j["geo"] = {{"id_property", c.geometry_id_property}};
  j["dimred"] = {
      {"kernel",
       {{"kind",
         c.kernel_kind == KernelKind::Gaussian ? "gaussian" : "linear"},
        {"sigma", c.kernel_sigma}}},
      {"components", c.components},
      {"feature_count", c.feature_count},
      {"hopkins_fraction", c.hopkins_fraction}};
  j["som"] = {{"rows", c.som.rows},
              {"cols", c.som.cols},
              {"sigma0", c.som.sigma0},
              {"theta0", c.som.theta0},
              {"time_constant", c.som.time_constant},
              {"iterations", c.som.iterations}};
  j["validity"] = {{"k_min", c.k_min}, {"k_max", c.k_max}};
  j["include_outcome_features"] = c.include_outcome_features;
  j["seed"] = c.seed;
  return j;
}

}  // namespace

RunManifest run_pipeline(const PipelineConfig& config) {
  config.validate();
  fs::create_directories(config.output_dir);

  using clock = std::chrono::steady_clock;
  RunManifest manifest;
  manifest.tool_version = kToolVersion;

  const std::pair<const char*, void (*)(const PipelineConfig&)> phases[] = {
      {"ingest", phase_ingest},
      {"reduce", phase_reduce},
      {"train", phase_train},
      {"validate", phase_validate},
      {"report", nullptr},  // handled below (extra argument)
      {"render", phase_render},
  };

  for (const auto& [name, fn] : phases) {
    const auto start = clock::now();
    try {
      if (fn) {
        fn(config);
      } else {
        phase_report(config, nullptr);
      }
    } catch (const std::exception& e) {
      ordered_json failed;
      failed["phase"] = name;
      failed["error"] = e.what();
      std::ofstream out(
          (fs::path(config.output_dir) / "manifest.failed").string(),
          std::ios::binary);
      if (out) out << failed.dump(2) << '\n';
      throw;
    }
    manifest.phase_ms[name] =
        std::chrono::duration<double, std::milli>(clock::now() - start)
            .count();
  }

  const char* files[] = {
      artifact::kFeaturesRaw,  artifact::kFeaturesStd, artifact::kPopulation,
      artifact::kScaling,      artifact::kKernelModel, artifact::kScores,
      artifact::kFeatureScores, artifact::kDimredReport, artifact::kSomInput,
      artifact::kSomModel,     artifact::kValidity,    artifact::kNeuronLabels,
      artifact::kAssignment,   artifact::kSummary,     artifact::kGeoJson,
      artifact::kSvg,
  };
  for (const char* f : files) {
    manifest.artifact_sha256[f] = sha256_file(out_path(config, f));
  }

  ordered_json j;
  j["format"] = "geosom.manifest";
  j["version"] = "1.0";
  j["tool_version"] = manifest.tool_version;
  j["config"] = config_snapshot(config);
  ordered_json arts;
  for (const auto& [name, hash] : manifest.artifact_sha256) {
    arts[name] = {{"sha256", hash}};
  }
  j["artifacts"] = arts;
  ordered_json times;
  for (const auto& [name, ms] : manifest.phase_ms) times[name] = ms;
  j["phase_ms"] = times;
  std::ofstream out(out_path(config, artifact::kManifest), std::ios::binary);
  if (!out) {
    throw DataError("cannot write " + out_path(config, artifact::kManifest));
  }
  out << j.dump(2) << '\n';

  // A fresh successful run clears any stale failure marker.
  std::error_code ec;
  fs::remove(fs::path(config.output_dir) / "manifest.failed", ec);
  return manifest;
}

}  // namespace geosom
