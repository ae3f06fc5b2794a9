#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>

#include "geosom/dimred.hpp"
#include "geosom/som.hpp"

namespace geosom {

// Resolved pipeline configuration. Loaded from a geosom.config JSON
// document; CLI flags override individual fields afterwards. All paths are
// absolute after loading (relative entries resolve against the config
// file's directory).
struct PipelineConfig {
  // inputs and output directory
  std::string census_path;
  std::string recipe_path;
  std::string cases_path;
  std::string geometries_path;
  std::string output_dir;
  std::string id_column = "GEOGID";
  std::string name_column = "GEOGDESC";
  std::string geometry_id_property = "region_id";

  // dimensionality reduction
  KernelKind kernel_kind = KernelKind::Gaussian;
  double kernel_sigma = 0.0;  // 0 = median-distance heuristic
  int components = 4;
  int feature_count = 21;
  double hopkins_fraction = 0.2;

  // SOM; som.seed is overwritten by the global seed, and
  // som.iterations == 0 means "20 epochs" (20 * n presentations).
  SomConfig som;

  // validity scan
  int k_min = 3;
  int k_max = 9;

  bool include_outcome_features = true;
  std::uint64_t seed = 0;

  void validate() const;
};

PipelineConfig load_config(const std::string& path);

// Canonical artifact file names inside output_dir.
namespace artifact {
inline constexpr const char* kFeaturesRaw = "features_raw.csv";
inline constexpr const char* kFeaturesStd = "features_std.csv";
inline constexpr const char* kPopulation = "population.csv";
inline constexpr const char* kScaling = "scaling.json";
inline constexpr const char* kKernelModel = "kernel_model.json";
inline constexpr const char* kScores = "kpca_scores.csv";
inline constexpr const char* kFeatureScores = "feature_scores.csv";
inline constexpr const char* kDimredReport = "dimred_report.json";
inline constexpr const char* kSomInput = "som_input.csv";
inline constexpr const char* kSomModel = "som_model.json";
inline constexpr const char* kValidity = "validity.csv";
inline constexpr const char* kNeuronLabels = "neuron_labels.csv";
inline constexpr const char* kAssignment = "assignment.csv";
inline constexpr const char* kSummary = "cluster_summary.csv";
inline constexpr const char* kGeoJson = "clusters.geojson";
inline constexpr const char* kSvg = "clusters.svg";
inline constexpr const char* kManifest = "manifest.json";
}  // namespace artifact

// Each phase reads its upstream artifacts from output_dir and persists its
// own, so the standalone subcommands and run_pipeline share one code path.
// Warnings go to stderr.
void phase_ingest(const PipelineConfig& config);
void phase_reduce(const PipelineConfig& config);
void phase_train(const PipelineConfig& config);
void phase_validate(const PipelineConfig& config);
// Writes the cluster summary; when `table` is non-null also prints the
// 4-decimal table (the paper-style report) to it.
void phase_report(const PipelineConfig& config, std::ostream* table = nullptr);
void phase_render(const PipelineConfig& config);

struct RunManifest {
  std::string tool_version;
  std::map<std::string, std::string> artifact_sha256;  // file name -> hash
  std::map<std::string, double> phase_ms;
};

// All phases in order, then manifest.json. A phase failure writes a
// `manifest.failed` marker naming the phase before the error propagates;
// artifacts already written stay on disk.
RunManifest run_pipeline(const PipelineConfig& config);

}  // namespace geosom
