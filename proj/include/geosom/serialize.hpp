#pragma once

#include <map>
#include <string>
#include <vector>

#include "geosom/dimred.hpp"
#include "geosom/geo.hpp"
#include "geosom/ingest.hpp"
#include "geosom/som.hpp"
#include "geosom/validity.hpp"

namespace geosom {

// Artifact persistence. Every file carries a format id and version:
// JSON documents as "format"/"version" members, CSV files as a first line
// `#geosom.<kind>,1.0[,extra]`. Loaders reject unknown format ids and any
// major version other than 1. All floating-point values are written in
// shortest round-trip decimal form, so identical inputs produce identical
// bytes.

inline constexpr const char* kToolVersion = "0.1.0";

std::string sha256_file(const std::string& path);  // lowercase hex

// --- models ---------------------------------------------------------------

void save_kernel_model(const KernelModel& model, const std::string& path);
KernelModel load_kernel_model(const std::string& path);

void save_som_model(const SomModel& model, const std::string& path);
SomModel load_som_model(const std::string& path);

// --- matrices and vectors -------------------------------------------------

void save_matrix_csv(const FeatureMatrix& X, const std::string& path);
FeatureMatrix load_matrix_csv(const std::string& path);

void save_population_csv(const std::vector<std::string>& ids,
                         const std::vector<long long>& population,
                         const std::string& path);
std::map<std::string, long long> load_population_csv(const std::string& path);

void save_scaling_json(const ScalingParams& params,
                       const std::vector<std::string>& dropped,
                       const std::string& path);

// --- reports --------------------------------------------------------------

void save_feature_scores_csv(const FeatureScoreReport& report,
                             const std::string& path);
// Note: component fractions live in the dimred report, not in this CSV;
// the loaded report carries an empty fractions vector.
FeatureScoreReport load_feature_scores_csv(const std::string& path);

// Rows (k, silhouette, dbi) plus a chosen_k footer line.
void save_validity_csv(const ValidityReport& report, const std::string& path);

void save_neuron_labels_csv(const SuperClustering& clustering,
                            const std::string& path);

void save_assignment_csv(const ClusterAssignment& assignment,
                         const std::string& path);
ClusterAssignment load_assignment_csv(const std::string& path);

void save_summaries_csv(const std::vector<ClusterSummary>& summaries,
                        const std::string& path);
std::vector<ClusterSummary> load_summaries_csv(const std::string& path);

}  // namespace geosom
