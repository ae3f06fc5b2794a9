#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "geosom/som.hpp"

namespace geosom {

// ---------------------------------------------------------------------------
// Super-clustering of trained neurons
// ---------------------------------------------------------------------------

struct SuperClustering {
  int k_clusters = 0;
  std::vector<int> neuron_labels;  // per neuron, in [0, k)
  Eigen::MatrixXd centroids;       // k x m, mean of member neuron weights
};

// Agglomerative Ward-linkage clustering of arbitrary points. Deterministic:
// equal-dissimilarity merges pick the lexicographically smallest cluster
// pair; final labels are numbered by each cluster's smallest member index.
std::vector<int> ward_labels(const Eigen::MatrixXd& points, int k);

// Ward clustering over the model's neuron weights.
SuperClustering supercluster(const SomModel& model, int k);

// Mean of each label's member rows; every label in [0,k) must be non-empty.
Eigen::MatrixXd centroids_of(const Eigen::MatrixXd& points,
                             const std::vector<int>& labels, int k);

// ---------------------------------------------------------------------------
// Validity indices
// ---------------------------------------------------------------------------

// Davies-Bouldin: (1/k) sum_i max_{j!=i} (d_i + d_j) / D_ij, with d the mean
// member-to-centroid distance and D the centroid distance. Coincident
// centroids make the index undefined and raise an error naming the pair.
double dbi(const Eigen::MatrixXd& points, const std::vector<int>& labels,
           const Eigen::MatrixXd& centroids);

struct SilhouetteResult {
  Eigen::VectorXd per_point;  // in [-1, 1]; 0 for singleton-cluster points
  double mean = 0.0;
};

SilhouetteResult silhouette(const Eigen::MatrixXd& points,
                            const std::vector<int>& labels);

// ---------------------------------------------------------------------------
// Model selection over a k range
// ---------------------------------------------------------------------------

struct ValidityRow {
  int k = 0;
  double silhouette = 0.0;
  double dbi = 0.0;
};

struct ValidityReport {
  std::vector<ValidityRow> rows;  // ascending k
  int chosen_k = 0;               // argmax silhouette, ties to lowest k
  int dbi_choice = 0;             // argmin DBI, for the agreement check
  bool dbi_agrees = true;
};

// The selection rule alone, applied to precomputed index rows.
ValidityReport choose_k(const std::vector<ValidityRow>& rows);

// Clusters the model's neurons for each k in [k_min, k_max] and applies
// choose_k. Appends a warning when the DBI minimum disagrees.
ValidityReport scan_k(const SomModel& model, int k_min, int k_max,
                      std::vector<std::string>* warnings = nullptr);

// ---------------------------------------------------------------------------
// Region assignment
// ---------------------------------------------------------------------------

struct ClusterAssignment {
  std::vector<std::string> region_ids;
  std::vector<int> bmu_index;
  std::vector<int> cluster_label;
  int k_clusters = 0;
};

// region -> BMU -> super-cluster label for every row of X.
ClusterAssignment assign_regions(const SomModel& model,
                                 const SuperClustering& clustering,
                                 const FeatureMatrix& X);

}  // namespace geosom
