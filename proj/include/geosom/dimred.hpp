#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "geosom/ingest.hpp"

namespace geosom {

// ---------------------------------------------------------------------------
// Kernels
// ---------------------------------------------------------------------------

enum class KernelKind { Gaussian, Linear };

struct KernelSpec {
  KernelKind kind = KernelKind::Gaussian;
  double sigma = 1.0;  // Gaussian bandwidth; ignored for linear

  void validate() const;  // sigma > 0 when gaussian
};

double kernel_value(const Eigen::VectorXd& xi, const Eigen::VectorXd& xj,
                    const KernelSpec& spec);

// Median pairwise Euclidean distance of the rows — the default Gaussian
// bandwidth when the config leaves sigma unset.
double median_pairwise_distance(const Eigen::MatrixXd& X);

struct CenteredKernel {
  Eigen::MatrixXd k;          // H K H, symmetric, rows sum to ~0
  Eigen::VectorXd row_means;  // row means of the raw K
  double grand_mean = 0.0;    // grand mean of the raw K
};

CenteredKernel build_centered_kernel(const FeatureMatrix& X,
                                     const KernelSpec& spec);

// ---------------------------------------------------------------------------
// Kernel PCA
// ---------------------------------------------------------------------------

struct KernelModel {
  KernelSpec spec;
  FeatureMatrix training;      // retained fitted rows (standardized)
  Eigen::VectorXd row_means;   // centering statistics of the raw K
  double grand_mean = 0.0;
  Eigen::VectorXd eigenvalues;   // full spectrum, covariance scale (theta/n),
                                 // descending, clamped at 0
  Eigen::MatrixXd coefficients;  // k x n; row c is a_c with a_c' K_c a_c = 1
  int components = 0;
};

// Solves the centered-kernel eigenproblem and retains the top-k expansion
// coefficients. Eigenvalues are divided by n so they equal the feature-space
// covariance eigenvalues.
KernelModel fit_kpca(const FeatureMatrix& X, const KernelSpec& spec, int k);

// Out-of-sample projection; score(i,c) = sum_j a_cj * K_centered(x_i, x_j)
// with test-point centering from the stored statistics.
Eigen::MatrixXd project(const KernelModel& model, const FeatureMatrix& X_new);

// lambda_c / sum(lambda) over the full computed spectrum, for the retained
// components.
Eigen::VectorXd explained_variance_fractions(const KernelModel& model);

// ---------------------------------------------------------------------------
// Feature relevance and selection
// ---------------------------------------------------------------------------

// Weighted variance per feature: sum w_i^2 (x_i - xbar)^2 / sum w_i^2 with
// the weighted mean xbar = sum w_i^2 x_i / sum w_i^2.
Eigen::VectorXd feature_weighted_variance(const FeatureMatrix& X,
                                          const Eigen::VectorXd& weights);

// Per-row leverage weights: norm of each row's component scores, normalized
// to mean 1. The concrete reading of the paper-level weights; see README.
Eigen::VectorXd leverage_weights(const Eigen::MatrixXd& scores);

struct RelevanceResult {
  Eigen::VectorXd r2;                 // clamped to [0,1]
  std::vector<bool> ridge_fallback;   // true where OLS was singular
};

// For each feature, ordinary least squares of that column on all others
// (with intercept); returns R^2. Singular designs fall back to ridge with
// penalty 1e-8 and are flagged.
RelevanceResult relevance_r2(const FeatureMatrix& X);

double hopkins(const FeatureMatrix& X, double sample_fraction,
               std::uint64_t seed);

struct FeatureScore {
  std::string name;
  double weighted_variance = 0.0;
  double r2_relevance = 0.0;
  bool ridge_fallback = false;
  double score = 0.0;
  bool selected = false;
};

struct FeatureScoreReport {
  std::vector<FeatureScore> features;          // original column order
  Eigen::VectorXd component_fractions;         // audit copy of the inputs

  std::vector<std::string> selected_names() const;
};

// Ranks features by 0.5 * minmax(weighted variance) + 0.5 * (1 - r2) and
// marks the top `count` selected. Ties break by feature name ascending.
FeatureScoreReport select_features(const std::vector<std::string>& names,
                                   const Eigen::VectorXd& weighted_variance,
                                   const RelevanceResult& relevance,
                                   const Eigen::VectorXd& fractions,
                                   int count);

}  // namespace geosom
