#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "geosom/ingest.hpp"

namespace geosom {

// ---------------------------------------------------------------------------
// Lattice
// ---------------------------------------------------------------------------

// Rectangular neuron grid. Neuron index i sits at row i/cols, col i%cols;
// lattice distance is Euclidean over those integer positions.
struct Lattice {
  int rows = 0;
  int cols = 0;

  int size() const { return rows * cols; }
  int row_of(int i) const { return i / cols; }
  int col_of(int i) const { return i % cols; }

  double distance(int i, int j) const;   // Euclidean in lattice units
  int chebyshev(int i, int j) const;     // 8-neighborhood metric
};

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

struct SomConfig {
  int rows = 18;
  int cols = 15;
  double sigma0 = 9.0;          // initial neighborhood radius, lattice units
  double theta0 = 0.57;         // initial learning rate
  double time_constant = 0.0;   // G; 0 means "use default_time_constant"
  long long iterations = 0;     // total sample presentations
  std::uint64_t seed = 0;

  // iterations / ln(sigma0): the radius reaches ~1 by the last presentation.
  static double default_time_constant(long long iterations, double sigma0);

  // Resolved G (the explicit value, or the default when unset).
  double resolved_time_constant() const;

  void validate() const;
};

// ---------------------------------------------------------------------------
// Model
// ---------------------------------------------------------------------------

struct SomModel {
  Lattice lattice;
  Eigen::MatrixXd weights;  // k neurons x m features, z-score units
  SomConfig config;
  std::vector<std::string> feature_names;
  // history[0] is the quantization error of the freshly initialized map;
  // one further entry is appended after each epoch.
  std::vector<double> history;
};

// Weights are training rows sampled uniformly with replacement, using the
// config seed. Appends a note to `warnings` when k > 2n.
SomModel init_model(const FeatureMatrix& X, const SomConfig& config,
                    std::vector<std::string>* warnings = nullptr);

// Index of the neuron nearest to x (squared Euclidean); ties take the
// lowest index.
int bmu(const Eigen::VectorXd& x, const SomModel& model);

// Gaussian neighborhood exp(-xi^2 / 2 sigma^2).
double neighborhood(double xi_distance, double sigma);

// Exponential decay value * exp(-n / tau). The trainer passes tau = G for
// the radius and tau = G^2 for the learning rate.
double decay(double initial, double n, double time_constant);

// One presentation's weight update: every neuron with lattice distance
// xi < sigma from the BMU moves by theta * neighborhood(xi, sigma) * (x - W).
// Exposed separately from train() so the update rule is testable with
// arbitrary theta.
void update_weights(Eigen::MatrixXd& weights, const Lattice& lattice,
                    const Eigen::VectorXd& x, int bmu_index, double sigma,
                    double theta);

// Online training per the annealed schedule: seeded shuffled presentation
// order per epoch, hard neighborhood cutoff, QE recorded every epoch.
SomModel train(const FeatureMatrix& X, const SomConfig& config,
               std::vector<std::string>* warnings = nullptr);

// Mean Euclidean observation-to-BMU distance.
double quantization_error(const FeatureMatrix& X, const SomModel& model);

// Sum of squared observation-to-BMU distances over all observations.
double total_distortion(const FeatureMatrix& X, const SomModel& model);

// Fraction of observations whose two nearest neurons are not adjacent
// (Chebyshev distance > 1 on the lattice).
double topographic_error(const FeatureMatrix& X, const SomModel& model);

}  // namespace geosom
