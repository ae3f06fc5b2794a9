#include "geosom/som.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#include "geosom/errors.hpp"
#include "geosom/rng.hpp"

namespace geosom {

double Lattice::distance(int i, int j) const {
  const double dr = row_of(i) - row_of(j);
  const double dc = col_of(i) - col_of(j);
  return std::sqrt(dr * dr + dc * dc);
}

int Lattice::chebyshev(int i, int j) const {
  return std::max(std::abs(row_of(i) - row_of(j)),
                  std::abs(col_of(i) - col_of(j)));
}

double SomConfig::default_time_constant(long long iterations, double sigma0) {
  if (sigma0 <= 1.0) {
    // ln(sigma0) <= 0 would give a non-positive constant; with no radius to
    // shrink, decay over the full run is as good a choice as any.
    return static_cast<double>(iterations);
  }
  return static_cast<double>(iterations) / std::log(sigma0);
}

double SomConfig::resolved_time_constant() const {
  return time_constant > 0.0 ? time_constant
                             : default_time_constant(iterations, sigma0);
}

void SomConfig::validate() const {
  if (rows < 1 || cols < 1) {
    throw ValidationError("lattice dimensions must be positive, got " +
                          std::to_string(rows) + "x" + std::to_string(cols));
  }
  if (!(sigma0 > 0.0)) {
    throw ValidationError("sigma0 must be positive");
  }
  if (sigma0 > static_cast<double>(std::max(rows, cols))) {
    throw ValidationError("sigma0 " + std::to_string(sigma0) +
                          " exceeds the lattice extent " +
                          std::to_string(std::max(rows, cols)));
  }
  // The source describes 0 < theta < 1 but its own boundary cases rely on
  // theta0 = 0 (frozen map); we accept [0,1).
  if (!(theta0 >= 0.0 && theta0 < 1.0)) {
    throw ValidationError("theta0 must lie in [0,1), got " +
                          std::to_string(theta0));
  }
  if (time_constant < 0.0) {
    throw ValidationError("time_constant must be positive when set");
  }
  if (iterations < 1) {
    throw ValidationError("iterations must be positive");
  }
}

SomModel init_model(const FeatureMatrix& X, const SomConfig& config,
                    std::vector<std::string>* warnings) {
  config.validate();
  const Eigen::Index n = X.values.rows();
  if (n < 1 || X.values.cols() < 1) {
    throw ValidationError("cannot initialize a SOM from an empty matrix");
  }
  if (!X.values.allFinite()) {
    throw ValidationError("SOM training data contains non-finite values");
  }
  const int k = config.rows * config.cols;
  if (warnings && k > 2 * n) {
    warnings->push_back("lattice has " + std::to_string(k) +
                        " neurons for only " + std::to_string(n) +
                        " observations; expect many dead neurons");
  }

  SomModel model;
  model.lattice = Lattice{config.rows, config.cols};
  model.config = config;
  model.feature_names = X.feature_names;
  model.weights.resize(k, X.values.cols());
  Rng rng(config.seed);
  for (int i = 0; i < k; ++i) {
    const std::size_t r = rng.uniform_index(static_cast<std::size_t>(n));
    model.weights.row(i) = X.values.row(static_cast<Eigen::Index>(r));
  }
  return model;
}

int bmu(const Eigen::VectorXd& x, const SomModel& model) {
  if (x.size() != model.weights.cols()) {
    throw ValidationError("bmu: vector length " + std::to_string(x.size()) +
                          " does not match weight width " +
                          std::to_string(model.weights.cols()));
  }
  int best = 0;
  double best_d = (model.weights.row(0).transpose() - x).squaredNorm();
  for (int i = 1; i < model.weights.rows(); ++i) {
    const double d = (model.weights.row(i).transpose() - x).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

double neighborhood(double xi_distance, double sigma) {
  return std::exp(-(xi_distance * xi_distance) / (2.0 * sigma * sigma));
}

double decay(double initial, double n, double time_constant) {
  return initial * std::exp(-n / time_constant);
}

void update_weights(Eigen::MatrixXd& weights, const Lattice& lattice,
                    const Eigen::VectorXd& x, int bmu_index, double sigma,
                    double theta) {
  for (int j = 0; j < lattice.size(); ++j) {
    const double xi = lattice.distance(bmu_index, j);
    if (xi >= sigma) continue;  // hard cutoff
    const double lam = neighborhood(xi, sigma);
    weights.row(j) += theta * lam * (x.transpose() - weights.row(j));
  }
}

SomModel train(const FeatureMatrix& X, const SomConfig& config,
               std::vector<std::string>* warnings) {
  SomModel model = init_model(X, config, warnings);
  const Eigen::Index n = X.values.rows();
  const double G = config.resolved_time_constant();
  const double G2 = G * G;

  model.history.push_back(quantization_error(X, model));

  // The init draws and the epoch shuffles share one engine so the whole run
  // is a single deterministic stream per seed. Re-doing the init draws here
  // advances this engine to the same state init_model left its own in.
  Rng rng(config.seed);
  for (int i = 0; i < model.lattice.size(); ++i) {
    rng.uniform_index(static_cast<std::size_t>(n));
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;

  long long presented = 0;
  while (presented < config.iterations) {
    rng.shuffle(order);
    for (Eigen::Index idx : order) {
      if (presented >= config.iterations) break;
      const double t = static_cast<double>(presented);
      const double sigma = decay(config.sigma0, t, G);
      const double theta = decay(config.theta0, t, G2);
      const Eigen::VectorXd x = X.values.row(idx).transpose();
      const int winner = bmu(x, model);
      update_weights(model.weights, model.lattice, x, winner, sigma, theta);
      ++presented;
    }
    if (!model.weights.allFinite()) {
      throw NumericalError("non-finite weights after " +
                           std::to_string(presented) + " presentations");
    }
    model.history.push_back(quantization_error(X, model));
  }
  return model;
}

namespace {

void check_dims(const FeatureMatrix& X, const SomModel& model) {
  if (X.values.cols() != model.weights.cols()) {
    throw ValidationError("feature width " + std::to_string(X.values.cols()) +
                          " does not match weight width " +
                          std::to_string(model.weights.cols()));
  }
}

}  // namespace

double quantization_error(const FeatureMatrix& X, const SomModel& model) {
  check_dims(X, model);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < X.values.rows(); ++i) {
    const Eigen::VectorXd x = X.values.row(i).transpose();
    const int w = bmu(x, model);
    sum += (model.weights.row(w).transpose() - x).norm();
  }
  return sum / static_cast<double>(X.values.rows());
}

double total_distortion(const FeatureMatrix& X, const SomModel& model) {
  check_dims(X, model);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < X.values.rows(); ++i) {
    const Eigen::VectorXd x = X.values.row(i).transpose();
    const int w = bmu(x, model);
    sum += (model.weights.row(w).transpose() - x).squaredNorm();
  }
  return sum;
}

double topographic_error(const FeatureMatrix& X, const SomModel& model) {
  check_dims(X, model);
  if (model.weights.rows() < 2) {
    throw ValidationError("topographic error needs at least 2 neurons");
  }
  long long errors = 0;
  for (Eigen::Index i = 0; i < X.values.rows(); ++i) {
    const Eigen::VectorXd x = X.values.row(i).transpose();
    int first = 0, second = -1;
    double d_first = std::numeric_limits<double>::infinity();
    double d_second = std::numeric_limits<double>::infinity();
    for (int j = 0; j < model.weights.rows(); ++j) {
      const double d = (model.weights.row(j).transpose() - x).squaredNorm();
      if (d < d_first) {
        d_second = d_first;
        second = first;
        d_first = d;
        first = j;
      } else if (d < d_second) {
        d_second = d;
        second = j;
      }
    }
    if (model.lattice.chebyshev(first, second) > 1) ++errors;
  }
  return static_cast<double>(errors) /
         static_cast<double>(X.values.rows());
}

}  // namespace geosom
