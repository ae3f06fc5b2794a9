#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "geosom/dimred.hpp"
#include "geosom/errors.hpp"
#include "geosom/ingest.hpp"
#include "geosom/pipeline.hpp"
#include "geosom/serialize.hpp"
#include "geosom/som.hpp"
#include "geosom/validity.hpp"

namespace py = pybind11;

namespace {

// The C++ API names rows and features; the python surface works on bare
// matrices, so label them generically.
geosom::FeatureMatrix wrap(const Eigen::MatrixXd& values,
                           geosom::MatrixKind kind) {
  std::vector<std::string> ids, names;
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    ids.push_back("r" + std::to_string(i));
  }
  for (Eigen::Index c = 0; c < values.cols(); ++c) {
    names.push_back("f" + std::to_string(c));
  }
  return geosom::make_matrix(std::move(ids), std::move(names), values, kind);
}

geosom::KernelSpec make_spec(const std::string& kind, double sigma) {
  geosom::KernelSpec spec;
  if (kind == "gaussian") {
    spec.kind = geosom::KernelKind::Gaussian;
  } else if (kind == "linear") {
    spec.kind = geosom::KernelKind::Linear;
  } else {
    throw geosom::ValidationError("unknown kernel kind '" + kind + "'");
  }
  spec.sigma = sigma;
  return spec;
}

geosom::SomModel make_model(const Eigen::MatrixXd& weights, int rows,
                            int cols) {
  if (weights.rows() != static_cast<Eigen::Index>(rows) * cols) {
    throw geosom::ValidationError(
        "weight rows do not match the lattice size");
  }
  geosom::SomModel model;
  model.lattice = geosom::Lattice{rows, cols};
  model.weights = weights;
  for (Eigen::Index c = 0; c < weights.cols(); ++c) {
    model.feature_names.push_back("f" + std::to_string(c));
  }
  return model;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "geodemographic SOM clustering pipeline (C++ core)";
  m.attr("__version__") = geosom::kToolVersion;

  py::register_exception<geosom::ValidationError>(m, "ValidationError",
                                                  PyExc_ValueError);
  py::register_exception<geosom::DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<geosom::NumericalError>(m, "NumericalError",
                                                 PyExc_ArithmeticError);

  m.def(
      "standardize",
      [](const Eigen::MatrixXd& X) {
        auto result =
            geosom::standardize(wrap(X, geosom::MatrixKind::RawPercent));
        std::vector<std::string> kept = result.matrix.feature_names;
        return py::make_tuple(result.matrix.values, result.params.mean,
                              result.params.std, result.dropped);
      },
      py::arg("X"),
      "Z-score columns with population mean/std; returns (Z, mean, std, "
      "dropped_names). Near-constant columns are dropped.");

  m.def(
      "median_pairwise_distance",
      [](const Eigen::MatrixXd& X) {
        return geosom::median_pairwise_distance(X);
      },
      py::arg("X"));

  m.def(
      "kpca",
      [](const Eigen::MatrixXd& X, int components, const std::string& kernel,
         double sigma) {
        geosom::KernelSpec spec = make_spec(kernel, sigma);
        if (spec.kind == geosom::KernelKind::Gaussian && sigma <= 0.0) {
          spec.sigma = geosom::median_pairwise_distance(X);
        }
        auto Xw = wrap(X, geosom::MatrixKind::Standardized);
        geosom::KernelModel model = geosom::fit_kpca(Xw, spec, components);
        Eigen::MatrixXd scores = geosom::project(model, Xw);
        Eigen::VectorXd fractions =
            geosom::explained_variance_fractions(model);
        return py::make_tuple(scores, model.eigenvalues, fractions,
                              model.spec.sigma);
      },
      py::arg("X"), py::arg("components"), py::arg("kernel") = "gaussian",
      py::arg("sigma") = 0.0,
      "Kernel PCA; returns (scores, eigenvalues, fractions, sigma_used). "
      "sigma <= 0 selects the median-distance heuristic.");

  m.def(
      "project",
      [](const Eigen::MatrixXd& X_train, const Eigen::MatrixXd& X_new,
         int components, const std::string& kernel, double sigma) {
        geosom::KernelSpec spec = make_spec(kernel, sigma);
        if (spec.kind == geosom::KernelKind::Gaussian && sigma <= 0.0) {
          spec.sigma = geosom::median_pairwise_distance(X_train);
        }
        auto Xw = wrap(X_train, geosom::MatrixKind::Standardized);
        geosom::KernelModel model = geosom::fit_kpca(Xw, spec, components);
        return geosom::project(model,
                               wrap(X_new, geosom::MatrixKind::Standardized));
      },
      py::arg("X_train"), py::arg("X_new"), py::arg("components"),
      py::arg("kernel") = "gaussian", py::arg("sigma") = 0.0);

  m.def(
      "hopkins",
      [](const Eigen::MatrixXd& X, double fraction, std::uint64_t seed) {
        return geosom::hopkins(wrap(X, geosom::MatrixKind::RawPercent),
                               fraction, seed);
      },
      py::arg("X"), py::arg("fraction") = 0.2, py::arg("seed") = 0);

  m.def(
      "relevance_r2",
      [](const Eigen::MatrixXd& X) {
        auto result =
            geosom::relevance_r2(wrap(X, geosom::MatrixKind::RawPercent));
        return py::make_tuple(result.r2, result.ridge_fallback);
      },
      py::arg("X"), "Per-feature OLS R^2; returns (r2, ridge_flags).");

  m.def(
      "som_train",
      [](const Eigen::MatrixXd& X, int rows, int cols, double sigma0,
         double theta0, long long iterations, std::uint64_t seed,
         double time_constant) {
        geosom::SomConfig config;
        config.rows = rows;
        config.cols = cols;
        config.sigma0 = sigma0;
        config.theta0 = theta0;
        config.iterations = iterations;
        config.seed = seed;
        config.time_constant = time_constant;
        auto Xw = wrap(X, geosom::MatrixKind::Standardized);
        geosom::SomModel model = geosom::train(Xw, config);
        return py::make_tuple(model.weights, model.history);
      },
      py::arg("X"), py::arg("rows"), py::arg("cols"), py::arg("sigma0"),
      py::arg("theta0") = 0.57, py::arg("iterations") = 0,
      py::arg("seed") = 0, py::arg("time_constant") = 0.0,
      "Trains a SOM; returns (weights, qe_history). history[0] is the QE of "
      "the freshly initialized map.");

  m.def(
      "quantization_error",
      [](const Eigen::MatrixXd& X, const Eigen::MatrixXd& weights, int rows,
         int cols) {
        return geosom::quantization_error(
            wrap(X, geosom::MatrixKind::Standardized),
            make_model(weights, rows, cols));
      },
      py::arg("X"), py::arg("weights"), py::arg("rows"), py::arg("cols"));

  m.def(
      "topographic_error",
      [](const Eigen::MatrixXd& X, const Eigen::MatrixXd& weights, int rows,
         int cols) {
        return geosom::topographic_error(
            wrap(X, geosom::MatrixKind::Standardized),
            make_model(weights, rows, cols));
      },
      py::arg("X"), py::arg("weights"), py::arg("rows"), py::arg("cols"));

  m.def(
      "ward_labels",
      [](const Eigen::MatrixXd& points, int k) {
        return geosom::ward_labels(points, k);
      },
      py::arg("points"), py::arg("k"));

  m.def(
      "silhouette",
      [](const Eigen::MatrixXd& points, const std::vector<int>& labels) {
        auto result = geosom::silhouette(points, labels);
        return py::make_tuple(result.per_point, result.mean);
      },
      py::arg("points"), py::arg("labels"));

  m.def(
      "dbi",
      [](const Eigen::MatrixXd& points, const std::vector<int>& labels) {
        int k = 0;
        for (int l : labels) k = std::max(k, l + 1);
        return geosom::dbi(points, labels,
                           geosom::centroids_of(points, labels, k));
      },
      py::arg("points"), py::arg("labels"));

  m.def(
      "scan_k",
      [](const Eigen::MatrixXd& weights, int rows, int cols, int k_min,
         int k_max) {
        geosom::SomModel model = make_model(weights, rows, cols);
        geosom::ValidityReport report =
            geosom::scan_k(model, k_min, k_max);
        std::vector<py::tuple> out;
        for (const auto& row : report.rows) {
          out.push_back(py::make_tuple(row.k, row.silhouette, row.dbi));
        }
        return py::make_tuple(out, report.chosen_k);
      },
      py::arg("weights"), py::arg("rows"), py::arg("cols"), py::arg("k_min"),
      py::arg("k_max"), "Returns ([(k, silhouette, dbi), ...], chosen_k).");

  m.def(
      "run_pipeline",
      [](const std::string& config_path) {
        geosom::PipelineConfig config = geosom::load_config(config_path);
        geosom::RunManifest manifest = geosom::run_pipeline(config);
        py::dict hashes;
        for (const auto& [name, hash] : manifest.artifact_sha256) {
          hashes[py::str(name)] = hash;
        }
        return hashes;
      },
      py::arg("config_path"),
      "Runs every phase; returns {artifact_name: sha256}.");
}
