#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "geosom/ingest.hpp"

#ifndef GEOSOM_FIXTURE_DIR
#error "GEOSOM_FIXTURE_DIR must be defined by the build"
#endif
#ifndef GEOSOM_SCRATCH_DIR
#error "GEOSOM_SCRATCH_DIR must be defined by the build"
#endif

namespace testutil {

inline std::string fixture(const std::string& rel) {
  return std::string(GEOSOM_FIXTURE_DIR) + "/" + rel;
}

// Fresh per-test scratch directory (wiped on entry, left behind for
// post-mortem inspection).
inline std::string scratch(const std::string& name) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::path(GEOSOM_SCRATCH_DIR) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline geosom::FeatureMatrix matrix_of(
    const Eigen::MatrixXd& values,
    geosom::MatrixKind kind = geosom::MatrixKind::RawPercent) {
  std::vector<std::string> ids, names;
  for (Eigen::Index i = 0; i < values.rows(); ++i)
    ids.push_back("r" + std::to_string(i));
  for (Eigen::Index j = 0; j < values.cols(); ++j)
    names.push_back("f" + std::to_string(j));
  return geosom::make_matrix(ids, names, values, kind);
}

// The committed 3-blob fixture, standardized on load.
struct BlobFixture {
  geosom::FeatureMatrix standardized;
  std::vector<int> labels;
};

BlobFixture load_blobs();

// Writes a self-contained 12-region dataset (census, recipe, cases,
// geometries, config) into `dir` and returns the config path. The recipe's
// second feature name is configurable so tests can provoke the outcome
// column collision.
std::string write_tiny_dataset(const std::string& dir,
                               const std::string& feature_b_name = "FB",
                               bool outcome = true, long long iterations = 120);

}  // namespace testutil
