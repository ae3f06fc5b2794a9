#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace geosom {

// ---------------------------------------------------------------------------
// Raw census counts
// ---------------------------------------------------------------------------

struct RawCensusRow {
  std::string id;
  std::string name;
  std::vector<long long> counts;  // aligned with RawCensusTable::column_order
};

struct RawCensusTable {
  std::vector<RawCensusRow> rows;
  std::vector<std::string> column_order;

  int column(const std::string& name) const;  // -1 when absent
};

// Loads a count-valued census extract. `id_column` and `name_column` are
// removed from column_order; every remaining cell must parse as a
// non-negative integer.
RawCensusTable load_census(const std::string& path,
                           const std::string& id_column,
                           const std::string& name_column);

// ---------------------------------------------------------------------------
// Feature recipe: raw count columns -> derived percentage features
// ---------------------------------------------------------------------------

struct RecipeEntry {
  std::string name;
  std::vector<std::string> sources;
  std::string denominator;  // empty means "use the population column"
};

struct FeatureRecipe {
  std::vector<RecipeEntry> derived;
  std::string population_column;
};

// Parses the JSON recipe document (format geosom.recipe). See README for
// the schema.
FeatureRecipe load_recipe(const std::string& path);

// ---------------------------------------------------------------------------
// Feature matrices
// ---------------------------------------------------------------------------

enum class MatrixKind { RawPercent, Standardized };

struct FeatureMatrix {
  std::vector<std::string> row_ids;
  std::vector<std::string> feature_names;
  Eigen::MatrixXd values;  // n rows x m features
  MatrixKind kind = MatrixKind::RawPercent;

  Eigen::Index n() const { return values.rows(); }
  Eigen::Index m() const { return values.cols(); }
  int column(const std::string& name) const;  // -1 when absent

  // Full invariant check: shapes, finiteness, and for standardized
  // matrices column mean ~ 0 / population std ~ 1 (1e-9). Called at
  // artifact boundaries; throws ValidationError.
  void validate() const;
};

// Shape-checked constructor (does not enforce the z-score invariant).
FeatureMatrix make_matrix(std::vector<std::string> row_ids,
                          std::vector<std::string> feature_names,
                          Eigen::MatrixXd values, MatrixKind kind);

struct ScalingParams {
  std::vector<std::string> feature_names;
  Eigen::VectorXd mean;
  Eigen::VectorXd std;  // population standard deviation, all > 0
};

struct DeriveResult {
  FeatureMatrix matrix;                 // kind = RawPercent
  std::vector<long long> population;    // per region, from population_column
};

// Each derived value is 100 * (sum of source counts) / denominator count.
// Denominator defaults to the recipe's population column.
DeriveResult derive_features(const RawCensusTable& raw,
                             const FeatureRecipe& recipe);

struct StandardizeResult {
  FeatureMatrix matrix;               // kind = Standardized
  ScalingParams params;               // for retained columns only
  std::vector<std::string> dropped;   // columns with std < 1e-12
};

// Z-scores each column with population mean/std (1/n). Near-constant
// columns are dropped and reported rather than kept or fatal.
StandardizeResult standardize(const FeatureMatrix& X);

// Undoes standardize for round-tripping checks; params must cover every
// column of X.
FeatureMatrix inverse_standardize(const FeatureMatrix& X,
                                  const ScalingParams& params);

}  // namespace geosom
