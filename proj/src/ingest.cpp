#include "geosom/ingest.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "geosom/csv.hpp"
#include "geosom/errors.hpp"

namespace geosom {

int RawCensusTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < column_order.size(); ++i) {
    if (column_order[i] == name) return static_cast<int>(i);
  }
  return -1;
}

RawCensusTable load_census(const std::string& path,
                           const std::string& id_column,
                           const std::string& name_column) {
  CsvTable csv = read_csv(path);
  const int id_idx = csv.column(id_column);
  const int name_idx = csv.column(name_column);
  if (id_idx < 0) {
    throw DataError(path + ": missing id column '" + id_column + "'");
  }
  if (name_idx < 0) {
    throw DataError(path + ": missing name column '" + name_column + "'");
  }
  if (csv.rows.empty()) {
    throw DataError(path + ": no data rows");
  }

  RawCensusTable table;
  for (std::size_t c = 0; c < csv.header.size(); ++c) {
    if (static_cast<int>(c) == id_idx || static_cast<int>(c) == name_idx)
      continue;
    table.column_order.push_back(csv.header[c]);
  }

  std::set<std::string> seen;
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    const auto& rec = csv.rows[r];
    RawCensusRow row;
    row.id = rec[static_cast<std::size_t>(id_idx)];
    row.name = rec[static_cast<std::size_t>(name_idx)];
    if (row.id.empty()) {
      throw DataError(path + " line " + std::to_string(r + 2) +
                      ": empty region id");
    }
    if (!seen.insert(row.id).second) {
      throw DataError(path + ": duplicate region id '" + row.id + "'");
    }
    row.counts.reserve(table.column_order.size());
    for (std::size_t c = 0; c < csv.header.size(); ++c) {
      if (static_cast<int>(c) == id_idx || static_cast<int>(c) == name_idx)
        continue;
      const std::string context = path + " line " + std::to_string(r + 2) +
                                  ", column " + csv.header[c];
      long long v = parse_int(rec[c], context);
      if (v < 0) {
        throw DataError(context + ": negative count " + std::to_string(v));
      }
      row.counts.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

FeatureRecipe load_recipe(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open " + path);
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": invalid JSON: " + e.what());
  }
  if (j.value("format", "") != "geosom.recipe") {
    throw DataError(path + ": not a geosom.recipe document");
  }

  FeatureRecipe recipe;
  recipe.population_column = j.value("population_column", "");
  if (recipe.population_column.empty()) {
    throw DataError(path + ": population_column missing or empty");
  }
  if (!j.contains("derived") || !j["derived"].is_array() ||
      j["derived"].empty()) {
    throw DataError(path + ": 'derived' must be a non-empty array");
  }
  std::set<std::string> names;
  for (const auto& item : j["derived"]) {
    RecipeEntry entry;
    entry.name = item.value("name", "");
    if (entry.name.empty()) {
      throw DataError(path + ": derived feature without a name");
    }
    if (!names.insert(entry.name).second) {
      throw DataError(path + ": duplicate derived feature '" + entry.name +
                      "'");
    }
    if (!item.contains("sources") || !item["sources"].is_array() ||
        item["sources"].empty()) {
      throw DataError(path + ": feature '" + entry.name +
                      "' needs a non-empty sources array");
    }
    for (const auto& s : item["sources"]) {
      entry.sources.push_back(s.get<std::string>());
    }
    entry.denominator = item.value("denominator", "");
    recipe.derived.push_back(std::move(entry));
  }
  return recipe;
}

int FeatureMatrix::column(const std::string& name) const {
  for (std::size_t i = 0; i < feature_names.size(); ++i) {
    if (feature_names[i] == name) return static_cast<int>(i);
  }
  return -1;
}

void FeatureMatrix::validate() const {
  if (values.rows() < 2 || values.cols() < 1) {
    throw ValidationError("feature matrix must be at least 2x1, got " +
                          std::to_string(values.rows()) + "x" +
                          std::to_string(values.cols()));
  }
  if (static_cast<Eigen::Index>(row_ids.size()) != values.rows() ||
      static_cast<Eigen::Index>(feature_names.size()) != values.cols()) {
    throw ValidationError("feature matrix labels do not match its shape");
  }
  if (!values.allFinite()) {
    throw ValidationError("feature matrix contains non-finite values");
  }
  if (kind == MatrixKind::Standardized) {
    const double n = static_cast<double>(values.rows());
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
      const double mean = values.col(c).mean();
      const double var = (values.col(c).array() - mean).square().sum() / n;
      const double sd = std::sqrt(var);
      if (std::abs(mean) > 1e-9 || std::abs(sd - 1.0) > 1e-9) {
        throw ValidationError("column '" + feature_names[c] +
                              "' is not standardized (mean=" +
                              std::to_string(mean) + ", std=" +
                              std::to_string(sd) + ")");
      }
    }
  }
}

FeatureMatrix make_matrix(std::vector<std::string> row_ids,
                          std::vector<std::string> feature_names,
                          Eigen::MatrixXd values, MatrixKind kind) {
  if (static_cast<Eigen::Index>(row_ids.size()) != values.rows() ||
      static_cast<Eigen::Index>(feature_names.size()) != values.cols()) {
    throw ValidationError("matrix labels do not match its shape");
  }
  FeatureMatrix X;
  X.row_ids = std::move(row_ids);
  X.feature_names = std::move(feature_names);
  X.values = std::move(values);
  X.kind = kind;
  return X;
}

DeriveResult derive_features(const RawCensusTable& raw,
                             const FeatureRecipe& recipe) {
  if (raw.rows.empty()) {
    throw ValidationError("census table has no rows");
  }
  const int pop_idx = raw.column(recipe.population_column);
  if (pop_idx < 0) {
    throw ValidationError("population column '" + recipe.population_column +
                          "' not present in census table");
  }

  // Resolve every referenced column up front so a bad recipe fails before
  // any arithmetic.
  struct Resolved {
    std::vector<int> sources;
    int denominator;
  };
  std::vector<Resolved> resolved;
  resolved.reserve(recipe.derived.size());
  for (const auto& entry : recipe.derived) {
    Resolved r;
    for (const auto& s : entry.sources) {
      int idx = raw.column(s);
      if (idx < 0) {
        throw ValidationError("feature '" + entry.name +
                              "': unknown source column '" + s + "'");
      }
      r.sources.push_back(idx);
    }
    if (entry.denominator.empty()) {
      r.denominator = pop_idx;
    } else {
      r.denominator = raw.column(entry.denominator);
      if (r.denominator < 0) {
        throw ValidationError("feature '" + entry.name +
                              "': unknown denominator column '" +
                              entry.denominator + "'");
      }
    }
    resolved.push_back(std::move(r));
  }

  const Eigen::Index n = static_cast<Eigen::Index>(raw.rows.size());
  const Eigen::Index m = static_cast<Eigen::Index>(recipe.derived.size());
  Eigen::MatrixXd values(n, m);
  std::vector<long long> population;
  population.reserve(raw.rows.size());
  std::vector<std::string> ids;
  ids.reserve(raw.rows.size());

  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = raw.rows[static_cast<std::size_t>(i)];
    ids.push_back(row.id);
    population.push_back(row.counts[static_cast<std::size_t>(pop_idx)]);
    for (Eigen::Index f = 0; f < m; ++f) {
      const auto& r = resolved[static_cast<std::size_t>(f)];
      const long long denom = row.counts[static_cast<std::size_t>(r.denominator)];
      if (denom <= 0) {
        throw DataError("feature '" +
                        recipe.derived[static_cast<std::size_t>(f)].name +
                        "': non-positive denominator for region '" + row.id +
                        "'");
      }
      long long num = 0;
      for (int s : r.sources) num += row.counts[static_cast<std::size_t>(s)];
      values(i, f) =
          100.0 * static_cast<double>(num) / static_cast<double>(denom);
    }
  }

  std::vector<std::string> names;
  names.reserve(recipe.derived.size());
  for (const auto& entry : recipe.derived) names.push_back(entry.name);

  DeriveResult out;
  out.matrix =
      make_matrix(std::move(ids), std::move(names), std::move(values),
                  MatrixKind::RawPercent);
  out.population = std::move(population);
  return out;
}

StandardizeResult standardize(const FeatureMatrix& X) {
  if (X.values.rows() < 2) {
    throw ValidationError("standardize needs at least 2 rows");
  }
  if (!X.values.allFinite()) {
    throw ValidationError("standardize input contains non-finite values");
  }
  const Eigen::Index n = X.values.rows();
  const double dn = static_cast<double>(n);

  StandardizeResult out;
  std::vector<Eigen::Index> kept;
  for (Eigen::Index c = 0; c < X.values.cols(); ++c) {
    const double mean = X.values.col(c).mean();
    const double var = (X.values.col(c).array() - mean).square().sum() / dn;
    const double sd = std::sqrt(var);
    if (sd < 1e-12) {
      out.dropped.push_back(X.feature_names[static_cast<std::size_t>(c)]);
    } else {
      kept.push_back(c);
    }
  }
  if (kept.empty()) {
    throw DataError("no informative features: every column is constant");
  }

  const Eigen::Index m = static_cast<Eigen::Index>(kept.size());
  Eigen::MatrixXd z(n, m);
  out.params.mean.resize(m);
  out.params.std.resize(m);
  std::vector<std::string> names;
  names.reserve(kept.size());
  for (Eigen::Index j = 0; j < m; ++j) {
    const Eigen::Index c = kept[static_cast<std::size_t>(j)];
    const double mean = X.values.col(c).mean();
    const double sd = std::sqrt(
        (X.values.col(c).array() - mean).square().sum() / dn);
    out.params.mean(j) = mean;
    out.params.std(j) = sd;
    z.col(j) = (X.values.col(c).array() - mean) / sd;
    names.push_back(X.feature_names[static_cast<std::size_t>(c)]);
  }
  out.params.feature_names = names;
  out.matrix = make_matrix(X.row_ids, std::move(names), std::move(z),
                           MatrixKind::Standardized);
  return out;
}

FeatureMatrix inverse_standardize(const FeatureMatrix& X,
                                  const ScalingParams& params) {
  if (X.feature_names != params.feature_names) {
    throw ValidationError(
        "scaling params do not cover the matrix's feature columns");
  }
  Eigen::MatrixXd raw = X.values;
  for (Eigen::Index c = 0; c < raw.cols(); ++c) {
    raw.col(c) = raw.col(c).array() * params.std(c) + params.mean(c);
  }
  return make_matrix(X.row_ids, X.feature_names, std::move(raw),
                     MatrixKind::RawPercent);
}

}  // namespace geosom
