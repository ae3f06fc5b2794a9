#include "geosom/serialize.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>
#include <openssl/evp.h>

#include "geosom/csv.hpp"
#include "geosom/errors.hpp"

namespace geosom {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot write " + path);
  }
  out << content;
}

void check_version(const std::string& version, const std::string& path) {
  const std::size_t dot = version.find('.');
  int major = -1;
  try {
    major = std::stoi(version.substr(0, dot));
  } catch (...) {
  }
  if (major != 1) {
    throw DataError(path + ": unsupported format version '" + version +
                    "' (this build reads major 1)");
  }
}

json load_json_document(const std::string& path, const std::string& format) {
  json j;
  try {
    std::istringstream in(read_file(path));
    in >> j;
  } catch (const json::exception& e) {
    throw DataError(path + ": invalid JSON: " + e.what());
  }
  if (j.value("format", "") != format) {
    throw DataError(path + ": expected format '" + format + "', found '" +
                    j.value("format", "<none>") + "'");
  }
  check_version(j.value("version", ""), path);
  return j;
}

// CSV artifacts start with `#geosom.<kind>,1.0[,extra]`.
void write_versioned_csv(const std::string& path, const std::string& kind,
                         const std::string& extra,
                         const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream out;
  out << "#geosom." << kind << ",1.0";
  if (!extra.empty()) out << ',' << extra;
  out << '\n' << csv_string(header, rows);
  write_file(path, out.str());
}

struct VersionedCsv {
  std::string extra;
  CsvTable table;
};

VersionedCsv read_versioned_csv(const std::string& path,
                                const std::string& kind) {
  const std::string text = read_file(path);
  const std::size_t eol = text.find('\n');
  if (eol == std::string::npos) {
    throw DataError(path + ": truncated artifact");
  }
  std::string first = text.substr(0, eol);
  if (!first.empty() && first.back() == '\r') first.pop_back();
  const std::string prefix = "#geosom." + kind + ",";
  if (first.rfind(prefix, 0) != 0) {
    throw DataError(path + ": not a geosom." + kind +
                    " artifact (first line: '" + first + "')");
  }
  std::string rest = first.substr(prefix.size());
  const std::size_t comma = rest.find(',');
  VersionedCsv out;
  if (comma == std::string::npos) {
    check_version(rest, path);
  } else {
    check_version(rest.substr(0, comma), path);
    out.extra = rest.substr(comma + 1);
  }
  out.table = parse_csv(text.substr(eol + 1), path);
  return out;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Eigen::VectorXd json_to_vector(const json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  Eigen::Index i = 0;
  for (const auto& x : j) v(i++) = x.get<double>();
  return v;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(row);
  }
  return out;
}

Eigen::MatrixXd json_to_matrix(const json& j, const std::string& where) {
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) {
    throw DataError(where + ": empty matrix");
  }
  const Eigen::Index cols = static_cast<Eigen::Index>(j.front().size());
  Eigen::MatrixXd m(rows, cols);
  Eigen::Index r = 0;
  for (const auto& row : j) {
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw DataError(where + ": ragged matrix rows");
    }
    Eigen::Index c = 0;
    for (const auto& x : row) m(r, c++) = x.get<double>();
    ++r;
  }
  return m;
}

const char* kind_to_string(MatrixKind kind) {
  return kind == MatrixKind::Standardized ? "standardized" : "raw_percent";
}

MatrixKind kind_from_string(const std::string& s, const std::string& path) {
  if (s == "standardized") return MatrixKind::Standardized;
  if (s == "raw_percent") return MatrixKind::RawPercent;
  throw DataError(path + ": unknown matrix kind '" + s + "'");
}

}  // namespace

std::string sha256_file(const std::string& path) {
  const std::string data = read_file(path);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1) {
    throw NumericalError("sha256 digest failed for " + path);
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

// --- kernel model ----------------------------------------------------------

void save_kernel_model(const KernelModel& model, const std::string& path) {
  ordered_json j;
  j["format"] = "geosom.kernel_model";
  j["version"] = "1.0";
  j["spec"] = {{"kind", model.spec.kind == KernelKind::Gaussian ? "gaussian"
                                                                : "linear"},
               {"sigma", model.spec.sigma}};
  j["components"] = model.components;
  j["eigenvalues"] = vector_to_json(model.eigenvalues);
  j["coefficients"] = matrix_to_json(model.coefficients);
  j["centering"] = {{"row_means", vector_to_json(model.row_means)},
                    {"grand_mean", model.grand_mean}};
  j["training"] = {{"row_ids", model.training.row_ids},
                   {"feature_names", model.training.feature_names},
                   {"kind", kind_to_string(model.training.kind)},
                   {"values", matrix_to_json(model.training.values)}};
  write_file(path, j.dump(2) + "\n");
}

KernelModel load_kernel_model(const std::string& path) {
  const json j = load_json_document(path, "geosom.kernel_model");
  KernelModel model;
  const auto& spec = j.at("spec");
  const std::string kind = spec.value("kind", "");
  if (kind == "gaussian") {
    model.spec.kind = KernelKind::Gaussian;
  } else if (kind == "linear") {
    model.spec.kind = KernelKind::Linear;
  } else {
    throw DataError(path + ": unknown kernel kind '" + kind + "'");
  }
  model.spec.sigma = spec.value("sigma", 0.0);
  model.components = j.at("components").get<int>();
  model.eigenvalues = json_to_vector(j.at("eigenvalues"));
  model.coefficients = json_to_matrix(j.at("coefficients"), path);
  model.row_means = json_to_vector(j.at("centering").at("row_means"));
  model.grand_mean = j.at("centering").at("grand_mean").get<double>();
  const auto& tr = j.at("training");
  model.training = make_matrix(
      tr.at("row_ids").get<std::vector<std::string>>(),
      tr.at("feature_names").get<std::vector<std::string>>(),
      json_to_matrix(tr.at("values"), path),
      kind_from_string(tr.value("kind", ""), path));
  return model;
}

// --- SOM model --------------------------------------------------------------

void save_som_model(const SomModel& model, const std::string& path) {
  ordered_json j;
  j["format"] = "geosom.som_model";
  j["version"] = "1.0";
  j["lattice"] = {{"rows", model.lattice.rows}, {"cols", model.lattice.cols}};
  j["config"] = {{"rows", model.config.rows},
                 {"cols", model.config.cols},
                 {"sigma0", model.config.sigma0},
                 {"theta0", model.config.theta0},
                 {"time_constant", model.config.time_constant},
                 {"iterations", model.config.iterations},
                 {"seed", model.config.seed}};
  j["feature_names"] = model.feature_names;
  j["weights"] = matrix_to_json(model.weights);  // row-major, neuron per row
  j["history"] = model.history;
  write_file(path, j.dump(2) + "\n");
}

SomModel load_som_model(const std::string& path) {
  const json j = load_json_document(path, "geosom.som_model");
  SomModel model;
  model.lattice.rows = j.at("lattice").at("rows").get<int>();
  model.lattice.cols = j.at("lattice").at("cols").get<int>();
  const auto& c = j.at("config");
  model.config.rows = c.at("rows").get<int>();
  model.config.cols = c.at("cols").get<int>();
  model.config.sigma0 = c.at("sigma0").get<double>();
  model.config.theta0 = c.at("theta0").get<double>();
  model.config.time_constant = c.at("time_constant").get<double>();
  model.config.iterations = c.at("iterations").get<long long>();
  model.config.seed = c.at("seed").get<std::uint64_t>();
  model.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  model.weights = json_to_matrix(j.at("weights"), path);
  model.history = j.at("history").get<std::vector<double>>();
  if (model.weights.rows() != model.lattice.rows * model.lattice.cols) {
    throw DataError(path + ": weight count does not match the lattice");
  }
  if (model.weights.cols() !=
      static_cast<Eigen::Index>(model.feature_names.size())) {
    throw DataError(path + ": weight width does not match feature names");
  }
  return model;
}

// --- matrices ---------------------------------------------------------------

void save_matrix_csv(const FeatureMatrix& X, const std::string& path) {
  std::vector<std::string> header;
  header.push_back("region_id");
  header.insert(header.end(), X.feature_names.begin(), X.feature_names.end());
  std::vector<std::vector<std::string>> rows;
  rows.reserve(X.row_ids.size());
  for (Eigen::Index i = 0; i < X.values.rows(); ++i) {
    std::vector<std::string> row;
    row.push_back(X.row_ids[static_cast<std::size_t>(i)]);
    for (Eigen::Index c = 0; c < X.values.cols(); ++c) {
      row.push_back(format_double(X.values(i, c)));
    }
    rows.push_back(std::move(row));
  }
  write_versioned_csv(path, "matrix", kind_to_string(X.kind), header, rows);
}

FeatureMatrix load_matrix_csv(const std::string& path) {
  VersionedCsv file = read_versioned_csv(path, "matrix");
  const MatrixKind kind = kind_from_string(file.extra, path);
  if (file.table.header.empty() || file.table.header[0] != "region_id") {
    throw DataError(path + ": first column must be region_id");
  }
  std::vector<std::string> names(file.table.header.begin() + 1,
                                 file.table.header.end());
  const Eigen::Index n = static_cast<Eigen::Index>(file.table.rows.size());
  const Eigen::Index m = static_cast<Eigen::Index>(names.size());
  std::vector<std::string> ids;
  Eigen::MatrixXd values(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = file.table.rows[static_cast<std::size_t>(i)];
    ids.push_back(row[0]);
    for (Eigen::Index c = 0; c < m; ++c) {
      values(i, c) = parse_double(
          row[static_cast<std::size_t>(c) + 1],
          path + " line " + std::to_string(i + 3));
    }
  }
  return make_matrix(std::move(ids), std::move(names), std::move(values),
                     kind);
}

// --- population -------------------------------------------------------------

void save_population_csv(const std::vector<std::string>& ids,
                         const std::vector<long long>& population,
                         const std::string& path) {
  if (ids.size() != population.size()) {
    throw ValidationError("population vector does not match region ids");
  }
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    rows.push_back({ids[i], std::to_string(population[i])});
  }
  write_versioned_csv(path, "population", "", {"region_id", "population"},
                      rows);
}

std::map<std::string, long long> load_population_csv(const std::string& path) {
  VersionedCsv file = read_versioned_csv(path, "population");
  std::map<std::string, long long> out;
  for (std::size_t i = 0; i < file.table.rows.size(); ++i) {
    const auto& row = file.table.rows[i];
    out[row[0]] =
        parse_int(row[1], path + " line " + std::to_string(i + 3));
  }
  return out;
}

// --- scaling ----------------------------------------------------------------

void save_scaling_json(const ScalingParams& params,
                       const std::vector<std::string>& dropped,
                       const std::string& path) {
  ordered_json j;
  j["format"] = "geosom.scaling";
  j["version"] = "1.0";
  ordered_json features = ordered_json::array();
  for (std::size_t i = 0; i < params.feature_names.size(); ++i) {
    features.push_back({{"name", params.feature_names[i]},
                        {"mean", params.mean(static_cast<Eigen::Index>(i))},
                        {"std", params.std(static_cast<Eigen::Index>(i))}});
  }
  j["features"] = features;
  j["dropped"] = dropped;
  write_file(path, j.dump(2) + "\n");
}

// --- feature scores ---------------------------------------------------------

void save_feature_scores_csv(const FeatureScoreReport& report,
                             const std::string& path) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& f : report.features) {
    rows.push_back({f.name, format_double(f.weighted_variance),
                    format_double(f.r2_relevance),
                    f.ridge_fallback ? "true" : "false",
                    format_double(f.score), f.selected ? "true" : "false"});
  }
  write_versioned_csv(
      path, "feature_scores", "",
      {"name", "weighted_variance", "r2_relevance", "ridge_fallback", "score",
       "selected"},
      rows);
}

FeatureScoreReport load_feature_scores_csv(const std::string& path) {
  VersionedCsv file = read_versioned_csv(path, "feature_scores");
  FeatureScoreReport report;
  for (std::size_t i = 0; i < file.table.rows.size(); ++i) {
    const auto& row = file.table.rows[i];
    const std::string context = path + " line " + std::to_string(i + 3);
    FeatureScore f;
    f.name = row[0];
    f.weighted_variance = parse_double(row[1], context);
    f.r2_relevance = parse_double(row[2], context);
    f.ridge_fallback = row[3] == "true";
    f.score = parse_double(row[4], context);
    f.selected = row[5] == "true";
    report.features.push_back(std::move(f));
  }
  return report;
}

// --- validity ---------------------------------------------------------------

void save_validity_csv(const ValidityReport& report, const std::string& path) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& row : report.rows) {
    rows.push_back({std::to_string(row.k), format_double(row.silhouette),
                    format_double(row.dbi)});
  }
  rows.push_back({"chosen_k", std::to_string(report.chosen_k), ""});
  write_versioned_csv(path, "validity", "", {"k", "silhouette", "dbi"}, rows);
}

void save_neuron_labels_csv(const SuperClustering& clustering,
                            const std::string& path) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < clustering.neuron_labels.size(); ++i) {
    rows.push_back(
        {std::to_string(i), std::to_string(clustering.neuron_labels[i])});
  }
  write_versioned_csv(path, "neuron_labels",
                      std::to_string(clustering.k_clusters),
                      {"neuron", "cluster"}, rows);
}

// --- assignment -------------------------------------------------------------

void save_assignment_csv(const ClusterAssignment& assignment,
                         const std::string& path) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < assignment.region_ids.size(); ++i) {
    rows.push_back({assignment.region_ids[i],
                    std::to_string(assignment.bmu_index[i]),
                    std::to_string(assignment.cluster_label[i])});
  }
  write_versioned_csv(path, "assignment",
                      std::to_string(assignment.k_clusters),
                      {"region_id", "bmu", "cluster"}, rows);
}

ClusterAssignment load_assignment_csv(const std::string& path) {
  VersionedCsv file = read_versioned_csv(path, "assignment");
  ClusterAssignment out;
  out.k_clusters = static_cast<int>(
      parse_int(file.extra, path + ": cluster count annotation"));
  for (std::size_t i = 0; i < file.table.rows.size(); ++i) {
    const auto& row = file.table.rows[i];
    const std::string context = path + " line " + std::to_string(i + 3);
    out.region_ids.push_back(row[0]);
    out.bmu_index.push_back(static_cast<int>(parse_int(row[1], context)));
    out.cluster_label.push_back(static_cast<int>(parse_int(row[2], context)));
  }
  return out;
}

// --- summaries --------------------------------------------------------------

void save_summaries_csv(const std::vector<ClusterSummary>& summaries,
                        const std::string& path) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& s : summaries) {
    rows.push_back({std::to_string(s.cluster_id),
                    std::to_string(s.total_cases),
                    std::to_string(s.total_population),
                    format_double(s.rate)});
  }
  write_versioned_csv(path, "summary", "",
                      {"cluster_id", "cases", "population", "rate"}, rows);
}

std::vector<ClusterSummary> load_summaries_csv(const std::string& path) {
  VersionedCsv file = read_versioned_csv(path, "summary");
  std::vector<ClusterSummary> out;
  for (std::size_t i = 0; i < file.table.rows.size(); ++i) {
    const auto& row = file.table.rows[i];
    const std::string context = path + " line " + std::to_string(i + 3);
    ClusterSummary s;
    s.cluster_id = static_cast<int>(parse_int(row[0], context));
    s.total_cases = parse_int(row[1], context);
    s.total_population = parse_int(row[2], context);
    s.rate = parse_double(row[3], context);
    out.push_back(s);
  }
  return out;
}

}  // namespace geosom
