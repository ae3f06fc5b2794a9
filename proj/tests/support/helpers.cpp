#include "support/helpers.hpp"

#include "geosom/csv.hpp"
#include "json.hpp"

namespace testutil {

BlobFixture load_blobs() {
  const geosom::CsvTable table = geosom::read_csv(fixture("blobs3/blobs.csv"));
  const int label_col = table.column("label");
  Eigen::MatrixXd values(table.rows.size(), 5);
  std::vector<std::string> ids;
  std::vector<int> labels;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    ids.push_back(table.rows[i][0]);
    for (int j = 0; j < 5; ++j) {
      values(static_cast<Eigen::Index>(i), j) =
          geosom::parse_double(table.rows[i][j + 1], "blobs.csv");
    }
    labels.push_back(static_cast<int>(
        geosom::parse_int(table.rows[i][label_col], "blobs.csv")));
  }
  std::vector<std::string> names = {"f1", "f2", "f3", "f4", "f5"};
  auto raw = geosom::make_matrix(ids, names, values,
                                 geosom::MatrixKind::RawPercent);
  BlobFixture out;
  out.standardized = geosom::standardize(raw).matrix;
  out.labels = std::move(labels);
  return out;
}

std::string write_tiny_dataset(const std::string& dir,
                               const std::string& feature_b_name,
                               bool outcome, long long iterations) {
  std::string census = "GEOGID,GEOGDESC,POP,A,B,C\n";
  std::string cases = "region_id,cases,population\n";
  for (int i = 0; i < 12; ++i) {
    const int pop = 800 + 37 * i;
    const int a = 100 + 10 * i;
    const int b = (i % 2) ? 300 : 120 + 3 * i;
    const int c = 50 + ((i * 29) % 83);
    census += "E" + std::to_string(i + 1) + ",Area " + std::to_string(i + 1) +
              "," + std::to_string(pop) + "," + std::to_string(a) + "," +
              std::to_string(b) + "," + std::to_string(c) + "\n";
    cases += "E" + std::to_string(i + 1) + "," + std::to_string(3 + i) + "," +
             std::to_string(pop) + "\n";
  }
  spit(dir + "/census.csv", census);
  spit(dir + "/cases.csv", cases);

  nlohmann::json recipe = {
      {"format", "geosom.recipe"},
      {"version", "1.0"},
      {"population_column", "POP"},
      {"derived",
       {{{"name", "FA"}, {"sources", {"A"}}},
        {{"name", feature_b_name}, {"sources", {"B"}}},
        {{"name", "FC"}, {"sources", {"C"}}}}}};
  spit(dir + "/recipe.json", recipe.dump(2));

  std::string geo = R"({"type":"FeatureCollection","features":[)";
  for (int i = 0; i < 12; ++i) {
    if (i) geo += ",";
    const double x = 2.0 * i;
    geo += R"({"type":"Feature","properties":{"region_id":"E)" +
           std::to_string(i + 1) + R"("},"geometry":{"type":"Polygon",)" +
           R"("coordinates":[[[)" + std::to_string(x) + R"(,0],[)" +
           std::to_string(x + 1) + R"(,0],[)" + std::to_string(x + 1) +
           R"(,1],[)" + std::to_string(x) + R"(,1],[)" + std::to_string(x) +
           R"(,0]]]}})";
  }
  geo += "]}";
  spit(dir + "/regions.geojson", geo);

  nlohmann::json config = {
      {"format", "geosom.config"},
      {"version", "1.0"},
      {"paths",
       {{"census", "census.csv"},
        {"recipe", "recipe.json"},
        {"cases", "cases.csv"},
        {"geometries", "regions.geojson"},
        {"output_dir", "out"}}},
      {"dimred",
       {{"kernel", {{"kind", "gaussian"}}},
        {"components", 2},
        {"feature_count", 2},
        {"hopkins_fraction", 0.2}}},
      {"som",
       {{"rows", 2},
        {"cols", 2},
        {"sigma0", 1.0},
        {"theta0", 0.57},
        {"iterations", iterations}}},
      {"validity", {{"k_min", 2}, {"k_max", 3}}},
      {"include_outcome_features", outcome},
      {"seed", 11}};
  spit(dir + "/config.json", config.dump(2));
  return dir + "/config.json";
}

}  // namespace testutil
