#include <string>
#include <vector>

#include "doctest.h"
#include "geosom/errors.hpp"
#include "geosom/serialize.hpp"
#include "support/helpers.hpp"
#include "support/oracles.hpp"

using namespace geosom;
using testutil::matrix_of;
using testutil::scratch;
using testutil::slurp;
using testutil::spit;

TEST_SUITE_BEGIN("serialize");

TEST_CASE("sha256 against known vectors") {
  auto dir = scratch("ser_sha");
  spit(dir + "/empty", "");
  CHECK(sha256_file(dir + "/empty") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  spit(dir + "/abc", "abc");
  CHECK(sha256_file(dir + "/abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK_THROWS_AS(sha256_file(dir + "/nope"), DataError);
}

TEST_CASE("matrix csv: round-trip and byte determinism") {
  auto dir = scratch("ser_matrix");
  oracle::XorShift gen(90);
  auto fm = matrix_of(gen.matrix(5, 3));
  fm.values(0, 0) = 0.1;  // not exactly representable; exercises shortest form

  save_matrix_csv(fm, dir + "/m.csv");
  const std::string first = slurp(dir + "/m.csv");
  CHECK(first.rfind("#geosom.matrix,1.0,raw_percent", 0) == 0);

  auto back = load_matrix_csv(dir + "/m.csv");
  CHECK(back.row_ids == fm.row_ids);
  CHECK(back.feature_names == fm.feature_names);
  CHECK(back.kind == fm.kind);
  CHECK((back.values - fm.values).cwiseAbs().maxCoeff() == 0.0);

  save_matrix_csv(back, dir + "/m2.csv");
  CHECK(slurp(dir + "/m2.csv") == first);
}

TEST_CASE("matrix csv: version and format guards") {
  auto dir = scratch("ser_matrix_bad");
  spit(dir + "/wrong.csv", "#geosom.other,1.0\nregion_id,f0\na,1\nb,2\n");
  CHECK_THROWS_AS(load_matrix_csv(dir + "/wrong.csv"), DataError);

  spit(dir + "/v2.csv",
       "#geosom.matrix,2.0,raw_percent\nregion_id,f0\na,1\nb,2\n");
  CHECK_THROWS_AS(load_matrix_csv(dir + "/v2.csv"), DataError);

  // minor version bumps within major 1 load fine
  spit(dir + "/v19.csv",
       "#geosom.matrix,1.9,raw_percent\nregion_id,f0\na,1\nb,2\n");
  CHECK_NOTHROW(load_matrix_csv(dir + "/v19.csv"));

  spit(dir + "/kind.csv", "#geosom.matrix,1.0,banana\nregion_id,f0\na,1\nb,2\n");
  CHECK_THROWS_AS(load_matrix_csv(dir + "/kind.csv"), DataError);
}

TEST_CASE("kernel model survives a save/load cycle bit-for-bit") {
  auto dir = scratch("ser_kernel");
  oracle::XorShift gen(91);
  auto fm = matrix_of(gen.matrix(6, 3));
  KernelSpec spec;
  spec.kind = KernelKind::Gaussian;
  spec.sigma = 1.7;
  auto model = fit_kpca(fm, spec, 2);

  save_kernel_model(model, dir + "/k.json");
  auto back = load_kernel_model(dir + "/k.json");

  CHECK(back.spec.kind == model.spec.kind);
  CHECK(back.spec.sigma == model.spec.sigma);
  CHECK(back.components == model.components);
  CHECK((back.eigenvalues - model.eigenvalues).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.coefficients - model.coefficients).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK((back.row_means - model.row_means).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.grand_mean == model.grand_mean);
  CHECK(back.training.row_ids == model.training.row_ids);

  // identical projections from the reloaded model
  auto queries = matrix_of(gen.matrix(3, 3));
  queries.feature_names = fm.feature_names;
  const Eigen::MatrixXd a = project(model, queries);
  const Eigen::MatrixXd b = project(back, queries);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);

  // re-save is byte-identical
  save_kernel_model(back, dir + "/k2.json");
  CHECK(slurp(dir + "/k2.json") == slurp(dir + "/k.json"));
}

TEST_CASE("som model survives a save/load cycle") {
  auto dir = scratch("ser_som");
  oracle::XorShift gen(92);
  auto fm = matrix_of(gen.matrix(15, 3));
  SomConfig cfg;
  cfg.rows = 3;
  cfg.cols = 3;
  cfg.sigma0 = 1.5;
  cfg.theta0 = 0.4;
  cfg.iterations = 30;
  cfg.seed = 17;
  auto model = train(fm, cfg);

  save_som_model(model, dir + "/som.json");
  auto back = load_som_model(dir + "/som.json");
  CHECK(back.lattice.rows == 3);
  CHECK(back.lattice.cols == 3);
  CHECK((back.weights - model.weights).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.config.seed == 17);
  CHECK(back.config.theta0 == 0.4);
  CHECK(back.history == model.history);
  CHECK(back.feature_names == model.feature_names);

  save_som_model(back, dir + "/som2.json");
  CHECK(slurp(dir + "/som2.json") == slurp(dir + "/som.json"));
}

TEST_CASE("som model loader rejects inconsistent documents") {
  auto dir = scratch("ser_som_bad");
  oracle::XorShift gen(93);
  auto fm = matrix_of(gen.matrix(10, 2));
  SomConfig cfg;
  cfg.rows = 2;
  cfg.cols = 2;
  cfg.sigma0 = 1.0;
  cfg.iterations = 10;
  auto model = train(fm, cfg);
  save_som_model(model, dir + "/som.json");

  std::string text = slurp(dir + "/som.json");
  // corrupt the lattice so rows*cols no longer matches the weight count
  const auto pos = text.find("\"rows\": 2");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 9, "\"rows\": 3");
  spit(dir + "/bad.json", text);
  CHECK_THROWS_AS(load_som_model(dir + "/bad.json"), DataError);
}

TEST_CASE("population csv round-trips") {
  auto dir = scratch("ser_pop");
  save_population_csv({"E1", "E2"}, {100, 250}, dir + "/pop.csv");
  auto map = load_population_csv(dir + "/pop.csv");
  REQUIRE(map.size() == 2);
  CHECK(map.at("E1") == 100);
  CHECK(map.at("E2") == 250);
  CHECK(slurp(dir + "/pop.csv").rfind("#geosom.population,1.0", 0) == 0);
}

TEST_CASE("scaling json records parameters and drops") {
  auto dir = scratch("ser_scaling");
  ScalingParams params;
  params.feature_names = {"a", "b"};
  params.mean = Eigen::VectorXd(2);
  params.mean << 1.5, -2.0;
  params.std = Eigen::VectorXd(2);
  params.std << 0.5, 3.0;
  save_scaling_json(params, {"dead"}, dir + "/s.json");
  const std::string text = slurp(dir + "/s.json");
  CHECK(text.find("geosom.scaling") != std::string::npos);
  CHECK(text.find("\"dead\"") != std::string::npos);
  CHECK(text.find("\"a\"") != std::string::npos);
  CHECK(text.find("1.5") != std::string::npos);
}

TEST_CASE("feature scores round-trip") {
  auto dir = scratch("ser_scores");
  FeatureScoreReport report;
  report.features = {{"alpha", 1.25, 0.5, false, 0.8, true},
                     {"beta", 0.5, 0.9, true, 0.2, false}};
  report.component_fractions = Eigen::VectorXd(2);
  report.component_fractions << 0.7, 0.3;
  save_feature_scores_csv(report, dir + "/fs.csv");
  auto back = load_feature_scores_csv(dir + "/fs.csv");
  REQUIRE(back.features.size() == 2);
  CHECK(back.features[0].name == "alpha");
  CHECK(back.features[0].weighted_variance == 1.25);
  CHECK(back.features[0].selected);
  CHECK(back.features[1].ridge_fallback);
  CHECK_FALSE(back.features[1].selected);
  CHECK(back.selected_names() == std::vector<std::string>{"alpha"});
}

TEST_CASE("validity csv carries rows and the chosen_k footer") {
  auto dir = scratch("ser_validity");
  ValidityReport report;
  report.rows = {{3, 0.42, 0.17}, {4, 0.5, 0.13}};
  report.chosen_k = 4;
  report.dbi_choice = 4;
  report.dbi_agrees = true;
  save_validity_csv(report, dir + "/v.csv");
  const std::string text = slurp(dir + "/v.csv");
  CHECK(text.rfind("#geosom.validity,1.0", 0) == 0);
  CHECK(text.find("k,silhouette,dbi") != std::string::npos);
  CHECK(text.find("chosen_k,4") != std::string::npos);
}

TEST_CASE("neuron labels csv carries the cluster count annotation") {
  auto dir = scratch("ser_labels");
  SuperClustering sc;
  sc.k_clusters = 2;
  sc.neuron_labels = {0, 1, 0, 1};
  sc.centroids = Eigen::MatrixXd::Zero(2, 2);
  save_neuron_labels_csv(sc, dir + "/n.csv");
  const std::string text = slurp(dir + "/n.csv");
  CHECK(text.rfind("#geosom.neuron_labels,1.0,2", 0) == 0);
  CHECK(text.find("neuron,cluster") != std::string::npos);
}

TEST_CASE("assignment csv round-trips") {
  auto dir = scratch("ser_assign");
  ClusterAssignment a;
  a.region_ids = {"E1", "E2", "E3"};
  a.bmu_index = {4, 0, 7};
  a.cluster_label = {1, 0, 1};
  a.k_clusters = 2;
  save_assignment_csv(a, dir + "/a.csv");
  auto back = load_assignment_csv(dir + "/a.csv");
  CHECK(back.region_ids == a.region_ids);
  CHECK(back.bmu_index == a.bmu_index);
  CHECK(back.cluster_label == a.cluster_label);
  CHECK(back.k_clusters == 2);
}

TEST_CASE("summaries csv round-trips") {
  auto dir = scratch("ser_summary");
  std::vector<ClusterSummary> summaries = {{0, 788, 97014, 788.0 / 97014.0},
                                           {1, 10, 100, 0.1}};
  save_summaries_csv(summaries, dir + "/s.csv");
  auto back = load_summaries_csv(dir + "/s.csv");
  REQUIRE(back.size() == 2);
  CHECK(back[0].total_cases == 788);
  CHECK(back[0].total_population == 97014);
  CHECK(back[0].rate == summaries[0].rate);
  CHECK(back[1].cluster_id == 1);
}

TEST_SUITE_END();
