#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "geosom/dimred.hpp"
#include "geosom/errors.hpp"
#include "support/helpers.hpp"
#include "support/oracles.hpp"

using namespace geosom;
using testutil::matrix_of;

namespace {

KernelSpec gaussian(double sigma) {
  KernelSpec spec;
  spec.kind = KernelKind::Gaussian;
  spec.sigma = sigma;
  return spec;
}

KernelSpec linear() {
  KernelSpec spec;
  spec.kind = KernelKind::Linear;
  return spec;
}

}  // namespace

TEST_SUITE_BEGIN("dimred");

TEST_CASE("kernel values: trivial identities") {
  Eigen::VectorXd a(2), b(2);
  a << 1, 2;
  b << 3, 4;
  CHECK(kernel_value(a, a, gaussian(0.7)) == doctest::Approx(1.0));
  // force ||a-b||^2 = 2 sigma^2: distance^2 = 8, sigma = 2
  CHECK(kernel_value(a, b, gaussian(2.0)) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(kernel_value(a, b, linear()) == doctest::Approx(11.0));
  CHECK_THROWS_AS(kernel_value(a, Eigen::VectorXd::Zero(3), linear()),
                  ValidationError);
  CHECK_THROWS_AS(kernel_value(a, b, gaussian(0.0)), ValidationError);
}

TEST_CASE("median pairwise distance: odd and even pair counts") {
  Eigen::MatrixXd odd(3, 1);
  odd << 0, 1, 3;  // distances {1, 3, 2} -> median 2
  CHECK(median_pairwise_distance(odd) == doctest::Approx(2.0));

  Eigen::MatrixXd even(4, 1);
  even << 0, 1, 3, 6;  // distances {1,3,6,2,5,3} -> (3+3)/2
  CHECK(median_pairwise_distance(even) == doctest::Approx(3.0));

  CHECK_THROWS_AS(median_pairwise_distance(Eigen::MatrixXd::Zero(1, 2)),
                  ValidationError);
}

TEST_CASE("centered kernel: duplicate rows give the zero matrix") {
  Eigen::MatrixXd v(2, 2);
  v << 1, 2, 1, 2;
  auto ck = build_centered_kernel(matrix_of(v), gaussian(1.0));
  CHECK(ck.k.cwiseAbs().maxCoeff() < 1e-12);
  CHECK(ck.grand_mean == doctest::Approx(1.0));
}

TEST_CASE("centered kernel: row sums vanish and H K H matches") {
  oracle::XorShift gen(404);
  const Eigen::MatrixXd X = gen.matrix(4, 2);
  auto fm = matrix_of(X);
  auto ck = build_centered_kernel(fm, gaussian(1.3));

  CHECK(ck.k.rowwise().sum().cwiseAbs().maxCoeff() < 1e-8);
  CHECK((ck.k - ck.k.transpose()).cwiseAbs().maxCoeff() < 1e-12);

  // brute-force oracle on the raw kernel matrix
  Eigen::MatrixXd K(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      K(i, j) = kernel_value(X.row(i).transpose(), X.row(j).transpose(),
                             gaussian(1.3));
  CHECK((ck.k - oracle::double_center(K)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("kpca with linear kernel reproduces classic PCA") {
  oracle::XorShift gen(11);
  Eigen::MatrixXd X = gen.matrix(6, 3);
  X.rowwise() -= X.colwise().mean();
  auto fm = matrix_of(X);

  auto model = fit_kpca(fm, linear(), 2);
  const Eigen::MatrixXd scores = project(model, fm);
  const auto ref = oracle::pca(X, 2);

  CHECK(oracle::max_abs_diff_up_to_sign(scores, ref.scores) < 1e-8);
  for (int c = 0; c < 2; ++c) {
    CHECK(model.eigenvalues(c) ==
          doctest::Approx(ref.eigenvalues(c)).epsilon(1e-10));
  }
}

TEST_CASE("kpca surfaces rank deficiency") {
  Eigen::MatrixXd v(5, 2);
  v << 1, 2, 3, 4, 1, 2, 5, 6, 1, 2;  // collinear, rank 1 after centering
  auto model = fit_kpca(matrix_of(v), linear(), 1);
  CHECK(model.eigenvalues.size() == 5);  // full spectrum kept
  CHECK(model.eigenvalues(0) > 0.0);
  CHECK(model.eigenvalues.tail(4).maxCoeff() <= 1e-8);
  // asking for components beyond the rank is refused, not silently padded
  CHECK_THROWS_AS(fit_kpca(matrix_of(v), linear(), 2), NumericalError);
}

TEST_CASE("kpca trace identity at k = n-1") {
  oracle::XorShift gen(77);
  const Eigen::MatrixXd X = gen.matrix(5, 3);
  auto fm = matrix_of(X);
  auto model = fit_kpca(fm, gaussian(1.1), 4);
  auto ck = build_centered_kernel(fm, gaussian(1.1));
  // eigenvalues are stored at covariance scale theta/n; undo it
  CHECK(model.eigenvalues.sum() * 5.0 ==
        doctest::Approx(ck.k.trace()).epsilon(1e-8));
}

TEST_CASE("projecting training rows reproduces the fitted scores") {
  oracle::XorShift gen(21);
  const Eigen::MatrixXd X = gen.matrix(7, 3);
  auto fm = matrix_of(X);
  auto model = fit_kpca(fm, gaussian(2.0), 3);
  const Eigen::MatrixXd scores = project(model, fm);

  // score column c should equal theta_c * a_c = sqrt(theta_c) u_c
  for (int c = 0; c < 3; ++c) {
    const double theta = model.eigenvalues(c) * 7.0;  // kernel scale
    const Eigen::VectorXd expect = theta * model.coefficients.row(c).transpose();
    CHECK((scores.col(c) - expect).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("projection is deterministic for duplicated query points") {
  oracle::XorShift gen(33);
  const Eigen::MatrixXd X = gen.matrix(6, 2);
  auto fm = matrix_of(X);
  auto model = fit_kpca(fm, gaussian(1.5), 2);

  Eigen::MatrixXd q(2, 2);
  q.row(0) = X.row(0);
  q.row(1) = X.row(0);
  auto qm = make_matrix({"q1", "q2"}, fm.feature_names, q,
                        MatrixKind::RawPercent);
  const Eigen::MatrixXd s = project(model, qm);
  CHECK((s.row(0) - s.row(1)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("out-of-sample linear projections match the PCA oracle") {
  oracle::XorShift gen(55);
  const Eigen::MatrixXd X = gen.matrix(8, 3);
  const Eigen::MatrixXd Xnew = gen.matrix(4, 3);
  auto fm = matrix_of(X);
  auto model = fit_kpca(fm, linear(), 2);

  const Eigen::MatrixXd train_scores = project(model, fm);
  auto newm = make_matrix({"a", "b", "c", "d"}, fm.feature_names, Xnew,
                          MatrixKind::RawPercent);
  const Eigen::MatrixXd new_scores = project(model, newm);

  const auto ref = oracle::pca(X, 2);
  const Eigen::RowVectorXd mean = X.colwise().mean();
  const Eigen::MatrixXd ref_new = (Xnew.rowwise() - mean) * ref.axes;

  // resolve each component's sign on the training scores, then demand the
  // same orientation fits the new points
  for (int c = 0; c < 2; ++c) {
    const double same =
        (train_scores.col(c) - ref.scores.col(c)).cwiseAbs().maxCoeff();
    const double sign = same < 1e-8 ? 1.0 : -1.0;
    CHECK((train_scores.col(c) - sign * ref.scores.col(c))
              .cwiseAbs()
              .maxCoeff() < 1e-8);
    CHECK((new_scores.col(c) - sign * ref_new.col(c)).cwiseAbs().maxCoeff() <
          1e-8);
  }
}

TEST_CASE("project validates feature names") {
  oracle::XorShift gen(91);
  auto fm = matrix_of(gen.matrix(5, 2));
  auto model = fit_kpca(fm, gaussian(1.0), 2);
  auto other = make_matrix({"x", "y"}, {"other0", "other1"},
                           Eigen::MatrixXd::Zero(2, 2),
                           MatrixKind::RawPercent);
  CHECK_THROWS_AS(project(model, other), ValidationError);
}

TEST_CASE("kpca rejects out-of-range component counts") {
  oracle::XorShift gen(14);
  auto fm = matrix_of(gen.matrix(5, 2));
  CHECK_THROWS_AS(fit_kpca(fm, gaussian(1.0), 0), ValidationError);
  CHECK_THROWS_AS(fit_kpca(fm, gaussian(1.0), 5), ValidationError);
  CHECK_NOTHROW(fit_kpca(fm, gaussian(1.0), 4));
}

TEST_CASE("kpca raises NumericalError when a retained eigenvalue vanishes") {
  Eigen::MatrixXd v(6, 2);
  v << 1, 2, 1, 2, 1, 2, 9, 5, 9, 5, 9, 5;  // two distinct points: rank 1
  CHECK_THROWS_AS(fit_kpca(matrix_of(v), gaussian(1.0), 3), NumericalError);
}

TEST_CASE("explained variance fractions") {
  KernelModel model;
  model.components = 2;
  model.eigenvalues = Eigen::VectorXd(2);
  model.eigenvalues << 3, 1;
  auto f = explained_variance_fractions(model);
  CHECK(f(0) == doctest::Approx(0.75));
  CHECK(f(1) == doctest::Approx(0.25));

  model.eigenvalues *= 10.0;
  auto f10 = explained_variance_fractions(model);
  CHECK((f - f10).cwiseAbs().maxCoeff() < 1e-15);

  // rank-1 data with a single retained component
  Eigen::MatrixXd v(4, 2);
  v << 1, 2, 2, 4, 3, 6, 4, 8;
  auto rank1 = fit_kpca(matrix_of(v), linear(), 1);
  auto fr = explained_variance_fractions(rank1);
  REQUIRE(fr.size() == 1);
  CHECK(fr(0) == doctest::Approx(1.0).epsilon(1e-10));

  KernelModel degenerate;
  degenerate.components = 1;
  degenerate.eigenvalues = Eigen::VectorXd::Zero(2);
  CHECK_THROWS_AS(explained_variance_fractions(degenerate), NumericalError);
}

TEST_CASE("weighted variance: uniform weights reduce to population variance") {
  Eigen::MatrixXd v(4, 1);
  v << 1, 2, 3, 10;
  const double pop_var = (v.col(0).array() - v.col(0).mean()).square().mean();
  auto wv = feature_weighted_variance(matrix_of(v),
                                      Eigen::VectorXd::Constant(4, 2.5));
  CHECK(wv(0) == doctest::Approx(pop_var).epsilon(1e-12));
}

TEST_CASE("weighted variance: hand case and guards") {
  Eigen::MatrixXd v(2, 2);
  v << 0, 7, 2, 7;
  auto wv = feature_weighted_variance(matrix_of(v),
                                      Eigen::VectorXd::Constant(2, 1.0));
  CHECK(wv(0) == doctest::Approx(1.0));
  CHECK(wv(1) == doctest::Approx(0.0));

  Eigen::VectorXd bad(2);
  bad << 1.0, 0.0;
  CHECK_THROWS_AS(feature_weighted_variance(matrix_of(v), bad),
                  ValidationError);
  CHECK_THROWS_AS(feature_weighted_variance(
                      matrix_of(v), Eigen::VectorXd::Constant(3, 1.0)),
                  ValidationError);
}

TEST_CASE("leverage weights are positive with mean one") {
  oracle::XorShift gen(8);
  const Eigen::MatrixXd scores = gen.matrix(12, 3);
  auto w = leverage_weights(scores);
  REQUIRE(w.size() == 12);
  CHECK(w.mean() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(w.minCoeff() >= 0.0);
  CHECK_THROWS_AS(leverage_weights(Eigen::MatrixXd::Zero(4, 2)),
                  NumericalError);
}

TEST_CASE("relevance r2: perfect collinearity") {
  oracle::XorShift gen(17);
  Eigen::MatrixXd X(8, 3);
  X.col(0) = gen.matrix(8, 1);
  X.col(1) = gen.matrix(8, 1);
  X.col(2) = X.col(0);  // exact duplicate
  auto rel = relevance_r2(matrix_of(X));
  CHECK(rel.r2(0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rel.r2(2) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("relevance r2: independent noise stays low") {
  oracle::XorShift gen(2024);
  const Eigen::MatrixXd X = gen.matrix(500, 4);
  auto rel = relevance_r2(matrix_of(X));
  for (int j = 0; j < 4; ++j) CHECK(rel.r2(j) < 0.1);
}

TEST_CASE("relevance r2 matches the closed-form OLS oracle") {
  Eigen::MatrixXd X(4, 2);
  X.col(0) << 1, 2, 3, 4;
  X.col(1) << 2 * 1 + 0.1, 2 * 2 - 0.1, 2 * 3 + 0.1, 2 * 4 - 0.1;
  auto rel = relevance_r2(matrix_of(X));
  const double expect = oracle::ols_r2(X.col(1), X.col(0));
  CHECK(rel.r2(0) == doctest::Approx(expect).epsilon(1e-10));
  CHECK(rel.r2(1) == doctest::Approx(expect).epsilon(1e-10));
  CHECK_FALSE(rel.ridge_fallback[0]);
}

TEST_CASE("relevance r2 guards") {
  Eigen::MatrixXd X(3, 3);  // n must exceed m
  X.setRandom();
  CHECK_THROWS_AS(relevance_r2(matrix_of(X)), ValidationError);
  Eigen::MatrixXd one(4, 1);
  one.setRandom();
  CHECK_THROWS_AS(relevance_r2(matrix_of(one)), ValidationError);
}

TEST_CASE("hopkins: reproducible, bounded, and errors on bad input") {
  oracle::XorShift gen(5);
  auto fm = matrix_of(gen.matrix(50, 3));
  const double h1 = hopkins(fm, 0.2, 99);
  const double h2 = hopkins(fm, 0.2, 99);
  CHECK(h1 == h2);
  CHECK(h1 > 0.0);
  CHECK(h1 < 1.0);
  CHECK(hopkins(fm, 0.2, 100) != h1);  // different seed, different sample

  CHECK_THROWS_AS(hopkins(matrix_of(gen.matrix(5, 2)), 0.2, 1),
                  ValidationError);
  CHECK_THROWS_AS(hopkins(fm, 0.0, 1), ValidationError);
  CHECK_THROWS_AS(hopkins(fm, 1.0, 1), ValidationError);
}

TEST_CASE("hopkins separates uniform noise from blobs") {
  // single-seed smoke check; the 20-seed version runs in acceptance
  oracle::XorShift gen(31);
  Eigen::MatrixXd U(500, 5);
  for (int i = 0; i < 500; ++i)
    for (int j = 0; j < 5; ++j) U(i, j) = gen.uniform();
  const double h_null = hopkins(matrix_of(U), 0.1, 1);
  CHECK(h_null > 0.35);
  CHECK(h_null < 0.65);

  auto blobs = testutil::load_blobs();
  const double h_blob = hopkins(blobs.standardized, 0.1, 1);
  CHECK(h_blob >= 0.75);
}

TEST_CASE("select_features: count = m selects everything") {
  std::vector<std::string> names = {"a", "b", "c"};
  Eigen::VectorXd wv(3), fr(2);
  wv << 1.0, 2.0, 3.0;
  fr << 0.6, 0.4;
  RelevanceResult rel;
  rel.r2 = Eigen::VectorXd::Constant(3, 0.5);
  rel.ridge_fallback = {false, false, false};
  auto report = select_features(names, wv, rel, fr, 3);
  for (const auto& f : report.features) CHECK(f.selected);
  CHECK(report.selected_names() == names);
}

TEST_CASE("select_features: dominant feature ranks first") {
  std::vector<std::string> names = {"meh", "star", "noise"};
  Eigen::VectorXd wv(3), fr(1);
  wv << 0.2, 5.0, 0.1;
  fr << 1.0;
  RelevanceResult rel;
  rel.r2 = Eigen::VectorXd(3);
  rel.r2 << 0.9, 0.0, 0.95;
  rel.ridge_fallback = {false, false, false};
  auto report = select_features(names, wv, rel, fr, 1);
  CHECK(report.selected_names() == std::vector<std::string>{"star"});
  // scores: star = 0.5*1 + 0.5*1 = 1.0, others far below
  for (const auto& f : report.features) {
    if (f.name == "star") {
      CHECK(f.score == doctest::Approx(1.0));
      CHECK(f.selected);
    } else {
      CHECK_FALSE(f.selected);
    }
  }
}

TEST_CASE("select_features: equal scores break ties by name") {
  std::vector<std::string> names = {"zeta", "alpha", "mid"};
  Eigen::VectorXd wv = Eigen::VectorXd::Constant(3, 2.0);  // constant -> 0
  Eigen::VectorXd fr(1);
  fr << 1.0;
  RelevanceResult rel;
  rel.r2 = Eigen::VectorXd::Constant(3, 0.5);
  rel.ridge_fallback = {false, false, false};
  auto report = select_features(names, wv, rel, fr, 2);
  CHECK(report.selected_names() ==
        std::vector<std::string>{"alpha", "mid"});
}

TEST_CASE("select_features rejects bad counts") {
  std::vector<std::string> names = {"a", "b"};
  Eigen::VectorXd wv(2), fr(1);
  wv << 1, 2;
  fr << 1.0;
  RelevanceResult rel;
  rel.r2 = Eigen::VectorXd::Constant(2, 0.1);
  rel.ridge_fallback = {false, false};
  CHECK_THROWS_AS(select_features(names, wv, rel, fr, 0), ValidationError);
  CHECK_THROWS_AS(select_features(names, wv, rel, fr, 3), ValidationError);
}

TEST_SUITE_END();
