#include "geosom/dimred.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "geosom/errors.hpp"
#include "geosom/rng.hpp"

namespace geosom {

void KernelSpec::validate() const {
  if (kind == KernelKind::Gaussian && !(sigma > 0.0)) {
    throw ValidationError("gaussian kernel requires sigma > 0, got " +
                          std::to_string(sigma));
  }
}

double kernel_value(const Eigen::VectorXd& xi, const Eigen::VectorXd& xj,
                    const KernelSpec& spec) {
  if (xi.size() != xj.size()) {
    throw ValidationError("kernel_value: vector lengths differ (" +
                          std::to_string(xi.size()) + " vs " +
                          std::to_string(xj.size()) + ")");
  }
  spec.validate();
  if (spec.kind == KernelKind::Linear) {
    return xi.dot(xj);
  }
  const double d2 = (xi - xj).squaredNorm();
  return std::exp(-d2 / (2.0 * spec.sigma * spec.sigma));
}

double median_pairwise_distance(const Eigen::MatrixXd& X) {
  const Eigen::Index n = X.rows();
  if (n < 2) {
    throw ValidationError("median_pairwise_distance needs at least 2 rows");
  }
  std::vector<double> d;
  d.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      d.push_back((X.row(i) - X.row(j)).norm());
    }
  }
  std::sort(d.begin(), d.end());
  const std::size_t half = d.size() / 2;
  if (d.size() % 2 == 1) return d[half];
  return 0.5 * (d[half - 1] + d[half]);
}

namespace {

Eigen::MatrixXd raw_kernel_matrix(const Eigen::MatrixXd& X,
                                  const KernelSpec& spec) {
  const Eigen::Index n = X.rows();
  Eigen::MatrixXd K(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      double v;
      if (spec.kind == KernelKind::Linear) {
        v = X.row(i).dot(X.row(j));
      } else {
        const double d2 = (X.row(i) - X.row(j)).squaredNorm();
        v = std::exp(-d2 / (2.0 * spec.sigma * spec.sigma));
      }
      K(i, j) = v;
      K(j, i) = v;
    }
  }
  return K;
}

}  // namespace

CenteredKernel build_centered_kernel(const FeatureMatrix& X,
                                     const KernelSpec& spec) {
  spec.validate();
  if (!X.values.allFinite()) {
    throw ValidationError("kernel input contains non-finite values");
  }
  const Eigen::Index n = X.values.rows();
  Eigen::MatrixXd K = raw_kernel_matrix(X.values, spec);
  if (!K.allFinite()) {
    throw NumericalError("kernel matrix contains non-finite entries");
  }
  CenteredKernel out;
  out.row_means = K.rowwise().mean();
  out.grand_mean = out.row_means.mean();
  out.k.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double v =
          K(i, j) - out.row_means(i) - out.row_means(j) + out.grand_mean;
      out.k(i, j) = v;
      out.k(j, i) = v;
    }
  }
  return out;
}

KernelModel fit_kpca(const FeatureMatrix& X, const KernelSpec& spec, int k) {
  const Eigen::Index n = X.values.rows();
  if (k < 1 || k > n - 1) {
    throw ValidationError("components k must lie in [1, n-1]; got k=" +
                          std::to_string(k) + " with n=" + std::to_string(n));
  }
  CenteredKernel ck = build_centered_kernel(X, spec);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(ck.k);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigendecomposition of the centered kernel failed");
  }
  // Eigen returns ascending order; flip to descending.
  Eigen::VectorXd theta = solver.eigenvalues().reverse();
  Eigen::MatrixXd U = solver.eigenvectors().rowwise().reverse();

  if (theta.minCoeff() < -1e-9) {
    throw NumericalError(
        "centered kernel has a significantly negative eigenvalue: " +
        std::to_string(theta.minCoeff()));
  }
  theta = theta.cwiseMax(0.0);

  // Fix each eigenvector's sign so its largest-magnitude entry is positive;
  // keeps serialized models stable across eigensolver quirks.
  for (Eigen::Index c = 0; c < U.cols(); ++c) {
    Eigen::Index imax;
    U.col(c).cwiseAbs().maxCoeff(&imax);
    if (U(imax, c) < 0.0) U.col(c) = -U.col(c);
  }

  const double theta_max = theta(0);
  KernelModel model;
  model.spec = spec;
  model.training = X;
  model.row_means = ck.row_means;
  model.grand_mean = ck.grand_mean;
  model.eigenvalues = theta / static_cast<double>(n);  // covariance scale
  model.components = k;
  model.coefficients.resize(k, n);
  for (int c = 0; c < k; ++c) {
    const double th = theta(c);
    if (th <= 1e-10 * std::max(theta_max, 1.0)) {
      throw NumericalError(
          "component " + std::to_string(c) +
          " has a vanishing eigenvalue; the data rank is below k");
    }
    model.coefficients.row(c) = U.col(c).transpose() / std::sqrt(th);
  }
  return model;
}

Eigen::MatrixXd project(const KernelModel& model, const FeatureMatrix& X_new) {
  if (X_new.feature_names != model.training.feature_names) {
    throw ValidationError(
        "projection input columns do not match the fitted features");
  }
  const Eigen::Index n = model.training.values.rows();
  const Eigen::Index p = X_new.values.rows();
  Eigen::MatrixXd Kx(p, n);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (model.spec.kind == KernelKind::Linear) {
        Kx(i, j) = X_new.values.row(i).dot(model.training.values.row(j));
      } else {
        const double d2 =
            (X_new.values.row(i) - model.training.values.row(j)).squaredNorm();
        Kx(i, j) = std::exp(-d2 / (2.0 * model.spec.sigma * model.spec.sigma));
      }
    }
  }
  // Test-point centering with the training statistics.
  Eigen::VectorXd new_row_means = Kx.rowwise().mean();
  Eigen::MatrixXd centered = Kx;
  centered.colwise() -= new_row_means;
  centered.rowwise() -= model.row_means.transpose();
  centered.array() += model.grand_mean;
  return centered * model.coefficients.transpose();
}

Eigen::VectorXd explained_variance_fractions(const KernelModel& model) {
  const double total = model.eigenvalues.sum();
  if (!(total > 0.0)) {
    throw NumericalError("all kernel eigenvalues are zero");
  }
  return model.eigenvalues.head(model.components) / total;
}

Eigen::VectorXd feature_weighted_variance(const FeatureMatrix& X,
                                          const Eigen::VectorXd& weights) {
  const Eigen::Index n = X.values.rows();
  if (weights.size() != n) {
    throw ValidationError("weights length does not match row count");
  }
  if ((weights.array() <= 0.0).any()) {
    throw ValidationError("weighted variance requires strictly positive weights");
  }
  const Eigen::ArrayXd w2 = weights.array().square();
  const double w2_sum = w2.sum();
  Eigen::VectorXd out(X.values.cols());
  for (Eigen::Index c = 0; c < X.values.cols(); ++c) {
    const Eigen::ArrayXd col = X.values.col(c).array();
    const double xbar = (w2 * col).sum() / w2_sum;
    out(c) = (w2 * (col - xbar).square()).sum() / w2_sum;
  }
  return out;
}

Eigen::VectorXd leverage_weights(const Eigen::MatrixXd& scores) {
  Eigen::VectorXd norms = scores.rowwise().norm();
  const double mean = norms.mean();
  if (!(mean > 0.0)) {
    throw NumericalError("all component scores are zero; no leverage defined");
  }
  return norms / mean;
}

RelevanceResult relevance_r2(const FeatureMatrix& X) {
  const Eigen::Index n = X.values.rows();
  const Eigen::Index m = X.values.cols();
  if (m < 2) {
    throw ValidationError("relevance_r2 needs at least 2 features");
  }
  if (n <= m) {
    throw ValidationError(
        "relevance_r2 needs more rows than features (n=" + std::to_string(n) +
        ", m=" + std::to_string(m) + ")");
  }
  RelevanceResult out;
  out.r2.resize(m);
  out.ridge_fallback.assign(static_cast<std::size_t>(m), false);

  Eigen::MatrixXd A(n, m);  // intercept + the m-1 other columns
  for (Eigen::Index j = 0; j < m; ++j) {
    A.col(0).setOnes();
    Eigen::Index dst = 1;
    for (Eigen::Index c = 0; c < m; ++c) {
      if (c == j) continue;
      A.col(dst++) = X.values.col(c);
    }
    const Eigen::VectorXd y = X.values.col(j);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    Eigen::VectorXd beta;
    if (qr.rank() < A.cols()) {
      out.ridge_fallback[static_cast<std::size_t>(j)] = true;
      Eigen::MatrixXd G = A.transpose() * A;
      G.diagonal().array() += 1e-8;
      beta = G.ldlt().solve(A.transpose() * y);
    } else {
      beta = qr.solve(y);
    }
    const Eigen::VectorXd resid = y - A * beta;
    const double ybar = y.mean();
    const double sst = (y.array() - ybar).square().sum();
    double r2;
    if (sst <= 0.0) {
      r2 = 1.0;  // constant target: the intercept alone is a perfect fit
    } else {
      r2 = 1.0 - resid.squaredNorm() / sst;
    }
    out.r2(j) = std::clamp(r2, 0.0, 1.0);
  }
  return out;
}

double hopkins(const FeatureMatrix& X, double sample_fraction,
               std::uint64_t seed) {
  const Eigen::Index n = X.values.rows();
  if (n < 10) {
    throw ValidationError("hopkins needs at least 10 rows");
  }
  if (!(sample_fraction > 0.0 && sample_fraction < 1.0)) {
    throw ValidationError("hopkins sample_fraction must lie in (0,1)");
  }
  const std::size_t m = static_cast<std::size_t>(
      std::ceil(sample_fraction * static_cast<double>(n)));

  Rng rng(seed);
  std::vector<std::size_t> sampled =
      rng.sample_without_replacement(static_cast<std::size_t>(n), m);

  const Eigen::VectorXd lo = X.values.colwise().minCoeff();
  const Eigen::VectorXd hi = X.values.colwise().maxCoeff();
  const Eigen::Index d = X.values.cols();
  Eigen::MatrixXd synthetic(static_cast<Eigen::Index>(m), d);
  for (std::size_t i = 0; i < m; ++i) {
    for (Eigen::Index c = 0; c < d; ++c) {
      synthetic(static_cast<Eigen::Index>(i), c) = rng.uniform(lo(c), hi(c));
    }
  }

  double u_sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index r = 0; r < n; ++r) {
      best = std::min(
          best,
          (synthetic.row(static_cast<Eigen::Index>(i)) - X.values.row(r))
              .squaredNorm());
    }
    u_sum += std::sqrt(best);
  }
  double w_sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const Eigen::Index self = static_cast<Eigen::Index>(sampled[i]);
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r == self) continue;
      best = std::min(best,
                      (X.values.row(self) - X.values.row(r)).squaredNorm());
    }
    w_sum += std::sqrt(best);
  }
  const double denom = u_sum + w_sum;
  if (!(denom > 0.0)) {
    throw NumericalError("hopkins: all points coincide");
  }
  return u_sum / denom;
}

std::vector<std::string> FeatureScoreReport::selected_names() const {
  std::vector<std::string> out;
  for (const auto& f : features) {
    if (f.selected) out.push_back(f.name);
  }
  return out;
}

FeatureScoreReport select_features(const std::vector<std::string>& names,
                                   const Eigen::VectorXd& weighted_variance,
                                   const RelevanceResult& relevance,
                                   const Eigen::VectorXd& fractions,
                                   int count) {
  const std::size_t m = names.size();
  if (weighted_variance.size() != static_cast<Eigen::Index>(m) ||
      relevance.r2.size() != static_cast<Eigen::Index>(m)) {
    throw ValidationError("select_features: input lengths disagree");
  }
  if (count < 1 || count > static_cast<int>(m)) {
    throw ValidationError("selection count must lie in [1, " +
                          std::to_string(m) + "]; got " +
                          std::to_string(count));
  }

  const double wv_min = weighted_variance.minCoeff();
  const double wv_max = weighted_variance.maxCoeff();
  const double range = wv_max - wv_min;

  FeatureScoreReport report;
  report.component_fractions = fractions;
  report.features.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    FeatureScore& f = report.features[i];
    f.name = names[i];
    f.weighted_variance = weighted_variance(static_cast<Eigen::Index>(i));
    f.r2_relevance = relevance.r2(static_cast<Eigen::Index>(i));
    f.ridge_fallback = relevance.ridge_fallback[i];
    const double nwv =
        range > 0.0 ? (f.weighted_variance - wv_min) / range : 0.0;
    f.score = 0.5 * nwv + 0.5 * (1.0 - f.r2_relevance);
  }

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (report.features[a].score != report.features[b].score) {
      return report.features[a].score > report.features[b].score;
    }
    return report.features[a].name < report.features[b].name;
  });
  for (int i = 0; i < count; ++i) {
    report.features[order[static_cast<std::size_t>(i)]].selected = true;
  }
  return report;
}

}  // namespace geosom
