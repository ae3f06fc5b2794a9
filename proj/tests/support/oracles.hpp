#pragma once

// Independent reimplementations used as test oracles. Each takes the most
// direct route available (dense loops, explicit formulas, brute-force
// enumeration) and shares no code with the library under test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// Classic PCA by eigendecomposition of the sample covariance (divisor n).
// Scores are the centered data projected on eigenvectors, columns ordered
// by descending eigenvalue.
struct Pca {
  Eigen::MatrixXd scores;
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd axes;  // m x k, unit-norm covariance eigenvectors
};

inline Pca pca(const Eigen::MatrixXd& X, int k) {
  const auto n = X.rows();
  const Eigen::RowVectorXd mean = X.colwise().mean();
  const Eigen::MatrixXd C = X.rowwise() - mean;
  const Eigen::MatrixXd cov = C.transpose() * C / static_cast<double>(n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  Pca out;
  out.scores.resize(n, k);
  out.eigenvalues.resize(k);
  out.axes.resize(X.cols(), k);
  for (int c = 0; c < k; ++c) {
    const auto idx = cov.cols() - 1 - c;
    out.eigenvalues(c) = es.eigenvalues()(idx);
    out.axes.col(c) = es.eigenvectors().col(idx);
    out.scores.col(c) = C * es.eigenvectors().col(idx);
  }
  return out;
}

// Explicit H K H with H = I - (1/n) * ones.
inline Eigen::MatrixXd double_center(const Eigen::MatrixXd& K) {
  const auto n = K.rows();
  const Eigen::MatrixXd H =
      Eigen::MatrixXd::Identity(n, n) -
      Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  return H * K * H;
}

// Max |a| - |b| style column comparison that forgives per-column sign flips.
inline double max_abs_diff_up_to_sign(const Eigen::MatrixXd& A,
                                      const Eigen::MatrixXd& B) {
  double worst = 0.0;
  for (Eigen::Index c = 0; c < A.cols(); ++c) {
    const double same = (A.col(c) - B.col(c)).cwiseAbs().maxCoeff();
    const double flip = (A.col(c) + B.col(c)).cwiseAbs().maxCoeff();
    worst = std::max(worst, std::min(same, flip));
  }
  return worst;
}

inline int nearest_row(const Eigen::VectorXd& x, const Eigen::MatrixXd& W) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < W.rows(); ++j) {
    const double d = (W.row(j).transpose() - x).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(j);
    }
  }
  return best;
}

inline double qe(const Eigen::MatrixXd& X, const Eigen::MatrixXd& W) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const int j = nearest_row(X.row(i).transpose(), W);
    total += (X.row(i) - W.row(j)).norm();
  }
  return total / static_cast<double>(X.rows());
}

inline double distortion(const Eigen::MatrixXd& X, const Eigen::MatrixXd& W) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const int j = nearest_row(X.row(i).transpose(), W);
    total += (X.row(i) - W.row(j)).squaredNorm();
  }
  return total;
}

inline double topographic_error(const Eigen::MatrixXd& X,
                                const Eigen::MatrixXd& W, int rows, int cols) {
  (void)rows;
  int bad = 0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    int b1 = -1, b2 = -1;
    double d1 = std::numeric_limits<double>::infinity(), d2 = d1;
    for (Eigen::Index j = 0; j < W.rows(); ++j) {
      const double d = (X.row(i) - W.row(j)).squaredNorm();
      if (d < d1) {
        d2 = d1;
        b2 = b1;
        d1 = d;
        b1 = static_cast<int>(j);
      } else if (d < d2) {
        d2 = d;
        b2 = static_cast<int>(j);
      }
    }
    const int dr = std::abs(b1 / cols - b2 / cols);
    const int dc = std::abs(b1 % cols - b2 % cols);
    if (std::max(dr, dc) > 1) ++bad;
  }
  return static_cast<double>(bad) / static_cast<double>(X.rows());
}

// Naive Davies-Bouldin straight from the formula.
inline double dbi(const Eigen::MatrixXd& points, const std::vector<int>& labels,
                  int k) {
  Eigen::MatrixXd cent = Eigen::MatrixXd::Zero(k, points.cols());
  std::vector<int> count(k, 0);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    cent.row(labels[i]) += points.row(i);
    ++count[labels[i]];
  }
  for (int c = 0; c < k; ++c) cent.row(c) /= static_cast<double>(count[c]);
  std::vector<double> spread(k, 0.0);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    spread[labels[i]] += (points.row(i) - cent.row(labels[i])).norm();
  }
  for (int c = 0; c < k; ++c) spread[c] /= static_cast<double>(count[c]);
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    double worst = 0.0;
    for (int j = 0; j < k; ++j) {
      if (i == j) continue;
      const double r =
          (spread[i] + spread[j]) / (cent.row(i) - cent.row(j)).norm();
      worst = std::max(worst, r);
    }
    total += worst;
  }
  return total / static_cast<double>(k);
}

// Naive silhouette from pairwise distances.
inline std::pair<Eigen::VectorXd, double> silhouette(
    const Eigen::MatrixXd& points, const std::vector<int>& labels, int k) {
  const auto n = points.rows();
  Eigen::VectorXd s(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    std::vector<double> sum(k, 0.0);
    std::vector<int> count(k, 0);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      sum[labels[j]] += (points.row(i) - points.row(j)).norm();
      ++count[labels[j]];
    }
    const int own = labels[i];
    if (count[own] == 0) {
      s(i) = 0.0;
      continue;
    }
    const double a = sum[own] / count[own];
    double b = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      if (c == own || count[c] == 0) continue;
      b = std::min(b, sum[c] / (count[c]));
    }
    const double denom = std::max(a, b);
    s(i) = denom == 0.0 ? 0.0 : (b - a) / denom;
  }
  return {s, s.mean()};
}

// Optimal 2-partition by exhaustive enumeration of within-cluster squared
// error; feasible for <= ~15 points. Returns membership of point 0's side.
inline std::vector<bool> best_two_partition(const Eigen::MatrixXd& points) {
  const auto n = points.rows();
  double best = std::numeric_limits<double>::infinity();
  std::vector<bool> best_mask(n, false);
  for (std::uint32_t mask = 0; mask < (1u << (n - 1)); ++mask) {
    std::vector<bool> side(n, false);
    side[0] = true;
    for (Eigen::Index i = 1; i < n; ++i) side[i] = (mask >> (i - 1)) & 1u;
    double ess = 0.0;
    for (int group = 0; group < 2; ++group) {
      Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(points.cols());
      int count = 0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (side[i] == (group == 0)) {
          mean += points.row(i);
          ++count;
        }
      }
      if (count == 0) {
        ess = std::numeric_limits<double>::infinity();
        break;
      }
      mean /= static_cast<double>(count);
      for (Eigen::Index i = 0; i < n; ++i) {
        if (side[i] == (group == 0)) {
          ess += (points.row(i) - mean).squaredNorm();
        }
      }
    }
    if (ess < best) {
      best = ess;
      best_mask = side;
    }
  }
  return best_mask;
}

// R^2 of y on design A (with intercept) using SVD least squares.
inline double ols_r2(const Eigen::MatrixXd& predictors,
                     const Eigen::VectorXd& y) {
  Eigen::MatrixXd A(predictors.rows(), predictors.cols() + 1);
  A.col(0).setOnes();
  A.rightCols(predictors.cols()) = predictors;
  const Eigen::VectorXd beta =
      A.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(y);
  const double sse = (y - A * beta).squaredNorm();
  const double sst = (y.array() - y.mean()).matrix().squaredNorm();
  return 1.0 - sse / sst;
}

// Adjusted Rand index between two labelings.
inline double ari(const std::vector<int>& a, const std::vector<int>& b) {
  auto comb2 = [](long long v) { return v * (v - 1) / 2.0; };
  std::map<std::pair<int, int>, long long> cell;
  std::map<int, long long> row, col;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++cell[{a[i], b[i]}];
    ++row[a[i]];
    ++col[b[i]];
  }
  double sij = 0.0, sa = 0.0, sb = 0.0;
  for (const auto& [key, c] : cell) sij += comb2(c);
  for (const auto& [key, c] : row) sa += comb2(c);
  for (const auto& [key, c] : col) sb += comb2(c);
  const double total = comb2(static_cast<long long>(a.size()));
  const double expected = sa * sb / total;
  const double max_index = (sa + sb) / 2.0;
  return (sij - expected) / (max_index - expected);
}

// Deterministic xorshift generator for oracle-side random instances, so
// oracle tests do not depend on the library's own Rng.
struct XorShift {
  std::uint64_t state;
  explicit XorShift(std::uint64_t seed) : state(seed * 2685821657736338717ULL + 1) {}
  std::uint64_t next() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
  }
  double uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }
  double normal() {
    // Box-Muller; fresh draws each call keep it stateless enough for tests.
    const double u1 = std::max(uniform(), 1e-300);
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }
  Eigen::MatrixXd matrix(int n, int m) {
    Eigen::MatrixXd X(n, m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) X(i, j) = normal();
    return X;
  }
};

}  // namespace oracle
