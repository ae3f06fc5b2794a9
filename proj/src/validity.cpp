#include "geosom/validity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "geosom/errors.hpp"

namespace geosom {

std::vector<int> ward_labels(const Eigen::MatrixXd& points, int k) {
  const int n = static_cast<int>(points.rows());
  if (n < 1) {
    throw ValidationError("ward_labels: no points");
  }
  if (k < 1 || k > n) {
    throw ValidationError("ward_labels: k must lie in [1, " +
                          std::to_string(n) + "], got " + std::to_string(k));
  }

  // Lance-Williams recursion over squared Euclidean dissimilarities, which
  // for Ward keeps every pair's entry proportional to the merge cost
  // (the within-cluster sum-of-squares increase).
  Eigen::MatrixXd D(n, n);
  for (int i = 0; i < n; ++i) {
    D(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j) {
      const double d = (points.row(i) - points.row(j)).squaredNorm();
      D(i, j) = d;
      D(j, i) = d;
    }
  }

  std::vector<bool> active(static_cast<std::size_t>(n), true);
  std::vector<int> size(static_cast<std::size_t>(n), 1);
  // Cluster identity = smallest member index; also the tie-break key.
  std::vector<int> rep(static_cast<std::size_t>(n));
  std::iota(rep.begin(), rep.end(), 0);

  for (int remaining = n; remaining > k; --remaining) {
    int best_a = -1, best_b = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int a = 0; a < n; ++a) {
      if (!active[static_cast<std::size_t>(a)]) continue;
      for (int b = a + 1; b < n; ++b) {
        if (!active[static_cast<std::size_t>(b)]) continue;
        const double d = D(a, b);
        if (d < best_d) {
          best_d = d;
          best_a = a;
          best_b = b;
        }
        // Equal dissimilarity: slots scan in ascending (a,b) order, so the
        // first hit is already the lexicographically smallest pair.
      }
    }
    const int a = best_a, b = best_b;
    const double nab = size[static_cast<std::size_t>(a)] +
                       size[static_cast<std::size_t>(b)];
    for (int c = 0; c < n; ++c) {
      if (!active[static_cast<std::size_t>(c)] || c == a || c == b) continue;
      const double nc = size[static_cast<std::size_t>(c)];
      const double merged =
          ((size[static_cast<std::size_t>(a)] + nc) * D(a, c) +
           (size[static_cast<std::size_t>(b)] + nc) * D(b, c) -
           nc * D(a, b)) /
          (nab + nc);
      D(a, c) = merged;
      D(c, a) = merged;
    }
    size[static_cast<std::size_t>(a)] += size[static_cast<std::size_t>(b)];
    active[static_cast<std::size_t>(b)] = false;
    rep[static_cast<std::size_t>(b)] = a;
  }

  // Resolve every point to its surviving slot, then number clusters by
  // smallest member index.
  std::vector<int> slot(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    int r = i;
    while (!active[static_cast<std::size_t>(r)]) {
      r = rep[static_cast<std::size_t>(r)];
    }
    slot[static_cast<std::size_t>(i)] = r;
  }
  std::vector<int> order;
  for (int i = 0; i < n; ++i) {
    if (active[static_cast<std::size_t>(i)]) order.push_back(i);
  }
  std::sort(order.begin(), order.end());
  std::vector<int> label_of_slot(static_cast<std::size_t>(n), -1);
  for (std::size_t c = 0; c < order.size(); ++c) {
    label_of_slot[static_cast<std::size_t>(order[c])] = static_cast<int>(c);
  }
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    labels[static_cast<std::size_t>(i)] =
        label_of_slot[static_cast<std::size_t>(slot[static_cast<std::size_t>(i)])];
  }
  return labels;
}

Eigen::MatrixXd centroids_of(const Eigen::MatrixXd& points,
                             const std::vector<int>& labels, int k) {
  if (labels.size() != static_cast<std::size_t>(points.rows())) {
    throw ValidationError("labels length does not match point count");
  }
  Eigen::MatrixXd centroids = Eigen::MatrixXd::Zero(k, points.cols());
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const int l = labels[static_cast<std::size_t>(i)];
    if (l < 0 || l >= k) {
      throw ValidationError("label " + std::to_string(l) +
                            " outside [0, " + std::to_string(k) + ")");
    }
    centroids.row(l) += points.row(i);
    ++counts[static_cast<std::size_t>(l)];
  }
  for (int c = 0; c < k; ++c) {
    if (counts[static_cast<std::size_t>(c)] == 0) {
      throw ValidationError("cluster " + std::to_string(c) + " is empty");
    }
    centroids.row(c) /= counts[static_cast<std::size_t>(c)];
  }
  return centroids;
}

SuperClustering supercluster(const SomModel& model, int k) {
  const int n = static_cast<int>(model.weights.rows());
  if (k < 2 || k > n) {
    throw ValidationError("supercluster: k must lie in [2, " +
                          std::to_string(n) + "], got " + std::to_string(k));
  }
  SuperClustering out;
  out.k_clusters = k;
  out.neuron_labels = ward_labels(model.weights, k);
  out.centroids = centroids_of(model.weights, out.neuron_labels, k);
  return out;
}

double dbi(const Eigen::MatrixXd& points, const std::vector<int>& labels,
           const Eigen::MatrixXd& centroids) {
  const int k = static_cast<int>(centroids.rows());
  if (k < 2) {
    throw ValidationError("dbi needs at least 2 clusters");
  }
  if (labels.size() != static_cast<std::size_t>(points.rows())) {
    throw ValidationError("labels length does not match point count");
  }

  std::vector<double> delta(static_cast<std::size_t>(k), 0.0);
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const int l = labels[static_cast<std::size_t>(i)];
    if (l < 0 || l >= k) {
      throw ValidationError("label " + std::to_string(l) + " outside [0, " +
                            std::to_string(k) + ")");
    }
    delta[static_cast<std::size_t>(l)] +=
        (points.row(i) - centroids.row(l)).norm();
    ++counts[static_cast<std::size_t>(l)];
  }
  bool any_multi = false;
  for (int c = 0; c < k; ++c) {
    if (counts[static_cast<std::size_t>(c)] == 0) {
      throw ValidationError("cluster " + std::to_string(c) + " is empty");
    }
    if (counts[static_cast<std::size_t>(c)] > 1) any_multi = true;
    delta[static_cast<std::size_t>(c)] /= counts[static_cast<std::size_t>(c)];
  }
  if (!any_multi) {
    throw NumericalError(
        "dbi undefined: every cluster is a singleton (zero spread)");
  }

  double sum = 0.0;
  for (int i = 0; i < k; ++i) {
    double worst = 0.0;
    for (int j = 0; j < k; ++j) {
      if (j == i) continue;
      const double sep = (centroids.row(i) - centroids.row(j)).norm();
      if (sep == 0.0) {
        throw NumericalError("dbi undefined: centroids " + std::to_string(i) +
                             " and " + std::to_string(j) + " coincide");
      }
      worst = std::max(worst, (delta[static_cast<std::size_t>(i)] +
                               delta[static_cast<std::size_t>(j)]) /
                                  sep);
    }
    sum += worst;
  }
  return sum / static_cast<double>(k);
}

SilhouetteResult silhouette(const Eigen::MatrixXd& points,
                            const std::vector<int>& labels) {
  const Eigen::Index n = points.rows();
  if (labels.size() != static_cast<std::size_t>(n)) {
    throw ValidationError("labels length does not match point count");
  }
  int k = 0;
  for (int l : labels) {
    if (l < 0) throw ValidationError("negative cluster label");
    k = std::max(k, l + 1);
  }
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  for (int l : labels) ++counts[static_cast<std::size_t>(l)];
  int non_empty = 0;
  for (int c : counts) {
    if (c > 0) ++non_empty;
  }
  if (non_empty < 2) {
    throw ValidationError("silhouette needs at least 2 clusters");
  }

  SilhouetteResult out;
  out.per_point.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int li = labels[static_cast<std::size_t>(i)];
    if (counts[static_cast<std::size_t>(li)] == 1) {
      out.per_point(i) = 0.0;  // singleton convention
      continue;
    }
    std::vector<double> dist_sum(static_cast<std::size_t>(k), 0.0);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      dist_sum[static_cast<std::size_t>(labels[static_cast<std::size_t>(j)])] +=
          (points.row(i) - points.row(j)).norm();
    }
    const double alpha = dist_sum[static_cast<std::size_t>(li)] /
                         (counts[static_cast<std::size_t>(li)] - 1);
    double beta = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      if (c == li || counts[static_cast<std::size_t>(c)] == 0) continue;
      beta = std::min(beta, dist_sum[static_cast<std::size_t>(c)] /
                                counts[static_cast<std::size_t>(c)]);
    }
    const double denom = std::max(alpha, beta);
    out.per_point(i) = denom > 0.0 ? (beta - alpha) / denom : 0.0;
  }
  out.mean = out.per_point.mean();
  return out;
}

ValidityReport choose_k(const std::vector<ValidityRow>& rows) {
  if (rows.empty()) {
    throw ValidationError("choose_k: no candidate rows");
  }
  ValidityReport report;
  report.rows = rows;
  std::sort(report.rows.begin(), report.rows.end(),
            [](const ValidityRow& a, const ValidityRow& b) { return a.k < b.k; });
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    if (report.rows[i].k == report.rows[i - 1].k) {
      throw ValidationError("choose_k: duplicate candidate k=" +
                            std::to_string(report.rows[i].k));
    }
  }
  const ValidityRow* best_sil = &report.rows.front();
  const ValidityRow* best_dbi = &report.rows.front();
  for (const auto& row : report.rows) {
    if (row.silhouette > best_sil->silhouette) best_sil = &row;
    if (row.dbi < best_dbi->dbi) best_dbi = &row;
  }
  report.chosen_k = best_sil->k;
  report.dbi_choice = best_dbi->k;
  report.dbi_agrees = report.chosen_k == report.dbi_choice;
  return report;
}

ValidityReport scan_k(const SomModel& model, int k_min, int k_max,
                      std::vector<std::string>* warnings) {
  const int n = static_cast<int>(model.weights.rows());
  if (k_min < 2 || k_min > k_max || k_max > n) {
    throw ValidationError("scan_k: invalid range [" + std::to_string(k_min) +
                          ", " + std::to_string(k_max) + "] for " +
                          std::to_string(n) + " neurons");
  }
  std::vector<ValidityRow> rows;
  for (int k = k_min; k <= k_max; ++k) {
    const std::vector<int> labels = ward_labels(model.weights, k);
    const Eigen::MatrixXd cents = centroids_of(model.weights, labels, k);
    ValidityRow row;
    row.k = k;
    row.silhouette = silhouette(model.weights, labels).mean;
    row.dbi = dbi(model.weights, labels, cents);
    rows.push_back(row);
  }
  ValidityReport report = choose_k(rows);
  if (!report.dbi_agrees && warnings) {
    warnings->push_back("validity indices disagree: silhouette chose k=" +
                        std::to_string(report.chosen_k) +
                        " but DBI prefers k=" +
                        std::to_string(report.dbi_choice));
  }
  return report;
}

ClusterAssignment assign_regions(const SomModel& model,
                                 const SuperClustering& clustering,
                                 const FeatureMatrix& X) {
  if (clustering.neuron_labels.size() !=
      static_cast<std::size_t>(model.weights.rows())) {
    throw ValidationError(
        "clustering labels do not cover the model's neurons");
  }
  if (X.values.cols() != model.weights.cols()) {
    throw ValidationError("feature width does not match the model");
  }
  ClusterAssignment out;
  out.k_clusters = clustering.k_clusters;
  out.region_ids = X.row_ids;
  out.bmu_index.reserve(static_cast<std::size_t>(X.values.rows()));
  out.cluster_label.reserve(static_cast<std::size_t>(X.values.rows()));
  for (Eigen::Index i = 0; i < X.values.rows(); ++i) {
    const int b = bmu(X.values.row(i).transpose(), model);
    out.bmu_index.push_back(b);
    out.cluster_label.push_back(
        clustering.neuron_labels[static_cast<std::size_t>(b)]);
  }
  return out;
}

}  // namespace geosom
