#pragma once

#include <string>
#include <vector>

namespace rcflow {

struct MetricsReport {
  double nmi = 0.0;
  double acc = 0.0;
  double ari = 0.0;
  double f1 = 0.0;
  int n = 0;
  int c_true = 0;
  int c_pred = 0;

  /// {"nmi":..., "acc":..., "ari":..., "f1":..., "n":...} plus class counts.
  std::string to_json() const;
};

/// Clustering agreement between two labelings of the same points:
///  - NMI with natural-log entropies, geometric-mean normalization
///  - ACC via the optimal injective cluster-to-class assignment (Hungarian)
///  - adjusted Rand index
///  - pairwise F1 over co-clustered pairs
/// Inputs are canonicalized by first occurrence, so any relabeling of either
/// argument leaves every metric bit-identical.
MetricsReport clustering_metrics(const std::vector<int>& truth,
                                 const std::vector<int>& pred);

/// Max-sum assignment on a rectangular score matrix (rows -> distinct
/// columns). Returns the chosen column per row (-1 when unmatched).
std::vector<int> hungarian_max(const std::vector<std::vector<double>>& score);

}  // namespace rcflow
