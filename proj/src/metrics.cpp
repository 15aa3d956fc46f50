#include "rcflow/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "rcflow/common.hpp"

namespace rcflow {

namespace {

/// Dense ids in order of first occurrence. Any relabeling of the input maps
/// to the same canonical sequence, which is what makes the metrics exactly
/// permutation invariant.
std::vector<int> canonicalize(const std::vector<int>& labels, int& classes) {
  std::vector<int> seen;
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto it = std::find(seen.begin(), seen.end(), labels[i]);
    if (it == seen.end()) {
      out[i] = static_cast<int>(seen.size());
      seen.push_back(labels[i]);
    } else {
      out[i] = static_cast<int>(it - seen.begin());
    }
  }
  classes = static_cast<int>(seen.size());
  return out;
}

double comb2(double m) { return m * (m - 1.0) / 2.0; }

}  // namespace

std::vector<int> hungarian_max(const std::vector<std::vector<double>>& score) {
  const int rows = static_cast<int>(score.size());
  if (rows == 0) return {};
  const int cols = static_cast<int>(score.front().size());
  const int n = std::max(rows, cols);

  // Min-cost assignment with potentials on the negated, zero-padded matrix.
  std::vector<std::vector<double>> a(
      static_cast<std::size_t>(n),
      std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          -score[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<int> p(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n) + 1, kInf);
    std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = p[static_cast<std::size_t>(j0)];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = a[static_cast<std::size_t>(i0 - 1)]
                            [static_cast<std::size_t>(j - 1)] -
                           u[static_cast<std::size_t>(i0)] -
                           v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0);
  }

  std::vector<int> match(static_cast<std::size_t>(rows), -1);
  for (int j = 1; j <= n; ++j) {
    const int i = p[static_cast<std::size_t>(j)];
    if (i >= 1 && i <= rows && j <= cols)
      match[static_cast<std::size_t>(i - 1)] = j - 1;
  }
  return match;
}

MetricsReport clustering_metrics(const std::vector<int>& truth,
                                 const std::vector<int>& pred) {
  if (truth.size() != pred.size())
    throw ConfigError("label vectors must have equal length");
  const int n = static_cast<int>(truth.size());
  if (n < 2) throw ConfigError("clustering metrics need at least 2 points");

  MetricsReport rep;
  rep.n = n;
  const std::vector<int> t = canonicalize(truth, rep.c_true);
  const std::vector<int> p = canonicalize(pred, rep.c_pred);

  // Contingency table.
  std::vector<std::vector<double>> cont(
      static_cast<std::size_t>(rep.c_true),
      std::vector<double>(static_cast<std::size_t>(rep.c_pred), 0.0));
  std::vector<double> row(static_cast<std::size_t>(rep.c_true), 0.0);
  std::vector<double> col(static_cast<std::size_t>(rep.c_pred), 0.0);
  for (int i = 0; i < n; ++i) {
    cont[static_cast<std::size_t>(t[static_cast<std::size_t>(i)])]
        [static_cast<std::size_t>(p[static_cast<std::size_t>(i)])] += 1.0;
    row[static_cast<std::size_t>(t[static_cast<std::size_t>(i)])] += 1.0;
    col[static_cast<std::size_t>(p[static_cast<std::size_t>(i)])] += 1.0;
  }
  const double dn = static_cast<double>(n);

  // NMI, natural logs, geometric-mean normalization.
  double h_t = 0.0, h_p = 0.0, mi = 0.0;
  for (double r : row)
    if (r > 0.0) h_t -= (r / dn) * std::log(r / dn);
  for (double c : col)
    if (c > 0.0) h_p -= (c / dn) * std::log(c / dn);
  for (int i = 0; i < rep.c_true; ++i)
    for (int j = 0; j < rep.c_pred; ++j) {
      const double nij = cont[static_cast<std::size_t>(i)]
                             [static_cast<std::size_t>(j)];
      if (nij > 0.0)
        mi += (nij / dn) *
              std::log(dn * nij / (row[static_cast<std::size_t>(i)] *
                                   col[static_cast<std::size_t>(j)]));
    }
  if (h_t > 0.0 && h_p > 0.0) {
    rep.nmi = std::clamp(mi / std::sqrt(h_t * h_p), 0.0, 1.0);
  } else {
    // Single-cluster degeneracy: 1 iff the partitions are identical.
    rep.nmi = (rep.c_true == 1 && rep.c_pred == 1) ? 1.0 : 0.0;
  }

  // ACC via the optimal injective cluster -> class map.
  std::vector<std::vector<double>> score(
      static_cast<std::size_t>(rep.c_pred),
      std::vector<double>(static_cast<std::size_t>(rep.c_true), 0.0));
  for (int i = 0; i < rep.c_true; ++i)
    for (int j = 0; j < rep.c_pred; ++j)
      score[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
          cont[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  const std::vector<int> match = hungarian_max(score);
  double matched = 0.0;
  for (int j = 0; j < rep.c_pred; ++j)
    if (match[static_cast<std::size_t>(j)] >= 0)
      matched +=
          cont[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])]
              [static_cast<std::size_t>(j)];
  rep.acc = matched / dn;

  // Pair counts feed both ARI and pairwise F1.
  double sum_comb_cells = 0.0, sum_comb_row = 0.0, sum_comb_col = 0.0;
  for (int i = 0; i < rep.c_true; ++i)
    for (int j = 0; j < rep.c_pred; ++j)
      sum_comb_cells += comb2(
          cont[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
  for (double r : row) sum_comb_row += comb2(r);
  for (double c : col) sum_comb_col += comb2(c);
  const double total_pairs = comb2(dn);

  const double expected = sum_comb_row * sum_comb_col / total_pairs;
  const double max_index = 0.5 * (sum_comb_row + sum_comb_col);
  rep.ari = max_index > expected
                ? (sum_comb_cells - expected) / (max_index - expected)
                : (sum_comb_cells == expected ? 1.0 : 0.0);

  const double tp = sum_comb_cells;
  const double precision = sum_comb_col > 0.0 ? tp / sum_comb_col : 0.0;
  const double recall = sum_comb_row > 0.0 ? tp / sum_comb_row : 0.0;
  rep.f1 = (precision + recall) > 0.0
               ? 2.0 * precision * recall / (precision + recall)
               : 0.0;
  return rep;
}

std::string MetricsReport::to_json() const {
  std::ostringstream out;
  out << "{\"nmi\":" << format_double(nmi) << ",\"acc\":" << format_double(acc)
      << ",\"ari\":" << format_double(ari) << ",\"f1\":" << format_double(f1)
      << ",\"n\":" << n << ",\"c_true\":" << c_true
      << ",\"c_pred\":" << c_pred << "}";
  return out.str();
}

}  // namespace rcflow
