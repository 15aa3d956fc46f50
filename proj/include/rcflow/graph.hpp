#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rcflow/dataset.hpp"

namespace rcflow {

struct Edge {
  int u = 0;  // u < v
  int v = 0;
  double w = 0.0;  // conductance / similarity, > 0
};

/// Undirected weighted graph. Edges are stored once with u < v, sorted
/// lexicographically; adjacency lists carry (neighbor, edge index) pairs.
/// Immutable after construction by convention.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  WeightedGraph(int n, std::vector<Edge> edges, double bandwidth = 0.0);

  int n() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }
  double bandwidth() const { return bandwidth_; }

  const std::vector<std::pair<int, int>>& neighbors(int node) const {
    return adj_[static_cast<std::size_t>(node)];
  }
  int degree(int node) const {
    return static_cast<int>(adj_[static_cast<std::size_t>(node)].size());
  }

  /// Edge index for (u, v) in either order, or -1 when absent.
  int find_edge(int u, int v) const;

  /// Copy with the same topology and new per-edge weights.
  WeightedGraph with_weights(const std::vector<double>& weights) const;

  /// Throws ConfigError on invariant violations (self-loops, duplicates,
  /// non-positive or non-finite weights, indices out of range).
  void validate() const;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::pair<int, int>>> adj_;
  double bandwidth_ = 0.0;
};

/// Per-edge reciprocal distances d = 1/w, aligned with the edge index.
std::vector<double> edge_distances(const WeightedGraph& g);

/// kNN affinity graph: each node linked to its k nearest Euclidean
/// neighbors, symmetrized by union, weight exp(-|xi-xj|^2 / t). When
/// bandwidth is unset, t is the mean squared distance to the k-th neighbor.
WeightedGraph knn_graph(const PointCloud& cloud, int k,
                        std::optional<double> bandwidth = std::nullopt);

/// L = D - W, symmetric, rows summing to zero.
Eigen::SparseMatrix<double> laplacian(const WeightedGraph& g);

/// Component id per node (0-based) and the component count.
std::pair<std::vector<int>, int> connected_components(const WeightedGraph& g);

bool is_connected(const WeightedGraph& g);

/// Edge-list TSV: "u<TAB>v<TAB>w" per line, u < v, shortest round-trip
/// decimals.
void save_edge_tsv(const WeightedGraph& g, const std::string& path);
WeightedGraph load_edge_tsv(const std::string& path);

}  // namespace rcflow
