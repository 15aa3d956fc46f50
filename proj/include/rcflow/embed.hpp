#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "rcflow/graph.hpp"

namespace rcflow {

/// Spectral embedding: one row per embedded node. When the input graph is
/// disconnected the embedding is restricted to the largest component;
/// `nodes` maps embedding rows back to graph node ids.
struct Embedding {
  Eigen::MatrixXd coords;   // rows x d_target
  Eigen::VectorXd eigvals;  // ascending, the generalized eigenvalues used
  std::vector<int> nodes;   // graph node id per row
  bool restricted = false;  // true when a largest-component restriction applied
};

/// Solves L f = lambda D f on the (largest component of the) graph, drops
/// the trivial constant eigenvector, and returns the next d_target
/// eigenvectors as columns. Dense solver; supports n up to 5000.
Embedding laplacian_eigenmaps(const WeightedGraph& g, int d_target);

struct Clustering {
  std::vector<int> assign;  // cluster id per embedding row
  Eigen::MatrixXd centers;  // C x d
  double inertia = 0.0;
};

/// k-means++ initialization, Lloyd iterations to relative inertia change
/// < 1e-6 (or 300 iterations), best of `restarts` by inertia. Deterministic
/// for a fixed seed.
Clustering kmeans(const Eigen::MatrixXd& rows, int clusters, int restarts,
                  std::uint64_t seed);

Clustering kmeans(const Embedding& e, int clusters, int restarts,
                  std::uint64_t seed);

}  // namespace rcflow
