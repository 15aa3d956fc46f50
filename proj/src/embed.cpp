#include "rcflow/embed.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rcflow/common.hpp"

namespace rcflow {

namespace {

constexpr int kDenseEigenCap = 5000;

WeightedGraph largest_component_subgraph(const WeightedGraph& g,
                                         std::vector<int>& nodes) {
  const auto [comp, count] = connected_components(g);
  std::vector<int> sizes(static_cast<std::size_t>(count), 0);
  for (int c : comp) ++sizes[static_cast<std::size_t>(c)];
  const int best = static_cast<int>(
      std::max_element(sizes.begin(), sizes.end()) - sizes.begin());

  nodes.clear();
  std::vector<int> remap(static_cast<std::size_t>(g.n()), -1);
  for (int i = 0; i < g.n(); ++i) {
    if (comp[static_cast<std::size_t>(i)] == best) {
      remap[static_cast<std::size_t>(i)] = static_cast<int>(nodes.size());
      nodes.push_back(i);
    }
  }
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    const int u = remap[static_cast<std::size_t>(e.u)];
    const int v = remap[static_cast<std::size_t>(e.v)];
    if (u >= 0 && v >= 0) edges.push_back(Edge{u, v, e.w});
  }
  return WeightedGraph(static_cast<int>(nodes.size()), std::move(edges),
                       g.bandwidth());
}

}  // namespace

Embedding laplacian_eigenmaps(const WeightedGraph& g, int d_target) {
  Embedding result;
  std::vector<int> nodes(static_cast<std::size_t>(g.n()));
  std::iota(nodes.begin(), nodes.end(), 0);
  WeightedGraph sub = g;
  if (!is_connected(g)) {
    sub = largest_component_subgraph(g, nodes);
    result.restricted = true;
  }
  const int n = sub.n();
  if (d_target < 1 || d_target >= n)
    throw ConfigError("embedding dimension must satisfy 1 <= d < n (d=" +
                      std::to_string(d_target) +
                      ", component n=" + std::to_string(n) + ")");
  if (n > kDenseEigenCap)
    throw SolverError("laplacian_eigenmaps dense path supports n <= " +
                      std::to_string(kDenseEigenCap));
  if (sub.edge_count() == 0)
    throw ConfigError("cannot embed a graph without edges");

  // Symmetric normalized problem: B = D^-1/2 L D^-1/2, then f = D^-1/2 u
  // turns B u = lambda u into L f = lambda D f with f^T D f = 1.
  Eigen::VectorXd degree = Eigen::VectorXd::Zero(n);
  for (const Edge& e : sub.edges()) {
    degree[e.u] += e.w;
    degree[e.v] += e.w;
  }
  const Eigen::VectorXd inv_sqrt_d = degree.cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : sub.edges()) {
    const double val = -e.w * inv_sqrt_d[e.u] * inv_sqrt_d[e.v];
    B(e.u, e.v) = val;
    B(e.v, e.u) = val;
  }
  for (int i = 0; i < n; ++i) B(i, i) = 1.0;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(B);
  if (eig.info() != Eigen::Success)
    throw SolverError("eigensolver failed on the normalized Laplacian");

  result.coords.resize(n, d_target);
  result.eigvals.resize(d_target);
  for (int c = 0; c < d_target; ++c) {
    // Skip the trivial eigenvector at index 0 (constant in f-space).
    const int idx = c + 1;
    result.eigvals[c] = eig.eigenvalues()[idx];
    Eigen::VectorXd f =
        inv_sqrt_d.asDiagonal() * eig.eigenvectors().col(idx);
    // Deterministic sign: largest-magnitude entry positive.
    int arg = 0;
    f.cwiseAbs().maxCoeff(&arg);
    if (f[arg] < 0.0) f = -f;
    result.coords.col(c) = f;
  }
  result.nodes = std::move(nodes);
  return result;
}

namespace {

double assign_points(const Eigen::MatrixXd& rows, const Eigen::MatrixXd& centers,
                     std::vector<int>& assign) {
  const int n = static_cast<int>(rows.rows());
  const int c = static_cast<int>(centers.rows());
  double inertia = 0.0;
  for (int i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    int best_c = 0;
    for (int j = 0; j < c; ++j) {
      const double d2 = (rows.row(i) - centers.row(j)).squaredNorm();
      if (d2 < best) {
        best = d2;
        best_c = j;
      }
    }
    assign[static_cast<std::size_t>(i)] = best_c;
    inertia += best;
  }
  return inertia;
}

Eigen::MatrixXd kmeanspp_init(const Eigen::MatrixXd& rows, int clusters,
                              Rng& rng) {
  const int n = static_cast<int>(rows.rows());
  Eigen::MatrixXd centers(clusters, rows.cols());
  const int first = static_cast<int>(rng.uniform_int(
      static_cast<std::uint64_t>(n)));
  centers.row(0) = rows.row(first);
  Eigen::VectorXd d2 = (rows.rowwise() - centers.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < clusters; ++c) {
    const double total = d2.sum();
    int pick;
    if (total <= 0.0) {
      pick = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n)));
    } else {
      double r = rng.uniform() * total;
      pick = n - 1;
      for (int i = 0; i < n; ++i) {
        r -= d2[i];
        if (r <= 0.0) {
          pick = i;
          break;
        }
      }
    }
    centers.row(c) = rows.row(pick);
    d2 = d2.cwiseMin(
        (rows.rowwise() - centers.row(c)).rowwise().squaredNorm());
  }
  return centers;
}

}  // namespace

Clustering kmeans(const Eigen::MatrixXd& rows, int clusters, int restarts,
                  std::uint64_t seed) {
  const int n = static_cast<int>(rows.rows());
  if (clusters < 1 || clusters > n)
    throw ConfigError("cluster count must satisfy 1 <= C <= n");
  if (restarts < 1) restarts = 1;

  Rng rng(seed);
  Clustering best;
  best.inertia = std::numeric_limits<double>::infinity();

  for (int r = 0; r < restarts; ++r) {
    Eigen::MatrixXd centers = kmeanspp_init(rows, clusters, rng);
    std::vector<int> assign(static_cast<std::size_t>(n), 0);
    double inertia = assign_points(rows, centers, assign);
    for (int it = 0; it < 300; ++it) {
      // Update step.
      Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(clusters, rows.cols());
      std::vector<int> counts(static_cast<std::size_t>(clusters), 0);
      for (int i = 0; i < n; ++i) {
        sums.row(assign[static_cast<std::size_t>(i)]) += rows.row(i);
        ++counts[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])];
      }
      for (int c = 0; c < clusters; ++c) {
        if (counts[static_cast<std::size_t>(c)] > 0) {
          centers.row(c) =
              sums.row(c) / counts[static_cast<std::size_t>(c)];
        } else {
          // Re-seed an empty cluster at the point farthest from its center.
          int far = 0;
          double far_d = -1.0;
          for (int i = 0; i < n; ++i) {
            const double d2 =
                (rows.row(i) -
                 centers.row(assign[static_cast<std::size_t>(i)]))
                    .squaredNorm();
            if (d2 > far_d) {
              far_d = d2;
              far = i;
            }
          }
          centers.row(c) = rows.row(far);
        }
      }
      const double next = assign_points(rows, centers, assign);
      const double rel =
          inertia > 0.0 ? (inertia - next) / inertia : 0.0;
      inertia = next;
      if (rel >= 0.0 && rel < 1e-6) break;
    }
    if (inertia < best.inertia) {
      best.inertia = inertia;
      best.assign = assign;
      best.centers = centers;
    }
  }
  return best;
}

Clustering kmeans(const Embedding& e, int clusters, int restarts,
                  std::uint64_t seed) {
  return kmeans(e.coords, clusters, restarts, seed);
}

}  // namespace rcflow
