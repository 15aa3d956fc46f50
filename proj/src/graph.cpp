#include "rcflow/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

#include "rcflow/common.hpp"

namespace rcflow {

WeightedGraph::WeightedGraph(int n, std::vector<Edge> edges, double bandwidth)
    : n_(n), edges_(std::move(edges)), bandwidth_(bandwidth) {
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  validate();
  adj_.assign(static_cast<std::size_t>(n_), {});
  for (int e = 0; e < edge_count(); ++e) {
    const Edge& ed = edges_[static_cast<std::size_t>(e)];
    adj_[static_cast<std::size_t>(ed.u)].emplace_back(ed.v, e);
    adj_[static_cast<std::size_t>(ed.v)].emplace_back(ed.u, e);
  }
}

void WeightedGraph::validate() const {
  if (n_ < 1) throw ConfigError("graph must have at least one node");
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Edge& ed = edges_[e];
    if (ed.u < 0 || ed.v >= n_ || ed.u >= ed.v)
      throw ConfigError("edge endpoints must satisfy 0 <= u < v < n");
    if (!(ed.w > 0.0) || !std::isfinite(ed.w))
      throw ConfigError("edge weights must be finite and > 0");
    if (e > 0) {
      const Edge& prev = edges_[e - 1];
      if (prev.u == ed.u && prev.v == ed.v)
        throw ConfigError("duplicate edge (" + std::to_string(ed.u) + "," +
                          std::to_string(ed.v) + ")");
    }
  }
}

int WeightedGraph::find_edge(int u, int v) const {
  if (u == v) return -1;
  if (u > v) std::swap(u, v);
  const Edge key{u, v, 0.0};
  const auto it = std::lower_bound(
      edges_.begin(), edges_.end(), key, [](const Edge& a, const Edge& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
      });
  if (it != edges_.end() && it->u == u && it->v == v)
    return static_cast<int>(it - edges_.begin());
  return -1;
}

WeightedGraph WeightedGraph::with_weights(
    const std::vector<double>& weights) const {
  if (weights.size() != edges_.size())
    throw ConfigError("weight vector does not align with edge set");
  std::vector<Edge> edges = edges_;
  for (std::size_t e = 0; e < edges.size(); ++e) edges[e].w = weights[e];
  return WeightedGraph(n_, std::move(edges), bandwidth_);
}

std::vector<double> edge_distances(const WeightedGraph& g) {
  std::vector<double> d(static_cast<std::size_t>(g.edge_count()));
  for (int e = 0; e < g.edge_count(); ++e)
    d[static_cast<std::size_t>(e)] = 1.0 / g.edge(e).w;
  return d;
}

WeightedGraph knn_graph(const PointCloud& cloud, int k,
                        std::optional<double> bandwidth) {
  cloud.validate();
  const int n = cloud.n();
  if (k < 1 || k >= n)
    throw ConfigError("neighbor count k must satisfy 1 <= k < n (k=" +
                      std::to_string(k) + ", n=" + std::to_string(n) + ")");
  if (bandwidth && !(*bandwidth > 0.0))
    throw ConfigError("kernel bandwidth must be > 0");

  const Eigen::MatrixXd& x = cloud.points;
  // k nearest neighbors per node, brute force with deterministic
  // (distance, index) tie-breaking.
  std::vector<std::vector<std::pair<double, int>>> nearest(
      static_cast<std::size_t>(n));
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    std::vector<std::pair<double, int>> cand;
    cand.reserve(static_cast<std::size_t>(n) - 1);
    for (int j = 0; j < n; ++j) {
      if (j == static_cast<int>(i)) continue;
      const double d2 = (x.row(static_cast<int>(i)) - x.row(j)).squaredNorm();
      cand.emplace_back(d2, j);
    }
    std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
    cand.resize(static_cast<std::size_t>(k));
    nearest[i] = std::move(cand);
  });

  double t;
  if (bandwidth) {
    t = *bandwidth;
  } else {
    // Self-tuning scale: mean squared distance to the k-th neighbor.
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
      acc += nearest[static_cast<std::size_t>(i)].back().first;
    t = acc / n;
    if (!(t > 0.0)) t = 1.0;  // all points coincide
  }

  // Union symmetrization: keep (i,j) if either side selected the other.
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(k));
  for (int i = 0; i < n; ++i)
    for (const auto& [d2, j] : nearest[static_cast<std::size_t>(i)])
      pairs.emplace_back(std::min(i, j), std::max(i, j));
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& [u, v] : pairs) {
    const double d2 = (x.row(u) - x.row(v)).squaredNorm();
    edges.push_back(Edge{u, v, std::exp(-d2 / t)});
  }
  return WeightedGraph(n, std::move(edges), t);
}

Eigen::SparseMatrix<double> laplacian(const WeightedGraph& g) {
  const int n = g.n();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(g.edge_count()) * 2 +
                static_cast<std::size_t>(n));
  std::vector<double> degree(static_cast<std::size_t>(n), 0.0);
  for (const Edge& e : g.edges()) {
    trips.emplace_back(e.u, e.v, -e.w);
    trips.emplace_back(e.v, e.u, -e.w);
    degree[static_cast<std::size_t>(e.u)] += e.w;
    degree[static_cast<std::size_t>(e.v)] += e.w;
  }
  for (int i = 0; i < n; ++i)
    trips.emplace_back(i, i, degree[static_cast<std::size_t>(i)]);
  Eigen::SparseMatrix<double> L(n, n);
  L.setFromTriplets(trips.begin(), trips.end());
  L.makeCompressed();
  return L;
}

std::pair<std::vector<int>, int> connected_components(const WeightedGraph& g) {
  const int n = g.n();
  std::vector<int> comp(static_cast<std::size_t>(n), -1);
  int count = 0;
  std::vector<int> stack;
  for (int start = 0; start < n; ++start) {
    if (comp[static_cast<std::size_t>(start)] >= 0) continue;
    stack.push_back(start);
    comp[static_cast<std::size_t>(start)] = count;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (const auto& [v, e] : g.neighbors(u)) {
        if (comp[static_cast<std::size_t>(v)] < 0) {
          comp[static_cast<std::size_t>(v)] = count;
          stack.push_back(v);
        }
      }
    }
    ++count;
  }
  return {std::move(comp), count};
}

bool is_connected(const WeightedGraph& g) {
  return connected_components(g).second == 1;
}

void save_edge_tsv(const WeightedGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write file: " + path);
  out << "# n=" << g.n() << "\tbandwidth=" << format_double(g.bandwidth())
      << '\n';
  for (const Edge& e : g.edges())
    out << e.u << '\t' << e.v << '\t' << format_double(e.w) << '\n';
  if (!out) throw IoError("write failed: " + path);
}

WeightedGraph load_edge_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file: " + path);
  std::string line;
  std::vector<Edge> edges;
  int n = 0;
  double bandwidth = 0.0;
  int lineno = 0;
  bool any = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      // Optional header: "# n=<nodes>\tbandwidth=<t>"
      std::size_t pos = line.find("n=");
      if (pos != std::string::npos) n = std::atoi(line.c_str() + pos + 2);
      pos = line.find("bandwidth=");
      if (pos != std::string::npos)
        bandwidth = std::strtod(line.c_str() + pos + 10, nullptr);
      continue;
    }
    std::stringstream ss(line);
    long u, v;
    double w;
    if (!(ss >> u >> v >> w))
      throw ParseError("malformed edge at line " + std::to_string(lineno) +
                       " of " + path);
    std::string rest;
    if (ss >> rest)
      throw ParseError("trailing tokens at line " + std::to_string(lineno) +
                       " of " + path);
    edges.push_back(Edge{static_cast<int>(u), static_cast<int>(v), w});
    any = true;
  }
  if (!any) throw ParseError("empty edge list: " + path);
  int max_node = 0;
  for (const Edge& e : edges) max_node = std::max({max_node, e.u, e.v});
  n = std::max(n, max_node + 1);
  return WeightedGraph(n, std::move(edges), bandwidth);
}

}  // namespace rcflow
