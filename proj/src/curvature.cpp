#include "rcflow/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rcflow/common.hpp"
#include "rcflow/spath.hpp"
#include "rcflow/transport.hpp"

namespace rcflow {

std::string to_string(CurvatureKind kind) {
  switch (kind) {
    case CurvatureKind::Resistance: return "resistance";
    case CurvatureKind::Ollivier: return "ollivier";
  }
  throw ConfigError("unknown curvature kind");
}

std::pair<double, double> mean_and_variance(const std::vector<double>& x) {
  if (x.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= static_cast<double>(x.size());
  return {mean, var};
}

std::vector<double> node_curvature(const WeightedGraph& g,
                                   const ResistanceField& r) {
  if (static_cast<int>(r.values.size()) != g.edge_count())
    throw ConfigError("resistance field does not align with graph edges");
  std::vector<double> p(static_cast<std::size_t>(g.n()), 1.0);
  for (int e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    const double half = 0.5 * ed.w * r.values[static_cast<std::size_t>(e)];
    p[static_cast<std::size_t>(ed.u)] -= half;
    p[static_cast<std::size_t>(ed.v)] -= half;
  }
  return p;
}

CurvatureField edge_curvature(const WeightedGraph& g,
                              const std::vector<double>& node_p,
                              const ResistanceField& r) {
  if (static_cast<int>(node_p.size()) != g.n())
    throw ConfigError("node curvature does not align with graph nodes");
  if (static_cast<int>(r.values.size()) != g.edge_count())
    throw ConfigError("resistance field does not align with graph edges");
  constexpr double kResistanceFloor = 1e-12;
  CurvatureField field;
  field.kind = CurvatureKind::Resistance;
  field.node_p = node_p;
  field.edge_k.resize(static_cast<std::size_t>(g.edge_count()));
  for (int e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    const double rr =
        std::max(r.values[static_cast<std::size_t>(e)], kResistanceFloor);
    field.edge_k[static_cast<std::size_t>(e)] =
        2.0 * (node_p[static_cast<std::size_t>(ed.u)] +
               node_p[static_cast<std::size_t>(ed.v)]) /
        rr;
  }
  field.mean_k = mean_and_variance(field.edge_k).first;
  return field;
}

CurvatureField resistance_curvature(const WeightedGraph& g, double epsilon,
                                    ResistanceSolver solver,
                                    const CgOptions& cg) {
  const ResistanceField r = effective_resistance(g, epsilon, solver, cg);
  return edge_curvature(g, node_curvature(g, r), r);
}

namespace {

// Lazy-random-walk measure of a node over {node} + neighbors.
void walk_measure(const WeightedGraph& g, const OrcConfig& cfg, int node,
                  std::vector<int>& support, std::vector<double>& mass) {
  support.clear();
  mass.clear();
  support.push_back(node);
  mass.push_back(cfg.alpha);
  const auto& nbrs = g.neighbors(node);
  if (cfg.weighted_measure) {
    double total = 0.0;
    for (const auto& [v, e] : nbrs) total += g.edge(e).w;
    for (const auto& [v, e] : nbrs) {
      support.push_back(v);
      mass.push_back((1.0 - cfg.alpha) * g.edge(e).w / total);
    }
  } else {
    const double share = (1.0 - cfg.alpha) / static_cast<double>(nbrs.size());
    for (const auto& [v, e] : nbrs) {
      support.push_back(v);
      mass.push_back(share);
    }
  }
}

}  // namespace

namespace {

/// Per-node shortest-path cache. Every node acts as a transport source for
/// all edges within two hops, so one truncated Dijkstra per node (settling
/// its 3-hop ball, which covers every possible sink support) replaces
/// thousands of repeated per-edge runs. Entries are sorted by node id for
/// binary-search lookup.
struct DistanceCache {
  std::vector<std::vector<int>> targets;
  std::vector<std::vector<double>> dists;

  double lookup(int source, int node) const {
    const auto& t = targets[static_cast<std::size_t>(source)];
    const auto it = std::lower_bound(t.begin(), t.end(), node);
    if (it == t.end() || *it != node)
      throw SolverError("orc: node missing from shortest-path cache");
    return dists[static_cast<std::size_t>(source)]
                [static_cast<std::size_t>(it - t.begin())];
  }
};

DistanceCache build_distance_cache(const WeightedGraph& g,
                                   const std::vector<double>& lengths) {
  const auto n = static_cast<std::size_t>(g.n());
  DistanceCache cache;
  cache.targets.resize(n);
  cache.dists.resize(n);
  parallel_for(n, [&](std::size_t a) {
    thread_local DijkstraWorkspace dijkstra;
    // 3-hop ball by BFS: supports of any adjacent edge live within it.
    std::vector<int> ball{static_cast<int>(a)};
    std::vector<int> frontier{static_cast<int>(a)};
    std::vector<char> seen(n, 0);
    seen[a] = 1;
    for (int hop = 0; hop < 3; ++hop) {
      std::vector<int> next;
      for (int u : frontier) {
        for (const auto& [v, e] : g.neighbors(u)) {
          if (!seen[static_cast<std::size_t>(v)]) {
            seen[static_cast<std::size_t>(v)] = 1;
            ball.push_back(v);
            next.push_back(v);
          }
        }
      }
      frontier = std::move(next);
    }
    std::sort(ball.begin(), ball.end());
    cache.dists[a] =
        dijkstra.to_targets(g, lengths, static_cast<int>(a), ball);
    cache.targets[a] = std::move(ball);
  });
  return cache;
}

}  // namespace

CurvatureField ollivier_ricci(const WeightedGraph& g, const OrcConfig& cfg) {
  if (!(cfg.alpha >= 0.0 && cfg.alpha < 1.0))
    throw ConfigError("orc alpha must lie in [0, 1)");
  const std::vector<double> lengths = edge_distances(g);
  const DistanceCache cache = build_distance_cache(g, lengths);

  CurvatureField field;
  field.kind = CurvatureKind::Ollivier;
  field.edge_k.assign(static_cast<std::size_t>(g.edge_count()), 0.0);

  parallel_for(static_cast<std::size_t>(g.edge_count()), [&](std::size_t ei) {
    const Edge& ed = g.edge(static_cast<int>(ei));

    std::vector<int> sup_u, sup_v;
    std::vector<double> mu_u, mu_v;
    walk_measure(g, cfg, ed.u, sup_u, mu_u);
    walk_measure(g, cfg, ed.v, sup_v, mu_v);

    // Ground distance between the edge endpoints (denominator of kappa).
    const double duv = cache.lookup(ed.u, ed.v);
    if (!std::isfinite(duv) || !(duv > 0.0))
      throw SolverError("orc: endpoints share no finite positive distance");

    Eigen::MatrixXd cost(static_cast<int>(sup_u.size()),
                         static_cast<int>(sup_v.size()));
    for (std::size_t s = 0; s < sup_u.size(); ++s) {
      for (std::size_t t = 0; t < sup_v.size(); ++t) {
        const double d = cache.lookup(sup_u[s], sup_v[t]);
        if (!std::isfinite(d))
          throw SolverError("orc: unreachable support node within edge " +
                            std::to_string(ed.u) + "-" +
                            std::to_string(ed.v));
        cost(static_cast<int>(s), static_cast<int>(t)) = d;
      }
    }
    const double w1 = min_cost_transport(mu_u, mu_v, cost);
    field.edge_k[ei] = 1.0 - w1 / duv;
  });

  field.mean_k = mean_and_variance(field.edge_k).first;
  return field;
}

double curvature_uniformity_loss(const CurvatureField& c) {
  if (c.edge_k.empty())
    throw ConfigError("curvature uniformity loss needs at least one edge");
  return mean_and_variance(c.edge_k).second;
}

}  // namespace rcflow
