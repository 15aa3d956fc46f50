#include "rcflow/spath.hpp"

#include <algorithm>
#include <limits>

#include "rcflow/common.hpp"

namespace rcflow {

std::vector<double> DijkstraWorkspace::to_targets(
    const WeightedGraph& g, const std::vector<double>& lengths, int source,
    const std::vector<int>& targets) {
  if (static_cast<int>(lengths.size()) != g.edge_count())
    throw ConfigError("edge length vector does not align with graph edges");
  const auto n = static_cast<std::size_t>(g.n());
  if (dist_.size() < n) {
    dist_.resize(n);
    dist_stamp_.assign(n, 0);
    settled_stamp_.assign(n, 0);
    target_stamp_.assign(n, 0);
  }
  ++stamp_;
  heap_.clear();

  int remaining = 0;
  for (int t : targets) {
    if (target_stamp_[static_cast<std::size_t>(t)] != stamp_) {
      target_stamp_[static_cast<std::size_t>(t)] = stamp_;
      ++remaining;
    }
  }

  auto push = [&](double d, int node) {
    heap_.emplace_back(-d, node);  // max-heap on negated distance
    std::push_heap(heap_.begin(), heap_.end());
  };

  dist_[static_cast<std::size_t>(source)] = 0.0;
  dist_stamp_[static_cast<std::size_t>(source)] = stamp_;
  push(0.0, source);
  while (!heap_.empty() && remaining > 0) {
    std::pop_heap(heap_.begin(), heap_.end());
    const auto [neg_d, u] = heap_.back();
    heap_.pop_back();
    const double d = -neg_d;
    if (settled_stamp_[static_cast<std::size_t>(u)] == stamp_) continue;
    settled_stamp_[static_cast<std::size_t>(u)] = stamp_;
    if (target_stamp_[static_cast<std::size_t>(u)] == stamp_) --remaining;
    for (const auto& [v, e] : g.neighbors(u)) {
      const auto vi = static_cast<std::size_t>(v);
      if (settled_stamp_[vi] == stamp_) continue;
      const double nd = d + lengths[static_cast<std::size_t>(e)];
      if (dist_stamp_[vi] != stamp_ || nd < dist_[vi]) {
        dist_[vi] = nd;
        dist_stamp_[vi] = stamp_;
        push(nd, v);
      }
    }
  }

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> out;
  out.reserve(targets.size());
  for (int t : targets) {
    const auto ti = static_cast<std::size_t>(t);
    out.push_back(settled_stamp_[ti] == stamp_ ? dist_[ti] : kInf);
  }
  return out;
}

std::vector<double> dijkstra_to_targets(const WeightedGraph& g,
                                        const std::vector<double>& lengths,
                                        int source,
                                        const std::vector<int>& targets) {
  DijkstraWorkspace ws;
  return ws.to_targets(g, lengths, source, targets);
}

double shortest_path_distance(const WeightedGraph& g,
                              const std::vector<double>& lengths, int source,
                              int target) {
  return dijkstra_to_targets(g, lengths, source, {target}).front();
}

}  // namespace rcflow
