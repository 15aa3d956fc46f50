#pragma once

#include <vector>

#include "rcflow/graph.hpp"

namespace rcflow {

/// Dijkstra that settles only until every requested target is reached.
/// Scratch buffers are stamped instead of cleared so a workspace can be
/// reused across many small queries without O(n) resets.
class DijkstraWorkspace {
 public:
  /// Distances from source to each target in order; +inf when unreachable.
  /// lengths must align with g's edge index.
  std::vector<double> to_targets(const WeightedGraph& g,
                                 const std::vector<double>& lengths,
                                 int source, const std::vector<int>& targets);

 private:
  std::vector<double> dist_;
  std::vector<int> dist_stamp_;
  std::vector<int> settled_stamp_;
  std::vector<int> target_stamp_;
  std::vector<std::pair<double, int>> heap_;
  int stamp_ = 0;
};

/// One-shot convenience wrappers.
std::vector<double> dijkstra_to_targets(const WeightedGraph& g,
                                        const std::vector<double>& lengths,
                                        int source,
                                        const std::vector<int>& targets);

double shortest_path_distance(const WeightedGraph& g,
                              const std::vector<double>& lengths, int source,
                              int target);

}  // namespace rcflow
