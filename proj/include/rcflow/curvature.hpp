#pragma once

#include <string>
#include <vector>

#include "rcflow/graph.hpp"
#include "rcflow/resistance.hpp"

namespace rcflow {

enum class CurvatureKind { Resistance, Ollivier };

std::string to_string(CurvatureKind kind);

/// Node and edge curvature for one graph snapshot. node_p is empty for the
/// Ollivier kind; edge_k is aligned with the graph edge index.
struct CurvatureField {
  std::vector<double> node_p;
  std::vector<double> edge_k;
  double mean_k = 0.0;
  CurvatureKind kind = CurvatureKind::Resistance;
};

struct OrcConfig {
  double alpha = 0.5;             // laziness, mass left at the center node
  bool weighted_measure = false;  // neighbor mass proportional to weight
};

/// p_i = 1 - 1/2 sum_{j~i} w_ij R_ij. May be negative.
std::vector<double> node_curvature(const WeightedGraph& g,
                                   const ResistanceField& r);

/// k_ij = 2 (p_i + p_j) / R_ij with R floored at 1e-12.
CurvatureField edge_curvature(const WeightedGraph& g,
                              const std::vector<double>& node_p,
                              const ResistanceField& r);

/// Convenience: resistance curvature from scratch at the given epsilon.
CurvatureField resistance_curvature(const WeightedGraph& g, double epsilon,
                                    ResistanceSolver solver,
                                    const CgOptions& cg = {});

/// Ollivier-Ricci curvature kappa(u,v) = 1 - W1(mu_u, mu_v) / d(u, v) with
/// lazy-random-walk measures and shortest-path ground distance (edge length
/// 1/w). W1 is solved exactly on the union support.
CurvatureField ollivier_ricci(const WeightedGraph& g, const OrcConfig& cfg);

/// Population variance of the edge curvatures; zero iff all equal.
double curvature_uniformity_loss(const CurvatureField& c);

/// Mean and population variance of a value list (helper shared with traces).
std::pair<double, double> mean_and_variance(const std::vector<double>& x);

}  // namespace rcflow
