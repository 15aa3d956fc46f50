#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "rcflow/curvature.hpp"
#include "rcflow/dataset.hpp"
#include "rcflow/graph.hpp"
#include "rcflow/resistance.hpp"

namespace rcflow {

enum class FinalNorm { MaxOne, None };
enum class FlowMethod { Rcf, Ocf };

FinalNorm final_norm_from_string(const std::string& name);
FlowMethod flow_method_from_string(const std::string& name);
std::string to_string(FinalNorm v);
std::string to_string(FlowMethod v);

struct FlowConfig {
  double eta = 0.5;
  int n_iter = 5;
  bool normalized = true;  // subtract the mean edge curvature
  double epsilon = 1e-6;   // Laplacian perturbation
  double d_floor = 1e-12;
  double shrink_floor = 0.01;  // minimal per-step multiplicative factor
  FinalNorm final_norm = FinalNorm::MaxOne;
  ResistanceSolver solver = ResistanceSolver::Cholesky;
  CgOptions cg;
  std::optional<double> bandwidth;  // kNN kernel; unset -> self-tuning
  /// Dirichlet energy in the trace needs a resistance solve; benchmarks
  /// turn this off so OCF timings stay free of RCF machinery.
  bool collect_diagnostics = true;

  void validate() const;
};

struct IterationStats {
  double mean_k = 0.0;
  double var_k = 0.0;
  double dirichlet = 0.0;  // NaN when diagnostics are off for OCF
  double min_d = 0.0;
  double max_d = 0.0;
  double seconds = 0.0;
};

/// One row per flow iteration.
struct FlowTrace {
  std::vector<IterationStats> iterations;
};

/// Writes "iter,mean_k,var_k,dirichlet,min_d,max_d,seconds". When
/// zero_seconds is set the timing column is written as 0 so artifacts stay
/// byte-reproducible.
void save_trace_csv(const FlowTrace& trace, const std::string& path,
                    bool zero_seconds);

/// One curvature-flow update on the edge distances:
///   d' = d - eta * d * k           (raw)
///   d' = d - eta * d * (k - mean)  (normalized)
/// The multiplicative factor is clamped below by shrink_floor and the
/// resulting distance by d_floor; returns the graph with w = 1/d'.
WeightedGraph rcf_step(const WeightedGraph& g, const CurvatureField& c,
                       double eta, bool normalized, double shrink_floor,
                       double d_floor);

struct FlowResult {
  WeightedGraph graph;
  FlowTrace trace;
};

/// Full pipeline: kNN graph, n_iter resistance-curvature flow updates,
/// final weight normalization.
FlowResult dgsl_rcf(const PointCloud& cloud, int k, const FlowConfig& cfg);

/// Same loop on an existing graph (used by the CLI and fixtures).
FlowResult dgsl_rcf_graph(const WeightedGraph& g, const FlowConfig& cfg);

/// Ollivier-Ricci analog: identical update and clamping with kappa in place
/// of the resistance curvature, recomputed on the evolving distances.
FlowResult ocf_flow(const PointCloud& cloud, int k, const FlowConfig& cfg,
                    const OrcConfig& orc);

FlowResult ocf_flow_graph(const WeightedGraph& g, const FlowConfig& cfg,
                          const OrcConfig& orc);

/// Curvature-guided feature aggregation:
///   X'_j = (x_j + lambda * sum_{l~j} x_l w_jl) / (1 + lambda * sum_{l~j} w_jl)
/// Row-wise convex combination of a node's feature and its weighted
/// neighborhood; lambda = 0 returns the input unchanged.
Eigen::MatrixXd gfl_aggregate(const Eigen::MatrixXd& features,
                              const WeightedGraph& g, double lambda);

}  // namespace rcflow
