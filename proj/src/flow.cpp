#include "rcflow/flow.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>

#include "rcflow/common.hpp"

namespace rcflow {

FinalNorm final_norm_from_string(const std::string& name) {
  if (name == "max_one") return FinalNorm::MaxOne;
  if (name == "none") return FinalNorm::None;
  throw ConfigError("unknown final_norm: " + name);
}

FlowMethod flow_method_from_string(const std::string& name) {
  if (name == "rcf") return FlowMethod::Rcf;
  if (name == "ocf") return FlowMethod::Ocf;
  throw ConfigError("unknown flow method: " + name);
}

std::string to_string(FinalNorm v) {
  return v == FinalNorm::MaxOne ? "max_one" : "none";
}

std::string to_string(FlowMethod v) {
  return v == FlowMethod::Rcf ? "rcf" : "ocf";
}

void FlowConfig::validate() const {
  if (!(eta > 0.0)) throw ConfigError("flow eta must be > 0");
  if (n_iter < 1) throw ConfigError("flow n_iter must be >= 1");
  if (!(epsilon > 0.0)) throw ConfigError("flow epsilon must be > 0");
  if (!(d_floor > 0.0)) throw ConfigError("flow d_floor must be > 0");
  if (!(shrink_floor > 0.0 && shrink_floor < 1.0))
    throw ConfigError("flow shrink_floor must lie in (0, 1)");
  if (bandwidth && !(*bandwidth > 0.0))
    throw ConfigError("kernel bandwidth must be > 0");
}

void save_trace_csv(const FlowTrace& trace, const std::string& path,
                    bool zero_seconds) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write file: " + path);
  out << "iter,mean_k,var_k,dirichlet,min_d,max_d,seconds\n";
  for (std::size_t i = 0; i < trace.iterations.size(); ++i) {
    const IterationStats& s = trace.iterations[i];
    out << (i + 1) << ',' << format_double(s.mean_k) << ','
        << format_double(s.var_k) << ',' << format_double(s.dirichlet) << ','
        << format_double(s.min_d) << ',' << format_double(s.max_d) << ','
        << format_double(zero_seconds ? 0.0 : s.seconds) << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

namespace {

std::vector<double> step_distances(const std::vector<double>& d,
                                   const std::vector<double>& edge_k,
                                   double mean_k, double eta, bool normalized,
                                   double shrink_floor, double d_floor) {
  std::vector<double> out(d.size());
  for (std::size_t e = 0; e < d.size(); ++e) {
    const double dev = normalized ? edge_k[e] - mean_k : edge_k[e];
    const double factor = std::max(1.0 - eta * dev, shrink_floor);
    out[e] = std::max(d[e] * factor, d_floor);
  }
  return out;
}

WeightedGraph graph_from_distances(const WeightedGraph& g,
                                   const std::vector<double>& d) {
  std::vector<double> w(d.size());
  for (std::size_t e = 0; e < d.size(); ++e) w[e] = 1.0 / d[e];
  return g.with_weights(w);
}

WeightedGraph apply_final_norm(const WeightedGraph& g, FinalNorm norm) {
  if (norm == FinalNorm::None || g.edge_count() == 0) return g;
  double w_max = 0.0;
  for (const Edge& e : g.edges()) w_max = std::max(w_max, e.w);
  std::vector<double> w(static_cast<std::size_t>(g.edge_count()));
  for (int e = 0; e < g.edge_count(); ++e)
    w[static_cast<std::size_t>(e)] = g.edge(e).w / w_max;
  return g.with_weights(w);
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

FlowResult run_flow(const WeightedGraph& initial, const FlowConfig& cfg,
                    FlowMethod method, const OrcConfig& orc) {
  cfg.validate();
  FlowResult result{initial, {}};
  result.trace.iterations.reserve(static_cast<std::size_t>(cfg.n_iter));

  for (int iter = 0; iter < cfg.n_iter; ++iter) {
    const WeightedGraph& g = result.graph;
    const std::vector<double> d = edge_distances(g);

    const auto start = Clock::now();
    CurvatureField curv;
    std::vector<double> resistance;  // kept for the Dirichlet diagnostic
    if (method == FlowMethod::Rcf) {
      const ResistanceField r =
          effective_resistance(g, cfg.epsilon, cfg.solver, cfg.cg);
      curv = edge_curvature(g, node_curvature(g, r), r);
      resistance = r.values;
    } else {
      curv = ollivier_ricci(g, orc);
    }
    const std::vector<double> d_next =
        step_distances(d, curv.edge_k, curv.mean_k, cfg.eta, cfg.normalized,
                       cfg.shrink_floor, cfg.d_floor);
    const double elapsed = seconds_since(start);

    IterationStats stats;
    const auto [mean_k, var_k] = mean_and_variance(curv.edge_k);
    stats.mean_k = mean_k;
    stats.var_k = var_k;
    stats.seconds = elapsed;
    stats.min_d = *std::min_element(d.begin(), d.end());
    stats.max_d = *std::max_element(d.begin(), d.end());
    if (cfg.collect_diagnostics) {
      if (resistance.empty()) {
        // OCF path: the energy diagnostic still refers to effective
        // resistance; computed outside the timed section.
        resistance =
            effective_resistance(g, cfg.epsilon, ResistanceSolver::Cholesky)
                .values;
      }
      double energy = 0.0;
      for (std::size_t e = 0; e < resistance.size(); ++e)
        energy += resistance[e] * d[e] * d[e];
      stats.dirichlet = energy;
    } else {
      stats.dirichlet = std::numeric_limits<double>::quiet_NaN();
    }
    result.trace.iterations.push_back(stats);

    result.graph = graph_from_distances(g, d_next);
  }

  result.graph = apply_final_norm(result.graph, cfg.final_norm);
  return result;
}

}  // namespace

WeightedGraph rcf_step(const WeightedGraph& g, const CurvatureField& c,
                       double eta, bool normalized, double shrink_floor,
                       double d_floor) {
  if (c.kind != CurvatureKind::Resistance)
    throw ConfigError("rcf_step expects resistance curvature");
  if (static_cast<int>(c.edge_k.size()) != g.edge_count())
    throw ConfigError("curvature field does not align with graph edges");
  const std::vector<double> d = edge_distances(g);
  const std::vector<double> d_next = step_distances(
      d, c.edge_k, c.mean_k, eta, normalized, shrink_floor, d_floor);
  return graph_from_distances(g, d_next);
}

FlowResult dgsl_rcf(const PointCloud& cloud, int k, const FlowConfig& cfg) {
  cfg.validate();
  return run_flow(knn_graph(cloud, k, cfg.bandwidth), cfg, FlowMethod::Rcf,
                  OrcConfig{});
}

FlowResult dgsl_rcf_graph(const WeightedGraph& g, const FlowConfig& cfg) {
  return run_flow(g, cfg, FlowMethod::Rcf, OrcConfig{});
}

FlowResult ocf_flow(const PointCloud& cloud, int k, const FlowConfig& cfg,
                    const OrcConfig& orc) {
  cfg.validate();
  return run_flow(knn_graph(cloud, k, cfg.bandwidth), cfg, FlowMethod::Ocf,
                  orc);
}

FlowResult ocf_flow_graph(const WeightedGraph& g, const FlowConfig& cfg,
                          const OrcConfig& orc) {
  return run_flow(g, cfg, FlowMethod::Ocf, orc);
}

Eigen::MatrixXd gfl_aggregate(const Eigen::MatrixXd& features,
                              const WeightedGraph& g, double lambda) {
  if (static_cast<int>(features.rows()) != g.n())
    throw ConfigError("feature row count does not match graph node count");
  if (lambda < 0.0) throw ConfigError("gfl lambda must be >= 0");
  if (lambda == 0.0) return features;

  Eigen::MatrixXd out(features.rows(), features.cols());
  for (int j = 0; j < g.n(); ++j) {
    Eigen::RowVectorXd acc = features.row(j);
    double denom = 1.0;
    for (const auto& [l, e] : g.neighbors(j)) {
      const double w = g.edge(e).w;
      acc += lambda * w * features.row(l);
      denom += lambda * w;
    }
    out.row(j) = acc / denom;
  }
  return out;
}

}  // namespace rcflow
