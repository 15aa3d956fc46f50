// rcflow: weighted-graph optimization by resistance curvature flow, with an
// Ollivier-Ricci baseline, spectral-embedding evaluation, and a runtime
// benchmark sweep. One process per command; all artifacts are plain
// CSV/TSV/JSON.
#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rcflow/benchsuite.hpp"
#include "rcflow/common.hpp"
#include "rcflow/curvature.hpp"
#include "rcflow/dataset.hpp"
#include "rcflow/embed.hpp"
#include "rcflow/flow.hpp"
#include "rcflow/graph.hpp"
#include "rcflow/metrics.hpp"
#include "rcflow/resistance.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rcflow;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

struct StageError : std::runtime_error {
  StageError(const std::string& stage_name, int exit_code,
             const std::string& message)
      : std::runtime_error(message), stage(stage_name), code(exit_code) {}
  std::string stage;
  int code;
};

template <typename Fn>
auto run_stage(const std::string& stage, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    throw StageError(stage, kExitConfig, e.what());
  } catch (const SolverError& e) {
    throw StageError(stage, kExitNumeric, e.what());
  } catch (const ParseError& e) {
    throw StageError(stage, kExitIo, e.what());
  } catch (const IoError& e) {
    throw StageError(stage, kExitIo, e.what());
  }
}

// ---------------------------------------------------------------------------
// Run configuration (pipeline)

struct DatasetConfig {
  std::optional<ManifoldSpec> manifold;
  std::string csv_path;
  bool has_labels = false;
  bool header = false;
};

struct RunConfig {
  DatasetConfig dataset;
  int k = 10;
  std::optional<double> bandwidth;
  FlowConfig flow;
  FlowMethod method = FlowMethod::Rcf;
  OrcConfig orc;
  int d_target = 2;
  int clusters = 0;  // 0 -> number of dataset classes
  int restarts = 10;
  std::uint64_t embed_seed = 0;
  std::string out_dir = "rcflow_out";
  bool trace_timings = false;
};

std::optional<double> parse_bandwidth(const json& value) {
  if (value.is_string()) {
    if (value.get<std::string>() == "auto") return std::nullopt;
    throw ConfigError("graph.bandwidth must be a number or \"auto\"");
  }
  return value.get<double>();
}

RunConfig parse_run_config(const json& j) {
  RunConfig cfg;
  if (!j.is_object()) throw ConfigError("config root must be an object");

  const json& ds = j.at("dataset");
  if (ds.contains("csv_path")) {
    cfg.dataset.csv_path = ds.at("csv_path").get<std::string>();
    cfg.dataset.has_labels = ds.value("has_labels", false);
    cfg.dataset.header = ds.value("header", false);
  } else {
    ManifoldSpec spec;
    spec.kind = manifold_kind_from_string(ds.at("kind").get<std::string>());
    spec.n = ds.at("n").get<int>();
    if (ds.contains("noise")) spec.noise = ds.at("noise").get<double>();
    spec.seed = ds.value("seed", 0ull);
    spec.num_classes = ds.value("num_classes", 6);
    cfg.dataset.manifold = spec;
  }

  if (j.contains("graph")) {
    const json& g = j.at("graph");
    cfg.k = g.value("k", cfg.k);
    if (g.contains("bandwidth"))
      cfg.bandwidth = parse_bandwidth(g.at("bandwidth"));
  }

  if (j.contains("flow")) {
    const json& f = j.at("flow");
    cfg.flow.eta = f.value("eta", cfg.flow.eta);
    cfg.flow.n_iter = f.value("n_iter", cfg.flow.n_iter);
    cfg.flow.normalized = f.value("normalized", cfg.flow.normalized);
    cfg.flow.epsilon = f.value("epsilon", cfg.flow.epsilon);
    cfg.flow.d_floor = f.value("d_floor", cfg.flow.d_floor);
    cfg.flow.shrink_floor = f.value("shrink_floor", cfg.flow.shrink_floor);
    if (f.contains("final_norm"))
      cfg.flow.final_norm =
          final_norm_from_string(f.at("final_norm").get<std::string>());
    if (f.contains("solver"))
      cfg.flow.solver =
          resistance_solver_from_string(f.at("solver").get<std::string>());
    if (f.contains("method"))
      cfg.method = flow_method_from_string(f.at("method").get<std::string>());
  }

  if (j.contains("orc")) cfg.orc.alpha = j.at("orc").value("alpha", 0.5);

  if (j.contains("embed")) {
    const json& e = j.at("embed");
    cfg.d_target = e.value("d_target", cfg.d_target);
    cfg.clusters = e.value("clusters", cfg.clusters);
    cfg.restarts = e.value("restarts", cfg.restarts);
    cfg.embed_seed = e.value("seed", 0ull);
  }

  if (j.contains("output"))
    cfg.out_dir = j.at("output").value("dir", cfg.out_dir);
  return cfg;
}

json echo_run_config(const RunConfig& cfg) {
  json j;
  if (cfg.dataset.manifold) {
    const ManifoldSpec& s = *cfg.dataset.manifold;
    j["dataset"] = {{"kind", to_string(s.kind)},
                    {"n", s.n},
                    {"seed", s.seed},
                    {"num_classes", s.num_classes}};
    if (s.noise) j["dataset"]["noise"] = *s.noise;
  } else {
    j["dataset"] = {{"csv_path", cfg.dataset.csv_path},
                    {"has_labels", cfg.dataset.has_labels},
                    {"header", cfg.dataset.header}};
  }
  j["graph"] = {{"k", cfg.k}};
  j["graph"]["bandwidth"] = cfg.bandwidth ? json(*cfg.bandwidth) : json("auto");
  j["flow"] = {{"eta", cfg.flow.eta},
               {"n_iter", cfg.flow.n_iter},
               {"normalized", cfg.flow.normalized},
               {"epsilon", cfg.flow.epsilon},
               {"final_norm", to_string(cfg.flow.final_norm)},
               {"solver", to_string(cfg.flow.solver)},
               {"method", to_string(cfg.method)}};
  j["orc"] = {{"alpha", cfg.orc.alpha}};
  j["embed"] = {{"d_target", cfg.d_target},
                {"clusters", cfg.clusters},
                {"restarts", cfg.restarts},
                {"seed", cfg.embed_seed}};
  j["output"] = {{"dir", cfg.out_dir}};
  return j;
}

void validate_run_config(const RunConfig& cfg, const PointCloud& cloud) {
  cfg.flow.validate();
  if (cfg.k < 1 || cfg.k >= cloud.n())
    throw ConfigError("graph.k must satisfy 1 <= k < n (k=" +
                      std::to_string(cfg.k) +
                      ", n=" + std::to_string(cloud.n()) + ")");
  if (cfg.bandwidth && !(*cfg.bandwidth > 0.0))
    throw ConfigError("graph.bandwidth must be > 0");
  if (!(cfg.orc.alpha >= 0.0 && cfg.orc.alpha < 1.0))
    throw ConfigError("orc.alpha must lie in [0, 1)");
  if (cfg.d_target < 1 || cfg.d_target >= cloud.n())
    throw ConfigError("embed.d_target must satisfy 1 <= d < n");
  const int clusters = cfg.clusters > 0 ? cfg.clusters : cloud.num_classes();
  if (clusters < 1 || clusters > cloud.n())
    throw ConfigError("embed.clusters must satisfy 1 <= C <= n");
  if (cfg.restarts < 1) throw ConfigError("embed.restarts must be >= 1");
}

// ---------------------------------------------------------------------------
// Artifact writers

void write_text(const fs::path& path, const std::string& body) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write file: " + path.string());
  out << body;
  if (!out) throw IoError("write failed: " + path.string());
}

void write_curvature_csv(const fs::path& path, const WeightedGraph& g,
                         const CurvatureField& c) {
  std::ostringstream out;
  for (int e = 0; e < g.edge_count(); ++e)
    out << g.edge(e).u << ',' << g.edge(e).v << ','
        << format_double(c.edge_k[static_cast<std::size_t>(e)]) << '\n';
  const auto [mean, var] = mean_and_variance(c.edge_k);
  out << "summary," << format_double(mean) << ',' << format_double(var)
      << '\n';
  write_text(path, out.str());
}

void write_embedding_csv(const fs::path& path, const Embedding& e) {
  std::ostringstream out;
  for (int r = 0; r < e.coords.rows(); ++r) {
    for (int c = 0; c < e.coords.cols(); ++c) {
      if (c) out << ',';
      out << format_double(e.coords(r, c));
    }
    out << '\n';
  }
  write_text(path, out.str());
}

void write_clustering_csv(const fs::path& path,
                          const std::vector<int>& node_cluster) {
  std::ostringstream out;
  out << "node,cluster\n";
  for (std::size_t i = 0; i < node_cluster.size(); ++i)
    out << i << ',' << node_cluster[i] << '\n';
  write_text(path, out.str());
}

/// Embedding + k-means. Nodes outside the embedded component (disconnected
/// input) inherit the cluster of their nearest embedded node in feature
/// space.
std::vector<int> cluster_graph(const WeightedGraph& g, const PointCloud& cloud,
                               int d_target, int clusters, int restarts,
                               std::uint64_t seed, Embedding* embedding_out) {
  const Embedding emb = laplacian_eigenmaps(g, d_target);
  const Clustering cl = kmeans(emb, clusters, restarts, seed);
  std::vector<int> assign(static_cast<std::size_t>(g.n()), -1);
  for (std::size_t r = 0; r < emb.nodes.size(); ++r)
    assign[static_cast<std::size_t>(emb.nodes[r])] = cl.assign[r];
  if (emb.restricted) {
    std::cerr << "warning: graph disconnected; embedded the largest component ("
              << emb.nodes.size() << " of " << g.n() << " nodes)\n";
    for (int i = 0; i < g.n(); ++i) {
      if (assign[static_cast<std::size_t>(i)] >= 0) continue;
      double best = std::numeric_limits<double>::infinity();
      int best_node = emb.nodes.front();
      for (int j : emb.nodes) {
        const double d2 =
            (cloud.points.row(i) - cloud.points.row(j)).squaredNorm();
        if (d2 < best) {
          best = d2;
          best_node = j;
        }
      }
      assign[static_cast<std::size_t>(i)] =
          assign[static_cast<std::size_t>(best_node)];
    }
  }
  if (embedding_out) *embedding_out = emb;
  return assign;
}

// ---------------------------------------------------------------------------

int cmd_pipeline(const RunConfig& cfg) {
  // Everything is loaded and validated before the output directory is
  // touched: an invalid configuration writes nothing.
  const PointCloud cloud = run_stage("dataset", [&] {
    if (cfg.dataset.manifold) return generate_manifold(*cfg.dataset.manifold);
    return load_csv(cfg.dataset.csv_path, cfg.dataset.has_labels,
                    cfg.dataset.header);
  });
  run_stage("config", [&] {
    validate_run_config(cfg, cloud);
    return 0;
  });

  const fs::path dir(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    std::cerr << "pipeline stage output: cannot create directory "
              << dir.string() << "\n";
    return kExitIo;
  }

  json manifest;
  manifest["version"] = kVersion;
  manifest["config"] = echo_run_config(cfg);
  manifest["complete"] = false;
  manifest["artifacts"] = json::array();
  auto record = [&](const std::string& name) {
    manifest["artifacts"].push_back(name);
  };
  auto flush_manifest = [&] {
    write_text(dir / "MANIFEST.json", manifest.dump(2) + "\n");
  };

  try {
    run_stage("dataset", [&] {
      save_csv(cloud, (dir / "points.csv").string());
      record("points.csv");
      return 0;
    });

    const WeightedGraph initial = run_stage("graph", [&] {
      WeightedGraph g = knn_graph(cloud, cfg.k, cfg.bandwidth);
      save_edge_tsv(g, (dir / "edges_initial.tsv").string());
      record("edges_initial.tsv");
      return g;
    });

    const FlowResult flowed = run_stage("flow", [&] {
      FlowResult res = cfg.method == FlowMethod::Rcf
                           ? dgsl_rcf_graph(initial, cfg.flow)
                           : ocf_flow_graph(initial, cfg.flow, cfg.orc);
      save_edge_tsv(res.graph, (dir / "edges_flowed.tsv").string());
      record("edges_flowed.tsv");
      save_trace_csv(res.trace, (dir / "trace.csv").string(),
                     !cfg.trace_timings);
      record("trace.csv");
      return res;
    });

    run_stage("curvature", [&] {
      const CurvatureField c =
          cfg.method == FlowMethod::Rcf
              ? resistance_curvature(flowed.graph, cfg.flow.epsilon,
                                     cfg.flow.solver, cfg.flow.cg)
              : ollivier_ricci(flowed.graph, cfg.orc);
      write_curvature_csv(dir / "curvature.csv", flowed.graph, c);
      record("curvature.csv");
      return 0;
    });

    const int clusters = cfg.clusters > 0 ? cfg.clusters : cloud.num_classes();
    Embedding emb_flowed;
    const std::vector<int> assign_flowed = run_stage("embed", [&] {
      return cluster_graph(flowed.graph, cloud, cfg.d_target, clusters,
                           cfg.restarts, cfg.embed_seed, &emb_flowed);
    });
    run_stage("embed", [&] {
      write_embedding_csv(dir / "embedding.csv", emb_flowed);
      record("embedding.csv");
      write_clustering_csv(dir / "clustering.csv", assign_flowed);
      record("clustering.csv");
      return 0;
    });

    const std::vector<int> assign_baseline = run_stage("embed", [&] {
      return cluster_graph(initial, cloud, cfg.d_target, clusters,
                           cfg.restarts, cfg.embed_seed, nullptr);
    });

    if (cloud.has_labels()) {
      run_stage("metrics", [&] {
        const MetricsReport base =
            clustering_metrics(cloud.labels, assign_baseline);
        const MetricsReport flow =
            clustering_metrics(cloud.labels, assign_flowed);
        write_text(dir / "metrics_baseline.json", base.to_json() + "\n");
        record("metrics_baseline.json");
        write_text(dir / "metrics_flowed.json", flow.to_json() + "\n");
        record("metrics_flowed.json");
        json delta = {{"nmi", flow.nmi - base.nmi},
                      {"acc", flow.acc - base.acc},
                      {"ari", flow.ari - base.ari},
                      {"f1", flow.f1 - base.f1}};
        write_text(dir / "delta.json", delta.dump(2) + "\n");
        record("delta.json");
        return 0;
      });
    } else {
      manifest["metrics"] = "skipped (no labels)";
    }
  } catch (const StageError& e) {
    std::cerr << "pipeline stage " << e.stage << ": " << e.what() << "\n";
    manifest["stage_error"] = {{"stage", e.stage}, {"message", e.what()}};
    flush_manifest();
    return e.code;
  }

  manifest["complete"] = true;
  flush_manifest();
  std::cout << "pipeline complete: " << cfg.out_dir << "\n";
  return kExitOk;
}

/// Labels from a one-integer-per-line file or a "node,cluster" CSV
/// (pipeline artifact format); rows are ordered by node id.
std::vector<int> load_label_column(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file: " + path);
  std::vector<std::pair<long, long>> rows;
  std::string line;
  long lineno = 0, implicit = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.find_first_not_of("-0123456789,") != std::string::npos) {
      if (lineno == 1) continue;  // header
      throw ParseError("bad label at line " + std::to_string(lineno) + " of " +
                       path);
    }
    const auto comma = line.find(',');
    try {
      if (comma == std::string::npos) {
        rows.emplace_back(implicit++, std::stol(line));
      } else {
        rows.emplace_back(std::stol(line.substr(0, comma)),
                          std::stol(line.substr(comma + 1)));
      }
    } catch (const std::exception&) {
      throw ParseError("bad label at line " + std::to_string(lineno) + " of " +
                       path);
    }
  }
  if (rows.empty()) throw ParseError("no labels in " + path);
  std::sort(rows.begin(), rows.end());
  std::vector<int> labels;
  labels.reserve(rows.size());
  for (const auto& [node, label] : rows)
    labels.push_back(static_cast<int>(label));
  return labels;
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(std::stoi(tok));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rcflow: resistance curvature flow graph optimization"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "generate a synthetic manifold CSV");
  std::string gen_kind = "swiss_roll", gen_out = "points.csv";
  int gen_n = 1000, gen_classes = 6;
  double gen_noise = -1.0;
  std::uint64_t gen_seed = 0;
  gen->add_option("--kind", gen_kind,
                  "swiss_roll | s_curve | truncated_sphere | gaussian_surface");
  gen->add_option("--n", gen_n, "sample count");
  gen->add_option("--noise", gen_noise,
                  "gaussian noise amplitude (default: 5% of bbox diagonal)");
  gen->add_option("--seed", gen_seed, "random seed");
  gen->add_option("--classes", gen_classes, "label bin count");
  gen->add_option("--out", gen_out, "output CSV (labels in last column)");

  auto* graph_cmd = app.add_subcommand("graph", "build a kNN affinity graph");
  std::string graph_in, graph_out = "graph.tsv", graph_bw = "auto";
  int graph_k = 10;
  bool graph_labels = false, graph_header = false;
  graph_cmd->add_option("--in", graph_in, "input points CSV")->required();
  graph_cmd->add_flag("--has-labels", graph_labels,
                      "last CSV column holds labels");
  graph_cmd->add_flag("--header", graph_header, "skip the first CSV line");
  graph_cmd->add_option("--k", graph_k, "neighbor count");
  graph_cmd->add_option("--bandwidth", graph_bw,
                        "kernel bandwidth (number or 'auto')");
  graph_cmd->add_option("--out", graph_out, "output edge TSV");

  auto* curv =
      app.add_subcommand("curvature", "edge curvature of an edge-list graph");
  std::string curv_graph, curv_kind = "resistance", curv_out = "curvature.csv";
  std::string curv_solver = "cholesky";
  double curv_alpha = 0.5, curv_eps = 1e-6;
  curv->add_option("--graph", curv_graph, "input edge TSV")->required();
  curv->add_option("--kind", curv_kind, "resistance | ollivier");
  curv->add_option("--alpha", curv_alpha, "ORC laziness in [0,1)");
  curv->add_option("--epsilon", curv_eps, "Laplacian perturbation");
  curv->add_option("--solver", curv_solver,
                   "cg | cholesky | dense_pinv_oracle");
  curv->add_option("--out", curv_out, "output CSV");

  auto* flow_cmd = app.add_subcommand("flow", "run the curvature flow");
  std::string flow_in, flow_out_graph = "flowed.tsv",
                       flow_out_trace = "trace.csv";
  std::string flow_method = "rcf", flow_norm = "max_one", flow_bw = "auto";
  int flow_k = 10, flow_iters = 5;
  double flow_eta = 0.5, flow_eps = 1e-6, flow_alpha = 0.5;
  bool flow_raw = false, flow_labels = false, flow_header = false,
       flow_timings = false;
  flow_cmd->add_option("--in", flow_in, "input points CSV")->required();
  flow_cmd->add_flag("--has-labels", flow_labels, "last column holds labels");
  flow_cmd->add_flag("--header", flow_header, "skip the first CSV line");
  flow_cmd->add_option("--k", flow_k, "neighbor count");
  flow_cmd->add_option("--bandwidth", flow_bw, "kernel bandwidth or 'auto'");
  flow_cmd->add_option("--method", flow_method, "rcf | ocf");
  flow_cmd->add_option("--eta", flow_eta, "flow step size");
  flow_cmd->add_option("--n-iter", flow_iters, "iteration count");
  flow_cmd->add_option("--epsilon", flow_eps, "Laplacian perturbation");
  flow_cmd->add_flag("--raw", flow_raw, "use the unnormalized update");
  flow_cmd->add_option("--final-norm", flow_norm, "max_one | none");
  flow_cmd->add_option("--alpha", flow_alpha, "ORC laziness");
  flow_cmd->add_flag("--trace-timings", flow_timings,
                     "write real per-iteration seconds (breaks byte "
                     "reproducibility)");
  flow_cmd->add_option("--out-graph", flow_out_graph, "output edge TSV");
  flow_cmd->add_option("--out-trace", flow_out_trace, "output trace CSV");

  auto* pipe = app.add_subcommand("pipeline",
                                  "dataset -> graph -> flow -> embed -> metrics");
  std::string pipe_config;
  std::string pipe_out_dir, pipe_method, pipe_kind;
  int pipe_k = -1, pipe_iters = -1, pipe_n = -1, pipe_clusters = -1;
  double pipe_eta = -1.0;
  std::int64_t pipe_seed = -1;
  bool pipe_timings = false;
  pipe->add_option("--config", pipe_config, "JSON run configuration");
  pipe->add_option("--out-dir", pipe_out_dir, "override output directory");
  pipe->add_option("--method", pipe_method, "override flow method rcf|ocf");
  pipe->add_option("--kind", pipe_kind, "override dataset kind");
  pipe->add_option("--n", pipe_n, "override dataset size");
  pipe->add_option("--k", pipe_k, "override neighbor count");
  pipe->add_option("--eta", pipe_eta, "override flow step size");
  pipe->add_option("--n-iter", pipe_iters, "override iteration count");
  pipe->add_option("--clusters", pipe_clusters, "override cluster count");
  pipe->add_option("--seed", pipe_seed, "override dataset seed");
  pipe->add_flag("--trace-timings", pipe_timings,
                 "write real per-iteration seconds");

  auto* bench = app.add_subcommand("bench", "RCF vs OCF runtime sweep");
  std::string bench_kinds =
      "swiss_roll,s_curve,truncated_sphere,gaussian_surface";
  std::string bench_sizes = "1000,2000", bench_ks = "10,30,50";
  std::string bench_out = "bench.csv";
  int bench_iters = 5;
  double bench_budget = 300.0, bench_eta = 0.5;
  std::uint64_t bench_seed = 0;
  bench->add_option("--kinds", bench_kinds, "comma-separated manifold kinds");
  bench->add_option("--sizes", bench_sizes, "comma-separated sample counts");
  bench->add_option("--ks", bench_ks, "comma-separated neighbor counts");
  bench->add_option("--n-iter", bench_iters, "flow iterations per cell");
  bench->add_option("--eta", bench_eta, "flow step size");
  bench->add_option("--budget", bench_budget,
                    "skip OCF cells whose projected seconds exceed this");
  bench->add_option("--seed", bench_seed, "sweep seed");
  bench->add_option("--out", bench_out, "output CSV");

  auto* eval =
      app.add_subcommand("eval", "clustering metrics between two label files");
  std::string eval_truth, eval_pred, eval_out;
  eval->add_option("--truth", eval_truth,
                   "truth labels (one per line, or node,cluster CSV)")
      ->required();
  eval->add_option("--pred", eval_pred, "predicted labels")->required();
  eval->add_option("--out", eval_out, "write JSON here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*gen) {
      ManifoldSpec spec;
      spec.kind = run_stage(
          "config", [&] { return manifold_kind_from_string(gen_kind); });
      spec.n = gen_n;
      if (gen_noise >= 0.0) spec.noise = gen_noise;
      spec.seed = gen_seed;
      spec.num_classes = gen_classes;
      const PointCloud cloud =
          run_stage("dataset", [&] { return generate_manifold(spec); });
      run_stage("dataset", [&] {
        save_csv(cloud, gen_out);
        return 0;
      });
      std::cout << "wrote " << gen_out << " (" << cloud.n() << " x "
                << cloud.dim() << ", " << cloud.num_classes() << " classes)\n";
      return kExitOk;
    }

    if (*graph_cmd) {
      const PointCloud cloud = run_stage("dataset", [&] {
        return load_csv(graph_in, graph_labels, graph_header);
      });
      std::optional<double> bw;
      if (graph_bw != "auto")
        bw = run_stage("config", [&] {
          try {
            return std::stod(graph_bw);
          } catch (const std::exception&) {
            throw ConfigError("bandwidth must be a number or 'auto'");
          }
        });
      const WeightedGraph g =
          run_stage("graph", [&] { return knn_graph(cloud, graph_k, bw); });
      run_stage("graph", [&] {
        save_edge_tsv(g, graph_out);
        return 0;
      });
      std::cout << "wrote " << graph_out << " (" << g.n() << " nodes, "
                << g.edge_count() << " edges, bandwidth "
                << format_double(g.bandwidth()) << ")\n";
      return kExitOk;
    }

    if (*curv) {
      const WeightedGraph g =
          run_stage("graph", [&] { return load_edge_tsv(curv_graph); });
      const CurvatureField field = run_stage("curvature", [&] {
        if (curv_kind == "resistance")
          return resistance_curvature(
              g, curv_eps, resistance_solver_from_string(curv_solver));
        if (curv_kind == "ollivier") {
          OrcConfig oc;
          oc.alpha = curv_alpha;
          return ollivier_ricci(g, oc);
        }
        throw ConfigError("unknown curvature kind: " + curv_kind);
      });
      run_stage("curvature", [&] {
        write_curvature_csv(curv_out, g, field);
        return 0;
      });
      std::cout << "wrote " << curv_out << " (mean k "
                << format_double(field.mean_k) << ")\n";
      return kExitOk;
    }

    if (*flow_cmd) {
      const PointCloud cloud = run_stage("dataset", [&] {
        return load_csv(flow_in, flow_labels, flow_header);
      });
      FlowConfig fc;
      fc.eta = flow_eta;
      fc.n_iter = flow_iters;
      fc.normalized = !flow_raw;
      fc.epsilon = flow_eps;
      fc.final_norm = run_stage(
          "config", [&] { return final_norm_from_string(flow_norm); });
      if (flow_bw != "auto")
        fc.bandwidth = run_stage("config", [&] {
          try {
            return std::stod(flow_bw);
          } catch (const std::exception&) {
            throw ConfigError("bandwidth must be a number or 'auto'");
          }
        });
      const FlowMethod method = run_stage(
          "config", [&] { return flow_method_from_string(flow_method); });
      OrcConfig oc;
      oc.alpha = flow_alpha;
      const FlowResult res = run_stage("flow", [&] {
        return method == FlowMethod::Rcf ? dgsl_rcf(cloud, flow_k, fc)
                                         : ocf_flow(cloud, flow_k, fc, oc);
      });
      run_stage("flow", [&] {
        save_edge_tsv(res.graph, flow_out_graph);
        save_trace_csv(res.trace, flow_out_trace, !flow_timings);
        return 0;
      });
      std::cout << "wrote " << flow_out_graph << " and " << flow_out_trace
                << "\n";
      return kExitOk;
    }

    if (*pipe) {
      json j = json::object();
      if (!pipe_config.empty()) {
        std::ifstream in(pipe_config);
        if (!in) {
          std::cerr << "pipeline stage config: cannot open " << pipe_config
                    << "\n";
          return kExitIo;
        }
        try {
          in >> j;
        } catch (const json::exception& e) {
          std::cerr << "pipeline stage config: " << e.what() << "\n";
          return kExitConfig;
        }
      } else {
        j["dataset"] = {{"kind", "swiss_roll"}, {"n", 1000}};
      }
      // Flags override file values.
      if (!pipe_kind.empty()) j["dataset"]["kind"] = pipe_kind;
      if (pipe_n > 0) j["dataset"]["n"] = pipe_n;
      if (pipe_seed >= 0)
        j["dataset"]["seed"] = static_cast<std::uint64_t>(pipe_seed);
      if (pipe_k > 0) j["graph"]["k"] = pipe_k;
      if (pipe_eta > 0.0) j["flow"]["eta"] = pipe_eta;
      if (pipe_iters > 0) j["flow"]["n_iter"] = pipe_iters;
      if (!pipe_method.empty()) j["flow"]["method"] = pipe_method;
      if (pipe_clusters > 0) j["embed"]["clusters"] = pipe_clusters;
      if (!pipe_out_dir.empty()) j["output"]["dir"] = pipe_out_dir;

      RunConfig cfg;
      try {
        cfg = run_stage("config", [&] { return parse_run_config(j); });
      } catch (const json::exception& e) {
        std::cerr << "pipeline stage config: " << e.what() << "\n";
        return kExitConfig;
      }
      cfg.trace_timings = pipe_timings;
      return cmd_pipeline(cfg);
    }

    if (*bench) {
      BenchOptions opts;
      {
        std::stringstream ss(bench_kinds);
        std::string tok;
        while (std::getline(ss, tok, ','))
          if (!tok.empty())
            opts.kinds.push_back(run_stage(
                "config", [&] { return manifold_kind_from_string(tok); }));
      }
      opts.sizes = parse_int_list(bench_sizes);
      opts.ks = parse_int_list(bench_ks);
      opts.n_iter = bench_iters;
      opts.eta = bench_eta;
      opts.seed = bench_seed;
      opts.budget_seconds = bench_budget;
      std::printf("%-18s %6s %4s %-6s %12s %8s %8s\n", "kind", "n", "k",
                  "method", "seconds", "speedup", "skipped");
      const std::vector<BenchRow> rows = run_stage("bench", [&] {
        return run_bench(opts, [](const BenchRow& r) {
          std::printf("%-18s %6d %4d %-6s %12s %8s %8s\n", r.kind.c_str(), r.n,
                      r.k, r.method.c_str(),
                      r.skipped ? "-" : format_double(r.seconds).c_str(),
                      r.speedup > 0.0 ? format_double(r.speedup).c_str() : "-",
                      r.skipped ? "yes" : "no");
          std::fflush(stdout);
        });
      });
      run_stage("bench", [&] {
        write_text(bench_out, bench_csv(rows));
        return 0;
      });
      std::cout << "wrote " << bench_out << "\n";
      return kExitOk;
    }

    if (*eval) {
      const std::vector<int> truth =
          run_stage("eval", [&] { return load_label_column(eval_truth); });
      const std::vector<int> pred =
          run_stage("eval", [&] { return load_label_column(eval_pred); });
      if (truth.size() != pred.size())
        throw StageError("eval", kExitConfig,
                         "label files have different lengths");
      const MetricsReport rep =
          run_stage("eval", [&] { return clustering_metrics(truth, pred); });
      if (eval_out.empty())
        std::cout << rep.to_json() << "\n";
      else
        run_stage("eval", [&] {
          write_text(eval_out, rep.to_json() + "\n");
          return 0;
        });
      return kExitOk;
    }
  } catch (const StageError& e) {
    std::cerr << "stage " << e.stage << ": " << e.what() << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitOk;
}
