#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "rcflow/common.hpp"
#include "rcflow/flow.hpp"

using namespace rcflow;

namespace {

/// Two unit-weight cliques joined by one disproportionately heavy bridge: a
/// shortcut that looks close in feature space but has no path redundancy.
WeightedGraph cliques_with_bridge(int clique = 4, double bridge_w = 20.0) {
  std::vector<Edge> edges;
  for (int i = 0; i < clique; ++i)
    for (int j = i + 1; j < clique; ++j) edges.push_back(Edge{i, j, 1.0});
  for (int i = 0; i < clique; ++i)
    for (int j = i + 1; j < clique; ++j)
      edges.push_back(Edge{clique + i, clique + j, 1.0});
  edges.push_back(Edge{clique - 1, clique, bridge_w});
  return WeightedGraph(2 * clique, std::move(edges));
}

PointCloud equilateral_triangle() {
  PointCloud cloud;
  cloud.points.resize(3, 2);
  cloud.points << 0.0, 0.0, 1.0, 0.0, 0.5, std::sqrt(3.0) / 2.0;
  return cloud;
}

}  // namespace

TEST_SUITE("flow") {

TEST_CASE("single edge raw update follows the closed form") {
  const WeightedGraph g(2, {Edge{0, 1, 1.0}});
  const CurvatureField c =
      resistance_curvature(g, 1e-10, ResistanceSolver::Cholesky);
  CHECK(c.edge_k[0] == doctest::Approx(2.0).epsilon(1e-7));
  const WeightedGraph next = rcf_step(g, c, 0.1, false, 0.01, 1e-12);
  // d' = 1 - 0.1 * 1 * 2 = 0.8, w' = 1.25.
  CHECK(1.0 / next.edge(0).w == doctest::Approx(0.8).epsilon(1e-6));
  CHECK(next.edge(0).w == doctest::Approx(1.25).epsilon(1e-6));
}

TEST_CASE("normalized update leaves symmetric graphs unchanged") {
  const WeightedGraph tri(3, {Edge{0, 1, 1.0}, Edge{0, 2, 1.0},
                              Edge{1, 2, 1.0}});
  const CurvatureField c =
      resistance_curvature(tri, 1e-9, ResistanceSolver::Cholesky);
  const WeightedGraph next = rcf_step(tri, c, 0.5, true, 0.01, 1e-12);
  for (int e = 0; e < tri.edge_count(); ++e)
    CHECK(std::abs(1.0 / next.edge(e).w - 1.0 / tri.edge(e).w) <= 1e-12);
}

TEST_CASE("normalized update moves distances against the curvature sign") {
  Rng rng(7);
  const WeightedGraph g = oracles::random_connected_knn(rng, 40, 4);
  const CurvatureField c =
      resistance_curvature(g, 1e-8, ResistanceSolver::Cholesky);
  const double eta = 0.01;
  const WeightedGraph next = rcf_step(g, c, eta, true, 0.01, 1e-12);
  for (int e = 0; e < g.edge_count(); ++e) {
    const double before = 1.0 / g.edge(e).w;
    const double after = 1.0 / next.edge(e).w;
    const double dev = c.edge_k[static_cast<std::size_t>(e)] - c.mean_k;
    if (dev > 1e-9) CHECK(after < before);
    if (dev < -1e-9) CHECK(after > before);
  }
  // Mean-centered deviations sum to zero by construction.
  double sum = 0.0;
  for (double k : c.edge_k) sum += k - c.mean_k;
  CHECK(std::abs(sum) <= 1e-9 * static_cast<double>(c.edge_k.size()));
}

TEST_CASE("kind mismatch is rejected") {
  const WeightedGraph g(2, {Edge{0, 1, 1.0}});
  CurvatureField c = ollivier_ricci(g, OrcConfig{});
  CHECK_THROWS_AS(rcf_step(g, c, 0.1, true, 0.01, 1e-12), ConfigError);
}

TEST_CASE("clamps keep distances positive under violent steps") {
  const WeightedGraph g(2, {Edge{0, 1, 1.0}});
  CurvatureField c;
  c.kind = CurvatureKind::Resistance;
  c.edge_k = {100.0};
  c.mean_k = 0.0;
  // Raw factor would be 1 - 5*100 < 0; the shrink floor takes over.
  const WeightedGraph next = rcf_step(g, c, 5.0, false, 0.01, 1e-12);
  CHECK(1.0 / next.edge(0).w == doctest::Approx(0.01));
  CHECK(next.edge(0).w > 0.0);
}

TEST_CASE("equilateral triangle cloud is a fixed point of dgsl_rcf") {
  FlowConfig cfg;
  cfg.eta = 0.3;
  cfg.n_iter = 3;
  const FlowResult res = dgsl_rcf(equilateral_triangle(), 2, cfg);
  REQUIRE(res.graph.edge_count() == 3);
  for (const Edge& e : res.graph.edges())
    CHECK(e.w == doctest::Approx(res.graph.edge(0).w).epsilon(1e-12));
  double w_max = 0.0;
  for (const Edge& e : res.graph.edges()) w_max = std::max(w_max, e.w);
  CHECK(w_max == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(res.trace.iterations.size() == 3);
}

TEST_CASE("zero-eta single iteration reduces to the kNN graph") {
  ManifoldSpec spec;
  spec.kind = ManifoldKind::SCurve;
  spec.n = 60;
  spec.noise = 0.0;
  spec.seed = 5;
  spec.num_classes = 2;
  const PointCloud cloud = generate_manifold(spec);
  FlowConfig cfg;
  cfg.eta = 1e-300;  // eta must be positive; this is numerically zero
  cfg.n_iter = 1;
  cfg.final_norm = FinalNorm::None;
  const FlowResult res = dgsl_rcf(cloud, 5, cfg);
  const WeightedGraph base = knn_graph(cloud, 5);
  REQUIRE(res.graph.edge_count() == base.edge_count());
  for (int e = 0; e < base.edge_count(); ++e)
    CHECK(res.graph.edge(e).w == doctest::Approx(base.edge(e).w).epsilon(1e-12));
}

TEST_CASE("flow preserves automorphism symmetry and positivity") {
  // C6 cycle has a transitive automorphism group.
  std::vector<Edge> cyc;
  for (int i = 0; i < 6; ++i)
    cyc.push_back(Edge{std::min(i, (i + 1) % 6), std::max(i, (i + 1) % 6), 1.0});
  const WeightedGraph g(6, std::move(cyc));
  FlowConfig cfg;
  cfg.eta = 0.4;
  cfg.n_iter = 4;
  const FlowResult res = dgsl_rcf_graph(g, cfg);
  for (const Edge& e : res.graph.edges()) {
    CHECK(e.w == doctest::Approx(res.graph.edge(0).w).epsilon(1e-10));
    CHECK(e.w > 0.0);
  }
}

TEST_CASE("manifold enhancement: cliques tighten, the bridge stretches") {
  const WeightedGraph g = cliques_with_bridge();
  const CurvatureField c =
      resistance_curvature(g, 1e-8, ResistanceSolver::Cholesky);
  const WeightedGraph next = rcf_step(g, c, 0.1, true, 0.01, 1e-12);
  const int bridge = g.find_edge(3, 4);
  REQUIRE(bridge >= 0);
  for (int e = 0; e < g.edge_count(); ++e) {
    const double before = 1.0 / g.edge(e).w;
    const double after = 1.0 / next.edge(e).w;
    if (e == bridge)
      CHECK(after > before);
    else
      CHECK(after < before);
  }
}

TEST_CASE("ocf flow on a single edge is stationary") {
  PointCloud cloud;
  cloud.points.resize(2, 1);
  cloud.points << 0.0, 1.0;
  FlowConfig cfg;
  cfg.eta = 0.5;
  cfg.n_iter = 3;
  cfg.final_norm = FinalNorm::None;
  OrcConfig orc;
  orc.alpha = 0.5;
  const FlowResult res = ocf_flow(cloud, 1, cfg, orc);
  const WeightedGraph base = knn_graph(cloud, 1);
  CHECK(res.graph.edge(0).w == doctest::Approx(base.edge(0).w).epsilon(1e-12));
  for (const IterationStats& it : res.trace.iterations)
    CHECK(it.mean_k == doctest::Approx(1.0));
}

TEST_CASE("ocf flow keeps the equilateral symmetry") {
  FlowConfig cfg;
  cfg.eta = 0.3;
  cfg.n_iter = 2;
  const FlowResult res = ocf_flow(equilateral_triangle(), 2, cfg, OrcConfig{});
  for (const Edge& e : res.graph.edges())
    CHECK(e.w == doctest::Approx(res.graph.edge(0).w).epsilon(1e-12));
}

TEST_CASE("trace rows carry per-iteration diagnostics") {
  ManifoldSpec spec;
  spec.kind = ManifoldKind::SwissRoll;
  spec.n = 120;
  spec.noise = 0.0;
  spec.seed = 2;
  spec.num_classes = 2;
  const PointCloud cloud = generate_manifold(spec);
  FlowConfig cfg;
  cfg.eta = 0.2;
  cfg.n_iter = 3;
  const FlowResult res = dgsl_rcf(cloud, 6, cfg);
  REQUIRE(res.trace.iterations.size() == 3);
  for (const IterationStats& s : res.trace.iterations) {
    CHECK(s.min_d > 0.0);
    CHECK(s.max_d >= s.min_d);
    CHECK(s.dirichlet > 0.0);
    CHECK(s.var_k >= 0.0);
  }
}

TEST_CASE("gfl aggregation fixtures") {
  const WeightedGraph pair(2, {Edge{0, 1, 1.0}});
  Eigen::MatrixXd x(2, 1);
  x << 0.0, 2.0;

  // lambda = 0 is the identity.
  CHECK(gfl_aggregate(x, pair, 0.0) == x);

  // lambda = 1 averages the pair exactly.
  const Eigen::MatrixXd mid = gfl_aggregate(x, pair, 1.0);
  CHECK(mid(0, 0) == doctest::Approx(1.0));
  CHECK(mid(1, 0) == doctest::Approx(1.0));

  // Large lambda converges to the weighted neighbor mean (the paired
  // feature here), staying inside the convex hull of the inputs.
  const Eigen::MatrixXd far = gfl_aggregate(x, pair, 1000.0);
  CHECK(far(0, 0) == doctest::Approx(2.0).epsilon(1e-2));
  CHECK(far(1, 0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-2));
}

TEST_CASE("gfl output rows stay in the local convex hull") {
  Rng rng(23);
  const WeightedGraph g = oracles::random_connected_knn(rng, 30, 4);
  Eigen::MatrixXd x(30, 2);
  for (int i = 0; i < 30; ++i) {
    x(i, 0) = rng.uniform(-5.0, 5.0);
    x(i, 1) = rng.uniform(-5.0, 5.0);
  }
  const Eigen::MatrixXd out = gfl_aggregate(x, g, 0.7);
  for (int i = 0; i < 30; ++i) {
    for (int c = 0; c < 2; ++c) {
      double lo = x(i, c), hi = x(i, c);
      for (const auto& [j, e] : g.neighbors(i)) {
        lo = std::min(lo, x(j, c));
        hi = std::max(hi, x(j, c));
      }
      CHECK(out(i, c) >= lo - 1e-12);
      CHECK(out(i, c) <= hi + 1e-12);
    }
  }
}

TEST_CASE("gfl validates shapes and lambda") {
  const WeightedGraph g(2, {Edge{0, 1, 1.0}});
  Eigen::MatrixXd wrong(3, 1);
  wrong.setZero();
  CHECK_THROWS_AS(gfl_aggregate(wrong, g, 1.0), ConfigError);
  Eigen::MatrixXd ok(2, 1);
  ok.setZero();
  CHECK_THROWS_AS(gfl_aggregate(ok, g, -1.0), ConfigError);
}

TEST_CASE("flow config validation") {
  FlowConfig cfg;
  cfg.eta = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = FlowConfig{};
  cfg.n_iter = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = FlowConfig{};
  cfg.shrink_floor = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

}  // TEST_SUITE
