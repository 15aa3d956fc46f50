#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rcflow/dataset.hpp"
#include "rcflow/flow.hpp"

namespace rcflow {

struct BenchRow {
  std::string kind;
  int n = 0;
  int k = 0;
  std::string method;  // "rcf" | "ocf"
  double seconds = 0.0;
  int threads = 1;
  double speedup = 0.0;  // ocf/rcf, on the rcf row of a matched pair
  bool skipped = false;
};

struct BenchOptions {
  std::vector<ManifoldKind> kinds;
  std::vector<int> sizes;
  std::vector<int> ks;
  int n_iter = 5;
  std::uint64_t seed = 0;
  double eta = 0.5;
  double budget_seconds = 300.0;  // per-cell OCF cap (projected)
  double repeat_threshold = 5.0;  // cells faster than this get median-of-3
  double orc_alpha = 0.5;
};

/// Times dgsl_rcf and ocf_flow on every (kind, n, k) cell with identical
/// flow configuration. Timing: one warm-up run discarded, then median of 3
/// for fast cells (single run above repeat_threshold). OCF cells whose
/// projected time exceeds the budget are recorded as skipped, not failed.
std::vector<BenchRow> run_bench(
    const BenchOptions& opts,
    const std::function<void(const BenchRow&)>& on_row = nullptr);

/// "kind,n,k,method,seconds,threads,speedup,skipped" with a header line.
std::string bench_csv(const std::vector<BenchRow>& rows);

}  // namespace rcflow
