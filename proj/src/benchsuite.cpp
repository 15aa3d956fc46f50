#include "rcflow/benchsuite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>

#include "rcflow/common.hpp"

namespace rcflow {

namespace {

using Clock = std::chrono::steady_clock;

double time_once(const std::function<void()>& fn) {
  const auto start = Clock::now();
  fn();
  return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Warm-up run discarded, then median of 3. Repeats exist for jitter
/// control at sub-second scales; a cell whose warm-up already exceeds the
/// threshold is reported from that single measurement.
double timed_median(const std::function<void()>& fn, double repeat_threshold) {
  const double warmup = time_once(fn);
  if (warmup >= repeat_threshold) return warmup;
  double t0 = time_once(fn);
  double t1 = time_once(fn);
  double t2 = time_once(fn);
  if (t0 > t1) std::swap(t0, t1);
  if (t1 > t2) std::swap(t1, t2);
  if (t0 > t1) std::swap(t0, t1);
  return t1;
}

std::uint64_t cell_seed(std::uint64_t base, ManifoldKind kind, int n, int k) {
  std::uint64_t h = base ^ 0x9e3779b97f4a7c15ull;
  h = h * 1099511628211ull + static_cast<std::uint64_t>(kind);
  h = h * 1099511628211ull + static_cast<std::uint64_t>(n);
  h = h * 1099511628211ull + static_cast<std::uint64_t>(k);
  return h;
}

}  // namespace

std::vector<BenchRow> run_bench(
    const BenchOptions& opts,
    const std::function<void(const BenchRow&)>& on_row) {
  if (opts.kinds.empty() || opts.sizes.empty() || opts.ks.empty())
    throw ConfigError("bench sweep needs kinds, sizes and ks");
  for (int n : opts.sizes)
    for (int k : opts.ks)
      if (n <= k)
        throw ConfigError("bench size " + std::to_string(n) +
                          " must exceed k " + std::to_string(k));

  FlowConfig cfg;
  cfg.eta = opts.eta;
  cfg.n_iter = opts.n_iter;
  cfg.collect_diagnostics = false;
  OrcConfig orc;
  orc.alpha = opts.orc_alpha;

  const int threads = thread_count();
  std::vector<BenchRow> rows;
  // Projection base per (kind, k): last measured OCF cell at a smaller n.
  std::map<std::pair<std::string, int>, std::pair<int, double>> ocf_scale;

  for (ManifoldKind kind : opts.kinds) {
    for (int n : opts.sizes) {
      for (int k : opts.ks) {
        ManifoldSpec spec;
        spec.kind = kind;
        spec.n = n;
        spec.noise = 0.0;
        spec.seed = cell_seed(opts.seed, kind, n, k);
        spec.num_classes = 2;
        const PointCloud cloud = generate_manifold(spec);

        BenchRow rcf_row;
        rcf_row.kind = to_string(kind);
        rcf_row.n = n;
        rcf_row.k = k;
        rcf_row.method = "rcf";
        rcf_row.threads = threads;
        rcf_row.seconds = timed_median(
            [&] { dgsl_rcf(cloud, k, cfg); }, opts.repeat_threshold);

        BenchRow ocf_row = rcf_row;
        ocf_row.method = "ocf";
        const auto key = std::make_pair(rcf_row.kind, k);
        double projected = 0.0;
        if (const auto it = ocf_scale.find(key); it != ocf_scale.end()) {
          const auto [n_prev, t_prev] = it->second;
          projected = t_prev * std::pow(static_cast<double>(n) / n_prev, 2.0);
        }
        if (projected > opts.budget_seconds) {
          ocf_row.skipped = true;
          ocf_row.seconds = 0.0;
        } else {
          ocf_row.seconds = timed_median(
              [&] { ocf_flow(cloud, k, cfg, orc); }, opts.repeat_threshold);
          ocf_scale[key] = {n, ocf_row.seconds};
        }

        if (!ocf_row.skipped && rcf_row.seconds > 0.0)
          rcf_row.speedup = ocf_row.seconds / rcf_row.seconds;

        if (on_row) on_row(rcf_row);
        if (on_row) on_row(ocf_row);
        rows.push_back(rcf_row);
        rows.push_back(ocf_row);
      }
    }
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "kind,n,k,method,seconds,threads,speedup,skipped\n";
  for (const BenchRow& r : rows) {
    out << r.kind << ',' << r.n << ',' << r.k << ',' << r.method << ','
        << (r.skipped ? std::string("") : format_double(r.seconds)) << ','
        << r.threads << ','
        << (r.speedup > 0.0 ? format_double(r.speedup) : std::string("")) << ','
        << (r.skipped ? 1 : 0) << '\n';
  }
  return out.str();
}

}  // namespace rcflow
