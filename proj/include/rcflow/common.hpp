#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>

namespace rcflow {

inline constexpr const char* kVersion = "rcflow 0.1.0";

/// Invalid parameters, shape mismatches, bad configs. CLI exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Solver breakdown: CG non-convergence, eigensolver failure, LP trouble.
/// CLI exit code 3.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input files (CSV/TSV). CLI exit code 4.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Filesystem trouble (missing file, unwritable output). CLI exit code 4.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Deterministic RNG. Distributions are hand-rolled on top of mt19937_64 so
/// streams are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return state_(); }

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(state_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t uniform_int(std::uint64_t n) {
    // Rejection sampling to avoid modulo bias.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = state_();
    } while (x >= limit);
    return x % n;
  }

  /// Standard normal via Box-Muller (caches the second deviate).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1, u2;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Worker count: min(hardware, RCFLOW_THREADS if set). At least 1.
int thread_count();

/// Runs fn(i) for i in [0, n). Splits into contiguous chunks across
/// thread_count() workers; falls back to a plain loop when single-threaded.
/// fn must not throw across threads without being self-contained; exceptions
/// are captured and rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// Shortest round-trip decimal representation of a double.
std::string format_double(double x);

}  // namespace rcflow
