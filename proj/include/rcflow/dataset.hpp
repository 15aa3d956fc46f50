#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rcflow {

/// n samples by d coordinates, optionally with dense integer class labels
/// (0..C-1, every class nonempty).
struct PointCloud {
  Eigen::MatrixXd points;
  std::vector<int> labels;  // empty when unlabeled
  std::string name;

  int n() const { return static_cast<int>(points.rows()); }
  int dim() const { return static_cast<int>(points.cols()); }
  bool has_labels() const { return !labels.empty(); }
  int num_classes() const;

  /// Throws ConfigError when an invariant is violated.
  void validate() const;
};

enum class ManifoldKind { SwissRoll, SCurve, TruncatedSphere, GaussianSurface };

ManifoldKind manifold_kind_from_string(const std::string& name);
std::string to_string(ManifoldKind kind);

struct ManifoldSpec {
  ManifoldKind kind = ManifoldKind::SwissRoll;
  int n = 1000;
  /// Gaussian noise amplitude; unset means 0.05 x bounding-box diagonal.
  std::optional<double> noise;
  std::uint64_t seed = 0;
  int num_classes = 6;
};

/// Sampled cloud plus the intrinsic parameter used for labeling
/// (arc parameter, polar angle, or radius depending on the surface).
struct ManifoldSample {
  PointCloud cloud;
  Eigen::VectorXd param;
  double noise_used = 0.0;
};

/// Samples n points from the named surface in R^3, adds isotropic Gaussian
/// noise, and labels by equal-frequency binning of the intrinsic parameter.
/// Deterministic for a fixed spec.
PointCloud generate_manifold(const ManifoldSpec& spec);

/// Same as generate_manifold but keeps the per-point parameter for tests.
ManifoldSample generate_manifold_sample(const ManifoldSpec& spec);

/// Equal-frequency binning of values into num_bins labels; bin sizes differ
/// by at most one. Ties broken by index, deterministic.
std::vector<int> equal_frequency_bins(const Eigen::VectorXd& values,
                                      int num_bins);

/// Loads a comma-separated numeric file. When has_labels, the last column is
/// consumed as integer labels and remapped to dense ids 0..C-1 preserving
/// numeric order. skip_header drops the first line.
PointCloud load_csv(const std::string& path, bool has_labels,
                    bool skip_header = false);

/// Writes points (and labels, when present, as a trailing integer column)
/// with shortest round-trip precision.
void save_csv(const PointCloud& cloud, const std::string& path);

}  // namespace rcflow
