#include "rcflow/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

#include "rcflow/common.hpp"

namespace rcflow {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

int PointCloud::num_classes() const {
  if (labels.empty()) return 0;
  return 1 + *std::max_element(labels.begin(), labels.end());
}

void PointCloud::validate() const {
  if (points.rows() < 1 || points.cols() < 1)
    throw ConfigError("point cloud must have n >= 1 and d >= 1");
  if (!points.allFinite())
    throw ConfigError("point cloud contains non-finite coordinates");
  if (!labels.empty()) {
    if (static_cast<int>(labels.size()) != n())
      throw ConfigError("label count does not match point count");
    const int c = num_classes();
    std::vector<int> counts(static_cast<std::size_t>(c), 0);
    for (int l : labels) {
      if (l < 0 || l >= c) throw ConfigError("label id out of range");
      ++counts[static_cast<std::size_t>(l)];
    }
    for (int cnt : counts)
      if (cnt == 0) throw ConfigError("empty label class");
  }
}

ManifoldKind manifold_kind_from_string(const std::string& name) {
  if (name == "swiss_roll") return ManifoldKind::SwissRoll;
  if (name == "s_curve") return ManifoldKind::SCurve;
  if (name == "truncated_sphere") return ManifoldKind::TruncatedSphere;
  if (name == "gaussian_surface") return ManifoldKind::GaussianSurface;
  throw ConfigError("unknown manifold kind: " + name);
}

std::string to_string(ManifoldKind kind) {
  switch (kind) {
    case ManifoldKind::SwissRoll: return "swiss_roll";
    case ManifoldKind::SCurve: return "s_curve";
    case ManifoldKind::TruncatedSphere: return "truncated_sphere";
    case ManifoldKind::GaussianSurface: return "gaussian_surface";
  }
  throw ConfigError("unknown manifold kind");
}

std::vector<int> equal_frequency_bins(const Eigen::VectorXd& values,
                                      int num_bins) {
  const int n = static_cast<int>(values.size());
  if (num_bins < 1 || num_bins > n)
    throw ConfigError("bin count must be in [1, n]");
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return values[a] < values[b];
  });
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  for (int rank = 0; rank < n; ++rank) {
    const auto bin = static_cast<int>(
        (static_cast<std::int64_t>(rank) * num_bins) / n);
    labels[static_cast<std::size_t>(order[static_cast<std::size_t>(rank)])] =
        bin;
  }
  return labels;
}

ManifoldSample generate_manifold_sample(const ManifoldSpec& spec) {
  if (spec.n < 1) throw ConfigError("sample count must be >= 1");
  if (spec.num_classes < 2)
    throw ConfigError("num_classes must be >= 2");
  if (spec.n < spec.num_classes)
    throw ConfigError("sample count must be >= num_classes");
  if (spec.noise && *spec.noise < 0.0)
    throw ConfigError("noise amplitude must be >= 0");

  Rng rng(spec.seed);
  Eigen::MatrixXd pts(spec.n, 3);
  Eigen::VectorXd param(spec.n);

  switch (spec.kind) {
    case ManifoldKind::SwissRoll:
      // x = t cos t, z = t sin t, t in [1.5pi, 4.5pi], depth y in [0, 21].
      for (int i = 0; i < spec.n; ++i) {
        const double t = rng.uniform(1.5 * kPi, 4.5 * kPi);
        const double y = 21.0 * rng.uniform();
        pts(i, 0) = t * std::cos(t);
        pts(i, 1) = y;
        pts(i, 2) = t * std::sin(t);
        param[i] = t;
      }
      break;
    case ManifoldKind::SCurve:
      for (int i = 0; i < spec.n; ++i) {
        const double t = rng.uniform(-1.5 * kPi, 1.5 * kPi);
        const double y = 2.0 * rng.uniform();
        pts(i, 0) = std::sin(t);
        pts(i, 1) = y;
        pts(i, 2) = (t >= 0.0 ? 1.0 : -1.0) * (std::cos(t) - 1.0);
        param[i] = t;
      }
      break;
    case ManifoldKind::TruncatedSphere:
      // Uniform area measure on the unit sphere restricted to polar angle
      // theta < 0.8pi (cos(theta) sampled uniformly above cos(0.8pi)).
      for (int i = 0; i < spec.n; ++i) {
        const double cos_cut = std::cos(0.8 * kPi);
        const double c = rng.uniform(cos_cut, 1.0);
        const double theta = std::acos(c);
        const double phi = rng.uniform(0.0, 2.0 * kPi);
        const double s = std::sin(theta);
        pts(i, 0) = s * std::cos(phi);
        pts(i, 1) = s * std::sin(phi);
        pts(i, 2) = c;
        param[i] = theta;
      }
      break;
    case ManifoldKind::GaussianSurface:
      for (int i = 0; i < spec.n; ++i) {
        const double x = rng.uniform(-3.0, 3.0);
        const double y = rng.uniform(-3.0, 3.0);
        pts(i, 0) = x;
        pts(i, 1) = y;
        pts(i, 2) = std::exp(-(x * x + y * y) / 2.0);
        param[i] = std::sqrt(x * x + y * y);
      }
      break;
  }

  double noise = 0.0;
  if (spec.noise) {
    noise = *spec.noise;
  } else {
    const Eigen::VectorXd span =
        pts.colwise().maxCoeff() - pts.colwise().minCoeff();
    noise = 0.05 * span.norm();
  }
  if (noise > 0.0) {
    for (int i = 0; i < spec.n; ++i)
      for (int j = 0; j < 3; ++j) pts(i, j) += noise * rng.normal();
  }

  ManifoldSample sample;
  sample.cloud.points = std::move(pts);
  sample.cloud.labels = equal_frequency_bins(param, spec.num_classes);
  sample.cloud.name = to_string(spec.kind);
  sample.param = std::move(param);
  sample.noise_used = noise;
  sample.cloud.validate();
  return sample;
}

PointCloud generate_manifold(const ManifoldSpec& spec) {
  return generate_manifold_sample(spec).cloud;
}

namespace {

double parse_cell(const std::string& cell, int row, int col) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  // Trailing whitespace is tolerated, anything else is a parse error.
  while (end && *end != '\0' && (*end == ' ' || *end == '\t' || *end == '\r'))
    ++end;
  if (end == begin || (end && *end != '\0') || !std::isfinite(v))
    throw ParseError("csv parse error at row " + std::to_string(row + 1) +
                     " column " + std::to_string(col + 1) + ": '" + cell +
                     "'");
  return v;
}

}  // namespace

PointCloud load_csv(const std::string& path, bool has_labels,
                    bool skip_header) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file: " + path);

  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    if (lineno == 0 && skip_header) {
      ++lineno;
      continue;
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      ++lineno;
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    int col = 0;
    while (std::getline(ss, cell, ',')) {
      row.push_back(parse_cell(cell, static_cast<int>(rows.size()), col));
      ++col;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("ragged csv row " + std::to_string(rows.size() + 1) +
                       ": expected " + std::to_string(rows.front().size()) +
                       " columns, got " + std::to_string(row.size()));
    rows.push_back(std::move(row));
    ++lineno;
  }
  if (rows.empty()) throw ParseError("empty csv file: " + path);

  const int n = static_cast<int>(rows.size());
  int d = static_cast<int>(rows.front().size());
  if (has_labels) {
    if (d < 2)
      throw ParseError("csv with labels needs at least 2 columns: " + path);
    --d;
  }
  if (d < 1) throw ParseError("csv has no feature columns: " + path);

  PointCloud cloud;
  cloud.points.resize(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) cloud.points(i, j) = rows[i][j];

  if (has_labels) {
    // Remap raw label values to dense ids 0..C-1 preserving numeric order.
    std::vector<double> raw(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const double v = rows[i][static_cast<std::size_t>(d)];
      if (v != std::floor(v))
        throw ParseError("non-integer label at row " + std::to_string(i + 1));
      raw[static_cast<std::size_t>(i)] = v;
    }
    std::vector<double> uniq(raw);
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    cloud.labels.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const auto it = std::lower_bound(uniq.begin(), uniq.end(),
                                       raw[static_cast<std::size_t>(i)]);
      cloud.labels[static_cast<std::size_t>(i)] =
          static_cast<int>(it - uniq.begin());
    }
  }
  cloud.name = path;
  cloud.validate();
  return cloud;
}

void save_csv(const PointCloud& cloud, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write file: " + path);
  for (int i = 0; i < cloud.n(); ++i) {
    for (int j = 0; j < cloud.dim(); ++j) {
      if (j) out << ',';
      out << format_double(cloud.points(i, j));
    }
    if (cloud.has_labels()) out << ',' << cloud.labels[static_cast<std::size_t>(i)];
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace rcflow
