#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <array>
#include <random>
#include <stdexcept>
#include <vector>

namespace circcoords {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// n points in R^m, stored row-major, with optional ground-truth parameters.
///
/// `truth` holds one row of `truth_dims` values per point. For the circle and
/// trefoil that is the sampling angle; for the torus it is (s, t); for the
/// conjoined circles it is (angle, circle id).
struct PointCloud {
  std::size_t dim = 0;
  std::vector<double> coords;
  std::size_t truth_dims = 0;
  std::vector<double> truth;
  std::uint64_t seed = 0;

  PointCloud() = default;
  PointCloud(std::size_t dimension, std::vector<double> xs)
      : dim(dimension), coords(std::move(xs)) {
    validate();
  }

  std::size_t size() const { return dim == 0 ? 0 : coords.size() / dim; }
  bool has_truth() const { return truth_dims > 0; }

  const double* point(std::size_t i) const { return coords.data() + i * dim; }
  double coord(std::size_t i, std::size_t k) const { return coords[i * dim + k]; }
  double truth_at(std::size_t i, std::size_t k) const {
    return truth[i * truth_dims + k];
  }

  /// Column `k` of the truth table.
  std::vector<double> truth_column(std::size_t k) const {
    if (k >= truth_dims) throw std::out_of_range("truth column out of range");
    std::vector<double> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = truth_at(i, k);
    return out;
  }

  void validate() const {
    if (dim == 0) throw std::invalid_argument("point cloud dimension must be >= 1");
    if (coords.empty() || coords.size() % dim != 0)
      throw std::invalid_argument("point cloud must hold a positive whole number of points");
    if (truth_dims > 0 && truth.size() != size() * truth_dims)
      throw std::invalid_argument("truth table does not match point count");
  }
};

/// Dense symmetric distance matrix.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), d_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double v) {
    d_[i * n_ + j] = v;
    d_[j * n_ + i] = v;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> d_;
};

inline double squared_distance(const PointCloud& cloud, std::size_t i, std::size_t j) {
  const double* a = cloud.point(i);
  const double* b = cloud.point(j);
  double s = 0.0;
  for (std::size_t k = 0; k < cloud.dim; ++k) {
    const double diff = a[k] - b[k];
    s += diff * diff;
  }
  return s;
}

inline DistanceMatrix pairwise_distances(const PointCloud& cloud) {
  const std::size_t n = cloud.size();
  DistanceMatrix d(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d.set(i, j, std::sqrt(squared_distance(cloud, i, j)));
  return d;
}

/// Seeded normal sampler: MT19937-64 for bits, 53-bit uniforms, and the
/// Box-Muller transform. Unlike std::normal_distribution the output sequence
/// is fixed by this code, so seeds reproduce across standard libraries.
class NormalRng {
 public:
  explicit NormalRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // 1 - u lies in (0, 1], so the log is finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(kTwoPi * u2);
    has_spare_ = true;
    return r * std::cos(kTwoPi * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

inline double wrap_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

struct SamplingParams {
  double mean = std::numbers::pi;
  double stddev = 0.4 * std::numbers::pi;
  double noise_std = 0.07;
};

/// Unit circle x = sin t, y = cos t with t ~ N(mean, stddev^2) plus isotropic noise.
inline PointCloud gen_noisy_circle(std::size_t n, const SamplingParams& params,
                                   std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("gen_noisy_circle: n must be >= 1");
  NormalRng rng(seed);
  PointCloud cloud;
  cloud.dim = 2;
  cloud.truth_dims = 1;
  cloud.seed = seed;
  cloud.coords.reserve(2 * n);
  cloud.truth.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = rng.normal(params.mean, params.stddev);
    const double nx = rng.normal(0.0, params.noise_std);
    const double ny = rng.normal(0.0, params.noise_std);
    cloud.coords.push_back(std::sin(t) + nx);
    cloud.coords.push_back(std::cos(t) + ny);
    cloud.truth.push_back(wrap_angle(t));
  }
  return cloud;
}

inline std::array<double, 3> trefoil_point(double t) {
  return {std::cos(t) + 2.0 * std::cos(2.0 * t), std::sin(t) - 2.0 * std::sin(2.0 * t),
          2.0 * std::sin(3.0 * t)};
}

inline PointCloud gen_trefoil(std::size_t n, const SamplingParams& params, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("gen_trefoil: n must be >= 1");
  NormalRng rng(seed);
  PointCloud cloud;
  cloud.dim = 3;
  cloud.truth_dims = 1;
  cloud.seed = seed;
  cloud.coords.reserve(3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = rng.normal(params.mean, params.stddev);
    const auto p = trefoil_point(t);
    for (double c : p) cloud.coords.push_back(c + rng.normal(0.0, params.noise_std));
    cloud.truth.push_back(wrap_angle(t));
  }
  return cloud;
}

struct ConjoinedParams {
  double stddev = 0.4 * std::numbers::pi;
  double noise_std = 0.07;
  bool random_rotation = true;
};

/// Two noisy circles, each rotated by its own uniform angle, then placed so
/// that the circle centers sit at (0, 0) and (2, 0): tangent at (1, 0).
/// Truth columns: (sampling angle, circle id).
inline PointCloud gen_conjoined_circles(std::size_t n_per_circle, const ConjoinedParams& params,
                                        std::uint64_t seed) {
  if (n_per_circle == 0) throw std::invalid_argument("gen_conjoined_circles: n must be >= 1");
  NormalRng rng(seed);
  PointCloud cloud;
  cloud.dim = 2;
  cloud.truth_dims = 2;
  cloud.seed = seed;
  for (int circle = 0; circle < 2; ++circle) {
    const double rot = params.random_rotation ? kTwoPi * rng.uniform() : 0.0;
    const double c = std::cos(rot), s = std::sin(rot);
    const double cx = 2.0 * circle;
    for (std::size_t i = 0; i < n_per_circle; ++i) {
      const double t = rng.normal(std::numbers::pi, params.stddev);
      const double x = std::sin(t) + rng.normal(0.0, params.noise_std);
      const double y = std::cos(t) + rng.normal(0.0, params.noise_std);
      cloud.coords.push_back(cx + c * x - s * y);
      cloud.coords.push_back(s * x + c * y);
      cloud.truth.push_back(wrap_angle(t));
      cloud.truth.push_back(static_cast<double>(circle));
    }
  }
  return cloud;
}

inline std::array<double, 3> torus_point(double s, double t) {
  const double r = 4.0 + 2.0 * std::cos(s);
  return {r * std::cos(t), r * std::sin(t), 2.0 * std::sin(s)};
}

/// Torus with (s, t) drawn from the equal mixture of N((pi, 0), sigma^2 I) and
/// N((0, pi), sigma^2 I). Truth columns: (s mod 2pi, t mod 2pi).
inline PointCloud gen_torus(std::size_t n, double sigma, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("gen_torus: n must be >= 1");
  NormalRng rng(seed);
  PointCloud cloud;
  cloud.dim = 3;
  cloud.truth_dims = 2;
  cloud.seed = seed;
  for (std::size_t i = 0; i < n; ++i) {
    const bool first = rng.uniform() < 0.5;
    const double s = rng.normal(first ? std::numbers::pi : 0.0, sigma);
    const double t = rng.normal(first ? 0.0 : std::numbers::pi, sigma);
    const auto p = torus_point(s, t);
    cloud.coords.insert(cloud.coords.end(), p.begin(), p.end());
    cloud.truth.push_back(wrap_angle(s));
    cloud.truth.push_back(wrap_angle(t));
  }
  return cloud;
}

}  // namespace circcoords
