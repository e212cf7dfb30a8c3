#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "geometry.hpp"

namespace circcoords {

struct Projection2D {
  std::vector<double> xy;  // interleaved (x, y) per point
  bool pca = false;        // false: raw coordinates (2D input) or a 1D strip
};

/// Leading `k` eigenpairs of a symmetric positive semidefinite m x m matrix
/// (row-major) by power iteration with deflation.
inline std::vector<std::vector<double>> leading_eigenvectors(std::vector<double> a, std::size_t m, std::size_t k,
                                                             double tol = 1e-10, std::size_t max_iter = 10000,
                                                             std::vector<double>* eigenvalues = nullptr) {
  if (a.size() != m * m) throw std::invalid_argument("leading_eigenvectors: matrix is not m x m");
  std::vector<std::vector<double>> vecs;
  std::vector<double> v(m), w(m);
  for (std::size_t r = 0; r < k && r < m; ++r) {
    for (std::size_t i = 0; i < m; ++i) v[i] = 1.0 + 0.1 * static_cast<double>(i);
    double lambda = 0.0;
    for (std::size_t it = 0; it < max_iter; ++it) {
      for (const auto& u : vecs) {
        double dot = 0.0;
        for (std::size_t i = 0; i < m; ++i) dot += u[i] * v[i];
        for (std::size_t i = 0; i < m; ++i) v[i] -= dot * u[i];
      }
      double norm = 0.0;
      for (double x : v) norm += x * x;
      norm = std::sqrt(norm);
      if (norm == 0.0) break;
      for (double& x : v) x /= norm;
      for (std::size_t i = 0; i < m; ++i) {
        w[i] = 0.0;
        for (std::size_t j = 0; j < m; ++j) w[i] += a[i * m + j] * v[j];
      }
      double next = 0.0, change = 0.0;
      for (std::size_t i = 0; i < m; ++i) next += v[i] * w[i];
      double wnorm = 0.0;
      for (double x : w) wnorm += x * x;
      wnorm = std::sqrt(wnorm);
      if (wnorm == 0.0) break;
      for (std::size_t i = 0; i < m; ++i) {
        const double d = w[i] / wnorm - v[i];
        change += d * d;
      }
      v.swap(w);
      for (double& x : v) x /= wnorm;
      lambda = next;
      if (std::sqrt(change) < tol) break;
    }
    // Deflate: A -= lambda v v^T.
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) a[i * m + j] -= lambda * v[i] * v[j];
    vecs.push_back(v);
    if (eigenvalues) eigenvalues->push_back(lambda);
  }
  return vecs;
}

/// 2D view of a cloud: raw coordinates when m = 2, the first two principal
/// components when m > 2, and (x, 0) when m = 1.
inline Projection2D project_2d(const PointCloud& cloud) {
  const std::size_t n = cloud.size(), m = cloud.dim;
  Projection2D out;
  out.xy.resize(2 * n, 0.0);
  if (m <= 2) {
    for (std::size_t i = 0; i < n; ++i) {
      out.xy[2 * i] = cloud.coords[i * m];
      if (m == 2) out.xy[2 * i + 1] = cloud.coords[i * m + 1];
    }
    return out;
  }
  std::vector<double> mean(m, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < m; ++k) mean[k] += cloud.coords[i * m + k];
  for (double& x : mean) x /= static_cast<double>(n);
  std::vector<double> cov(m * m, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b)
        cov[a * m + b] += (cloud.coords[i * m + a] - mean[a]) * (cloud.coords[i * m + b] - mean[b]);
  for (double& x : cov) x /= static_cast<double>(n);

  const auto axes = leading_eigenvectors(cov, m, 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t r = 0; r < axes.size(); ++r) {
      double s = 0.0;
      for (std::size_t k = 0; k < m; ++k) s += (cloud.coords[i * m + k] - mean[k]) * axes[r][k];
      out.xy[2 * i + r] = s;
    }
  out.pca = true;
  return out;
}

}  // namespace circcoords
