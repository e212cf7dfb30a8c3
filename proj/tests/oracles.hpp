#pragma once

// Independent reference computations for tests. Nothing here calls the
// library's complex builder, reducer, or solvers.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "circcoords/geometry.hpp"

namespace oracle {

using circcoords::DistanceMatrix;
using circcoords::PointCloud;

inline PointCloud random_cloud(std::mt19937_64& rng, std::size_t n, std::size_t dim, double scale = 1.0) {
  std::uniform_real_distribution<double> u(0.0, scale);
  PointCloud c;
  c.dim = dim;
  for (std::size_t i = 0; i < n * dim; ++i) c.coords.push_back(u(rng));
  return c;
}

inline double distance(const PointCloud& c, std::size_t a, std::size_t b) {
  double s = 0.0;
  for (std::size_t k = 0; k < c.dim; ++k) {
    const double d = c.coords[a * c.dim + k] - c.coords[b * c.dim + k];
    s += d * d;
  }
  return std::sqrt(s);
}

struct BruteComplex {
  std::set<std::pair<std::uint32_t, std::uint32_t>> edges;
  std::set<std::array<std::uint32_t, 3>> triangles;
};

inline BruteComplex brute_rips(const PointCloud& c, double eps) {
  BruteComplex out;
  const auto n = static_cast<std::uint32_t>(c.size());
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j)
      if (distance(c, i, j) <= eps) out.edges.insert({i, j});
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j)
      for (std::uint32_t k = j + 1; k < n; ++k)
        if (distance(c, i, j) <= eps && distance(c, i, k) <= eps && distance(c, j, k) <= eps)
          out.triangles.insert({i, j, k});
  return out;
}

/// Rank of an integer matrix over Z_p by Gaussian elimination.
inline std::size_t rank_mod_p(std::vector<std::vector<long long>> m, long long p) {
  auto inv = [p](long long a) {
    long long r = 1, b = ((a % p) + p) % p;
    for (long long e = p - 2; e > 0; e >>= 1) {
      if (e & 1) r = r * b % p;
      b = b * b % p;
    }
    return r;
  };
  std::size_t rank = 0;
  const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  for (auto& row : m)
    for (auto& x : row) x = ((x % p) + p) % p;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t piv = rank;
    while (piv < rows && m[piv][col] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[rank]);
    const long long s = inv(m[rank][col]);
    for (auto& x : m[rank]) x = x * s % p;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || m[r][col] == 0) continue;
      const long long factor = m[r][col];
      for (std::size_t k = 0; k < cols; ++k) m[r][k] = ((m[r][k] - factor * m[rank][k]) % p + p) % p;
    }
    ++rank;
  }
  return rank;
}

/// Degree-1 persistence of the Rips filtration from persistent Betti numbers
///   beta(a, b) = |E_a| - rank d1(X_a) - rank d2(X_b) + rank d2(X_b)|_{E_b \ E_a}
/// evaluated at every pair of critical values, then inclusion-exclusion.
/// Classes alive at `threshold` are reported with death = threshold.
inline std::multiset<std::pair<double, double>> persistence_by_ranks(const PointCloud& c, double threshold,
                                                                     long long p) {
  const std::size_t n = c.size();
  std::vector<std::tuple<double, std::uint32_t, std::uint32_t>> all_edges;
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j)
      if (distance(c, i, j) <= threshold) all_edges.emplace_back(distance(c, i, j), i, j);
  std::vector<std::array<std::uint32_t, 3>> all_tris;
  std::vector<double> tri_value;
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j)
      for (std::uint32_t k = j + 1; k < n; ++k) {
        const double v = std::max({distance(c, i, j), distance(c, i, k), distance(c, j, k)});
        if (v <= threshold) {
          all_tris.push_back({i, j, k});
          tri_value.push_back(v);
        }
      }
  std::vector<double> values;
  for (const auto& [len, i, j] : all_edges) values.push_back(len);
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  if (values.empty() || values.back() < threshold) values.push_back(threshold);
  const std::size_t m = values.size();

  auto edge_index = [&](std::uint32_t a, std::uint32_t b) {
    for (std::size_t e = 0; e < all_edges.size(); ++e)
      if (std::get<1>(all_edges[e]) == a && std::get<2>(all_edges[e]) == b) return e;
    throw std::logic_error("missing edge");
  };
  // beta(i, j) for 0 <= i <= j < m; index -1 means "no edges yet".
  auto beta = [&](int i, int j) -> long long {
    if (i < 0) return 0;
    const double a = values[static_cast<std::size_t>(i)], b = values[static_cast<std::size_t>(j)];
    std::vector<std::size_t> ea, eb_only;
    for (std::size_t e = 0; e < all_edges.size(); ++e) {
      const double len = std::get<0>(all_edges[e]);
      if (len <= a) ea.push_back(e);
      else if (len <= b) eb_only.push_back(e);
    }
    std::vector<std::vector<long long>> d1a;  // |E_a| x n
    for (auto e : ea) {
      std::vector<long long> row(n, 0);
      row[std::get<1>(all_edges[e])] = -1;
      row[std::get<2>(all_edges[e])] = 1;
      d1a.push_back(row);
    }
    std::vector<std::vector<long long>> d2b, d2b_outside;  // rows: triangles of X_b
    for (std::size_t t = 0; t < all_tris.size(); ++t) {
      if (tri_value[t] > b) continue;
      const auto [x, y, z] = all_tris[t];
      std::vector<long long> row(all_edges.size(), 0);
      row[edge_index(x, y)] = 1;
      row[edge_index(x, z)] = -1;
      row[edge_index(y, z)] = 1;
      d2b.push_back(row);
      std::vector<long long> out;
      for (auto e : eb_only) out.push_back(row[e]);
      d2b_outside.push_back(out);
    }
    const long long r1 = d1a.empty() ? 0 : static_cast<long long>(rank_mod_p(d1a, p));
    const long long r2 = d2b.empty() ? 0 : static_cast<long long>(rank_mod_p(d2b, p));
    const long long r2o =
        d2b_outside.empty() || eb_only.empty() ? 0 : static_cast<long long>(rank_mod_p(d2b_outside, p));
    return static_cast<long long>(ea.size()) - r1 - r2 + r2o;
  };

  std::vector<std::vector<long long>> b(m, std::vector<long long>(m, 0));
  for (int i = 0; i < static_cast<int>(m); ++i)
    for (int j = i; j < static_cast<int>(m); ++j) b[i][j] = beta(i, j);
  auto B = [&](int i, int j) -> long long { return i < 0 ? 0 : b[i][j]; };

  std::multiset<std::pair<double, double>> out;
  const int last = static_cast<int>(m) - 1;
  for (int i = 0; i < static_cast<int>(m); ++i) {
    for (int j = i + 1; j < static_cast<int>(m); ++j) {
      const long long mu = B(i, j - 1) - B(i - 1, j - 1) - B(i, j) + B(i - 1, j);
      for (long long k = 0; k < mu; ++k) out.insert({values[i], values[j]});
    }
    if (i < last) {
      const long long alive = B(i, last) - B(i - 1, last);
      for (long long k = 0; k < alive; ++k) out.insert({values[i], threshold});
    }
  }
  return out;
}

/// Dense solve with partial pivoting.
inline std::vector<double> solve_dense(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (a[piv][col] == 0.0) throw std::runtime_error("singular system");
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t k = col; k < n; ++k) a[r][k] -= f * a[col][k];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t k = r + 1; k < n; ++k) s -= a[r][k] * x[k];
    x[r] = s / a[r][r];
  }
  return x;
}

struct EdgeList {
  std::size_t n_vertices = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // i < j
};

/// Minimizer of sum_e q_e (alpha_e + f_j - f_i)^2 from the dense normal
/// equations, with the lowest vertex of each connected component pinned to 0.
inline std::vector<double> dense_harmonic(const EdgeList& g, const std::vector<double>& alpha,
                                          const std::vector<double>& q) {
  const std::size_t n = g.n_vertices;
  std::vector<std::size_t> comp(n);
  for (std::size_t v = 0; v < n; ++v) comp[v] = v;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [i, j] : g.edges) {
      const auto m = std::min(comp[i], comp[j]);
      if (comp[i] != m || comp[j] != m) {
        comp[i] = comp[j] = m;
        changed = true;
      }
    }
  }
  std::vector<std::vector<double>> l(n, std::vector<double>(n, 0.0));
  std::vector<double> rhs(n, 0.0);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto [i, j] = g.edges[e];
    l[i][i] += q[e];
    l[j][j] += q[e];
    l[i][j] -= q[e];
    l[j][i] -= q[e];
    // -(d0^T Q alpha): d0 row e is -1 at i, +1 at j.
    rhs[i] += q[e] * alpha[e];
    rhs[j] -= q[e] * alpha[e];
  }
  std::vector<std::size_t> free;
  for (std::size_t v = 0; v < n; ++v)
    if (comp[v] != v) free.push_back(v);
  std::vector<std::vector<double>> a(free.size(), std::vector<double>(free.size()));
  std::vector<double> b(free.size());
  for (std::size_t r = 0; r < free.size(); ++r) {
    b[r] = rhs[free[r]];
    for (std::size_t c = 0; c < free.size(); ++c) a[r][c] = l[free[r]][free[c]];
  }
  std::vector<double> f(n, 0.0);
  if (free.empty()) return f;
  const auto x = solve_dense(a, b);
  for (std::size_t r = 0; r < free.size(); ++r) f[free[r]] = x[r];
  return f;
}

}  // namespace oracle
