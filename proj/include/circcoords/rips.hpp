#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "geometry.hpp"

namespace circcoords {

struct Edge {
  std::uint32_t i;
  std::uint32_t j;
  double length;
};

struct Triangle {
  std::uint32_t i;
  std::uint32_t j;
  std::uint32_t k;
  double diameter;
};

/// Vietoris-Rips 2-skeleton (or 1-skeleton) at a single scale.
///
/// Edges are oriented low -> high vertex index and sorted by (length, i, j).
/// Triangles have ascending vertex indices and are sorted by
/// (diameter, i, j, k).
class RipsComplex {
 public:
  std::size_t n_vertices() const { return n_; }
  std::size_t n_edges() const { return edges_.size(); }
  std::size_t n_triangles() const { return triangles_.size(); }
  double epsilon() const { return epsilon_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const Edge& edge(std::size_t e) const { return edges_[e]; }

  /// Neighbors of v (ascending) with the matching edge ids.
  std::span<const std::uint32_t> neighbors(std::size_t v) const {
    return {adj_vertex_.data() + adj_ptr_[v], adj_ptr_[v + 1] - adj_ptr_[v]};
  }
  std::span<const std::uint32_t> incident_edges(std::size_t v) const {
    return {adj_edge_.data() + adj_ptr_[v], adj_ptr_[v + 1] - adj_ptr_[v]};
  }
  std::size_t degree(std::size_t v) const { return adj_ptr_[v + 1] - adj_ptr_[v]; }

  /// Edge id joining a and b (either order), or -1.
  std::int64_t find_edge(std::size_t a, std::size_t b) const {
    const auto nb = neighbors(a);
    const auto it = std::lower_bound(nb.begin(), nb.end(), static_cast<std::uint32_t>(b));
    if (it == nb.end() || *it != b) return -1;
    return adj_edge_[adj_ptr_[a] + static_cast<std::size_t>(it - nb.begin())];
  }

  double mean_edge_length() const {
    if (edges_.empty()) throw std::invalid_argument("complex has no edges");
    double s = 0.0;
    for (const auto& e : edges_) s += e.length;
    return s / static_cast<double>(edges_.size());
  }

  friend RipsComplex build_rips(const DistanceMatrix&, double, int);

 private:
  void build_adjacency() {
    adj_ptr_.assign(n_ + 1, 0);
    for (const auto& e : edges_) {
      ++adj_ptr_[e.i + 1];
      ++adj_ptr_[e.j + 1];
    }
    std::partial_sum(adj_ptr_.begin(), adj_ptr_.end(), adj_ptr_.begin());
    std::vector<std::pair<std::uint32_t, std::uint32_t>> slots(2 * edges_.size());
    std::vector<std::size_t> fill(adj_ptr_.begin(), adj_ptr_.end() - 1);
    for (std::uint32_t id = 0; id < edges_.size(); ++id) {
      const auto& e = edges_[id];
      slots[fill[e.i]++] = {e.j, id};
      slots[fill[e.j]++] = {e.i, id};
    }
    for (std::size_t v = 0; v < n_; ++v)
      std::sort(slots.begin() + static_cast<std::ptrdiff_t>(adj_ptr_[v]),
                slots.begin() + static_cast<std::ptrdiff_t>(adj_ptr_[v + 1]));
    adj_vertex_.resize(slots.size());
    adj_edge_.resize(slots.size());
    for (std::size_t s = 0; s < slots.size(); ++s) {
      adj_vertex_[s] = slots[s].first;
      adj_edge_[s] = slots[s].second;
    }
  }

  std::size_t n_ = 0;
  double epsilon_ = 0.0;
  std::vector<Edge> edges_;
  std::vector<Triangle> triangles_;
  std::vector<std::size_t> adj_ptr_;
  std::vector<std::uint32_t> adj_vertex_;
  std::vector<std::uint32_t> adj_edge_;
};

/// All pairs at distance <= epsilon become edges; with max_dim >= 2 every
/// triple whose three edges exist becomes a triangle.
inline RipsComplex build_rips(const DistanceMatrix& d, double epsilon, int max_dim = 2) {
  if (!(epsilon >= 0.0)) throw std::invalid_argument("build_rips: epsilon must be >= 0");
  RipsComplex c;
  c.n_ = d.size();
  c.epsilon_ = epsilon;
  const auto n = static_cast<std::uint32_t>(c.n_);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j)
      if (d(i, j) <= epsilon) c.edges_.push_back({i, j, d(i, j)});
  std::sort(c.edges_.begin(), c.edges_.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.length, a.i, a.j) < std::tie(b.length, b.i, b.j);
  });
  c.build_adjacency();

  if (max_dim >= 2) {
    std::vector<char> marked(c.n_, 0);
    for (std::uint32_t i = 0; i < n; ++i) {
      const auto ni = c.neighbors(i);
      for (auto v : ni) marked[v] = 1;
      for (auto j : ni) {
        if (j <= i) continue;
        for (auto k : c.neighbors(j)) {
          if (k <= j || !marked[k]) continue;
          c.triangles_.push_back({i, j, k, std::max({d(i, j), d(i, k), d(j, k)})});
        }
      }
      for (auto v : ni) marked[v] = 0;
    }
    std::sort(c.triangles_.begin(), c.triangles_.end(), [](const Triangle& a, const Triangle& b) {
      return std::tie(a.diameter, a.i, a.j, a.k) < std::tie(b.diameter, b.i, b.j, b.k);
    });
  }
  return c;
}

inline RipsComplex build_rips(const PointCloud& cloud, double epsilon, int max_dim = 2) {
  return build_rips(pairwise_distances(cloud), epsilon, max_dim);
}

/// Compressed-row integer matrix with entries in {-1, +1}.
struct SparseIntMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::uint32_t> col_idx;
  std::vector<int> values;

  std::size_t nnz() const { return values.size(); }

  int at(std::size_t r, std::size_t c) const {
    for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
      if (col_idx[k] == c) return values[k];
    return 0;
  }
};

/// Exact integer product A * B.
inline SparseIntMatrix multiply(const SparseIntMatrix& a, const SparseIntMatrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("multiply: shape mismatch");
  SparseIntMatrix out;
  out.rows = a.rows;
  out.cols = b.cols;
  std::vector<long long> acc(b.cols, 0);
  std::vector<std::uint32_t> touched;
  for (std::size_t r = 0; r < a.rows; ++r) {
    for (std::size_t ka = a.row_ptr[r]; ka < a.row_ptr[r + 1]; ++ka) {
      const auto mid = a.col_idx[ka];
      for (std::size_t kb = b.row_ptr[mid]; kb < b.row_ptr[mid + 1]; ++kb) {
        const auto c = b.col_idx[kb];
        if (acc[c] == 0) touched.push_back(c);
        acc[c] += static_cast<long long>(a.values[ka]) * b.values[kb];
      }
    }
    std::sort(touched.begin(), touched.end());
    for (auto c : touched) {
      if (acc[c] != 0) {
        out.col_idx.push_back(c);
        out.values.push_back(static_cast<int>(acc[c]));
      }
      acc[c] = 0;
    }
    touched.clear();
    out.row_ptr.push_back(out.values.size());
  }
  return out;
}

/// E x V: row (i, j) has -1 at column i and +1 at column j.
inline SparseIntMatrix coboundary0(const RipsComplex& c) {
  SparseIntMatrix m;
  m.rows = c.n_edges();
  m.cols = c.n_vertices();
  for (const auto& e : c.edges()) {
    m.col_idx.push_back(e.i);
    m.values.push_back(-1);
    m.col_idx.push_back(e.j);
    m.values.push_back(+1);
    m.row_ptr.push_back(m.values.size());
  }
  return m;
}

/// T x E: row (i, j, k) has +1 at (i, j), -1 at (i, k), +1 at (j, k).
inline SparseIntMatrix coboundary1(const RipsComplex& c) {
  SparseIntMatrix m;
  m.rows = c.n_triangles();
  m.cols = c.n_edges();
  for (const auto& t : c.triangles()) {
    std::array<std::pair<std::uint32_t, int>, 3> row{{
        {static_cast<std::uint32_t>(c.find_edge(t.i, t.j)), +1},
        {static_cast<std::uint32_t>(c.find_edge(t.i, t.k)), -1},
        {static_cast<std::uint32_t>(c.find_edge(t.j, t.k)), +1},
    }};
    std::sort(row.begin(), row.end());
    for (const auto& [col, v] : row) {
      m.col_idx.push_back(col);
      m.values.push_back(v);
    }
    m.row_ptr.push_back(m.values.size());
  }
  return m;
}

/// Component label per vertex; labels are the lowest vertex index in the component.
inline std::vector<std::uint32_t> connected_components(const RipsComplex& c) {
  std::vector<std::uint32_t> parent(c.n_vertices());
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const auto& e : c.edges()) {
    auto a = find(e.i), b = find(e.j);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    parent[b] = a;
  }
  std::vector<std::uint32_t> label(c.n_vertices());
  for (std::uint32_t v = 0; v < label.size(); ++v) label[v] = find(v);
  return label;
}

}  // namespace circcoords
