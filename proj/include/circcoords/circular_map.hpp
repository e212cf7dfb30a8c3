#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "geometry.hpp"
#include "rips.hpp"

namespace circcoords {

/// Circle-valued coordinate theta in [0, 1), one full turn per unit.
struct CircularMap {
  std::vector<double> theta;
  std::vector<std::uint32_t> component;  // gauge vertex of each vertex's component
  std::string source;

  std::size_t size() const { return theta.size(); }
};

struct EvalReport {
  std::vector<std::pair<double, double>> scatter;  // (truth / 2pi, theta)
  long long winding = 0;
  double linearity_score = 0.0;
  std::string method;
};

inline double frac(double x) {
  const double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

/// theta_v = (f_v - f_g) mod 1 where g is the gauge vertex of v's component.
/// An empty `component` treats every vertex as one component gauged at 0.
inline CircularMap wrap(std::span<const double> f, std::span<const std::uint32_t> component = {},
                        std::string source = {}) {
  if (!component.empty() && component.size() != f.size())
    throw std::invalid_argument("wrap: component labels do not match f");
  CircularMap m;
  m.source = std::move(source);
  m.theta.resize(f.size());
  m.component.resize(f.size(), 0);
  for (std::size_t v = 0; v < f.size(); ++v) {
    const std::uint32_t g = component.empty() ? 0 : component[v];
    m.component[v] = g;
    m.theta[v] = v == g ? 0.0 : frac(f[v] - f[g]);
  }
  return m;
}

/// Representative of b - a in (-1/2, 1/2].
inline double wrapped_increment(double a, double b) {
  double d = b - a;
  d -= std::floor(d);  // [0, 1)
  return d > 0.5 ? d - 1.0 : d;
}

/// min(|a - b|, 1 - |a - b|) on R/Z.
inline double circular_distance(double a, double b) {
  const double d = std::abs(frac(a) - frac(b));
  return std::min(d, 1.0 - d);
}

/// Sum of wrapped theta increments along the closed vertex cycle
/// loop[0] -> loop[1] -> ... -> loop.back() -> loop[0]. Every step must be
/// an edge of `complex`.
inline long long winding_number(const CircularMap& map, const RipsComplex& complex,
                                std::span<const std::uint32_t> loop) {
  if (loop.size() < 2) return 0;
  double total = 0.0;
  for (std::size_t s = 0; s < loop.size(); ++s) {
    const auto a = loop[s];
    const auto b = loop[(s + 1) % loop.size()];
    if (a == b) continue;
    if (complex.find_edge(a, b) < 0)
      throw std::invalid_argument("winding_number: loop step " + std::to_string(a) + "->" + std::to_string(b) +
                                  " is not an edge");
    total += wrapped_increment(map.theta[a], map.theta[b]);
  }
  return std::llround(total);
}

/// Closed edge path visiting `order` in sequence, joining consecutive
/// vertices by BFS shortest paths through vertices with allowed[v] != 0
/// (all vertices when `allowed` is empty).
inline std::vector<std::uint32_t> loop_through(const RipsComplex& complex, std::span<const std::uint32_t> order,
                                               std::span<const char> allowed = {}) {
  const std::size_t n = complex.n_vertices();
  auto ok = [&](std::uint32_t v) { return allowed.empty() || allowed[v]; };
  std::vector<std::uint32_t> loop;
  std::vector<std::int64_t> prev(n);
  for (std::size_t s = 0; s < order.size(); ++s) {
    const auto from = order[s];
    const auto to = order[(s + 1) % order.size()];
    loop.push_back(from);
    if (from == to || complex.find_edge(from, to) >= 0) continue;
    std::fill(prev.begin(), prev.end(), -1);
    std::queue<std::uint32_t> frontier;
    frontier.push(from);
    prev[from] = from;
    while (!frontier.empty() && prev[to] < 0) {
      const auto v = frontier.front();
      frontier.pop();
      for (auto w : complex.neighbors(v)) {
        if (prev[w] >= 0 || !ok(w)) continue;
        prev[w] = v;
        frontier.push(w);
      }
    }
    if (prev[to] < 0)
      throw std::invalid_argument("loop_through: vertices " + std::to_string(from) + " and " + std::to_string(to) +
                                  " are not connected");
    std::vector<std::uint32_t> path;
    for (auto v = static_cast<std::uint32_t>(prev[to]); v != from; v = static_cast<std::uint32_t>(prev[v]))
      path.push_back(v);
    loop.insert(loop.end(), path.rbegin(), path.rend());
  }
  return loop;
}

/// Vertices sorted by the given angles.
inline std::vector<std::uint32_t> order_by_angle(std::span<const double> angles) {
  std::vector<std::uint32_t> idx(angles.size());
  std::iota(idx.begin(), idx.end(), 0u);
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return angles[a] < angles[b]; });
  return idx;
}

/// 1 - 2 * mean circular distance between theta and truth / 2pi, maximized
/// over 360 rotations and an optional reflection of the truth. 1 means the
/// correlation scatter is a perfect line on the torus; ~1/2 means unrelated.
inline double linearity_score(std::span<const double> theta, std::span<const double> truth_angles) {
  if (truth_angles.empty()) throw std::invalid_argument("linearity_score: missing truth");
  if (theta.size() != truth_angles.size()) throw std::invalid_argument("linearity_score: length mismatch");
  const std::size_t n = theta.size();
  double best = std::numeric_limits<double>::infinity();
  for (int sign : {1, -1}) {
    for (int k = 0; k < 360; ++k) {
      const double shift = k / 360.0;
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        total += circular_distance(theta[i], sign * truth_angles[i] / kTwoPi + shift);
      best = std::min(best, total / static_cast<double>(n));
    }
  }
  return 1.0 - 2.0 * best;
}

inline EvalReport evaluate(const CircularMap& map, std::span<const double> truth_angles, long long winding) {
  EvalReport r;
  r.method = map.source;
  r.winding = winding;
  r.linearity_score = linearity_score(map.theta, truth_angles);
  r.scatter.reserve(map.size());
  for (std::size_t i = 0; i < map.size(); ++i) r.scatter.emplace_back(truth_angles[i] / kTwoPi, map.theta[i]);
  return r;
}

}  // namespace circcoords
