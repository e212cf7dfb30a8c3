#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "geometry.hpp"
#include "rips.hpp"

namespace circcoords {

inline bool is_prime(std::uint32_t p) {
  if (p < 2) return false;
  for (std::uint32_t q = 2; static_cast<std::uint64_t>(q) * q <= p; ++q)
    if (p % q == 0) return false;
  return true;
}

inline std::uint32_t mod_inverse(std::uint32_t a, std::uint32_t p) {
  // Fermat: a^(p-2) mod p.
  std::uint64_t result = 1, base = a % p;
  for (std::uint32_t e = p - 2; e > 0; e >>= 1) {
    if (e & 1u) result = result * base % p;
    base = base * base % p;
  }
  return static_cast<std::uint32_t>(result);
}

/// The integer in (-p/2, p/2] congruent to v mod p.
inline std::int64_t centered_residue(std::uint32_t v, std::uint32_t p) {
  const std::int64_t r = v % p;
  return 2 * r > static_cast<std::int64_t>(p) ? r - static_cast<std::int64_t>(p) : r;
}

enum class Coefficients { Zp, Integer, Real };

/// Function on the oriented edges of one complex, indexed by edge id.
/// Integer values are stored exactly in doubles.
struct Cochain1 {
  Coefficients domain = Coefficients::Real;
  std::uint32_t prime = 0;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t e) const { return values[e]; }
};

/// Sparse Z_p cochain on the filtration, keyed by vertex pairs (i < j).
struct CocycleEntry {
  std::uint32_t i;
  std::uint32_t j;
  std::uint32_t value;
};

struct PersistencePair {
  double birth = 0.0;
  double death = 0.0;
  /// The class is still alive at the threshold; death was capped there.
  bool essential = false;
  std::uint32_t prime = 0;
  std::vector<CocycleEntry> representative;

  double lifetime() const { return death - birth; }
};

class NotPrimeError : public std::invalid_argument {
 public:
  explicit NotPrimeError(std::uint32_t p)
      : std::invalid_argument("coefficient modulus " + std::to_string(p) + " is not prime") {}
};

class CocycleLiftError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

struct CofaceEntry {
  double diameter;
  std::uint64_t key;  // packed (a, b, c), a < b < c
  std::uint32_t coeff;
};

struct LaterFirst {
  bool operator()(const CofaceEntry& x, const CofaceEntry& y) const {
    if (x.diameter != y.diameter) return x.diameter > y.diameter;
    return x.key > y.key;
  }
};

using CofaceHeap = std::priority_queue<CofaceEntry, std::vector<CofaceEntry>, LaterFirst>;

class CohomologyReducer {
 public:
  CohomologyReducer(const DistanceMatrix& d, const RipsComplex& filtration, std::uint32_t p)
      : d_(d), c_(filtration), p_(p), n_(d.size()) {}

  /// Push the coboundary of edge `e`, scaled by `scale`, onto `heap`.
  void push_coboundary(std::uint32_t e, std::uint32_t scale, CofaceHeap& heap) const {
    const auto& edge = c_.edge(e);
    const auto ni = c_.neighbors(edge.i);
    const auto nj = c_.neighbors(edge.j);
    auto a = ni.begin();
    auto b = nj.begin();
    while (a != ni.end() && b != nj.end()) {
      if (*a < *b) {
        ++a;
      } else if (*b < *a) {
        ++b;
      } else {
        const std::uint32_t v = *a;
        const double diam = std::max({edge.length, d_(edge.i, v), d_(edge.j, v)});
        std::uint64_t lo, mid, hi;
        std::uint32_t coeff;
        if (v > edge.j) {
          lo = edge.i, mid = edge.j, hi = v, coeff = 1;
        } else if (v > edge.i) {
          lo = edge.i, mid = v, hi = edge.j, coeff = p_ - 1;
        } else {
          lo = v, mid = edge.i, hi = edge.j, coeff = 1;
        }
        const std::uint64_t key = (lo * n_ + mid) * n_ + hi;
        heap.push({diam, key, static_cast<std::uint32_t>(static_cast<std::uint64_t>(coeff) * scale % p_)});
        ++a;
        ++b;
      }
    }
  }

  std::optional<CofaceEntry> pop_pivot(CofaceHeap& heap) const {
    while (!heap.empty()) {
      CofaceEntry top = heap.top();
      heap.pop();
      std::uint64_t coeff = top.coeff;
      while (!heap.empty() && heap.top().key == top.key) {
        coeff += heap.top().coeff;
        heap.pop();
      }
      coeff %= p_;
      if (coeff != 0) {
        top.coeff = static_cast<std::uint32_t>(coeff);
        return top;
      }
    }
    return std::nullopt;
  }

  std::vector<PersistencePair> run(double threshold) {
    const std::size_t n_edges = c_.n_edges();

    // Degree 0 by union-find: edges that merge components carry no degree-1 class.
    std::vector<std::uint32_t> parent(n_);
    for (std::uint32_t v = 0; v < n_; ++v) parent[v] = v;
    auto find = [&](std::uint32_t v) {
      while (parent[v] != v) v = parent[v] = parent[parent[v]];
      return v;
    };
    std::vector<std::uint32_t> columns;
    for (std::uint32_t e = 0; e < n_edges; ++e) {
      const auto a = find(c_.edge(e).i), b = find(c_.edge(e).j);
      if (a == b) {
        columns.push_back(e);
      } else {
        parent[std::max(a, b)] = std::min(a, b);
      }
    }

    struct PivotOwner {
      std::uint32_t column;
      std::uint32_t coeff;
    };
    std::unordered_map<std::uint64_t, PivotOwner> pivot_owner;
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> reduction(n_edges);
    std::vector<PersistencePair> pairs;

    CofaceHeap heap;
    std::map<std::uint32_t, std::uint64_t> combo;
    for (auto it = columns.rbegin(); it != columns.rend(); ++it) {
      const std::uint32_t e = *it;
      heap = CofaceHeap{};
      combo.clear();
      combo[e] = 1;
      push_coboundary(e, 1, heap);

      std::optional<CofaceEntry> pivot;
      while (true) {
        pivot = pop_pivot(heap);
        if (!pivot) break;
        const auto owner = pivot_owner.find(pivot->key);
        if (owner == pivot_owner.end()) break;
        const std::uint32_t factor = static_cast<std::uint32_t>(
            static_cast<std::uint64_t>(p_ - pivot->coeff) * mod_inverse(owner->second.coeff, p_) % p_);
        heap.push(*pivot);
        for (const auto& [g, cg] : reduction[owner->second.column]) {
          const auto scaled = static_cast<std::uint32_t>(static_cast<std::uint64_t>(cg) * factor % p_);
          push_coboundary(g, scaled, heap);
          combo[g] = (combo[g] + scaled) % p_;
        }
      }

      auto& column = reduction[e];
      for (const auto& [g, cg] : combo)
        if (cg != 0) column.emplace_back(g, static_cast<std::uint32_t>(cg));

      const double birth = c_.edge(e).length;
      const double death = pivot ? pivot->diameter : threshold;
      if (pivot) pivot_owner.emplace(pivot->key, PivotOwner{e, pivot->coeff});
      if (!(death > birth)) continue;

      PersistencePair pair;
      pair.birth = birth;
      pair.death = death;
      pair.essential = !pivot;
      pair.prime = p_;
      for (const auto& [g, cg] : column) pair.representative.push_back({c_.edge(g).i, c_.edge(g).j, cg});
      std::sort(pair.representative.begin(), pair.representative.end(),
                [](const CocycleEntry& x, const CocycleEntry& y) {
                  return std::tie(x.i, x.j) < std::tie(y.i, y.j);
                });
      pairs.push_back(std::move(pair));
    }

    std::stable_sort(pairs.begin(), pairs.end(), [](const PersistencePair& x, const PersistencePair& y) {
      if (x.lifetime() != y.lifetime()) return x.lifetime() > y.lifetime();
      return std::tie(x.birth, x.death) < std::tie(y.birth, y.death);
    });
    return pairs;
  }

 private:
  const DistanceMatrix& d_;
  const RipsComplex& c_;
  std::uint32_t p_;
  std::uint64_t n_;
};

}  // namespace detail

/// Degree-1 persistent cohomology of the Rips filtration up to `threshold`,
/// over Z_p, with a representative cocycle for every class.
///
/// Columns of the coboundary matrix are reduced in reverse filtration order;
/// the reduction combination of each column is its representative. Edges that
/// merge components are cleared up front. Pairs are sorted by lifetime,
/// longest first; classes alive at the threshold have death == threshold and
/// `essential` set.
inline std::vector<PersistencePair> persistence_diagram(const DistanceMatrix& d, double threshold,
                                                        std::uint32_t prime = 47) {
  if (!is_prime(prime)) throw NotPrimeError(prime);
  if (!(threshold > 0.0)) throw std::invalid_argument("persistence_diagram: threshold must be > 0");
  if (d.size() >= (1u << 21)) throw std::invalid_argument("persistence_diagram: too many points");
  const RipsComplex filtration = build_rips(d, threshold, 1);
  detail::CohomologyReducer reducer(d, filtration, prime);
  return reducer.run(threshold);
}

inline std::vector<PersistencePair> persistence_diagram(const PointCloud& cloud, double threshold,
                                                        std::uint32_t prime = 47) {
  return persistence_diagram(pairwise_distances(cloud), threshold, prime);
}

/// Smallest radius at which some point is within reach of all others; past it
/// the Rips complex is a cone and has no degree-1 classes.
inline double enclosing_radius(const DistanceMatrix& d) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < d.size(); ++i) {
    double worst = 0.0;
    for (std::size_t j = 0; j < d.size(); ++j) worst = std::max(worst, d(i, j));
    best = std::min(best, worst);
  }
  return best;
}

inline double select_epsilon(const PersistencePair& pair) {
  if (pair.essential || !std::isfinite(pair.death))
    throw std::invalid_argument("select_epsilon: class does not die below the threshold; pass epsilon explicitly");
  return 0.5 * (pair.birth + pair.death);
}

/// Restrict the representative to the edges of `complex` and lift each Z_p
/// value to its centered integer residue. Throws CocycleLiftError when the
/// lift fails the integer cocycle condition on some triangle.
inline Cochain1 restrict_and_lift(const PersistencePair& pair, const RipsComplex& complex) {
  const double eps = complex.epsilon();
  if (eps < pair.birth || eps >= pair.death)
    throw std::invalid_argument("restrict_and_lift: epsilon outside [birth, death)");
  Cochain1 alpha;
  alpha.domain = Coefficients::Integer;
  alpha.values.assign(complex.n_edges(), 0.0);
  for (const auto& entry : pair.representative) {
    const auto id = complex.find_edge(entry.i, entry.j);
    if (id < 0) continue;
    alpha.values[static_cast<std::size_t>(id)] = static_cast<double>(centered_residue(entry.value, pair.prime));
  }
  for (const auto& t : complex.triangles()) {
    const double s = alpha[complex.find_edge(t.i, t.j)] - alpha[complex.find_edge(t.i, t.k)] +
                     alpha[complex.find_edge(t.j, t.k)];
    if (s != 0.0)
      throw CocycleLiftError("lifted cocycle violates the cocycle condition on triangle (" +
                             std::to_string(t.i) + "," + std::to_string(t.j) + "," +
                             std::to_string(t.k) + "); class is not liftable");
  }
  return alpha;
}

}  // namespace circcoords
