#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cohomology.hpp"
#include "rips.hpp"

namespace circcoords {

enum class WeightKind { Uniform, Wdgl, InvDegSum, InvSqrtDegProd };

inline const char* to_string(WeightKind k) {
  switch (k) {
    case WeightKind::Uniform: return "uniform";
    case WeightKind::Wdgl: return "wdgl";
    case WeightKind::InvDegSum: return "invdegsum";
    case WeightKind::InvSqrtDegProd: return "invsqrtdegprod";
  }
  return "?";
}

/// Quadratic edge weights: the solver minimizes sum_e q_e (alpha_e + (d0 f)_e)^2.
struct WeightScheme {
  WeightKind kind = WeightKind::Uniform;
  double t = 0.0;  // kernel bandwidth, WDGL only
  std::vector<double> q;
};

/// Kernel density estimate phat_i = (1/n)(1 + sum over neighbors j of g_ij),
/// with g_ij = exp(-|x_i - x_j|^2 / (4t)).
struct DensityEstimate {
  double t = 0.0;
  std::vector<double> phat;    // per vertex
  std::vector<double> kernel;  // per edge
};

inline WeightScheme uniform_weights(const RipsComplex& c) {
  return {WeightKind::Uniform, 0.0, std::vector<double>(c.n_edges(), 1.0)};
}

inline DensityEstimate estimate_density(const RipsComplex& c, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("bandwidth t must be > 0");
  DensityEstimate est;
  est.t = t;
  est.kernel.resize(c.n_edges());
  std::vector<double> sums(c.n_vertices(), 1.0);  // self term g_ii = 1
  for (std::size_t e = 0; e < c.n_edges(); ++e) {
    const auto& edge = c.edge(e);
    const double g = std::exp(-edge.length * edge.length / (4.0 * t));
    est.kernel[e] = g;
    sums[edge.i] += g;
    sums[edge.j] += g;
  }
  const double n = static_cast<double>(c.n_vertices());
  est.phat.resize(c.n_vertices());
  for (std::size_t v = 0; v < sums.size(); ++v) est.phat[v] = sums[v] / n;
  return est;
}

/// q_e = g_ij / (phat_i phat_j). With these weights d0^T diag(q) d0 is the
/// symmetrized density-corrected graph Laplacian P^-1 D - P^-1 G P^-1.
/// The kernel's (4 pi t)^(-k/2) factor is omitted; it rescales all q_e
/// together and leaves the minimizer unchanged.
inline WeightScheme wdgl_weights(const RipsComplex& c, double t) {
  const DensityEstimate est = estimate_density(c, t);
  WeightScheme w{WeightKind::Wdgl, t, std::vector<double>(c.n_edges())};
  for (std::size_t e = 0; e < c.n_edges(); ++e) {
    const auto& edge = c.edge(e);
    w.q[e] = est.kernel[e] / (est.phat[edge.i] * est.phat[edge.j]);
  }
  return w;
}

/// 0.2 times the mean edge length.
inline double default_bandwidth(const RipsComplex& c) {
  if (c.n_edges() == 0) throw std::invalid_argument("default_bandwidth: complex has no edges");
  return 0.2 * c.mean_edge_length();
}

/// Per-edge weight w = 1/(D_i + D_j) or 1/sqrt(D_i D_j) from vertex degrees;
/// the quadratic weight is q = w^2.
inline WeightScheme degree_weights(const RipsComplex& c, WeightKind kind) {
  if (kind != WeightKind::InvDegSum && kind != WeightKind::InvSqrtDegProd)
    throw std::invalid_argument("degree_weights: kind must be InvDegSum or InvSqrtDegProd");
  WeightScheme w{kind, 0.0, std::vector<double>(c.n_edges())};
  for (std::size_t e = 0; e < c.n_edges(); ++e) {
    const auto& edge = c.edge(e);
    const double di = static_cast<double>(c.degree(edge.i));
    const double dj = static_cast<double>(c.degree(edge.j));
    const double we = kind == WeightKind::InvDegSum ? 1.0 / (di + dj) : 1.0 / std::sqrt(di * dj);
    w.q[e] = we * we;
  }
  return w;
}

/// (L f)_i = sum_j w_ij (f_i - f_j) with directed weights w_ij = g_ij / phat_j.
inline std::vector<double> laplacian_apply(const RipsComplex& c, double t, std::span<const double> f) {
  if (f.size() != c.n_vertices()) throw std::invalid_argument("laplacian_apply: f has wrong length");
  const DensityEstimate est = estimate_density(c, t);
  std::vector<double> out(c.n_vertices(), 0.0);
  for (std::size_t e = 0; e < c.n_edges(); ++e) {
    const auto& edge = c.edge(e);
    const double g = est.kernel[e];
    const double diff = f[edge.i] - f[edge.j];
    out[edge.i] += g / est.phat[edge.j] * diff;
    out[edge.j] -= g / est.phat[edge.i] * diff;
  }
  return out;
}

/// alpha + d0 f.
inline Cochain1 add_coboundary(const RipsComplex& c, const Cochain1& alpha, std::span<const double> f) {
  Cochain1 out{Coefficients::Real, 0, std::vector<double>(c.n_edges())};
  for (std::size_t e = 0; e < c.n_edges(); ++e) {
    const auto& edge = c.edge(e);
    out.values[e] = alpha[e] + f[edge.j] - f[edge.i];
  }
  return out;
}

/// d0^T diag(q) x for an edge vector x.
inline std::vector<double> weighted_codifferential(const RipsComplex& c, std::span<const double> q,
                                                   std::span<const double> x) {
  std::vector<double> out(c.n_vertices(), 0.0);
  for (std::size_t e = 0; e < c.n_edges(); ++e) {
    const auto& edge = c.edge(e);
    const double v = q[e] * x[e];
    out[edge.i] -= v;
    out[edge.j] += v;
  }
  return out;
}

struct SolverOptions {
  double tol = 1e-10;
  std::size_t max_iter = 0;  // 0 means 10 * n_vertices
};

struct HarmonicSolution {
  std::vector<double> f;
  Cochain1 alpha_h;
  std::size_t iterations = 0;
  double residual = 0.0;  // ||d0^T Q (alpha + d0 f)||
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Minimize sum_e q_e (alpha_e + (d0 f)_e)^2 over vertex functions f.
///
/// Jacobi-preconditioned conjugate gradients on the normal equations
/// (d0^T Q d0) f = -d0^T Q alpha, with the lowest vertex of each connected
/// component grounded at f = 0. Converged when
/// ||d0^T Q (alpha + d0 f)|| <= tol * max(1, ||d0^T Q alpha||).
inline HarmonicSolution harmonic_solve(const RipsComplex& c, const Cochain1& alpha, const WeightScheme& weights,
                                       const SolverOptions& opts = {}) {
  const std::size_t nv = c.n_vertices();
  const std::size_t ne = c.n_edges();
  if (alpha.size() != ne) throw std::invalid_argument("harmonic_solve: cochain length != edge count");
  if (weights.q.size() != ne) throw std::invalid_argument("harmonic_solve: weight count != edge count");
  for (double q : weights.q)
    if (!(q > 0.0)) throw std::invalid_argument("harmonic_solve: weights must be positive");
  const std::size_t max_iter = opts.max_iter ? opts.max_iter : 10 * nv;

  const auto label = connected_components(c);
  const auto& q = weights.q;

  std::vector<double> b = weighted_codifferential(c, q, alpha.values);
  for (double& v : b) v = -v;
  double b_norm = 0.0;
  for (double v : b) b_norm += v * v;
  b_norm = std::sqrt(b_norm);
  const double target = opts.tol * std::max(1.0, b_norm);

  std::vector<double> diag(nv, 0.0);
  for (std::size_t e = 0; e < ne; ++e) {
    diag[c.edge(e).i] += q[e];
    diag[c.edge(e).j] += q[e];
  }
  auto grounded = [&](std::size_t v) { return label[v] == v; };

  auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t e = 0; e < ne; ++e) {
      const auto& edge = c.edge(e);
      const double r = q[e] * (x[edge.j] - x[edge.i]);
      y[edge.i] -= r;
      y[edge.j] += r;
    }
    for (std::size_t v = 0; v < nv; ++v)
      if (grounded(v)) y[v] = 0.0;
  };

  // Residual of the full (ungrounded) system: the grounded rows carry minus
  // the sum of the other rows of their component.
  std::vector<double> root_sum(nv, 0.0);
  auto full_residual = [&](const std::vector<double>& r) {
    std::fill(root_sum.begin(), root_sum.end(), 0.0);
    double s = 0.0;
    for (std::size_t v = 0; v < nv; ++v) {
      if (grounded(v)) continue;
      s += r[v] * r[v];
      root_sum[label[v]] -= r[v];
    }
    for (std::size_t v = 0; v < nv; ++v)
      if (grounded(v)) s += root_sum[v] * root_sum[v];
    return std::sqrt(s);
  };

  std::vector<double> x(nv, 0.0), r(nv), z(nv), p(nv), ap(nv);
  auto precondition = [&]() {
    for (std::size_t v = 0; v < nv; ++v) z[v] = diag[v] > 0.0 && !grounded(v) ? r[v] / diag[v] : 0.0;
  };
  // r = b - L x on the grounded system, recomputed from scratch.
  auto true_residual = [&]() {
    apply(x, ap);
    for (std::size_t v = 0; v < nv; ++v) r[v] = grounded(v) ? 0.0 : b[v] - ap[v];
    return full_residual(r);
  };

  HarmonicSolution sol;
  std::size_t it = 0;
  double res = true_residual();
  // The recurrence residual drifts from the true one near machine precision,
  // so CG restarts from the true residual until that one meets the target.
  while (res > target) {
    precondition();
    p = z;
    double rz = 0.0;
    for (std::size_t v = 0; v < nv; ++v) rz += r[v] * z[v];
    double recurrence = res;
    while (recurrence > target) {
      if (it == max_iter)
        throw SolverError("harmonic_solve: no convergence after " + std::to_string(max_iter) +
                          " iterations (residual " + std::to_string(recurrence) + ")");
      apply(p, ap);
      double pap = 0.0;
      for (std::size_t v = 0; v < nv; ++v) pap += p[v] * ap[v];
      if (!(pap > 0.0)) break;
      const double step = rz / pap;
      for (std::size_t v = 0; v < nv; ++v) {
        x[v] += step * p[v];
        r[v] -= step * ap[v];
      }
      precondition();
      double rz_next = 0.0;
      for (std::size_t v = 0; v < nv; ++v) rz_next += r[v] * z[v];
      const double beta = rz_next / rz;
      rz = rz_next;
      for (std::size_t v = 0; v < nv; ++v) p[v] = z[v] + beta * p[v];
      ++it;
      recurrence = full_residual(r);
    }
    const double previous = res;
    res = true_residual();
    if (res > target && !(res < 0.5 * previous))
      throw SolverError("harmonic_solve: stalled at residual " + std::to_string(res));
  }

  sol.alpha_h = add_coboundary(c, alpha, x);
  sol.residual = res;
  sol.f = std::move(x);
  sol.iterations = it;
  return sol;
}

}  // namespace circcoords
