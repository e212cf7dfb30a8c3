#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cohomology.hpp"
#include "laplacian.hpp"
#include "rips.hpp"

namespace circcoords {

constexpr double kInfinity = std::numeric_limits<double>::infinity();
constexpr int kMaxScheduleP = 1000;

enum class NormKind { P, Infinity, Softmax };

inline const char* to_string(NormKind k) {
  switch (k) {
    case NormKind::P: return "p";
    case NormKind::Infinity: return "inf";
    case NormKind::Softmax: return "softmax";
  }
  return "?";
}

enum class InitKind { Zeros, L2Solution };

struct PSchedule {
  int start = 2;
  int end = 50;
};

struct LpConfig {
  double p = 2.0;  // kInfinity selects the max norm
  double eta = 0.005;
  double tau = 1e-4;
  std::optional<PSchedule> schedule;
  double temperature_start = 1.0;
  std::size_t max_epochs = 200000;
  InitKind init = InitKind::L2Solution;

  void validate() const {
    if (!(eta > 0.0)) throw std::invalid_argument("learning rate eta must be > 0");
    if (!(tau > 0.0)) throw std::invalid_argument("convergence threshold tau must be > 0");
    if (!(p >= 1.0)) throw std::invalid_argument("p must be >= 1");
    if (!(temperature_start > 0.0)) throw std::invalid_argument("starting temperature must be > 0");
    if (schedule) {
      if (schedule->start < 2) throw std::invalid_argument("schedule must start at p >= 2");
      if (schedule->end < schedule->start) throw std::invalid_argument("schedule end must be >= start");
      if (schedule->end > kMaxScheduleP)
        throw std::invalid_argument("schedule end exceeds p cap " + std::to_string(kMaxScheduleP));
    }
  }
};

struct TraceRow {
  std::size_t iter;
  double loss;  // value of the objective being descended
  NormKind kind;
  double p_or_t;  // exponent for P, temperature for Softmax, inf for Infinity
  double linf;    // max |alpha + d0 f| at the same iterate
};

struct LossTrace {
  std::vector<TraceRow> rows;
  std::size_t size() const { return rows.size(); }
};

struct LpResult {
  std::vector<double> f;
  Cochain1 alpha_bar;
  LossTrace trace;
  double final_loss = 0.0;  // objective of the last segment at the returned f
};

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(std::size_t iteration, const std::string& what)
      : std::runtime_error(what + " at iteration " + std::to_string(iteration)), iteration_(iteration) {}
  std::size_t iteration() const { return iteration_; }

 private:
  std::size_t iteration_;
};

namespace detail {

inline double ipow(double x, unsigned k) {
  double r = 1.0;
  while (k) {
    if (k & 1u) r *= x;
    x *= x;
    k >>= 1;
  }
  return r;
}

/// r^k for 0 <= r <= 1, exact repeated multiplication for integer k.
inline double unit_pow(double r, double k) {
  if (k == std::floor(k) && k <= 4096.0) return ipow(r, static_cast<unsigned>(k));
  return std::pow(r, k);
}

inline double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace detail

/// ||x||_p evaluated as M * ||x / M||_p with M = max |x_e|.
inline double lp_norm(std::span<const double> x, double p) {
  const double m = detail::max_abs(x);
  if (m == 0.0 || std::isinf(p)) return m;
  double s = 0.0;
  for (double v : x) s += detail::unit_pow(std::abs(v) / m, p);
  return m * std::pow(s, 1.0 / p);
}

inline double linf_norm(std::span<const double> x) { return detail::max_abs(x); }

/// softmax(t |x|) . |x|
inline double softmax_objective(std::span<const double> x, double t) {
  const double m = detail::max_abs(x);
  double num = 0.0, den = 0.0;
  for (double v : x) {
    const double a = std::abs(v);
    const double w = std::exp(t * (a - m));
    num += w * a;
    den += w;
  }
  return den > 0.0 ? num / den : 0.0;
}

namespace detail {

struct Objective {
  NormKind kind;
  double param;  // p or temperature

  /// Loss at x; writes d(loss)/dx into grad.
  double evaluate(std::span<const double> x, std::vector<double>& grad) const {
    std::fill(grad.begin(), grad.end(), 0.0);
    const double m = max_abs(x);
    if (m == 0.0) return 0.0;
    switch (kind) {
      case NormKind::Infinity: {
        std::size_t arg = 0;
        for (std::size_t e = 0; e < x.size(); ++e)
          if (std::abs(x[e]) > std::abs(x[arg])) arg = e;
        grad[arg] = x[arg] > 0.0 ? 1.0 : -1.0;
        return m;
      }
      case NormKind::P: {
        const double p = param;
        double s = 0.0;
        for (std::size_t e = 0; e < x.size(); ++e) {
          const double r = std::abs(x[e]) / m;
          const double rp1 = unit_pow(r, p - 1.0);
          grad[e] = rp1;
          s += rp1 * r;
        }
        const double norm_scaled = std::pow(s, 1.0 / p);  // ||x||_p / m
        // d||x||_p/dx_e = sign(x_e) (|x_e| / ||x||_p)^(p-1)
        const double factor = unit_pow(1.0 / norm_scaled, p - 1.0);
        for (std::size_t e = 0; e < x.size(); ++e)
          grad[e] = x[e] == 0.0 ? 0.0 : grad[e] * (x[e] < 0.0 ? -factor : factor);
        return m * norm_scaled;
      }
      case NormKind::Softmax: {
        const double t = param;
        double num = 0.0, den = 0.0;
        for (std::size_t e = 0; e < x.size(); ++e) {
          const double a = std::abs(x[e]);
          const double w = std::exp(t * (a - m));
          grad[e] = w;
          num += w * a;
          den += w;
        }
        const double g = num / den;
        for (std::size_t e = 0; e < x.size(); ++e) {
          const double s = grad[e] / den;
          const double dg_da = s * (1.0 + t * (std::abs(x[e]) - g));
          grad[e] = x[e] < 0.0 ? -dg_da : dg_da;
        }
        return g;
      }
    }
    return 0.0;
  }
};

class Descent {
 public:
  Descent(const RipsComplex& c, const Cochain1& alpha, double eta, std::size_t budget)
      : c_(c), alpha_(alpha), eta_(eta), budget_(budget), x_(c.n_edges()), gx_(c.n_edges()),
        gf_(c.n_vertices()) {}

  std::size_t epochs() const { return epochs_; }
  bool exhausted() const { return epochs_ >= budget_; }

  /// Gradient steps on `obj` until |loss_prev - loss| < tau (when tau > 0)
  /// or the epoch budget is spent.
  void run(std::vector<double>& f, const Objective& obj, double tau, LossTrace& trace) {
    if (obj.kind == NormKind::Infinity) {
      run_max(f, tau, trace);
      return;
    }
    double prev = std::numeric_limits<double>::quiet_NaN();
    while (epochs_ < budget_) {
      fill_x(f);
      const double loss = obj.evaluate(x_, gx_);
      if (!std::isfinite(loss)) throw DivergenceError(epochs_, "loss became non-finite");
      trace.rows.push_back({epochs_, loss, obj.kind, obj.param, max_abs(x_)});

      std::fill(gf_.begin(), gf_.end(), 0.0);
      for (std::size_t e = 0; e < c_.n_edges(); ++e) {
        if (gx_[e] == 0.0) continue;
        gf_[c_.edge(e).i] -= gx_[e];
        gf_[c_.edge(e).j] += gx_[e];
      }
      double mean = 0.0;
      for (std::size_t v = 0; v < f.size(); ++v) {
        f[v] -= eta_ * gf_[v];
        mean += f[v];
      }
      mean /= static_cast<double>(f.size());
      for (double& v : f) v -= mean;
      ++epochs_;

      if (tau > 0.0 && std::abs(prev - loss) < tau) break;
      prev = loss;
    }
  }

  /// Max-norm subgradient steps. A step moves only the two endpoints of the
  /// arg-max edge, so |x| lives in a max segment tree and only their incident
  /// edges are refreshed. Steps leave sum(f) unchanged, so the mean is
  /// removed once at the end of the phase.
  void run_max(std::vector<double>& f, double tau, LossTrace& trace) {
    const std::size_t ne = c_.n_edges();
    if (ne == 0 || epochs_ >= budget_) return;
    fill_x(f);
    std::size_t leaves = 1;
    while (leaves < ne) leaves <<= 1;
    std::vector<std::uint32_t> tree(2 * leaves, 0);
    auto better = [&](std::uint32_t a, std::uint32_t b) {
      if (a >= ne) return b;
      if (b >= ne) return a;
      return std::abs(x_[b]) > std::abs(x_[a]) ? b : a;
    };
    for (std::size_t k = 0; k < leaves; ++k) tree[leaves + k] = static_cast<std::uint32_t>(k < ne ? k : ne);
    for (std::size_t k = leaves - 1; k >= 1; --k) tree[k] = better(tree[2 * k], tree[2 * k + 1]);
    auto refresh = [&](std::size_t e) {
      const auto& edge = c_.edge(e);
      x_[e] = alpha_[e] + f[edge.j] - f[edge.i];
      for (std::size_t k = (leaves + e) >> 1; k >= 1; k >>= 1) tree[k] = better(tree[2 * k], tree[2 * k + 1]);
    };

    double prev = std::numeric_limits<double>::quiet_NaN();
    while (epochs_ < budget_) {
      const std::uint32_t arg = tree[1];
      const double loss = std::abs(x_[arg]);
      if (!std::isfinite(loss)) throw DivergenceError(epochs_, "loss became non-finite");
      trace.rows.push_back({epochs_, loss, NormKind::Infinity, kInfinity, loss});
      ++epochs_;
      if (loss == 0.0) break;
      const double g = x_[arg] > 0.0 ? eta_ : -eta_;
      const auto& edge = c_.edge(arg);
      f[edge.i] += g;
      f[edge.j] -= g;
      for (auto e : c_.incident_edges(edge.i)) refresh(e);
      for (auto e : c_.incident_edges(edge.j)) refresh(e);

      if (tau > 0.0 && std::abs(prev - loss) < tau) break;
      prev = loss;
    }
    double mean = 0.0;
    for (double v : f) mean += v;
    mean /= static_cast<double>(f.size());
    for (double& v : f) v -= mean;
  }

  double loss_at(const std::vector<double>& f, const Objective& obj) {
    fill_x(f);
    return obj.evaluate(x_, gx_);
  }

 private:
  void fill_x(const std::vector<double>& f) {
    for (std::size_t e = 0; e < c_.n_edges(); ++e) {
      const auto& edge = c_.edge(e);
      x_[e] = alpha_[e] + f[edge.j] - f[edge.i];
    }
  }

  const RipsComplex& c_;
  const Cochain1& alpha_;
  double eta_;
  std::size_t budget_;
  std::size_t epochs_ = 0;
  std::vector<double> x_, gx_, gf_;
};

inline std::vector<double> initial_f(const RipsComplex& c, const Cochain1& alpha, const LpConfig& cfg) {
  if (cfg.init == InitKind::Zeros) return std::vector<double>(c.n_vertices(), 0.0);
  return harmonic_solve(c, alpha, uniform_weights(c)).f;
}

inline LpResult finish(const RipsComplex& c, const Cochain1& alpha, std::vector<double> f, LossTrace trace,
                       double final_loss) {
  const auto label = connected_components(c);
  std::vector<double> base(f.size());
  for (std::size_t v = 0; v < f.size(); ++v) base[v] = f[label[v]];
  for (std::size_t v = 0; v < f.size(); ++v) f[v] -= base[v];
  LpResult out;
  out.alpha_bar = add_coboundary(c, alpha, f);
  out.f = std::move(f);
  out.trace = std::move(trace);
  out.final_loss = final_loss;
  return out;
}

}  // namespace detail

/// Gradient descent on ||alpha + d0 f||_p for finite p.
inline LpResult lp_coordinate(const RipsComplex& c, const Cochain1& alpha, const LpConfig& cfg) {
  cfg.validate();
  if (std::isinf(cfg.p)) throw std::invalid_argument("lp_coordinate: p must be finite");
  auto f = detail::initial_f(c, alpha, cfg);
  detail::Descent descent(c, alpha, cfg.eta, cfg.max_epochs);
  const detail::Objective obj{NormKind::P, cfg.p};
  LossTrace trace;
  descent.run(f, obj, cfg.tau, trace);
  const double loss = descent.loss_at(f, obj);
  return detail::finish(c, alpha, std::move(f), std::move(trace), loss);
}

/// Subgradient descent on max_e |alpha_e + (d0 f)_e|; the subgradient uses
/// the single arg-max edge (lowest edge id on ties).
inline LpResult linf_coordinate_direct(const RipsComplex& c, const Cochain1& alpha, const LpConfig& cfg) {
  cfg.validate();
  auto f = detail::initial_f(c, alpha, cfg);
  detail::Descent descent(c, alpha, cfg.eta, cfg.max_epochs);
  const detail::Objective obj{NormKind::Infinity, kInfinity};
  LossTrace trace;
  descent.run(f, obj, cfg.tau, trace);
  const double loss = descent.loss_at(f, obj);
  return detail::finish(c, alpha, std::move(f), std::move(trace), loss);
}

/// Descend ||.||_p for p = start, start+1, ..., end, each to tau-convergence
/// and carrying f forward, then spend the remaining epochs on the max norm.
inline LpResult linf_coordinate_schedule(const RipsComplex& c, const Cochain1& alpha, const LpConfig& cfg) {
  cfg.validate();
  if (!cfg.schedule) throw std::invalid_argument("linf_coordinate_schedule: no p schedule configured");
  auto f = detail::initial_f(c, alpha, cfg);
  detail::Descent descent(c, alpha, cfg.eta, cfg.max_epochs);
  LossTrace trace;
  for (int p = cfg.schedule->start; p <= cfg.schedule->end && !descent.exhausted(); ++p)
    descent.run(f, {NormKind::P, static_cast<double>(p)}, cfg.tau, trace);
  const detail::Objective final_obj{NormKind::Infinity, kInfinity};
  descent.run(f, final_obj, 0.0, trace);
  const double loss = descent.loss_at(f, final_obj);
  return detail::finish(c, alpha, std::move(f), std::move(trace), loss);
}

/// Descend softmax(t|alpha + d0 f|) . |alpha + d0 f|, raising t by one after
/// each tau-convergence, until the epoch budget is spent.
inline LpResult linf_coordinate_softmax(const RipsComplex& c, const Cochain1& alpha, const LpConfig& cfg) {
  cfg.validate();
  auto f = detail::initial_f(c, alpha, cfg);
  detail::Descent descent(c, alpha, cfg.eta, cfg.max_epochs);
  LossTrace trace;
  double t = cfg.temperature_start;
  while (!descent.exhausted()) {
    descent.run(f, {NormKind::Softmax, t}, cfg.tau, trace);
    t += 1.0;
  }
  const double loss = descent.loss_at(f, {NormKind::Softmax, t - 1.0});
  return detail::finish(c, alpha, std::move(f), std::move(trace), loss);
}

}  // namespace circcoords
