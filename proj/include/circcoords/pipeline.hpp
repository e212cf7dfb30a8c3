#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "circular_map.hpp"
#include "cohomology.hpp"
#include "laplacian.hpp"
#include "lp_optimizer.hpp"
#include "rips.hpp"

namespace circcoords {

enum class Method { L2, Wdgl, InvDegSum, InvSqrtDegProd, Lp, LinfDirect, LinfSchedule, LinfSoftmax };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::L2: return "l2";
    case Method::Wdgl: return "wdgl";
    case Method::InvDegSum: return "invdegsum";
    case Method::InvSqrtDegProd: return "invsqrtdegprod";
    case Method::Lp: return "lp";
    case Method::LinfDirect: return "linf-direct";
    case Method::LinfSchedule: return "linf-schedule";
    case Method::LinfSoftmax: return "linf-softmax";
  }
  return "?";
}

inline Method parse_method(std::string_view tag) {
  for (auto m : {Method::L2, Method::Wdgl, Method::InvDegSum, Method::InvSqrtDegProd, Method::Lp,
                 Method::LinfDirect, Method::LinfSchedule, Method::LinfSoftmax})
    if (tag == to_string(m)) return m;
  throw std::invalid_argument("unknown method '" + std::string(tag) + "'");
}

struct MethodConfig {
  Method method = Method::L2;
  std::optional<double> epsilon;  // default: midpoint of the class interval
  std::optional<double> t;        // WDGL bandwidth; default 0.2 * mean edge length
  SolverOptions solver;
  LpConfig lp;
};

struct CoordinateResult {
  double epsilon = 0.0;
  RipsComplex complex;
  Cochain1 alpha;
  std::vector<double> f;
  Cochain1 alpha_bar;
  CircularMap map;
  std::optional<WeightScheme> weights;
  std::optional<LossTrace> trace;
};

/// Method tag as stored in CircularMap::source, e.g. "lp(p=4)".
inline std::string source_tag(const MethodConfig& cfg) {
  if (cfg.method == Method::Lp) {
    std::string p = std::to_string(cfg.lp.p);
    p.erase(p.find_last_not_of('0') + 1);
    if (!p.empty() && p.back() == '.') p.pop_back();
    return "lp(p=" + p + ")";
  }
  return to_string(cfg.method);
}

/// Solve for the circular coordinate of an already lifted integer cocycle.
inline void solve_on_complex(CoordinateResult& out, const MethodConfig& cfg) {
  const auto& c = out.complex;
  const auto& alpha = out.alpha;
  switch (cfg.method) {
    case Method::L2:
    case Method::Wdgl:
    case Method::InvDegSum:
    case Method::InvSqrtDegProd: {
      WeightScheme w;
      if (cfg.method == Method::L2) w = uniform_weights(c);
      else if (cfg.method == Method::Wdgl) w = wdgl_weights(c, cfg.t ? *cfg.t : default_bandwidth(c));
      else w = degree_weights(c, cfg.method == Method::InvDegSum ? WeightKind::InvDegSum : WeightKind::InvSqrtDegProd);
      auto sol = harmonic_solve(c, alpha, w, cfg.solver);
      out.f = std::move(sol.f);
      out.alpha_bar = std::move(sol.alpha_h);
      out.weights = std::move(w);
      break;
    }
    case Method::Lp:
    case Method::LinfDirect:
    case Method::LinfSchedule:
    case Method::LinfSoftmax: {
      LpResult r;
      if (cfg.method == Method::Lp) {
        r = lp_coordinate(c, alpha, cfg.lp);
      } else if (cfg.method == Method::LinfDirect) {
        r = linf_coordinate_direct(c, alpha, cfg.lp);
      } else if (cfg.method == Method::LinfSchedule) {
        LpConfig lp = cfg.lp;
        if (!lp.schedule) lp.schedule = PSchedule{};
        r = linf_coordinate_schedule(c, alpha, lp);
      } else {
        r = linf_coordinate_softmax(c, alpha, cfg.lp);
      }
      out.f = std::move(r.f);
      out.alpha_bar = std::move(r.alpha_bar);
      out.trace = std::move(r.trace);
      break;
    }
  }
  out.map = wrap(out.f, connected_components(c), source_tag(cfg));
}

/// Scale selection, restriction and lift, and the chosen solve for one class.
inline CoordinateResult circular_coordinates(const DistanceMatrix& d, const PersistencePair& pair,
                                             const MethodConfig& cfg) {
  CoordinateResult out;
  out.epsilon = cfg.epsilon ? *cfg.epsilon : select_epsilon(pair);
  out.complex = build_rips(d, out.epsilon, 2);
  out.alpha = restrict_and_lift(pair, out.complex);
  solve_on_complex(out, cfg);
  return out;
}

}  // namespace circcoords
