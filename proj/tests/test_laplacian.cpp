#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "circcoords/laplacian.hpp"
#include "oracles.hpp"

using namespace circcoords;
using Catch::Approx;

namespace {

oracle::EdgeList edge_list(const RipsComplex& c) {
  oracle::EdgeList g;
  g.n_vertices = c.n_vertices();
  for (const auto& e : c.edges()) g.edges.emplace_back(e.i, e.j);
  return g;
}

Cochain1 integer_cochain(std::vector<double> v) { return {Coefficients::Integer, 0, std::move(v)}; }

Cochain1 random_cochain(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> u(-3, 3);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return integer_cochain(std::move(v));
}

RipsComplex unit_square_complex() { return build_rips(PointCloud{2, {0, 0, 1, 0, 1, 1, 0, 1}}, 1.2); }

}  // namespace

TEST_CASE("harmonic representative on the unit square", "[laplacian]") {
  const auto c = unit_square_complex();
  REQUIRE(c.n_edges() == 4);
  const auto e01 = static_cast<std::size_t>(c.find_edge(0, 1));

  SECTION("alpha = 1 on edge (0,1)") {
    std::vector<double> v(4, 0.0);
    v[e01] = 1.0;
    const auto sol = harmonic_solve(c, integer_cochain(v), uniform_weights(c));
    CHECK(sol.f[0] == 0.0);
    CHECK(sol.f[1] == Approx(-0.75).margin(1e-12));
    CHECK(sol.f[2] == Approx(-0.5).margin(1e-12));
    CHECK(sol.f[3] == Approx(-0.25).margin(1e-12));
    // Constant flow of 1/4 around the loop.
    CHECK(sol.alpha_h[e01] == Approx(0.25).margin(1e-12));
    CHECK(sol.alpha_h[static_cast<std::size_t>(c.find_edge(1, 2))] == Approx(0.25).margin(1e-12));
    CHECK(sol.alpha_h[static_cast<std::size_t>(c.find_edge(2, 3))] == Approx(0.25).margin(1e-12));
    CHECK(sol.alpha_h[static_cast<std::size_t>(c.find_edge(0, 3))] == Approx(-0.25).margin(1e-12));
  }
  SECTION("alpha = -1 on edge (0,1) flips the sign") {
    std::vector<double> v(4, 0.0);
    v[e01] = -1.0;
    const auto sol = harmonic_solve(c, integer_cochain(v), uniform_weights(c));
    CHECK(sol.f[1] == Approx(0.75).margin(1e-12));
    CHECK(sol.f[2] == Approx(0.5).margin(1e-12));
    CHECK(sol.f[3] == Approx(0.25).margin(1e-12));
  }
}

TEST_CASE("harmonic solve matches dense normal equations", "[laplacian][oracle]") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> eps_dist(0.25, 0.7);
  int nontrivial = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const auto cloud = oracle::random_cloud(rng, 14, 2);
    const auto c = build_rips(cloud, eps_dist(rng), 1);
    if (c.n_edges() == 0) continue;
    ++nontrivial;
    const auto alpha = random_cochain(rng, c.n_edges());
    WeightScheme w;
    switch (trial % 4) {
      case 0: w = uniform_weights(c); break;
      case 1: w = wdgl_weights(c, default_bandwidth(c)); break;
      case 2: w = degree_weights(c, WeightKind::InvDegSum); break;
      default: w = degree_weights(c, WeightKind::InvSqrtDegProd); break;
    }
    const auto sol = harmonic_solve(c, alpha, w);
    const auto ref = oracle::dense_harmonic(edge_list(c), alpha.values, w.q);
    for (std::size_t v = 0; v < c.n_vertices(); ++v) CHECK(sol.f[v] == Approx(ref[v]).margin(1e-8));
    CHECK(sol.residual < 1e-8);
  }
  CHECK(nontrivial >= 100);
}

TEST_CASE("harmonic cocycle is co-closed", "[laplacian]") {
  std::mt19937_64 rng(3);
  const auto c = build_rips(oracle::random_cloud(rng, 60, 2), 0.3, 1);
  const auto alpha = random_cochain(rng, c.n_edges());
  const auto w = wdgl_weights(c, 0.05);
  const auto sol = harmonic_solve(c, alpha, w);
  double b_norm = 0.0;
  for (double v : weighted_codifferential(c, w.q, alpha.values)) b_norm += v * v;
  b_norm = std::sqrt(b_norm);
  for (double v : weighted_codifferential(c, w.q, sol.alpha_h.values)) CHECK(std::abs(v) <= 1e-9 * b_norm);

  SECTION("a global rescaling of the weights leaves f unchanged") {
    auto scaled = w;
    for (auto& q : scaled.q) q *= 37.5;
    const auto again = harmonic_solve(c, alpha, scaled);
    for (std::size_t v = 0; v < c.n_vertices(); ++v) CHECK(again.f[v] == Approx(sol.f[v]).margin(1e-8));
  }
  SECTION("coboundaries are removed completely") {
    std::vector<double> g(c.n_vertices());
    for (auto& x : g) x = std::uniform_real_distribution<double>(-2, 2)(rng);
    const auto exact = add_coboundary(c, Cochain1{Coefficients::Real, 0, std::vector<double>(c.n_edges(), 0.0)}, g);
    const auto zero = harmonic_solve(c, exact, w);
    for (double v : zero.alpha_h.values) CHECK(std::abs(v) < 1e-8);
  }
}

TEST_CASE("WDGL weights assemble the density-corrected Laplacian", "[laplacian][oracle]") {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 20; ++trial) {
    const auto cloud = oracle::random_cloud(rng, 15, 3);
    const double eps = 0.5 + 0.02 * trial;
    const double t = 0.03 + 0.005 * trial;
    const auto c = build_rips(cloud, eps, 1);
    const auto w = wdgl_weights(c, t);
    const std::size_t n = cloud.size();

    // Kernel, density and L = P^-1 D - P^-1 G P^-1 straight from the coordinates.
    std::vector<std::vector<double>> g(n, std::vector<double>(n, 0.0));
    std::vector<double> p(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 1.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double d = oracle::distance(cloud, i, j);
        if (i != j && d <= eps) {
          g[i][j] = std::exp(-d * d / (4 * t));
          s += g[i][j];
        }
      }
      p[i] = s / static_cast<double>(n);
    }
    std::vector<std::vector<double>> want(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      double dii = 0.0;
      for (std::size_t j = 0; j < n; ++j) dii += g[i][j] / p[j];
      for (std::size_t j = 0; j < n; ++j) want[i][j] = (i == j ? dii / p[i] : 0.0) - g[i][j] / (p[i] * p[j]);
    }

    std::vector<std::vector<double>> got(n, std::vector<double>(n, 0.0));
    for (std::size_t e = 0; e < c.n_edges(); ++e) {
      const auto [i, j] = std::pair<std::size_t, std::size_t>{c.edge(e).i, c.edge(e).j};
      got[i][i] += w.q[e];
      got[j][j] += w.q[e];
      got[i][j] -= w.q[e];
      got[j][i] -= w.q[e];
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) CHECK(got[i][j] == Approx(want[i][j]).margin(1e-10));

    // The operator applied to a vertex function, with directed weights g_ij / p_j.
    std::vector<double> f(n);
    for (auto& x : f) x = std::uniform_real_distribution<double>(-1, 1)(rng);
    const auto lf = laplacian_apply(c, t, f);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += g[i][j] / p[j] * (f[i] - f[j]);
      CHECK(lf[i] == Approx(s).margin(1e-10));
    }
  }
}

TEST_CASE("density estimate", "[laplacian]") {
  const auto c = build_rips(PointCloud{1, {0.0, 1.0, 5.0}}, 1.0, 1);
  const auto est = estimate_density(c, 0.25);
  REQUIRE(est.kernel.size() == 1);
  CHECK(est.kernel[0] == Approx(std::exp(-1.0)));
  CHECK(est.phat[0] == Approx((1.0 + std::exp(-1.0)) / 3.0));
  CHECK(est.phat[1] == Approx((1.0 + std::exp(-1.0)) / 3.0));
  CHECK(est.phat[2] == Approx(1.0 / 3.0));
  CHECK_THROWS_AS(estimate_density(c, 0.0), std::invalid_argument);
  CHECK(default_bandwidth(c) == Approx(0.2));
  CHECK_THROWS_AS(default_bandwidth(build_rips(PointCloud{1, {0.0, 5.0}}, 1.0)), std::invalid_argument);
}

TEST_CASE("degree weights", "[laplacian]") {
  const auto c = build_rips(PointCloud{1, {0.0, 1.0, 2.0}}, 1.0, 1);  // path 0 - 1 - 2
  const auto sum = degree_weights(c, WeightKind::InvDegSum);
  for (double q : sum.q) CHECK(q == Approx(1.0 / 9.0));
  const auto prod = degree_weights(c, WeightKind::InvSqrtDegProd);
  for (double q : prod.q) CHECK(q == Approx(0.5));
  CHECK_THROWS_AS(degree_weights(c, WeightKind::Wdgl), std::invalid_argument);
}

TEST_CASE("solver input validation", "[laplacian]") {
  const auto c = unit_square_complex();
  const auto alpha = integer_cochain({1, 0, 0, 0});
  CHECK_THROWS_AS(harmonic_solve(c, integer_cochain({1, 0}), uniform_weights(c)), std::invalid_argument);
  auto w = uniform_weights(c);
  w.q[2] = 0.0;
  CHECK_THROWS_AS(harmonic_solve(c, alpha, w), std::invalid_argument);
  w.q.pop_back();
  CHECK_THROWS_AS(harmonic_solve(c, alpha, w), std::invalid_argument);
  CHECK_THROWS_AS(laplacian_apply(c, 0.1, std::vector<double>(3)), std::invalid_argument);

  std::mt19937_64 rng(6);
  const auto big = build_rips(oracle::random_cloud(rng, 200, 2), 0.15, 1);
  SolverOptions tight;
  tight.max_iter = 1;
  CHECK_THROWS_AS(harmonic_solve(big, random_cochain(rng, big.n_edges()), uniform_weights(big), tight),
                  SolverError);
}

TEST_CASE("isolated vertices and several components", "[laplacian]") {
  const auto c = build_rips(PointCloud{1, {0.0, 1.0, 2.0, 10.0, 11.0, 30.0}}, 1.0, 1);
  const auto alpha = integer_cochain({1, -2, 3});
  const auto sol = harmonic_solve(c, alpha, uniform_weights(c));
  // A forest: every edge can be made exact.
  for (double v : sol.alpha_h.values) CHECK(std::abs(v) < 1e-12);
  CHECK(sol.f[0] == 0.0);
  CHECK(sol.f[3] == 0.0);
  CHECK(sol.f[5] == 0.0);
}
