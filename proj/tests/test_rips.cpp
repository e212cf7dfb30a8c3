#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <set>
#include <tuple>

#include "circcoords/rips.hpp"
#include "oracles.hpp"

using namespace circcoords;

namespace {

PointCloud equilateral() {
  return PointCloud{2, {0.0, 0.0, 1.0, 0.0, 0.5, std::sqrt(3.0) / 2.0}};
}

}  // namespace

TEST_CASE("rips complex of an equilateral triangle", "[rips]") {
  const auto c = build_rips(equilateral(), 1.5);
  CHECK(c.n_vertices() == 3);
  CHECK(c.n_edges() == 3);
  CHECK(c.n_triangles() == 1);
  CHECK(c.epsilon() == 1.5);

  const auto empty = build_rips(equilateral(), 0.5);
  CHECK(empty.n_edges() == 0);
  CHECK(empty.n_triangles() == 0);

  CHECK(build_rips(equilateral(), 1.5, 1).n_triangles() == 0);
  CHECK_THROWS_AS(build_rips(equilateral(), -1.0), std::invalid_argument);
}

TEST_CASE("rips complex matches exhaustive enumeration", "[rips][oracle]") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 30; ++trial) {
    const auto cloud = oracle::random_cloud(rng, 10, 2);
    for (double eps : {0.0, 0.2, 0.35, 0.5, 0.8, 2.0}) {
      const auto c = build_rips(cloud, eps);
      const auto ref = oracle::brute_rips(cloud, eps);

      std::set<std::pair<std::uint32_t, std::uint32_t>> edges;
      for (const auto& e : c.edges()) {
        CHECK(e.i < e.j);
        CHECK(e.length <= eps);
        CHECK(e.length == oracle::distance(cloud, e.i, e.j));
        edges.insert({e.i, e.j});
      }
      CHECK(edges == ref.edges);

      std::set<std::array<std::uint32_t, 3>> tris;
      for (const auto& t : c.triangles()) {
        CHECK(t.i < t.j);
        CHECK(t.j < t.k);
        for (auto [a, b] : {std::pair{t.i, t.j}, {t.i, t.k}, {t.j, t.k}}) {
          REQUIRE(c.find_edge(a, b) >= 0);
          CHECK(c.edge(static_cast<std::size_t>(c.find_edge(a, b))).length <= t.diameter);
        }
        tris.insert({t.i, t.j, t.k});
      }
      CHECK(tris == ref.triangles);

      for (std::size_t e = 1; e < c.n_edges(); ++e) {
        const auto& a = c.edge(e - 1);
        const auto& b = c.edge(e);
        CHECK(std::tie(a.length, a.i, a.j) < std::tie(b.length, b.i, b.j));
      }
    }
  }
}

TEST_CASE("rips filtration is monotone in epsilon", "[rips]") {
  std::mt19937_64 rng(5);
  const auto cloud = oracle::random_cloud(rng, 25, 3);
  std::set<std::pair<std::uint32_t, std::uint32_t>> previous;
  for (double eps = 0.0; eps <= 1.8; eps += 0.15) {
    const auto c = build_rips(cloud, eps, 1);
    std::set<std::pair<std::uint32_t, std::uint32_t>> now;
    for (const auto& e : c.edges()) now.insert({e.i, e.j});
    CHECK(std::includes(now.begin(), now.end(), previous.begin(), previous.end()));
    previous = std::move(now);
  }
}

TEST_CASE("adjacency queries", "[rips]") {
  PointCloud cloud{1, {0.0, 1.0, 2.0, 10.0, 10.5}};
  const auto c = build_rips(cloud, 1.0);
  CHECK(c.n_edges() == 3);
  CHECK(c.find_edge(0, 1) >= 0);
  CHECK(c.find_edge(1, 0) == c.find_edge(0, 1));
  CHECK(c.find_edge(0, 2) == -1);
  CHECK(c.degree(1) == 2);
  CHECK(c.degree(3) == 1);
  for (std::size_t v = 0; v < c.n_vertices(); ++v) {
    const auto nb = c.neighbors(v);
    const auto inc = c.incident_edges(v);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      const auto& e = c.edge(inc[k]);
      CHECK(((e.i == v && e.j == nb[k]) || (e.j == v && e.i == nb[k])));
    }
  }
  const auto label = connected_components(c);
  CHECK(label == std::vector<std::uint32_t>{0, 0, 0, 3, 3});
  CHECK(c.mean_edge_length() == Catch::Approx(2.5 / 3.0));
}

TEST_CASE("coboundary operators", "[rips]") {
  SECTION("single edge") {
    const auto c = build_rips(PointCloud{1, {0.0, 1.0}}, 1.0);
    const auto d0 = coboundary0(c);
    REQUIRE(d0.rows == 1);
    REQUIRE(d0.cols == 2);
    CHECK(d0.at(0, 0) == -1);
    CHECK(d0.at(0, 1) == 1);
  }
  SECTION("single triangle") {
    const auto c = build_rips(equilateral(), 1.5);
    const auto d1 = coboundary1(c);
    REQUIRE(d1.rows == 1);
    REQUIRE(d1.cols == 3);
    CHECK(d1.at(0, static_cast<std::size_t>(c.find_edge(0, 1))) == 1);
    CHECK(d1.at(0, static_cast<std::size_t>(c.find_edge(0, 2))) == -1);
    CHECK(d1.at(0, static_cast<std::size_t>(c.find_edge(1, 2))) == 1);
  }
  SECTION("d1 d0 = 0 on random complexes") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
      const auto cloud = oracle::random_cloud(rng, 8, 2);
      const auto c = build_rips(cloud, 0.3 + 0.02 * trial);
      const auto d0 = coboundary0(c);
      const auto d1 = coboundary1(c);
      CHECK(d0.nnz() == 2 * c.n_edges());
      CHECK(d1.nnz() == 3 * c.n_triangles());
      const auto zero = multiply(d1, d0);
      CHECK(zero.rows == c.n_triangles());
      CHECK(zero.cols == c.n_vertices());
      CHECK(zero.nnz() == 0);
    }
  }
  SECTION("shape mismatch") {
    const auto c = build_rips(equilateral(), 1.5);
    CHECK_THROWS_AS(multiply(coboundary0(c), coboundary1(c)), std::invalid_argument);
  }
}
