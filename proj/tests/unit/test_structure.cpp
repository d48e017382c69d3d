#include <doctest.h>

#include <cmath>
#include <random>

#include "patchtrack/error.hpp"
#include "patchtrack/structure.hpp"

using namespace patchtrack;

namespace {

PositionMap random_positions(std::mt19937_64& rng, std::size_t n, double spread) {
  std::uniform_real_distribution<double> u(-spread, spread);
  PositionMap p(n);
  for (auto& q : p) q = {u(rng), u(rng)};
  return p;
}

}  // namespace

TEST_CASE("spatial_likelihood") {
  CHECK(spatial_likelihood(7.0, 7.0, 0.3) == 1.0);
  CHECK(spatial_likelihood(100.0, 3.0, 0.0) == 1.0);
  CHECK(spatial_likelihood(11.0, 10.0, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(spatial_likelihood(11.0, 10.0, 1.0) == doctest::Approx(0.36788).epsilon(1e-5));
  CHECK(spatial_likelihood(9.0, 10.0, 1.0) == spatial_likelihood(11.0, 10.0, 1.0));
}

TEST_CASE("build_graph is complete with reference distances") {
  const PositionMap p{{0, 0}, {3, 4}, {0, 10}};
  const SpatialGraph g = build_graph(p, 0.5);
  REQUIRE(g.edges.size() == 3);
  CHECK(g.stiffness == 0.5);
  CHECK(g.edges[0] == SpatialEdge{0, 1, 5.0});
  CHECK(g.edges[1] == SpatialEdge{0, 2, 10.0});
  CHECK(g.edges[2].xi == doctest::Approx(std::sqrt(9.0 + 36.0)));
  CHECK(graph_score(g, p) == 1.0);
  CHECK_THROWS_AS(build_graph(p, -1.0), Error);
}

TEST_CASE("graph_score values") {
  SpatialGraph single = build_graph({{1, 2}}, 1.0);
  CHECK(graph_score(single, {{50, 50}}) == 1.0);

  SpatialGraph one_edge = build_graph({{0, 0}, {10, 0}}, 1.0);
  CHECK(graph_score(one_edge, {{0, 0}, {11, 0}}) == doctest::Approx(std::exp(-1.0)));

  // Edge 0-1 at its reference, edge 0-2 off by one: geometric mean of 1 and e^-1.
  SpatialGraph two;
  two.node_positions = {{0, 0}, {10, 0}, {0, 10}};
  two.edges = {{0, 1, 10.0}, {0, 2, 9.0}};
  two.stiffness = 1.0;
  const PositionMap at{{0, 0}, {10, 0}, {0, 10}};
  CHECK(edge_likelihood(two, two.edges[0], at) == 1.0);
  CHECK(edge_likelihood(two, two.edges[1], at) == doctest::Approx(std::exp(-1.0)));
  CHECK(graph_score(two, at) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
  CHECK(graph_score(two, at) == doctest::Approx(0.60653).epsilon(1e-5));

  CHECK_THROWS_AS(graph_score(two, PositionMap{{0, 0}}), Error);
}

TEST_CASE("graph_score is translation invariant and maximal at the references") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> shift(-500.0, 500.0);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 1 + rng() % 8;
    const SpatialGraph g = build_graph(random_positions(rng, n, 40.0), 0.01 * (1 + rng() % 10));
    const PositionMap p = random_positions(rng, n, 40.0);
    const double dx = shift(rng), dy = shift(rng);
    PositionMap moved = p;
    for (auto& q : moved) q = {q.x + dx, q.y + dy};
    const double s = graph_score(g, p);
    REQUIRE(s > 0.0);
    REQUIRE(s <= 1.0);
    REQUIRE(graph_score(g, moved) == doctest::Approx(s).epsilon(1e-9));
    PositionMap ref = g.node_positions;
    for (auto& q : ref) q = {q.x + dx, q.y + dy};
    REQUIRE(graph_score(g, ref) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("update_references EMA") {
  const SpatialGraph g = build_graph({{0, 0}, {10, 0}}, 0.01);
  const PositionMap obs{{0, 0}, {20, 0}};
  CHECK(update_references(g, obs, 0.0).edges[0].xi == 10.0);
  CHECK(update_references(g, obs, 1.0).edges[0].xi == 20.0);
  const SpatialGraph half = update_references(g, obs, 0.5);
  CHECK(half.edges[0].xi == 15.0);
  CHECK(half.node_positions == obs);
  CHECK_THROWS_AS(update_references(g, obs, 1.5), Error);
  CHECK_THROWS_AS(update_references(g, PositionMap{{0, 0}}, 0.5), Error);
}

TEST_CASE("two EMA steps equal one step at the compounded rate") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> rate(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 2 + rng() % 5;
    const SpatialGraph g = build_graph(random_positions(rng, n, 30.0), 0.01);
    const PositionMap obs = random_positions(rng, n, 30.0);
    const double r = rate(rng);
    const SpatialGraph twice = update_references(update_references(g, obs, r), obs, r);
    const SpatialGraph once = update_references(g, obs, 1.0 - (1.0 - r) * (1.0 - r));
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      REQUIRE(twice.edges[e].xi == doctest::Approx(once.edges[e].xi).epsilon(1e-9));
    }
  }
}

TEST_CASE("masked update moves only edges between active nodes") {
  const SpatialGraph g = build_graph({{0, 0}, {10, 0}, {0, 10}}, 0.01);
  const PositionMap obs{{0, 0}, {20, 0}, {0, 30}};
  const SpatialGraph u = update_references(g, obs, 1.0, {true, true, false});
  CHECK(u.edges[0].xi == 20.0);           // 0-1
  CHECK(u.edges[1].xi == g.edges[1].xi);  // 0-2
  CHECK(u.edges[2].xi == g.edges[2].xi);  // 1-2
  CHECK(u.node_positions[1] == Point{20, 0});
  CHECK(u.node_positions[2] == Point{0, 10});
}
