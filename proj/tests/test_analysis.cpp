#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "cdpre/analysis.hpp"
#include "cdpre/dynamics.hpp"
#include "cdpre/env.hpp"

using namespace cdpre;

namespace {

ClockField field_from(const std::map<Edge, double>& values) {
  EdgeList edges;
  std::vector<double> u;
  for (const auto& [e, v] : values) edges.push_back(e);
  for (const auto& [e, v] : values) u.push_back(v);
  return ClockField(std::move(edges), std::move(u));
}

Configuration bernoulli_on(int radius, double t, std::uint64_t seed, std::uint64_t rep) {
  ClockField clocks = sample_clocks(edges_in(Box{radius}.vertices()), {seed, rep, Stream::clocks});
  return evolve_bernoulli(clocks, t);
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("cluster of a closed configuration is a singleton") {
  Configuration cfg = bernoulli_on(2, 0.0, 1, 0);
  ClusterReport rep = cluster_of(cfg, {0, 0}, {1, 2});
  CHECK(rep.size == 1);
  CHECK(rep.radius == 0);
  CHECK(rep.reached == std::vector<std::pair<int, bool>>{{1, false}, {2, false}});
  CHECK_THROWS_AS(cluster_of(cfg, {5, 5}, {}), std::out_of_range);
}

TEST_CASE("cluster of the full configuration is the window") {
  Configuration cfg = bernoulli_on(2, 1.0, 1, 0);
  ClusterReport rep = cluster_of(cfg, {0, 0}, {1, 2});
  CHECK(rep.size == 25);
  CHECK(rep.radius == 4);  // graph distance to a corner
  CHECK(rep.reached == std::vector<std::pair<int, bool>>{{1, true}, {2, true}});
}

TEST_CASE("connects conventions") {
  Configuration closed = bernoulli_on(3, 0.0, 2, 0);
  CHECK(connects(closed, {0, 0}, 0));  // the origin is its own boundary
  CHECK(!connects(closed, {0, 0}, 1));
  Configuration open = bernoulli_on(3, 1.0, 2, 0);
  for (int n : {1, 2, 3}) CHECK(connects(open, {0, 0}, n));
  CHECK_THROWS_AS(connects(closed, {0, 0}, 9), std::out_of_range);
}

TEST_CASE("connects on a bare star") {
  std::map<Edge, double> u;
  for (Vertex tip : {Vertex{1, 0}, Vertex{-1, 0}, Vertex{0, 1}, Vertex{0, -1}})
    u[make_edge({0, 0}, tip)] = 0.9;
  u[make_edge({0, 0}, {1, 0})] = 0.1;
  Configuration cfg = evolve_bernoulli(field_from(u), 0.5);
  CHECK(connects(cfg, {0, 0}, 1));
  Configuration none = evolve_bernoulli(field_from(u), 0.05);
  CHECK(!connects(none, {0, 0}, 1));
}

TEST_CASE("cluster_of agrees with connects") {
  for (std::uint64_t rep = 0; rep < 30; ++rep) {
    Configuration cfg = bernoulli_on(5, 0.47, 33, rep);
    ClusterReport r = cluster_of(cfg, {0, 0}, {1, 2, 3, 4, 5});
    for (auto [n, hit] : r.reached) CHECK(hit == connects(cfg, {0, 0}, n));
  }
}

TEST_CASE("restricted connectivity ignores inner edges") {
  Configuration open = bernoulli_on(6, 1.0, 3, 0);
  CHECK(connects_outside(open, {4, 0}, 6, 4));
  Configuration closed = bernoulli_on(6, 0.0, 3, 0);
  CHECK(!connects_outside(closed, {4, 0}, 6, 4));
  // a start vertex strictly inside the excluded shell cannot move
  CHECK(!connects_outside(open, {1, 0}, 6, 4));
}

TEST_CASE("influence zone: no usable first edge") {
  std::map<Edge, double> u{{make_edge({0, 0}, {1, 0}), 0.8}, {make_edge({0, 0}, {0, 1}), 0.9}};
  InfluenceZone z = influence_zone(field_from(u), 0.5, {{0, 0}});
  CHECK(z.members == VertexList{{0, 0}});
}

TEST_CASE("influence zone follows strictly decreasing clocks") {
  std::map<Edge, double> u{{make_edge({0, 0}, {1, 0}), 0.9},
                           {make_edge({1, 0}, {2, 0}), 0.5},
                           {make_edge({2, 0}, {3, 0}), 0.2}};
  InfluenceZone z = influence_zone(field_from(u), 1.0, {{0, 0}});
  CHECK(z.members == VertexList{{0, 0}, {1, 0}, {2, 0}, {3, 0}});

  std::map<Edge, double> v{{make_edge({0, 0}, {1, 0}), 0.2}, {make_edge({1, 0}, {2, 0}), 0.5}};
  InfluenceZone z2 = influence_zone(field_from(v), 1.0, {{0, 0}});
  CHECK(z2.members == VertexList{{0, 0}, {1, 0}});
}

TEST_CASE("influence zone can re-enter through a better budget") {
  // the direct edge to (1,0) has a tiny clock; the detour arrives with a
  // larger budget and enables the continuation to (2,0)
  std::map<Edge, double> u{{make_edge({0, 0}, {1, 0}), 0.05},
                           {make_edge({0, 0}, {0, 1}), 0.9},
                           {make_edge({0, 1}, {1, 1}), 0.8},
                           {make_edge({1, 0}, {1, 1}), 0.6},
                           {make_edge({1, 0}, {2, 0}), 0.3}};
  InfluenceZone z = influence_zone(field_from(u), 1.0, {{0, 0}});
  CHECK(std::count(z.members.begin(), z.members.end(), Vertex{2, 0}) == 1);
}

TEST_CASE("influence zone grows with t") {
  EdgeList edges = edges_in(Box{4}.vertices());
  for (std::uint64_t rep = 0; rep < 50; ++rep) {
    ClockField clocks = sample_clocks(edges, {71, rep, Stream::clocks});
    InfluenceZone small = influence_zone(clocks, 0.4, {{0, 0}});
    InfluenceZone big = influence_zone(clocks, 0.8, {{0, 0}});
    CHECK(std::includes(big.members.begin(), big.members.end(), small.members.begin(),
                        small.members.end()));
  }
}

TEST_CASE("mzone escape is rare at tiny t") {
  MzoneEstimate est = mzone_escape_frequency(3, 0.01, 100000, 911);
  // union bound: 4 * 3^2 * t^3 / 3! = 6e-6; a handful of hits at most
  CHECK(est.frequency * est.replicates <= 4.0);
}

TEST_CASE("mzone bound at m = 7 is respected") {
  MzoneEstimate est = mzone_escape_frequency(7, 1.0, 4000, 57);
  CHECK(est.bound == doctest::Approx(2916.0 / 5040.0));
  CHECK(est.frequency <= est.bound + 3.0 * std::sqrt(0.25 / est.replicates));
  CHECK(est.frequency > 0.0);
  CHECK_THROWS_AS(mzone_escape_frequency(0, 1.0, 10, 1), std::invalid_argument);
}

TEST_CASE("covariance is zero at t = 0") {
  CovarianceEstimate est = covariance_pair(Model::cdpre, ConstraintDist({0, 0, 0, 1}), 2, 6,
                                           {4, 0}, 0.0, 500, 5);
  CHECK(est.cov_hat == 0.0);
  CHECK(est.stderr_ == 0.0);
}

TEST_CASE("covariance vanishes for the product baseline") {
  CovarianceEstimate est = covariance_pair(Model::bernoulli, ConstraintDist({0, 0, 0, 1}), 2, 6,
                                           {4, 0}, 0.5, 20000, 6, 0);
  CHECK(std::abs(est.cov_hat) <= 3.0 * est.stderr_ + 1e-12);
}

TEST_CASE("covariance respects geometry preconditions") {
  ConstraintDist d({0, 0, 0, 1});
  CHECK_THROWS_AS(covariance_pair(Model::cdpre, d, 3, 6, {6, 0}, 0.4, 100, 1),
                  std::invalid_argument);  // 2m = n
  CHECK_THROWS_AS(covariance_pair(Model::cdpre, d, 2, 6, {3, 0}, 0.4, 100, 1),
                  std::invalid_argument);  // w off the shell
}

TEST_CASE("covariance decoupling report at desk scale") {
  CovarianceEstimate est = covariance_pair(Model::cdpre, ConstraintDist({0, 0, 0, 1}), 6, 16,
                                           {12, 0}, 0.45, 2000, 8);
  CHECK(est.bound == doctest::Approx(6.0 * std::exp(-3.0 * std::log(6.0))));
  CHECK(std::abs(est.cov_hat) <= 0.25 + est.stderr_);
  CHECK(est.within_bound);
}

}  // TEST_SUITE
