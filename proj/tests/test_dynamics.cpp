#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "cdpre/dynamics.hpp"
#include "cdpre/env.hpp"
#include "cdpre/fixtures.hpp"
#include "cdpre/lattice.hpp"

using namespace cdpre;

namespace {

ClockField field_from(const std::map<Edge, double>& values) {
  EdgeList edges;
  std::vector<double> u;
  for (const auto& [e, v] : values) edges.push_back(e);
  for (const auto& [e, v] : values) u.push_back(v);
  return ClockField(std::move(edges), std::move(u));
}

Environment constant_env(const VertexList& region, int kappa) {
  Environment env;
  env.region = region;
  canonicalize(env.region);
  env.kappa.assign(env.region.size(), static_cast<std::uint8_t>(kappa));
  return env;
}

const OracleFixture& fixture(const std::string& name) {
  for (const OracleFixture& f : oracle_fixtures())
    if (f.name == name) return f;
  throw std::logic_error("no fixture " + name);
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("oracle: single edge") {
  const OracleFixture& f = fixture("single_edge");
  CHECK(exact_distribution(f.graph, f.kappa, 0.37, f.event) == doctest::Approx(0.37).epsilon(1e-12));
  CHECK(exact_distribution(f.graph, f.kappa, 0.0, f.event) == 0.0);
  CHECK(exact_distribution(f.graph, f.kappa, 1.0, f.event) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("oracle: capped middle vertex kills the pair") {
  const OracleFixture& f = fixture("path3_mid1");
  auto both_open = [](const Configuration& cfg) {
    return cfg.is_open(make_edge({0, 0}, {1, 0})) && cfg.is_open(make_edge({1, 0}, {2, 0}));
  };
  CHECK(exact_distribution(f.graph, f.kappa, 1.0, both_open) == 0.0);
  CHECK(exact_distribution(f.graph, f.kappa, 0.6, both_open) == 0.0);
  // left edge alone: opens iff its clock rings first
  CHECK(exact_distribution(f.graph, f.kappa, 0.5, f.event) == doctest::Approx(0.375).epsilon(1e-12));
}

TEST_CASE("oracle: star saturates at degree 3") {
  const OracleFixture& f = fixture("star4");
  auto deg3 = [](const Configuration& cfg) {
    int d = 0;
    for (std::size_t i = 0; i < cfg.edges.size(); ++i)
      if (cfg.open[i]) ++d;
    return d == 3;
  };
  CHECK(exact_distribution(f.graph, f.kappa, 1.0, deg3) == doctest::Approx(1.0).epsilon(1e-12));
  auto all4 = [](const Configuration& cfg) { return cfg.open_count() == 4; };
  CHECK(exact_distribution(f.graph, f.kappa, 1.0, all4) == 0.0);
  for (double t : {0.2, 0.5, 0.8})
    CHECK(exact_distribution(f.graph, f.kappa, t, f.event) ==
          doctest::Approx(1.0 - std::pow(1.0 - t, 4)).epsilon(1e-12));
}

TEST_CASE("oracle: unit square closed form") {
  const OracleFixture& f = fixture("unit_square");
  for (double t : {0.2, 0.5, 0.8})
    CHECK(exact_distribution(f.graph, f.kappa, t, f.event) ==
          doctest::Approx(2 * t * t - t * t * t * t).epsilon(1e-12));
}

TEST_CASE("oracle: input validation") {
  SmallGraph big;
  for (int x = 0; x <= 11; ++x) big.vertices.push_back({x, 0});
  for (int x = 0; x < 11; ++x) big.edges.push_back(make_edge({x, 0}, {x + 1, 0}));
  KappaMap kappa;
  for (const Vertex& v : big.vertices) kappa[v] = 3;
  CHECK_THROWS_AS(exact_distribution(big, kappa, 0.5, [](const Configuration&) { return true; }),
                  std::invalid_argument);

  const OracleFixture& f = fixture("single_edge");
  KappaMap missing;
  missing[{0, 0}] = 3;
  CHECK_THROWS_AS(exact_distribution(f.graph, missing, 0.5, f.event), std::out_of_range);
}

TEST_CASE("evolve_cdpre: single edge opens iff its clock rang") {
  Edge e = make_edge({0, 0}, {1, 0});
  ClockField clocks = field_from({{e, 0.4}});
  Environment env = constant_env({{0, 0}, {1, 0}}, 3);
  CHECK(evolve_cdpre(env, clocks, 0.5).is_open(e));
  CHECK(!evolve_cdpre(env, clocks, 0.3).is_open(e));
  CHECK(evolve_cdpre(env, clocks, 0.4).is_open(e));
}

TEST_CASE("evolve_cdpre: capped middle vertex takes the earlier edge") {
  Edge left = make_edge({0, 0}, {1, 0});
  Edge right = make_edge({1, 0}, {2, 0});
  ClockField clocks = field_from({{left, 0.2}, {right, 0.3}});
  Environment env;
  env.region = {{0, 0}, {1, 0}, {2, 0}};
  env.kappa = {3, 1, 3};
  Configuration cfg = evolve_cdpre(env, clocks, 0.5);
  CHECK(cfg.is_open(left));
  CHECK(!cfg.is_open(right));
}

TEST_CASE("evolve_cdpre: missing constraint is an error") {
  Edge e = make_edge({0, 0}, {1, 0});
  ClockField clocks = field_from({{e, 0.4}});
  Environment env = constant_env({{0, 0}}, 3);
  CHECK_THROWS_AS(evolve_cdpre(env, clocks, 0.5), std::out_of_range);
}

TEST_CASE("evolve_bernoulli endpoints") {
  EdgeList edges = edges_in(Box{3}.vertices());
  ClockField clocks = sample_clocks(edges, {1, 0, Stream::clocks});
  CHECK(evolve_bernoulli(clocks, 0.0).open_count() == 0);
  CHECK(evolve_bernoulli(clocks, 1.0).open_count() == edges.size());
}

TEST_CASE("bernoulli open fraction tracks t") {
  EdgeList edges = edges_in(Box{354}.vertices());
  ClockField clocks = sample_clocks(edges, {3, 0, Stream::clocks});
  Configuration cfg = evolve_bernoulli(clocks, 0.3);
  double frac = static_cast<double>(cfg.open_count()) / static_cast<double>(edges.size());
  double tol = 3.0 * std::sqrt(0.3 * 0.7 / static_cast<double>(edges.size()));
  CHECK(std::abs(frac - 0.3) <= tol);
}

TEST_CASE("intermediate: block event suppresses g") {
  BlockGeometry bg = block_geometry(0, 0);
  std::map<Edge, double> u;
  // A edges carry the six smallest clocks; everything else larger.
  double v = 0.01;
  for (const Edge& e : bg.a_set) u[e] = v += 0.01;
  u[bg.g] = 0.5;
  double w = 0.2;
  for (const Edge& e : bg.b_set) u[e] = std::min(0.99, w += 0.01);
  ClockField clocks = field_from(u);

  auto [cfg, report] = evolve_intermediate(clocks, 1.0, bg.lambda);
  REQUIRE(report.blocks.size() == 1);
  CHECK(report.blocks[0].c_occurred);
  CHECK(report.blocks[0].max_inside == doctest::Approx(0.07));
  CHECK(!cfg.is_open(bg.g));  // closed even at t = 1
  for (const Edge& e : bg.a_set) CHECK(cfg.is_open(e));

  // raise one A clock above a B clock: the event fails and g is Bernoulli
  u[bg.a_set[0]] = 0.95;
  ClockField clocks2 = field_from(u);
  auto [cfg2, report2] = evolve_intermediate(clocks2, 1.0, bg.lambda);
  CHECK(!report2.blocks[0].c_occurred);
  CHECK(cfg2.is_open(bg.g));
  CHECK(!evolve_intermediate(clocks2, 0.4, bg.lambda).first.is_open(bg.g));  // U_g = 0.5 > t
}

TEST_CASE("intermediate: missing block coverage is an error") {
  BlockGeometry bg = block_geometry(0, 0);
  std::map<Edge, double> u;
  for (const Edge& e : bg.a_set) u[e] = 0.5;
  u[bg.g] = 0.5;  // b_set clocks missing
  ClockField clocks = field_from(u);
  CHECK_THROWS_AS(evolve_intermediate(clocks, 0.5, bg.lambda), std::invalid_argument);
}

TEST_CASE("coupled triple at t = 0 is all closed") {
  VertexList window = Box{4}.vertices();
  ClockField clocks = sample_clocks(edges_in(block_closure(window)), {5, 0, Stream::clocks});
  Environment env = sample_environment(ConstraintDist({0, 0, 0, 1}), block_closure(window),
                                       {5, 0, Stream::constraints});
  CoupledTriple triple = evolve_coupled(env, clocks, 0.0, window);
  CHECK(triple.cdpre.open_count() == 0);
  CHECK(triple.intermediate.open_count() == 0);
  CHECK(triple.bernoulli.open_count() == 0);
}

TEST_CASE("dominance chain holds pathwise when rho0 = 0") {
  for (auto rho : {std::array<double, 4>{0, 0, 0, 1}, std::array<double, 4>{0, 0, 0.5, 0.5},
                   std::array<double, 4>{0, 1. / 3, 1. / 3, 1. / 3}}) {
    DominanceCheck check = dominance_check(ConstraintDist(rho), 0.6, 8, 300, 77);
    CHECK(check.cdpre_above_intermediate == 0);
    CHECK(check.intermediate_above_bernoulli == 0);
    CHECK(check.degree_cap_violations == 0);
  }
}

TEST_CASE("strict domination happens at t = 1") {
  // with every constraint 3, a fourth incident edge must stay closed in the
  // constrained process while Bernoulli opens everything
  VertexList window = block_closure(Box{4}.vertices());
  ClockField clocks = sample_clocks(edges_in(window), {9, 0, Stream::clocks});
  Environment env = sample_environment(ConstraintDist({0, 0, 0, 1}), window,
                                       {9, 0, Stream::constraints});
  CoupledTriple triple = evolve_coupled(env, clocks, 1.0, Box{4}.vertices());
  CHECK(triple.bernoulli.open_count() == clocks.size());
  CHECK(triple.cdpre.open_count() < triple.bernoulli.open_count());
}

TEST_CASE("degree caps hold for mixed constraints") {
  ConstraintDist dist({0.25, 0.25, 0.25, 0.25});
  DominanceCheck check = dominance_check(dist, 0.9, 6, 200, 13);
  CHECK(check.degree_cap_violations == 0);
}

TEST_CASE("time monotonicity for all models") {
  ConstraintDist dist({0, 0, 0.5, 0.5});
  for (Model m : {Model::cdpre, Model::intermediate, Model::bernoulli})
    CHECK(monotonicity_violations(m, dist, 0.3, 0.6, 8, 200, 21) == 0);
}

TEST_CASE("evolution is deterministic") {
  VertexList window = block_closure(Box{6}.vertices());
  ClockField clocks = sample_clocks(edges_in(window), {123, 5, Stream::clocks});
  Environment env = sample_environment(ConstraintDist({0, 0, 0.5, 0.5}), window,
                                       {123, 5, Stream::constraints});
  Configuration a = evolve_cdpre(env, clocks, 0.7);
  Configuration b = evolve_cdpre(env, clocks, 0.7);
  CHECK(a.open == b.open);
}

TEST_CASE("only clock ranks below t matter") {
  VertexList window = Box{5}.vertices();
  EdgeList edges = edges_in(window);
  ClockField clocks = sample_clocks(edges, {17, 2, Stream::clocks});
  Environment env = sample_environment(ConstraintDist({0, 0.2, 0.4, 0.4}), window,
                                       {17, 2, Stream::constraints});
  const double t = 0.45;
  // squash values below t monotonically, keep the rest
  std::vector<double> warped = clocks.values();
  for (double& u : warped)
    if (u <= t) u = t * (u / t) * (u / t);
  ClockField clocks2(edges, warped);
  CHECK(evolve_cdpre(env, clocks, t).open == evolve_cdpre(env, clocks2, t).open);
}

TEST_CASE("monte carlo agrees with the oracle on every fixture") {
  for (const OracleFixture& f : oracle_fixtures()) {
    const double t = 0.6;
    const int reps = 20000;
    double exact = exact_distribution(f.graph, f.kappa, t, f.event);
    double mc = fixture_mc_frequency(f, t, reps, 404);
    double tol = 4.0 * std::sqrt(exact * (1.0 - exact) / reps);
    CAPTURE(f.name);
    CHECK(std::abs(mc - exact) <= tol);
    if (f.closed_form) CHECK(exact == doctest::Approx(f.closed_form(t)).epsilon(1e-9));
  }
}

}  // TEST_SUITE
