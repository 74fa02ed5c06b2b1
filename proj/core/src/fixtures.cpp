#include "cdpre/fixtures.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "cdpre/parallel.hpp"
#include "cdpre/region.hpp"
#include "cdpre/rng.hpp"

namespace cdpre {

namespace {

// Connectivity through open edges, tolerant of configurations that carry
// extra (closed) edges beyond the fixture's own list.
bool open_path(const Configuration& cfg, Vertex from, Vertex to) {
  if (from == to) return true;
  std::unordered_map<Vertex, int, VertexHash> seen;
  std::vector<Vertex> queue{from};
  seen.emplace(from, 1);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Vertex v = queue[head];
    for (std::size_t i = 0; i < cfg.edges.size(); ++i) {
      if (!cfg.open[i]) continue;
      const Edge& e = cfg.edges[i];
      Vertex other;
      if (e.a == v) other = e.b;
      else if (e.b == v) other = e.a;
      else continue;
      if (other == to) return true;
      if (seen.emplace(other, 1).second) queue.push_back(other);
    }
  }
  return false;
}

int open_degree(const Configuration& cfg, Vertex v) {
  int d = 0;
  for (std::size_t i = 0; i < cfg.edges.size(); ++i)
    if (cfg.open[i] && (cfg.edges[i].a == v || cfg.edges[i].b == v)) ++d;
  return d;
}

double single_edge_form(double t) { return t; }
double path3_left_form(double t) { return t - 0.5 * t * t; }
double star_any_form(double t) { return 1.0 - std::pow(1.0 - t, 4.0); }
double square_diag_form(double t) { return 2.0 * t * t - t * t * t * t; }

std::vector<OracleFixture> build_fixtures() {
  std::vector<OracleFixture> out;

  {
    OracleFixture f;
    f.name = "single_edge";
    f.graph.vertices = {{0, 0}, {1, 0}};
    f.graph.edges = {make_edge({0, 0}, {1, 0})};
    f.kappa = {{{0, 0}, 3}, {{1, 0}, 3}};
    Edge e = f.graph.edges[0];
    f.event = [e](const Configuration& cfg) { return cfg.is_open(e); };
    f.event_description = "edge open";
    f.closed_form = &single_edge_form;
    out.push_back(std::move(f));
  }
  {
    OracleFixture f;
    f.name = "path3_mid1";
    f.graph.vertices = {{0, 0}, {1, 0}, {2, 0}};
    f.graph.edges = {make_edge({0, 0}, {1, 0}), make_edge({1, 0}, {2, 0})};
    f.kappa = {{{0, 0}, 3}, {{1, 0}, 1}, {{2, 0}, 3}};
    Edge left = f.graph.edges[0];
    f.event = [left](const Configuration& cfg) { return cfg.is_open(left); };
    f.event_description = "left edge open";
    f.closed_form = &path3_left_form;
    out.push_back(std::move(f));
  }
  {
    OracleFixture f;
    f.name = "star4";
    f.graph.vertices = {{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (Vertex tip : {Vertex{1, 0}, Vertex{-1, 0}, Vertex{0, 1}, Vertex{0, -1}})
      f.graph.edges.push_back(make_edge({0, 0}, tip));
    for (const Vertex& v : f.graph.vertices) f.kappa[v] = 3;
    f.event = [](const Configuration& cfg) { return open_degree(cfg, {0, 0}) >= 1; };
    f.event_description = "center degree >= 1";
    f.closed_form = &star_any_form;
    out.push_back(std::move(f));
  }
  {
    OracleFixture f;
    f.name = "unit_square";
    f.graph.vertices = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    f.graph.edges = {make_edge({0, 0}, {1, 0}), make_edge({0, 0}, {0, 1}),
                     make_edge({1, 0}, {1, 1}), make_edge({0, 1}, {1, 1})};
    for (const Vertex& v : f.graph.vertices) f.kappa[v] = 3;
    f.event = [](const Configuration& cfg) { return open_path(cfg, {0, 0}, {1, 1}); };
    f.event_description = "corner to opposite corner";
    f.closed_form = &square_diag_form;
    out.push_back(std::move(f));
  }
  {
    OracleFixture f;
    f.name = "grid_2x3";
    for (int x = 0; x <= 2; ++x)
      for (int y = 0; y <= 1; ++y) f.graph.vertices.push_back({x, y});
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y <= 1; ++y) f.graph.edges.push_back(make_edge({x, y}, {x + 1, y}));
    for (int x = 0; x <= 2; ++x) f.graph.edges.push_back(make_edge({x, 0}, {x, 1}));
    for (const Vertex& v : f.graph.vertices) f.kappa[v] = 3;
    f.kappa[{1, 0}] = 2;
    f.kappa[{1, 1}] = 2;
    f.event = [](const Configuration& cfg) { return open_path(cfg, {0, 0}, {2, 1}); };
    f.event_description = "corner to opposite corner";
    out.push_back(std::move(f));
  }
  {
    OracleFixture f;
    f.name = "h_graph";
    for (int x = 0; x <= 1; ++x)
      for (int y = 0; y <= 3; ++y) f.graph.vertices.push_back({x, y});
    for (int x = 0; x <= 1; ++x)
      for (int y = 0; y < 3; ++y) f.graph.edges.push_back(make_edge({x, y}, {x, y + 1}));
    f.graph.edges.push_back(make_edge({0, 1}, {1, 1}));
    for (const Vertex& v : f.graph.vertices) f.kappa[v] = 3;
    f.kappa[{0, 1}] = 2;
    f.kappa[{1, 1}] = 2;
    f.event = [](const Configuration& cfg) { return open_path(cfg, {0, 0}, {1, 3}); };
    f.event_description = "bar end to opposite bar end";
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace

const std::vector<OracleFixture>& oracle_fixtures() {
  static const std::vector<OracleFixture> fixtures = build_fixtures();
  return fixtures;
}

double fixture_mc_frequency(const OracleFixture& fixture, double t, int replicates,
                            std::uint64_t master_seed, int threads) {
  if (replicates < 1) throw std::invalid_argument("fixture_mc_frequency: replicates must be >= 1");
  LatticeRegion region(fixture.graph.vertices);
  // The induced region may carry edges outside the fixture's list (the H
  // graph is not an induced subgraph); those get no clock and stay closed.
  std::vector<int> fixture_ids;
  std::vector<std::uint64_t> fixture_keys;
  for (const Edge& e : fixture.graph.edges) {
    int id = region.edge_id(e);
    if (id < 0) throw std::logic_error("fixture edge outside its own vertex set");
    fixture_ids.push_back(id);
    fixture_keys.push_back(edge_key(e));
  }
  std::vector<std::uint8_t> kappa(static_cast<std::size_t>(region.vertex_count()));
  for (int vid = 0; vid < region.vertex_count(); ++vid) {
    auto it = fixture.kappa.find(region.vertex(vid));
    if (it == fixture.kappa.end()) throw std::out_of_range("fixture vertex without constraint");
    kappa[static_cast<std::size_t>(vid)] = static_cast<std::uint8_t>(it->second);
  }

  std::vector<std::uint8_t> hit(static_cast<std::size_t>(replicates), 0);
  parallel_chunks(replicates, threads, [&](int, std::int64_t lo, std::int64_t hi) {
    std::vector<double> clocks(static_cast<std::size_t>(region.edge_count()),
                               std::numeric_limits<double>::quiet_NaN());
    detail::SweepScratch scratch;
    Configuration cfg;
    cfg.model = Model::cdpre;
    cfg.t = t;
    cfg.edges = region.edges();
    cfg.open.assign(cfg.edges.size(), 0);
    for (std::int64_t rep = lo; rep < hi; ++rep) {
      const std::uint64_t key =
          stream_key({master_seed, static_cast<std::uint64_t>(rep), Stream::clocks});
      for (std::size_t i = 0; i < fixture_ids.size(); ++i)
        clocks[static_cast<std::size_t>(fixture_ids[i])] = uniform_open_closed(key, fixture_keys[i]);
      detail::cdpre_sweep(region, clocks, kappa, t, cfg.open, scratch);
      hit[static_cast<std::size_t>(rep)] = fixture.event(cfg) ? 1 : 0;
    }
  });
  long hits = 0;
  for (std::uint8_t h : hit) hits += h;
  return static_cast<double>(hits) / replicates;
}

}  // namespace cdpre
