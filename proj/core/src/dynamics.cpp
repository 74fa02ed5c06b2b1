#include "cdpre/dynamics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "cdpre/parallel.hpp"
#include "sim_common.hpp"

namespace cdpre {

std::string to_string(Model m) {
  switch (m) {
    case Model::cdpre: return "cdpre";
    case Model::intermediate: return "intermediate";
    case Model::bernoulli: return "bernoulli";
  }
  return "?";
}

Model model_from_string(const std::string& s) {
  if (s == "cdpre") return Model::cdpre;
  if (s == "intermediate") return Model::intermediate;
  if (s == "bernoulli") return Model::bernoulli;
  throw std::invalid_argument("unknown model: " + s);
}

int Configuration::index_of(const Edge& e) const {
  auto it = std::lower_bound(edges.begin(), edges.end(), e);
  if (it == edges.end() || *it != e) return -1;
  return static_cast<int>(it - edges.begin());
}

bool Configuration::is_open(const Edge& e) const {
  int i = index_of(e);
  if (i < 0) throw std::out_of_range("Configuration::is_open: edge not in region");
  return open[static_cast<std::size_t>(i)] != 0;
}

std::size_t Configuration::open_count() const {
  return static_cast<std::size_t>(std::count(open.begin(), open.end(), std::uint8_t{1}));
}

const BlockEvent* BlockEventReport::find(BlockIndex idx) const {
  auto it = std::lower_bound(blocks.begin(), blocks.end(), idx,
                             [](const BlockEvent& be, const BlockIndex& i) { return be.index < i; });
  if (it == blocks.end() || !(it->index == idx)) return nullptr;
  return &*it;
}

namespace detail {

void cdpre_sweep(const LatticeRegion& region, std::span<const double> clocks,
                 std::span<const std::uint8_t> kappa, double t, std::span<std::uint8_t> open,
                 SweepScratch& scratch) {
  const int ne = region.edge_count();
  scratch.order.clear();
  for (int i = 0; i < ne; ++i) {
    open[static_cast<std::size_t>(i)] = 0;
    if (clocks[static_cast<std::size_t>(i)] <= t) scratch.order.push_back(i);
  }
  // Ascending clock; equal clocks fall back to canonical edge order (ids are
  // already canonical), keeping the sweep a function of (kappa, U).
  std::sort(scratch.order.begin(), scratch.order.end(), [&](std::int32_t l, std::int32_t r) {
    double cl = clocks[static_cast<std::size_t>(l)];
    double cr = clocks[static_cast<std::size_t>(r)];
    if (cl != cr) return cl < cr;
    return l < r;
  });
  scratch.degree.assign(static_cast<std::size_t>(region.vertex_count()), 0);
  for (std::int32_t ei : scratch.order) {
    const Edge& e = region.edge(ei);
    int u = region.vertex_id(e.a);
    int v = region.vertex_id(e.b);
    std::uint8_t& du = scratch.degree[static_cast<std::size_t>(u)];
    std::uint8_t& dv = scratch.degree[static_cast<std::size_t>(v)];
    if (du < kappa[static_cast<std::size_t>(u)] && dv < kappa[static_cast<std::size_t>(v)]) {
      open[static_cast<std::size_t>(ei)] = 1;
      ++du;
      ++dv;
    }
  }
}

void bernoulli_fill(std::span<const double> clocks, double t, std::span<std::uint8_t> open) {
  for (std::size_t i = 0; i < clocks.size(); ++i) open[i] = clocks[i] <= t ? 1 : 0;
}

BlockIds block_ids(const LatticeRegion& region, BlockIndex idx) {
  BlockIds ids;
  ids.index = idx;
  BlockGeometry bg = block_geometry(idx.r, idx.s);
  ids.g_id = region.edge_id(bg.g);
  if (ids.g_id < 0) return ids;
  ids.a_ids.reserve(bg.a_set.size());
  for (const Edge& e : bg.a_set) {
    int id = region.edge_id(e);
    if (id < 0) {
      ids.g_id = -1;
      return ids;
    }
    ids.a_ids.push_back(id);
  }
  ids.rest_ids.reserve(bg.b_set.size() + 1);
  ids.rest_ids.push_back(ids.g_id);
  for (const Edge& e : bg.b_set) {
    int id = region.edge_id(e);
    if (id < 0) {
      ids.g_id = -1;
      return ids;
    }
    ids.rest_ids.push_back(id);
  }
  return ids;
}

BlockEvent evaluate_block_event(std::span<const double> clocks, const BlockIds& ids) {
  BlockEvent ev;
  ev.index = ids.index;
  double max_a = 0.0;
  for (std::int32_t i : ids.a_ids) max_a = std::max(max_a, clocks[static_cast<std::size_t>(i)]);
  double min_rest = 2.0;
  for (std::int32_t i : ids.rest_ids) min_rest = std::min(min_rest, clocks[static_cast<std::size_t>(i)]);
  ev.max_inside = max_a;
  ev.min_outside = min_rest;
  ev.c_occurred = max_a < min_rest;
  return ev;
}

void apply_block_events(std::span<const double> clocks, double t,
                        const std::vector<BlockIds>& blocks, std::span<std::uint8_t> open,
                        std::vector<BlockEvent>* report) {
  for (const BlockIds& ids : blocks) {
    BlockEvent ev = evaluate_block_event(clocks, ids);
    if (ev.c_occurred) open[static_cast<std::size_t>(ids.g_id)] = 0;
    else open[static_cast<std::size_t>(ids.g_id)] = clocks[static_cast<std::size_t>(ids.g_id)] <= t ? 1 : 0;
    if (report) report->push_back(ev);
  }
}

}  // namespace detail

namespace {

// Region + aligned clock values for a field, shared by the evolve wrappers.
struct FieldView {
  LatticeRegion region;
  std::vector<double> clocks;  // aligned with region edge ids; NaN if absent
};

FieldView field_view(const ClockField& field, const EdgeList& subset) {
  VertexList vs;
  vs.reserve(subset.size() * 2);
  for (const Edge& e : subset) {
    vs.push_back(e.a);
    vs.push_back(e.b);
  }
  FieldView fv{LatticeRegion(std::move(vs)), {}};
  fv.clocks.assign(static_cast<std::size_t>(fv.region.edge_count()),
                   std::numeric_limits<double>::quiet_NaN());
  for (const Edge& e : subset) {
    int id = fv.region.edge_id(e);
    fv.clocks[static_cast<std::size_t>(id)] = field.at(e);
  }
  return fv;
}

Configuration config_from(const FieldView& fv, Model model, double t,
                          std::vector<std::uint8_t> open) {
  Configuration cfg;
  cfg.model = model;
  cfg.t = t;
  cfg.edges = fv.region.edges();
  cfg.open = std::move(open);
  // Edges induced by the endpoint set but absent from the field stay closed.
  for (std::size_t i = 0; i < fv.clocks.size(); ++i)
    if (std::isnan(fv.clocks[i])) cfg.open[i] = 0;
  return cfg;
}

std::vector<detail::BlockIds> resolve_blocks(const FieldView& fv, const VertexList& window) {
  std::vector<BlockIndex> wanted = blocks_intersecting(window);
  // Any g edge present in the field must also be evaluable.
  for (const Edge& e : fv.region.edges())
    if (is_g_edge(e)) wanted.push_back(block_of_vertex(e.a));
  std::sort(wanted.begin(), wanted.end());
  wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());

  std::vector<detail::BlockIds> out;
  out.reserve(wanted.size());
  for (const BlockIndex& idx : wanted) {
    detail::BlockIds ids = detail::block_ids(fv.region, idx);
    if (ids.g_id < 0)
      throw std::invalid_argument("evolve_intermediate: clock field does not cover block (" +
                                  std::to_string(idx.r) + "," + std::to_string(idx.s) + ")");
    for (std::int32_t id : ids.rest_ids)
      if (std::isnan(fv.clocks[static_cast<std::size_t>(id)]))
        throw std::invalid_argument("evolve_intermediate: clock field does not cover block (" +
                                    std::to_string(idx.r) + "," + std::to_string(idx.s) + ")");
    out.push_back(std::move(ids));
  }
  return out;
}

void check_time(double t) {
  if (!(t >= 0.0) || t > 1.0) throw std::invalid_argument("time t must lie in [0,1]");
}

}  // namespace

Configuration evolve_cdpre(const Environment& env, const ClockField& clocks, double t) {
  return evolve_cdpre(env, clocks, t, clocks.edges());
}

Configuration evolve_cdpre(const Environment& env, const ClockField& clocks, double t,
                           const EdgeList& region_edges) {
  check_time(t);
  FieldView fv = field_view(clocks, region_edges);
  std::vector<std::uint8_t> kappa(static_cast<std::size_t>(fv.region.vertex_count()));
  for (int i = 0; i < fv.region.vertex_count(); ++i)
    kappa[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(env.at(fv.region.vertex(i)));
  // Absent clocks (NaN) compare false against t and never enter the sweep.
  std::vector<std::uint8_t> open(fv.clocks.size(), 0);
  detail::SweepScratch scratch;
  detail::cdpre_sweep(fv.region, fv.clocks, kappa, t, open, scratch);
  return config_from(fv, Model::cdpre, t, std::move(open));
}

Configuration evolve_bernoulli(const ClockField& clocks, double t) {
  check_time(t);
  Configuration cfg;
  cfg.model = Model::bernoulli;
  cfg.t = t;
  cfg.edges = clocks.edges();
  cfg.open.resize(cfg.edges.size());
  detail::bernoulli_fill(clocks.values(), t, cfg.open);
  return cfg;
}

std::pair<Configuration, BlockEventReport> evolve_intermediate(const ClockField& clocks, double t,
                                                               const VertexList& window) {
  check_time(t);
  FieldView fv = field_view(clocks, clocks.edges());
  std::vector<detail::BlockIds> blocks = resolve_blocks(fv, window);
  std::vector<std::uint8_t> open(fv.clocks.size(), 0);
  for (std::size_t i = 0; i < fv.clocks.size(); ++i)
    open[i] = !std::isnan(fv.clocks[i]) && fv.clocks[i] <= t ? 1 : 0;
  BlockEventReport report;
  detail::apply_block_events(fv.clocks, t, blocks, open, &report.blocks);
  return {config_from(fv, Model::intermediate, t, std::move(open)), std::move(report)};
}

CoupledTriple evolve_coupled(const Environment& env, const ClockField& clocks, double t,
                             const VertexList& window) {
  CoupledTriple triple;
  triple.cdpre = evolve_cdpre(env, clocks, t);
  auto [inter, report] = evolve_intermediate(clocks, t, window);
  triple.intermediate = std::move(inter);
  triple.block_events = std::move(report);
  triple.bernoulli = evolve_bernoulli(clocks, t);
  return triple;
}

DominanceCheck dominance_check(const ConstraintDist& dist, double t, int window_n, int replicates,
                               std::uint64_t master_seed, int threads) {
  if (window_n < 1) throw std::invalid_argument("dominance_check: window must be >= 1");
  if (replicates < 1) throw std::invalid_argument("dominance_check: replicates must be >= 1");

  VertexList window = block_closure(Box{window_n}.vertices());
  detail::ReplicateSim inter_sim(Model::intermediate, dist, window, master_seed);
  detail::ReplicateSim cdpre_sim(Model::cdpre, dist, window, master_seed);
  const LatticeRegion& region = inter_sim.region();

  struct Counts {
    long long c_vs_i = 0, i_vs_b = 0, caps = 0;
  };
  const int nthreads = effective_threads(threads);
  std::vector<Counts> counts(static_cast<std::size_t>(nthreads));
  parallel_chunks(replicates, nthreads, [&](int ti, std::int64_t lo, std::int64_t hi) {
    detail::ReplicateSim::Scratch sc_c, sc_i;
    std::vector<std::uint8_t> bern(static_cast<std::size_t>(region.edge_count()));
    std::vector<std::uint8_t> degree(static_cast<std::size_t>(region.vertex_count()));
    Counts& c = counts[static_cast<std::size_t>(ti)];
    for (std::int64_t rep = lo; rep < hi; ++rep) {
      cdpre_sim.realize(static_cast<std::uint64_t>(rep), t, sc_c);
      sc_i.clocks = sc_c.clocks;
      inter_sim.evolve(static_cast<std::uint64_t>(rep), t, sc_i);
      detail::bernoulli_fill(sc_c.clocks, t, bern);
      for (int e = 0; e < region.edge_count(); ++e) {
        if (sc_c.open[static_cast<std::size_t>(e)] && !sc_i.open[static_cast<std::size_t>(e)]) ++c.c_vs_i;
        if (sc_i.open[static_cast<std::size_t>(e)] && !bern[static_cast<std::size_t>(e)]) ++c.i_vs_b;
      }
      std::fill(degree.begin(), degree.end(), 0);
      for (int e = 0; e < region.edge_count(); ++e) {
        if (!sc_c.open[static_cast<std::size_t>(e)]) continue;
        const Edge& edge = region.edge(e);
        ++degree[static_cast<std::size_t>(region.vertex_id(edge.a))];
        ++degree[static_cast<std::size_t>(region.vertex_id(edge.b))];
      }
      for (int v = 0; v < region.vertex_count(); ++v)
        if (degree[static_cast<std::size_t>(v)] > sc_c.kappa[static_cast<std::size_t>(v)]) ++c.caps;
    }
  });

  DominanceCheck check;
  check.t = t;
  check.window_n = window_n;
  check.replicates = replicates;
  for (const Counts& c : counts) {
    check.cdpre_above_intermediate += c.c_vs_i;
    check.intermediate_above_bernoulli += c.i_vs_b;
    check.degree_cap_violations += c.caps;
  }
  return check;
}

long long monotonicity_violations(Model model, const ConstraintDist& dist, double t_lo,
                                  double t_hi, int window_n, int replicates,
                                  std::uint64_t master_seed, int threads) {
  if (!(t_lo <= t_hi)) throw std::invalid_argument("monotonicity_violations: need t_lo <= t_hi");
  VertexList window = detail::model_window(model, window_n, 0);
  detail::ReplicateSim sim(model, dist, window, master_seed);
  const int nthreads = effective_threads(threads);
  std::vector<long long> bad(static_cast<std::size_t>(nthreads), 0);
  parallel_chunks(replicates, nthreads, [&](int ti, std::int64_t lo, std::int64_t hi) {
    detail::ReplicateSim::Scratch scratch;
    std::vector<std::uint8_t> open_lo;
    for (std::int64_t rep = lo; rep < hi; ++rep) {
      sim.fill_clocks(static_cast<std::uint64_t>(rep), scratch.clocks);
      sim.evolve(static_cast<std::uint64_t>(rep), t_lo, scratch);
      open_lo = scratch.open;
      sim.evolve(static_cast<std::uint64_t>(rep), t_hi, scratch);
      for (std::size_t e = 0; e < open_lo.size(); ++e)
        if (open_lo[e] && !scratch.open[e]) ++bad[static_cast<std::size_t>(ti)];
    }
  });
  long long total = 0;
  for (long long b : bad) total += b;
  return total;
}

double exact_distribution(const SmallGraph& graph, const KappaMap& kappa, double t,
                          const EventPredicate& event) {
  check_time(t);
  const int m = static_cast<int>(graph.edges.size());
  if (m > 10) throw std::invalid_argument("exact_distribution: more than 10 edges");

  Configuration cfg;
  cfg.model = Model::cdpre;
  cfg.t = t;
  cfg.edges = graph.edges;
  canonicalize(cfg.edges);
  if (static_cast<int>(cfg.edges.size()) != m)
    throw std::invalid_argument("exact_distribution: duplicate edges");
  cfg.open.assign(cfg.edges.size(), 0);

  VertexList verts = graph.vertices;
  canonicalize(verts);
  std::vector<int> caps(verts.size());
  for (std::size_t i = 0; i < verts.size(); ++i) {
    auto it = kappa.find(verts[i]);
    if (it == kappa.end()) throw std::out_of_range("exact_distribution: vertex without constraint");
    caps[i] = it->second;
  }
  auto local_id = [&](Vertex v) {
    auto it = std::lower_bound(verts.begin(), verts.end(), v);
    if (it == verts.end() || *it != v) throw std::out_of_range("exact_distribution: edge endpoint outside vertex list");
    return static_cast<int>(it - verts.begin());
  };
  std::vector<std::pair<int, int>> ends(cfg.edges.size());
  for (std::size_t i = 0; i < cfg.edges.size(); ++i)
    ends[i] = {local_id(cfg.edges[i].a), local_id(cfg.edges[i].b)};

  std::vector<double> factorial(static_cast<std::size_t>(m) + 1, 1.0);
  for (int k = 1; k <= m; ++k) factorial[static_cast<std::size_t>(k)] = factorial[static_cast<std::size_t>(k - 1)] * k;

  std::vector<int> degree(verts.size());
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(m));

  double prob = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    const int k = std::popcount(mask);
    const double subset_weight =
        std::pow(t, k) * std::pow(1.0 - t, m - k) / factorial[static_cast<std::size_t>(k)];
    if (subset_weight == 0.0) continue;
    order.clear();
    for (int i = 0; i < m; ++i)
      if (mask & (1u << i)) order.push_back(i);
    do {
      std::fill(cfg.open.begin(), cfg.open.end(), std::uint8_t{0});
      std::fill(degree.begin(), degree.end(), 0);
      for (int ei : order) {
        auto [u, v] = ends[static_cast<std::size_t>(ei)];
        if (degree[static_cast<std::size_t>(u)] < caps[static_cast<std::size_t>(u)] &&
            degree[static_cast<std::size_t>(v)] < caps[static_cast<std::size_t>(v)]) {
          cfg.open[static_cast<std::size_t>(ei)] = 1;
          ++degree[static_cast<std::size_t>(u)];
          ++degree[static_cast<std::size_t>(v)];
        }
      }
      if (event(cfg)) prob += subset_weight;
    } while (std::next_permutation(order.begin(), order.end()));
  }
  return prob;
}

}  // namespace cdpre
