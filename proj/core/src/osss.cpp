#include "cdpre/osss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>

#include "cdpre/dynamics.hpp"
#include "cdpre/parallel.hpp"
#include "cdpre/region.hpp"
#include "cdpre/rng.hpp"
#include "sim_common.hpp"

namespace cdpre {

double RevealedClockView::at(std::size_t edge_id) const {
  if (!revealed_[edge_id])
    throw std::logic_error("RevealedClockView: read of unrevealed clock");
  return values_[edge_id];
}

VertexList tk_window(int n) {
  VertexList closure = block_closure(Box{n}.vertices());
  VertexList out = closure;
  for (const Edge& e : external_edge_boundary(closure)) {
    out.push_back(e.a);
    out.push_back(e.b);
  }
  canonicalize(out);
  return out;
}

namespace {

// Precomputed geometry for repeated T_k runs on one window.
class TkEngine {
 public:
  explicit TkEngine(int n) : n_(n), region_(tk_window(n)) {
    i_n_ = blocks_intersecting(Box{n});
    r0_ = i_n_.front().r;
    s0_ = i_n_.front().s;
    s_span_ = i_n_.back().s - s0_ + 1;
    blocks_.resize(i_n_.size());
    for (std::size_t pos = 0; pos < i_n_.size(); ++pos) {
      BlockPre& bp = blocks_[pos];
      bp.index = i_n_[pos];
      BlockGeometry bg = block_geometry(bp.index.r, bp.index.s);
      for (const Edge& e : edges_in(bg.lambda)) bp.lambda_ids.push_back(require_edge(e));
      for (const Edge& e : bg.a_set) bp.a_ids.push_back(require_edge(e));
      bp.g_id = require_edge(bg.g);
      bp.reveal_ids = bp.lambda_ids;
      for (const Edge& e : external_edge_boundary(bg.lambda)) bp.reveal_ids.push_back(require_edge(e));
    }
    block_pos_of_vertex_.assign(static_cast<std::size_t>(region_.vertex_count()), -1);
    for (int vid = 0; vid < region_.vertex_count(); ++vid) {
      BlockIndex b = block_of_vertex(region_.vertex(vid));
      block_pos_of_vertex_[static_cast<std::size_t>(vid)] = pos_of(b);
    }
    edge_ends_.resize(static_cast<std::size_t>(region_.edge_count()));
    for (int eid = 0; eid < region_.edge_count(); ++eid) {
      const Edge& e = region_.edge(eid);
      edge_ends_[static_cast<std::size_t>(eid)] = {region_.vertex_id(e.a), region_.vertex_id(e.b)};
    }
    boundary_seeds_.resize(static_cast<std::size_t>(n) + 1);
    for (int k = 1; k <= n; ++k) {
      for (const Vertex& v : boundary(Box{k}))
        boundary_seeds_[static_cast<std::size_t>(k)].push_back(region_.vertex_id(v));
    }
  }

  const LatticeRegion& region() const { return region_; }
  int block_count() const { return static_cast<int>(blocks_.size()); }

  struct RunOutput {
    bool determined = false;
    int steps = 0;
    const std::vector<std::uint8_t>* revealed = nullptr;  // per edge id
    const std::vector<std::uint8_t>* reach = nullptr;     // per vertex id (the Z set)
    const std::vector<std::int32_t>* processed = nullptr;  // block positions, processing order
  };

  // clock values must be aligned with region edge ids.
  RunOutput run(std::span<const double> clocks, double t, int k) {
    if (k < 1 || k > n_) throw std::invalid_argument("run_Tk: need 1 <= k <= n");
    view_.emplace(clocks);
    open_.assign(static_cast<std::size_t>(region_.edge_count()), 0);
    reach_.assign(static_cast<std::size_t>(region_.vertex_count()), 0);
    processed_flag_.assign(blocks_.size(), 0);
    processed_order_.clear();
    eligible_.clear();

    for (std::int32_t vid : boundary_seeds_[static_cast<std::size_t>(k)]) {
      reach_[static_cast<std::size_t>(vid)] = 1;
      touch(vid);
    }
    while (!eligible_.empty()) {
      const int pos = *eligible_.begin();
      eligible_.erase(eligible_.begin());
      processed_flag_[static_cast<std::size_t>(pos)] = 1;
      processed_order_.push_back(pos);
      determine(blocks_[static_cast<std::size_t>(pos)], t);
    }

    RunOutput out;
    out.determined = origin_connects();
    out.steps = static_cast<int>(processed_order_.size());
    out.revealed = &view_->revealed_flags();
    out.reach = &reach_;
    out.processed = &processed_order_;
    return out;
  }

  BlockIndex block_at(int pos) const { return blocks_[static_cast<std::size_t>(pos)].index; }

 private:
  struct BlockPre {
    BlockIndex index;
    std::vector<std::int32_t> lambda_ids;  // 49
    std::vector<std::int32_t> a_ids;       // 6
    std::int32_t g_id = -1;
    std::vector<std::int32_t> reveal_ids;  // E(Lambda) plus external boundary
  };

  std::int32_t require_edge(const Edge& e) const {
    int id = region_.edge_id(e);
    if (id < 0) throw std::logic_error("TkEngine: window is missing a required edge");
    return id;
  }

  int pos_of(BlockIndex b) const {
    if (b.r < r0_ || b.s < s0_) return -1;
    int pr = b.r - r0_, ps = b.s - s0_;
    int pos = pr * s_span_ + ps;
    if (ps >= s_span_ || pos >= static_cast<int>(blocks_.size())) return -1;
    return pos;
  }

  void touch(std::int32_t vid) {
    int pos = block_pos_of_vertex_[static_cast<std::size_t>(vid)];
    if (pos >= 0 && !processed_flag_[static_cast<std::size_t>(pos)]) eligible_.insert(pos);
  }

  void determine(const BlockPre& bp, double t) {
    for (std::int32_t eid : bp.reveal_ids) view_->reveal(static_cast<std::size_t>(eid));
    // The block event is a function of the block's own (revealed) clocks.
    double max_a = 0.0;
    for (std::int32_t eid : bp.a_ids) max_a = std::max(max_a, view_->at(static_cast<std::size_t>(eid)));
    double min_rest = 2.0;
    for (std::int32_t eid : bp.lambda_ids) {
      bool in_a = false;
      for (std::int32_t a : bp.a_ids)
        if (a == eid) {
          in_a = true;
          break;
        }
      if (!in_a) min_rest = std::min(min_rest, view_->at(static_cast<std::size_t>(eid)));
    }
    const bool c_occurred = max_a < min_rest;
    for (std::int32_t eid : bp.reveal_ids) {
      const double u = view_->at(static_cast<std::size_t>(eid));
      bool o = u <= t;
      if (eid == bp.g_id && c_occurred) o = false;
      open_[static_cast<std::size_t>(eid)] = o ? 1 : 0;
      if (o) {
        auto [u_id, v_id] = edge_ends_[static_cast<std::size_t>(eid)];
        if (reach_[static_cast<std::size_t>(u_id)] && !reach_[static_cast<std::size_t>(v_id)]) grow(v_id);
        else if (reach_[static_cast<std::size_t>(v_id)] && !reach_[static_cast<std::size_t>(u_id)]) grow(u_id);
      }
    }
  }

  // BFS closure over revealed open edges starting from a newly reached vertex.
  void grow(std::int32_t start) {
    queue_.clear();
    reach_[static_cast<std::size_t>(start)] = 1;
    touch(start);
    queue_.push_back(start);
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      std::int32_t v = queue_[head];
      for (const LatticeRegion::Arc& a : region_.arcs(v)) {
        if (!view_->revealed(static_cast<std::size_t>(a.edge))) continue;
        if (!open_[static_cast<std::size_t>(a.edge)] || reach_[static_cast<std::size_t>(a.to)]) continue;
        reach_[static_cast<std::size_t>(a.to)] = 1;
        touch(a.to);
        queue_.push_back(a.to);
      }
    }
  }

  bool origin_connects() {
    // Revealed open path from the origin to norm >= n determines the bit.
    int start = region_.vertex_id({0, 0});
    if (start < 0) return false;
    scratch_.reset(region_.vertex_count());
    scratch_.queue.clear();
    scratch_.visit(start);
    scratch_.queue.push_back(start);
    for (std::size_t head = 0; head < scratch_.queue.size(); ++head) {
      std::int32_t v = scratch_.queue[head];
      for (const LatticeRegion::Arc& a : region_.arcs(v)) {
        if (!view_->revealed(static_cast<std::size_t>(a.edge))) continue;
        if (!open_[static_cast<std::size_t>(a.edge)] || scratch_.seen(a.to)) continue;
        if (chebyshev_norm(region_.vertex(a.to)) >= n_) return true;
        scratch_.visit(a.to);
        scratch_.queue.push_back(a.to);
      }
    }
    return false;
  }

  int n_;
  LatticeRegion region_;
  std::vector<BlockIndex> i_n_;
  int r0_ = 0, s0_ = 0, s_span_ = 1;
  std::vector<BlockPre> blocks_;
  std::vector<std::int32_t> block_pos_of_vertex_;
  std::vector<std::pair<std::int32_t, std::int32_t>> edge_ends_;
  std::vector<std::vector<std::int32_t>> boundary_seeds_;

  // per-run state
  std::optional<RevealedClockView> view_;
  std::vector<std::uint8_t> open_;
  std::vector<std::uint8_t> reach_;
  std::vector<std::uint8_t> processed_flag_;
  std::vector<std::int32_t> processed_order_;
  std::set<int> eligible_;
  std::vector<std::int32_t> queue_;
  BfsScratch scratch_;
};

// Missing edges become NaN; they can only be ring edges outside every reveal
// set, which the guarded view keeps unread.
std::vector<double> aligned_clock_values(const TkEngine& engine, const ClockField& clocks) {
  std::vector<double> values(static_cast<std::size_t>(engine.region().edge_count()),
                             std::numeric_limits<double>::quiet_NaN());
  for (int eid = 0; eid < engine.region().edge_count(); ++eid) {
    int idx = clocks.index_of(engine.region().edge(eid));
    if (idx >= 0) values[static_cast<std::size_t>(eid)] = clocks.values()[static_cast<std::size_t>(idx)];
  }
  return values;
}

void require_cover(const ClockField& clocks, int n) {
  for (const BlockIndex& b : blocks_intersecting(Box{n})) {
    BlockGeometry bg = block_geometry(b.r, b.s);
    for (const Edge& e : edges_in(bg.lambda))
      if (clocks.index_of(e) < 0)
        throw std::invalid_argument("run_Tk: clock field does not cover block edges");
    for (const Edge& e : external_edge_boundary(bg.lambda))
      if (clocks.index_of(e) < 0)
        throw std::invalid_argument("run_Tk: clock field does not cover block boundaries");
  }
}

}  // namespace

TkResult run_Tk(const ClockField& clocks, double t, int k, int n) {
  if (n < 1 || k < 1 || k > n) throw std::invalid_argument("run_Tk: need 1 <= k <= n");
  if (!(t >= 0.0) || t > 1.0) throw std::invalid_argument("run_Tk: t must lie in [0,1]");
  require_cover(clocks, n);
  TkEngine engine(n);
  std::vector<double> values = aligned_clock_values(engine, clocks);
  TkEngine::RunOutput out = engine.run(values, t, k);

  TkResult result;
  result.determined = out.determined;
  result.unrevealed_reads = 0;
  result.state.steps = out.steps;
  for (std::int32_t pos : *out.processed) result.state.processed.push_back(engine.block_at(pos));
  for (int vid = 0; vid < engine.region().vertex_count(); ++vid)
    if ((*out.reach)[static_cast<std::size_t>(vid)])
      result.state.z_set.push_back(engine.region().vertex(vid));
  for (int eid = 0; eid < engine.region().edge_count(); ++eid)
    if ((*out.revealed)[static_cast<std::size_t>(eid)])
      result.state.revealed.push_back(engine.region().edge(eid));
  return result;
}

RevealmentReport revealment_table(double t, int n, int replicates, std::uint64_t master_seed,
                                  int threads) {
  if (n < 1) throw std::invalid_argument("revealment_table: n must be >= 1");
  if (replicates < 1) throw std::invalid_argument("revealment_table: replicates must be >= 1");

  TkEngine proto(n);  // geometry probe for sizes; per-thread engines built below
  const int ne = proto.region().edge_count();
  const int nthreads = effective_threads(threads);

  struct ThreadTally {
    std::vector<std::vector<std::uint32_t>> reveal;  // [k-1][edge]
    std::vector<std::uint32_t> theta;                // [k-1]
  };
  std::vector<ThreadTally> tallies(static_cast<std::size_t>(nthreads));

  detail::ReplicateSim sim(Model::intermediate, ConstraintDist({0, 0, 0, 1}), tk_window(n),
                           master_seed);

  parallel_chunks(replicates, nthreads, [&](int ti, std::int64_t lo, std::int64_t hi) {
    TkEngine engine(n);
    ThreadTally& tally = tallies[static_cast<std::size_t>(ti)];
    tally.reveal.assign(static_cast<std::size_t>(n),
                        std::vector<std::uint32_t>(static_cast<std::size_t>(ne), 0));
    tally.theta.assign(static_cast<std::size_t>(n), 0);
    detail::ReplicateSim::Scratch scratch;
    for (std::int64_t rep = lo; rep < hi; ++rep) {
      sim.fill_clocks(static_cast<std::uint64_t>(rep), scratch.clocks);
      for (int k = 1; k <= n; ++k) {
        TkEngine::RunOutput out = engine.run(scratch.clocks, t, k);
        auto& row = tally.reveal[static_cast<std::size_t>(k - 1)];
        const std::vector<std::uint8_t>& rev = *out.revealed;
        for (int e = 0; e < ne; ++e) row[static_cast<std::size_t>(e)] += rev[static_cast<std::size_t>(e)];
      }
      // Full-information radius profile on the same clocks.
      sim.evolve(static_cast<std::uint64_t>(rep), t, scratch);
      int reached = max_norm_reached(sim.region(), scratch.open, {0, 0}, scratch.bfs);
      for (int k = 1; k <= std::min(n, reached); ++k) ++tally.theta[static_cast<std::size_t>(k - 1)];
    }
  });

  RevealmentReport report;
  report.t = t;
  report.n = n;
  report.replicates = replicates;
  report.edges = proto.region().edges();
  report.delta.assign(static_cast<std::size_t>(n),
                      std::vector<double>(static_cast<std::size_t>(ne), 0.0));
  report.delta_sum.assign(static_cast<std::size_t>(ne), 0.0);
  report.theta_tilde.assign(static_cast<std::size_t>(n), 0.0);
  report.theta_stderr.assign(static_cast<std::size_t>(n), 0.0);
  for (int k = 0; k < n; ++k) {
    std::uint64_t theta_count = 0;
    for (const ThreadTally& tally : tallies) {
      if (tally.theta.empty()) continue;
      theta_count += tally.theta[static_cast<std::size_t>(k)];
      for (int e = 0; e < ne; ++e)
        report.delta[static_cast<std::size_t>(k)][static_cast<std::size_t>(e)] +=
            tally.reveal[static_cast<std::size_t>(k)][static_cast<std::size_t>(e)];
    }
    double th = static_cast<double>(theta_count) / replicates;
    report.theta_tilde[static_cast<std::size_t>(k)] = th;
    report.theta_stderr[static_cast<std::size_t>(k)] = std::sqrt(th * (1.0 - th) / replicates);
    for (int e = 0; e < ne; ++e) {
      double& d = report.delta[static_cast<std::size_t>(k)][static_cast<std::size_t>(e)];
      d /= replicates;
      report.delta_sum[static_cast<std::size_t>(e)] += d;
    }
    report.s_n += th;
  }
  if (report.s_n > 0.0) {
    double max_sum = 0.0;
    for (double d : report.delta_sum) max_sum = std::max(max_sum, d);
    report.beta_hat = max_sum / (4.0 * report.s_n);
  }
  return report;
}

InfluenceReport influence_table(double t, int n, int replicates, int resamples,
                                std::uint64_t master_seed, int threads) {
  if (n < 1) throw std::invalid_argument("influence_table: n must be >= 1");
  if (replicates < 1 || resamples < 1)
    throw std::invalid_argument("influence_table: replicates and resamples must be >= 1");

  detail::ReplicateSim sim(Model::intermediate, ConstraintDist({0, 0, 0, 1}), tk_window(n),
                           master_seed);
  const LatticeRegion& region = sim.region();

  // Edges the indicator can depend on: E(B(n)) plus the full blocks of every
  // g edge inside E(B(n)). Everything else has influence exactly 0.
  auto in_bn = [&](const Edge& e) {
    return chebyshev_norm(e.a) <= n && chebyshev_norm(e.b) <= n;
  };
  std::vector<std::int32_t> sweep_ids;
  std::vector<std::uint8_t> is_sweep(static_cast<std::size_t>(region.edge_count()), 0);
  std::vector<std::int32_t> block_of_sweep;  // index into relevant_blocks, -1 if none
  std::vector<const detail::BlockIds*> relevant_blocks;
  std::vector<std::int32_t> block_lookup(sim.blocks().size(), -1);
  for (std::size_t bi = 0; bi < sim.blocks().size(); ++bi) {
    const detail::BlockIds& ids = sim.blocks()[bi];
    if (in_bn(region.edge(ids.g_id))) {
      block_lookup[bi] = static_cast<std::int32_t>(relevant_blocks.size());
      relevant_blocks.push_back(&ids);
    }
  }
  for (int eid = 0; eid < region.edge_count(); ++eid) {
    bool take = in_bn(region.edge(eid));
    if (!take) continue;
    is_sweep[static_cast<std::size_t>(eid)] = 1;
  }
  for (const detail::BlockIds* ids : relevant_blocks)
    for (std::int32_t eid : ids->rest_ids) is_sweep[static_cast<std::size_t>(eid)] = 1;
  for (const detail::BlockIds* ids : relevant_blocks)
    for (std::int32_t eid : ids->a_ids) is_sweep[static_cast<std::size_t>(eid)] = 1;
  for (int eid = 0; eid < region.edge_count(); ++eid)
    if (is_sweep[static_cast<std::size_t>(eid)]) sweep_ids.push_back(eid);

  // Map each sweep edge to the relevant block containing it, if any.
  block_of_sweep.assign(sweep_ids.size(), -1);
  for (std::size_t bi = 0; bi < sim.blocks().size(); ++bi) {
    if (block_lookup[bi] < 0) continue;
    const detail::BlockIds& ids = sim.blocks()[bi];
    auto tag = [&](std::int32_t eid) {
      auto it = std::lower_bound(sweep_ids.begin(), sweep_ids.end(), eid);
      if (it != sweep_ids.end() && *it == eid)
        block_of_sweep[static_cast<std::size_t>(it - sweep_ids.begin())] = block_lookup[bi];
    };
    for (std::int32_t eid : ids.rest_ids) tag(eid);
    for (std::int32_t eid : ids.a_ids) tag(eid);
  }

  std::vector<std::uint64_t> sweep_keys(sweep_ids.size());
  std::vector<std::uint8_t> sweep_in_bn(sweep_ids.size());
  for (std::size_t i = 0; i < sweep_ids.size(); ++i) {
    sweep_keys[i] = edge_key(region.edge(sweep_ids[i]));
    sweep_in_bn[i] = in_bn(region.edge(sweep_ids[i])) ? 1 : 0;
  }

  const int nthreads = effective_threads(threads);
  std::vector<std::vector<std::uint32_t>> flips(static_cast<std::size_t>(nthreads));

  parallel_chunks(replicates, nthreads, [&](int ti, std::int64_t lo, std::int64_t hi) {
    std::vector<std::uint32_t>& flip = flips[static_cast<std::size_t>(ti)];
    flip.assign(sweep_ids.size(), 0);
    detail::ReplicateSim::Scratch scratch;
    std::vector<std::uint8_t> c_flag(relevant_blocks.size());
    for (std::int64_t rep = lo; rep < hi; ++rep) {
      sim.fill_clocks(static_cast<std::uint64_t>(rep), scratch.clocks);
      sim.evolve(static_cast<std::uint64_t>(rep), t, scratch);
      for (std::size_t b = 0; b < relevant_blocks.size(); ++b)
        c_flag[b] = detail::evaluate_block_event(scratch.clocks, *relevant_blocks[b]).c_occurred;
      const bool f_base = reaches_norm(region, scratch.open, {0, 0}, n, scratch.bfs);
      const std::uint64_t rkey =
          stream_key({master_seed, static_cast<std::uint64_t>(rep), Stream::resample});

      for (std::size_t si = 0; si < sweep_ids.size(); ++si) {
        const std::int32_t eid = sweep_ids[si];
        const double old_u = scratch.clocks[static_cast<std::size_t>(eid)];
        for (int dr = 0; dr < resamples; ++dr) {
          const double new_u =
              uniform_open_closed(rkey, sweep_keys[si], static_cast<std::uint64_t>(dr));
          // Work out which open bits the swap changes.
          std::int32_t changed_ids[2];
          std::uint8_t changed_to[2];
          int n_changed = 0;
          const std::int32_t rb = block_of_sweep[si];
          if (rb >= 0) {
            const detail::BlockIds& ids = *relevant_blocks[static_cast<std::size_t>(rb)];
            scratch.clocks[static_cast<std::size_t>(eid)] = new_u;
            const bool c_new = detail::evaluate_block_event(scratch.clocks, ids).c_occurred;
            scratch.clocks[static_cast<std::size_t>(eid)] = old_u;
            const double u_g = eid == ids.g_id ? new_u : scratch.clocks[static_cast<std::size_t>(ids.g_id)];
            const std::uint8_t g_bit = (u_g <= t && !c_new) ? 1 : 0;
            if (g_bit != scratch.open[static_cast<std::size_t>(ids.g_id)]) {
              changed_ids[n_changed] = ids.g_id;
              changed_to[n_changed] = g_bit;
              ++n_changed;
            }
            if (eid != ids.g_id && sweep_in_bn[si]) {
              const std::uint8_t e_bit = new_u <= t ? 1 : 0;
              if (e_bit != scratch.open[static_cast<std::size_t>(eid)]) {
                changed_ids[n_changed] = eid;
                changed_to[n_changed] = e_bit;
                ++n_changed;
              }
            }
          } else {
            const std::uint8_t e_bit = new_u <= t ? 1 : 0;
            if (e_bit != scratch.open[static_cast<std::size_t>(eid)]) {
              changed_ids[0] = eid;
              changed_to[0] = e_bit;
              n_changed = 1;
            }
          }
          if (n_changed == 0) continue;
          std::uint8_t saved[2];
          for (int c = 0; c < n_changed; ++c) {
            saved[c] = scratch.open[static_cast<std::size_t>(changed_ids[c])];
            scratch.open[static_cast<std::size_t>(changed_ids[c])] = changed_to[c];
          }
          const bool f_new = reaches_norm(region, scratch.open, {0, 0}, n, scratch.bfs);
          for (int c = 0; c < n_changed; ++c)
            scratch.open[static_cast<std::size_t>(changed_ids[c])] = saved[c];
          if (f_new != f_base) ++flip[si];
        }
      }
    }
  });

  InfluenceReport report;
  report.t = t;
  report.n = n;
  report.replicates = replicates;
  report.resamples = resamples;
  report.edges.reserve(sweep_ids.size());
  for (std::int32_t eid : sweep_ids) report.edges.push_back(region.edge(eid));
  report.inf_hat.assign(sweep_ids.size(), 0.0);
  report.stderr_.assign(sweep_ids.size(), 0.0);
  const double total = static_cast<double>(replicates) * resamples;
  for (std::size_t si = 0; si < sweep_ids.size(); ++si) {
    std::uint64_t count = 0;
    for (const auto& flip : flips)
      if (!flip.empty()) count += flip[si];
    double p = static_cast<double>(count) / total;
    report.inf_hat[si] = p;
    report.stderr_[si] = std::sqrt(p * (1.0 - p) / total);
  }
  return report;
}

OsssReport osss_check(double t, int n, int replicates, std::uint64_t master_seed, int threads) {
  RevealmentReport rev = revealment_table(t, n, replicates, master_seed, threads);
  InfluenceReport inf = influence_table(t, n, replicates, 1, master_seed, threads);
  return osss_combine(rev, inf);
}

OsssReport osss_combine(const RevealmentReport& rev, const InfluenceReport& inf) {
  if (rev.n != inf.n || rev.replicates != inf.replicates || rev.t != inf.t)
    throw std::invalid_argument("osss_combine: mismatched tables");
  const double t = rev.t;
  const int n = rev.n;
  const int replicates = rev.replicates;

  OsssReport report;
  report.t = t;
  report.n = n;
  report.replicates = replicates;
  report.theta_hat = rev.theta_tilde[static_cast<std::size_t>(n - 1)];
  report.var_hat = report.theta_hat * (1.0 - report.theta_hat);
  const double theta_se = rev.theta_stderr[static_cast<std::size_t>(n - 1)];
  report.var_stderr = std::abs(1.0 - 2.0 * report.theta_hat) * theta_se;
  report.s_n = rev.s_n;

  // Pair influence edges with their revealment column.
  std::vector<std::size_t> rev_index(inf.edges.size());
  for (std::size_t i = 0; i < inf.edges.size(); ++i) {
    auto it = std::lower_bound(rev.edges.begin(), rev.edges.end(), inf.edges[i]);
    rev_index[i] = static_cast<std::size_t>(it - rev.edges.begin());
  }
  report.rhs.assign(static_cast<std::size_t>(n), 0.0);
  report.rhs_stderr.assign(static_cast<std::size_t>(n), 0.0);
  report.margin.assign(static_cast<std::size_t>(n), 0.0);
  for (int k = 0; k < n; ++k) {
    double rhs = 0.0, var = 0.0;
    const std::vector<double>& delta = rev.delta[static_cast<std::size_t>(k)];
    for (std::size_t i = 0; i < inf.edges.size(); ++i) {
      const double d = delta[rev_index[i]];
      const double d_se = std::sqrt(d * (1.0 - d) / replicates);
      rhs += d * inf.inf_hat[i];
      var += d * d * inf.stderr_[i] * inf.stderr_[i] + inf.inf_hat[i] * inf.inf_hat[i] * d_se * d_se;
    }
    report.rhs[static_cast<std::size_t>(k)] = rhs;
    report.rhs_stderr[static_cast<std::size_t>(k)] = std::sqrt(var);
    report.margin[static_cast<std::size_t>(k)] = rhs - report.var_hat;
  }
  return report;
}

}  // namespace cdpre
