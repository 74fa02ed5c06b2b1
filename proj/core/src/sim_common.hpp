#pragma once

// Shared replicate harness for the Monte Carlo estimators: one immutable
// window description plus per-thread scratch, with clock and constraint
// values drawn from the counter-based streams so any two estimators given
// the same master seed see identical fields on shared edges.

#include <cstdint>
#include <vector>

#include "cdpre/dynamics.hpp"
#include "cdpre/env.hpp"
#include "cdpre/region.hpp"
#include "cdpre/rng.hpp"

namespace cdpre::detail {

// Simulation window for connectivity up to radius n: a padded box, enlarged
// to whole blocks for the intermediate model.
inline VertexList model_window(Model model, int n, int pad) {
  VertexList box = Box{n + pad}.vertices();
  if (model == Model::intermediate) return block_closure(box);
  return box;
}

class ReplicateSim {
 public:
  ReplicateSim(Model model, const ConstraintDist& dist, VertexList window,
               std::uint64_t master_seed)
      : model_(model), dist_(dist), master_(master_seed), region_(std::move(window)) {
    edge_keys_.reserve(static_cast<std::size_t>(region_.edge_count()));
    for (const Edge& e : region_.edges()) edge_keys_.push_back(edge_key(e));
    vertex_keys_.reserve(static_cast<std::size_t>(region_.vertex_count()));
    for (const Vertex& v : region_.vertices()) vertex_keys_.push_back(vertex_key(v));
    if (model_ == Model::intermediate) {
      for (const BlockIndex& idx : blocks_intersecting(region_.vertices())) {
        BlockIds ids = block_ids(region_, idx);
        if (ids.g_id >= 0) blocks_.push_back(std::move(ids));
      }
    }
  }

  const LatticeRegion& region() const { return region_; }
  const std::vector<BlockIds>& blocks() const { return blocks_; }
  Model model() const { return model_; }
  std::uint64_t master_seed() const { return master_; }

  struct Scratch {
    std::vector<double> clocks;
    std::vector<std::uint8_t> kappa;
    std::vector<std::uint8_t> open;
    SweepScratch sweep;
    BfsScratch bfs;
  };

  void fill_clocks(std::uint64_t replicate, std::vector<double>& out) const {
    const std::uint64_t key = stream_key({master_, replicate, Stream::clocks});
    out.resize(edge_keys_.size());
    for (std::size_t i = 0; i < edge_keys_.size(); ++i)
      out[i] = uniform_open_closed(key, edge_keys_[i]);
  }

  void fill_kappa(std::uint64_t replicate, std::vector<std::uint8_t>& out) const {
    const std::uint64_t key = stream_key({master_, replicate, Stream::constraints});
    out.resize(vertex_keys_.size());
    for (std::size_t i = 0; i < vertex_keys_.size(); ++i)
      out[i] = static_cast<std::uint8_t>(dist_.quantile(uniform_open_closed(key, vertex_keys_[i])));
  }

  // Draws the replicate's field and evolves the model at time t.
  void realize(std::uint64_t replicate, double t, Scratch& s) const {
    fill_clocks(replicate, s.clocks);
    evolve(replicate, t, s);
  }

  // Evolves from the clocks already in s.clocks (e.g. shared across a grid).
  void evolve(std::uint64_t replicate, double t, Scratch& s) const {
    s.open.resize(s.clocks.size());
    switch (model_) {
      case Model::bernoulli:
        bernoulli_fill(s.clocks, t, s.open);
        break;
      case Model::intermediate:
        bernoulli_fill(s.clocks, t, s.open);
        apply_block_events(s.clocks, t, blocks_, s.open, nullptr);
        break;
      case Model::cdpre:
        fill_kappa(replicate, s.kappa);
        cdpre_sweep(region_, s.clocks, s.kappa, t, s.open, s.sweep);
        break;
    }
  }

 private:
  Model model_;
  ConstraintDist dist_;
  std::uint64_t master_;
  LatticeRegion region_;
  std::vector<std::uint64_t> edge_keys_;
  std::vector<std::uint64_t> vertex_keys_;
  std::vector<BlockIds> blocks_;
};

}  // namespace cdpre::detail
