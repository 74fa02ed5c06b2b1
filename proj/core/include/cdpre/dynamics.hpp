#pragma once

// Evolution of the three coupled processes from one clock field: the
// degree-constrained process (edges open in clock order while both endpoint
// degrees are below their constraints), the intermediate process (product
// openings except that each block's g edge is suppressed when its six A
// clocks are the block minimum), and the plain product process. Also houses
// the exact small-graph oracle that enumerates attempt subsets and orders.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "cdpre/env.hpp"
#include "cdpre/lattice.hpp"
#include "cdpre/region.hpp"

namespace cdpre {

enum class Model { cdpre, intermediate, bernoulli };

std::string to_string(Model m);
Model model_from_string(const std::string& s);  // throws std::invalid_argument

struct Configuration {
  Model model = Model::bernoulli;
  double t = 0.0;
  EdgeList edges;                   // canonical sorted
  std::vector<std::uint8_t> open;   // aligned with edges

  int index_of(const Edge& e) const;      // -1 if absent
  bool is_open(const Edge& e) const;      // throws std::out_of_range if absent
  std::size_t open_count() const;
};

struct BlockEvent {
  BlockIndex index;
  bool c_occurred = false;
  double max_inside = 0.0;   // max clock over the A edges
  double min_outside = 0.0;  // min clock over E(Lambda) \ A
};

struct BlockEventReport {
  std::vector<BlockEvent> blocks;  // lexicographic block order
  const BlockEvent* find(BlockIndex idx) const;
};

struct CoupledTriple {
  Configuration cdpre;
  Configuration intermediate;
  Configuration bernoulli;
  BlockEventReport block_events;
};

// Degree-constrained evolution over the clock field's edges (or the given
// subset). Every endpoint must carry a constraint; throws std::out_of_range
// otherwise. Ties in clock value are broken by canonical edge order.
Configuration evolve_cdpre(const Environment& env, const ClockField& clocks, double t);
Configuration evolve_cdpre(const Environment& env, const ClockField& clocks, double t,
                           const EdgeList& region_edges);

Configuration evolve_bernoulli(const ClockField& clocks, double t);

// Intermediate process. Every block meeting `window` (and every block owning
// a g edge present in the field) is evaluated over its full 49 edges; throws
// std::invalid_argument if the field does not cover such a block.
std::pair<Configuration, BlockEventReport> evolve_intermediate(const ClockField& clocks, double t,
                                                               const VertexList& window);

// All three processes from the same clocks. With rho_0 = 0 the open sets are
// pathwise nested: cdpre <= intermediate <= bernoulli on every edge.
CoupledTriple evolve_coupled(const Environment& env, const ClockField& clocks, double t,
                             const VertexList& window);

// ---------------------------------------------------------------------------
// Pathwise checks over replicated coupled evolutions.

struct DominanceCheck {
  double t = 0.0;
  int window_n = 0;
  int replicates = 0;
  long long cdpre_above_intermediate = 0;       // edges with cdpre open, intermediate closed
  long long intermediate_above_bernoulli = 0;   // edges with intermediate open, bernoulli closed
  long long degree_cap_violations = 0;          // vertices exceeding their constraint
};

// Counts edgewise violations of the cdpre <= intermediate <= bernoulli chain
// on the block closure of B(window_n), plus degree-cap violations. All three
// counts are zero when rho_0 = 0 (and the last is always zero).
DominanceCheck dominance_check(const ConstraintDist& dist, double t, int window_n, int replicates,
                               std::uint64_t master_seed, int threads = 0);

// Edges open at t_lo but closed at t_hi under shared clocks; zero for every
// model by monotonicity of the dynamics in t.
long long monotonicity_violations(Model model, const ConstraintDist& dist, double t_lo,
                                  double t_hi, int window_n, int replicates,
                                  std::uint64_t master_seed, int threads = 0);

// ---------------------------------------------------------------------------
// Exact oracle for graphs of at most 10 edges. Enumerates each subset S of
// edges with attempt clocks below t (weight t^|S| (1-t)^(m-|S|)) and every
// ordering of S (weight 1/|S|!), replays the opening rule, and accumulates
// the event indicator. Cost is sum_k C(m,k) k! ~ e * m!.

struct SmallGraph {
  VertexList vertices;
  EdgeList edges;
};

using KappaMap = std::unordered_map<Vertex, int, VertexHash>;
using EventPredicate = std::function<bool(const Configuration&)>;

double exact_distribution(const SmallGraph& graph, const KappaMap& kappa, double t,
                          const EventPredicate& event);

// ---------------------------------------------------------------------------
// Index-based building blocks shared with the estimation harness. All spans
// are aligned with the region's vertex/edge ids.

namespace detail {

struct SweepScratch {
  std::vector<std::int32_t> order;    // edge ids with clock <= t, ascending clock
  std::vector<std::uint8_t> degree;   // per vertex id
};

// Degree-constrained sweep; writes 0/1 per edge id into `open`.
void cdpre_sweep(const LatticeRegion& region, std::span<const double> clocks,
                 std::span<const std::uint8_t> kappa, double t, std::span<std::uint8_t> open,
                 SweepScratch& scratch);

void bernoulli_fill(std::span<const double> clocks, double t, std::span<std::uint8_t> open);

// Edge ids of one block's geometry inside a region; g_id is -1 if any part of
// E(Lambda) is missing from the region.
struct BlockIds {
  BlockIndex index;
  std::int32_t g_id = -1;
  std::vector<std::int32_t> a_ids;      // 6 ids
  std::vector<std::int32_t> rest_ids;   // remaining 43 ids of E(Lambda), g included
};

BlockIds block_ids(const LatticeRegion& region, BlockIndex idx);

// max over A < min over the rest, evaluated on clock values.
BlockEvent evaluate_block_event(std::span<const double> clocks, const BlockIds& ids);

// Applies the g suppression for each block on top of product openness.
void apply_block_events(std::span<const double> clocks, double t,
                        const std::vector<BlockIds>& blocks, std::span<std::uint8_t> open,
                        std::vector<BlockEvent>* report);

}  // namespace detail

}  // namespace cdpre
