#pragma once

// Block-by-block exploration of the intermediate model: the algorithm grows
// the open components of the boundary of B(k), revealing one block (its 49
// edges plus its external edge boundary) at a time, until the origin-to-
// boundary indicator for B(n) is determined by revealed clocks alone.
// Empirical revealment and influence tables feed the variance inequality
// check Var(f) <= sum_e delta_e * Inf_e.

#include <cstdint>
#include <span>
#include <vector>

#include "cdpre/env.hpp"
#include "cdpre/lattice.hpp"

namespace cdpre {

// Clock accessor that faults on reads of unrevealed coordinates. The
// exploration keeps it switched on unconditionally; reads are one flag test.
class RevealedClockView {
 public:
  explicit RevealedClockView(std::span<const double> values)
      : values_(values), revealed_(values.size(), 0) {}

  void reveal(std::size_t edge_id) { revealed_[edge_id] = 1; }
  bool revealed(std::size_t edge_id) const { return revealed_[edge_id] != 0; }
  const std::vector<std::uint8_t>& revealed_flags() const { return revealed_; }

  // Throws std::logic_error on an unrevealed read.
  double at(std::size_t edge_id) const;

  void reset() { std::fill(revealed_.begin(), revealed_.end(), std::uint8_t{0}); }

 private:
  std::span<const double> values_;
  std::vector<std::uint8_t> revealed_;
};

struct ExplorationState {
  std::vector<BlockIndex> processed;  // blocks whose g was determined, in processing order
  VertexList z_set;                   // boundary seed plus every vertex reached through revealed open edges
  EdgeList revealed;
  int steps = 0;
};

struct TkResult {
  bool determined = false;  // indicator of {0 <-> boundary of B(n)} under the intermediate model
  ExplorationState state;
  std::size_t unrevealed_reads = 0;
};

// Vertex set whose clocks suffice to run the exploration up to radius n:
// every block meeting B(n) plus the endpoints of their external boundaries.
VertexList tk_window(int n);

// Runs the exploration seeded at the boundary of B(k), 1 <= k <= n. Throws
// std::invalid_argument if the clock field does not cover tk_window(n).
TkResult run_Tk(const ClockField& clocks, double t, int k, int n);

struct RevealmentReport {
  double t = 0.0;
  int n = 0;
  int replicates = 0;
  EdgeList edges;                          // all window edges, canonical order
  std::vector<std::vector<double>> delta;  // delta[k-1][edge]: revealment of T_k
  std::vector<double> delta_sum;           // sum over k, per edge
  std::vector<double> theta_tilde;         // connection probability estimates, k = 1..n
  std::vector<double> theta_stderr;
  double s_n = 0.0;       // sum of theta_tilde
  double beta_hat = 0.0;  // max_e delta_sum / (4 s_n)
};

RevealmentReport revealment_table(double t, int n, int replicates, std::uint64_t master_seed,
                                  int threads = 0);

struct InfluenceReport {
  double t = 0.0;
  int n = 0;
  int replicates = 0;
  int resamples = 1;
  EdgeList edges;  // every edge the indicator can depend on; all others have influence exactly 0
  std::vector<double> inf_hat;
  std::vector<double> stderr_;
};

// Paired resampling estimate of per-edge influence on the B(n) indicator
// under the intermediate model, with common random numbers across edges.
InfluenceReport influence_table(double t, int n, int replicates, int resamples,
                                std::uint64_t master_seed, int threads = 0);

struct OsssReport {
  double t = 0.0;
  int n = 0;
  int replicates = 0;
  double theta_hat = 0.0;
  double var_hat = 0.0;
  double var_stderr = 0.0;
  double s_n = 0.0;
  std::vector<double> rhs;         // per k: sum_e delta_e(T_k) * inf_e
  std::vector<double> rhs_stderr;  // propagated
  std::vector<double> margin;      // rhs - var_hat
};

// Empirical check of the variance inequality for each k in 1..n, with the
// revealment and influence runs sharing replicate streams.
OsssReport osss_check(double t, int n, int replicates, std::uint64_t master_seed, int threads = 0);

// The same check assembled from tables the caller already computed; they
// must come from the same t, n, and replicate count.
OsssReport osss_combine(const RevealmentReport& rev, const InfluenceReport& inf);

}  // namespace cdpre
