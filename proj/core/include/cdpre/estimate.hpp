#pragma once

// Monte Carlo experiment harness: connection probability tables, truncated
// susceptibility, the recursive scale inequality check, decay-law fits, and
// threshold scans with a pseudo-critical crossing.

#include <cstdint>
#include <vector>

#include "cdpre/dynamics.hpp"
#include "cdpre/env.hpp"

namespace cdpre {

struct ThetaRow {
  int n = 0;
  double theta_hat = 0.0;
  double stderr_ = 0.0;
  int replicates = 0;
  int pad = 0;
  double zero_upper95 = 0.0;  // rule-of-three bound 3/replicates, set for zero rows
};

struct ThetaTable {
  Model model = Model::bernoulli;
  double t = 0.0;
  std::uint64_t master_seed = 0;
  std::vector<ThetaRow> rows;  // sorted by n

  const ThetaRow* find(int n) const;
};

// Frequency of {0 <-> boundary of B(n)} per listed n. Windows: B(n + pad) for
// cdpre and bernoulli, block-aligned closure of B(n + pad) for intermediate.
// Rows drawn from the same per-replicate field, so under one master seed the
// rows are coupled across n, t, and model.
ThetaTable theta_table(Model model, const ConstraintDist& dist, double t,
                       const std::vector<int>& n_list, int replicates, int pad,
                       std::uint64_t master_seed, int threads = 0);

struct SusceptibilityEstimate {
  int box_n = 0;
  double t = 0.0;
  double mean_size = 0.0;  // truncated: |C(0)| within B(box_n)
  double stderr_ = 0.0;
  int replicates = 0;
};

SusceptibilityEstimate susceptibility(Model model, const ConstraintDist& dist, double t, int box_n,
                                      int replicates, std::uint64_t master_seed, int pad = 8,
                                      int threads = 0);

struct SimonLiebCheck {
  int n = 0;
  int stage_k = 1;
  int scale = 0;           // floor(n^(k/(k+1)))
  double theta_n_hat = 0.0;
  double product_term = 0.0;  // 8 * scale * theta_scale * theta_(n-scale)
  double margin = 0.0;        // theta_n_hat - product_term
  double margin_stderr = 0.0;
  double c3_term = 0.0;  // scale * exp(-scale log(scale) / 2), unit constant
};

// Throws std::invalid_argument if the table lacks rows n, scale, n - scale.
SimonLiebCheck simon_lieb_check(const ThetaTable& table, int n, int stage_k);

enum class DecayFamily { pure_exponential, stretched };

struct DecayFit {
  DecayFamily family = DecayFamily::pure_exponential;
  double alpha_hat = 0.0;
  double alpha_stderr = 0.0;
  double epsilon = 0.0;  // fixed input for the stretched family
  double r_squared = 0.0;
  int n_lo = 0;
  int n_hi = 0;
  std::vector<int> skipped_zero_rows;
};

// Least squares of log theta against n (pure) or n^(1-epsilon) (stretched).
// Rows with zero frequency are excluded and reported. Throws
// std::invalid_argument with fewer than 3 usable rows.
DecayFit decay_fit(const ThetaTable& table, DecayFamily family, double epsilon, int n_lo, int n_hi);

struct ScanResult {
  Model model = Model::bernoulli;
  int n = 0;
  std::uint64_t master_seed = 0;
  int pad = 0;
  int replicates = 0;
  std::vector<double> t_grid;
  std::vector<double> theta;
  std::vector<double> stderr_;
  bool crossed = false;
  double crossing = 0.0;  // linear interpolation of the 0.5 level; a
                          // finite-size proxy, not a critical-point estimate
};

// Connection probability across the grid with clocks shared per replicate,
// so the curve is exactly non-decreasing.
ScanResult threshold_scan(Model model, const ConstraintDist& dist, int n,
                          const std::vector<double>& t_grid, int replicates,
                          std::uint64_t master_seed, int pad = 0, int threads = 0);

struct CombinatoricReport {
  int block_edge_count = 0;  // 49
  int a_count = 0;           // 6
  std::uint64_t c_denominator = 0;  // binomial(49,6)
  double p_c_exact = 0.0;           // 1 / binomial(49,6)
  double reduced_exact = 0.0;       // bottom-2-of-5 probability, 0.1
  double reduced_mc = 0.0;
  double reduced_stderr = 0.0;
  int reduced_replicates = 0;
};

// Programmatic block counts plus a Monte Carlo check of the rank detector on
// a reduced analog (a fixed 2-subset of 5 uniforms being the bottom two).
CombinatoricReport verify_block_combinatorics(int mc_replicates = 1000000,
                                              std::uint64_t master_seed = 20240901,
                                              int threads = 0);

}  // namespace cdpre
