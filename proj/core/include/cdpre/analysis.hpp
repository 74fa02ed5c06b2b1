#pragma once

// Connectivity queries on configurations, the decreasing-clock influence
// zones that control the range of dependence, and the covariance diagnostic
// for the decoupling of well-separated connection events.

#include <cstdint>
#include <vector>

#include "cdpre/dynamics.hpp"
#include "cdpre/env.hpp"
#include "cdpre/lattice.hpp"

namespace cdpre {

struct ClusterReport {
  Vertex root{};
  int size = 0;
  int radius = 0;  // max graph distance from the root within the cluster
  std::vector<std::pair<int, bool>> reached;  // (n, cluster meets norm >= n), per queried radius
};

// Open cluster of v. Throws std::out_of_range if v is outside the region.
ClusterReport cluster_of(const Configuration& config, Vertex v,
                         const std::vector<int>& query_radii = {});

// Open path from v to the boundary of the origin box B(n). A start vertex
// already at norm >= n counts as connected, so n = 0 is always true.
bool connects(const Configuration& config, Vertex v, int n);

// Same, but only through edges whose endpoints both have norm >= min_norm.
bool connects_outside(const Configuration& config, Vertex v, int n, int min_norm);

struct InfluenceZone {
  VertexList source;
  double t = 0.0;
  VertexList members;  // source included; sorted
};

// Vertices reachable from the source along edges with strictly decreasing
// clocks, all below t. Uses largest-entry-clock relaxation, so each vertex is
// settled once with the most permissive continuation budget.
InfluenceZone influence_zone(const ClockField& clocks, double t, const VertexList& source);

struct MzoneEstimate {
  int m = 0;
  double t = 0.0;
  double frequency = 0.0;
  double stderr_ = 0.0;
  int replicates = 0;
  double bound = 0.0;  // min(1, 4 * 3^(m-1) / m!)
};

// Monte Carlo frequency of the influence zone of the origin touching the
// boundary of B(m).
MzoneEstimate mzone_escape_frequency(int m, double t, int replicates, std::uint64_t master_seed,
                                     int threads = 0);

struct CovarianceEstimate {
  int m = 0;
  int n = 0;
  Vertex w{};
  double t = 0.0;
  double cov_hat = 0.0;
  double stderr_ = 0.0;
  int replicates = 0;
  double bound = 0.0;  // m * exp(-m log(m) / 2), the decay shape with unit constant
  bool within_bound = false;  // |cov_hat| - 3 stderr <= bound
};

// Sample covariance of 1{0 <-> dB(m)} and 1{w <-> dB(n) outside B(2m)} over
// shared-randomness replicates. Requires 2m < n and w on the boundary of
// B(2m). The second event walks only edges with both endpoint norms >= 2m.
CovarianceEstimate covariance_pair(Model model, const ConstraintDist& dist, int m, int n, Vertex w,
                                   double t, int replicates, std::uint64_t master_seed,
                                   int pad = 8, int threads = 0);

}  // namespace cdpre
