#pragma once

// Bundled small graphs with constraints and one reference event each, used
// to cross-check the Monte Carlo dynamics against the exact enumeration.

#include <cstdint>
#include <string>
#include <vector>

#include "cdpre/dynamics.hpp"

namespace cdpre {

struct OracleFixture {
  std::string name;
  SmallGraph graph;
  KappaMap kappa;
  EventPredicate event;
  std::string event_description;
  double (*closed_form)(double t) = nullptr;  // independent formula where one exists
};

// single edge, 3-path with capped middle vertex, 4-star, unit square,
// 2x3 grid (7 edges), H graph (7 edges).
const std::vector<OracleFixture>& oracle_fixtures();

// Monte Carlo frequency of the fixture's event under the constrained
// dynamics, drawn from the counter-based clock stream.
double fixture_mc_frequency(const OracleFixture& fixture, double t, int replicates,
                            std::uint64_t master_seed, int threads = 0);

}  // namespace cdpre
