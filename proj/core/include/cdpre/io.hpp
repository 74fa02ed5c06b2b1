#pragma once

// Deterministic CSV/JSON emission for every report type. All files carry the
// master seed, a hash of the effective configuration, and the tool version,
// and identical inputs reproduce byte-identical files.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cdpre/analysis.hpp"
#include "cdpre/dynamics.hpp"
#include "cdpre/env.hpp"
#include "cdpre/estimate.hpp"
#include "cdpre/osss.hpp"

namespace cdpre {

std::string version_string();

// FNV-1a over a canonical key=value rendering.
std::string config_hash(const std::vector<std::pair<std::string, std::string>>& items);

struct OutputStamp {
  std::uint64_t master_seed = 0;
  std::string config_hash;
};

std::string format_double(double v);  // fixed %.12g rendering

void write_theta_csv(std::ostream& os, const ThetaTable& table, const OutputStamp& stamp);
ThetaTable read_theta_csv(std::istream& is);  // throws std::runtime_error on malformed input

void write_scan_csv(std::ostream& os, const ScanResult& scan, const OutputStamp& stamp);

// (edge_a_x1, edge_a_x2, edge_b_x1, edge_b_x2, open_bit), canonical order.
void write_configuration_csv(std::ostream& os, const Configuration& config,
                             const OutputStamp& stamp);

// One record per entity, canonical order, full-precision values.
void write_environment_json(std::ostream& os, const Environment& env, const OutputStamp& stamp);
void write_clocks_json(std::ostream& os, const ClockField& clocks, const OutputStamp& stamp);

void write_mzone_csv(std::ostream& os, const MzoneEstimate& est, const OutputStamp& stamp);
void write_covariance_csv(std::ostream& os, const CovarianceEstimate& est, const OutputStamp& stamp);

void write_revealment_csv(std::ostream& os, const RevealmentReport& report, const OutputStamp& stamp);
void write_influence_csv(std::ostream& os, const InfluenceReport& report, const OutputStamp& stamp);
void write_osss_json(std::ostream& os, const OsssReport& report, const OutputStamp& stamp);

void write_fit_json(std::ostream& os, const DecayFit& fit, const OutputStamp& stamp);

void write_blocks_json(std::ostream& os, const std::vector<BlockGeometry>& blocks,
                       const OutputStamp& stamp);

void write_dominance_csv(std::ostream& os, const ConstraintDist& dist,
                         const std::vector<DominanceCheck>& checks, const OutputStamp& stamp);

}  // namespace cdpre
