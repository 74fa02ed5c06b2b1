#include "cdpre/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace cdpre {

using nlohmann::json;

namespace {

void write_stamp_comments(std::ostream& os, const OutputStamp& stamp) {
  os << "# cdpre-version: " << version_string() << "\n";
  os << "# master-seed: " << stamp.master_seed << "\n";
  os << "# config-hash: " << stamp.config_hash << "\n";
}

json stamp_json(const OutputStamp& stamp) {
  json j;
  j["version"] = version_string();
  j["master_seed"] = stamp.master_seed;
  j["config_hash"] = stamp.config_hash;
  return j;
}

std::string full_precision(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string edge_text(const Edge& e) {
  std::ostringstream os;
  os << e.a.x << ":" << e.a.y << ":" << e.b.x << ":" << e.b.y;
  return os.str();
}

json vertex_json(const Vertex& v) { return json::array({v.x, v.y}); }

json edge_json(const Edge& e) {
  return json::array({vertex_json(e.a), vertex_json(e.b)});
}

}  // namespace

std::string version_string() {
#ifdef CDPRE_VERSION_STRING
  return CDPRE_VERSION_STRING;
#else
  return "0.0.0-dev";
#endif
}

std::string config_hash(const std::vector<std::pair<std::string, std::string>>& items) {
  auto sorted = items;
  std::sort(sorted.begin(), sorted.end());
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto feed = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ull;
    }
    h ^= '\n';
    h *= 0x100000001b3ull;
  };
  for (const auto& [k, v] : sorted) {
    feed(k);
    feed(v);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_theta_csv(std::ostream& os, const ThetaTable& table, const OutputStamp& stamp) {
  write_stamp_comments(os, stamp);
  os << "model,t,n,theta_hat,stderr,replicates,pad,seed,zero_upper95\n";
  for (const ThetaRow& row : table.rows) {
    os << to_string(table.model) << ',' << format_double(table.t) << ',' << row.n << ','
       << format_double(row.theta_hat) << ',' << format_double(row.stderr_) << ','
       << row.replicates << ',' << row.pad << ',' << table.master_seed << ',';
    if (row.zero_upper95 > 0.0) os << format_double(row.zero_upper95);
    os << '\n';
  }
}

ThetaTable read_theta_csv(std::istream& is) {
  ThetaTable table;
  std::string line;
  bool header_seen = false;
  bool any_row = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;  // column header
      continue;
    }
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() < 8) throw std::runtime_error("read_theta_csv: malformed row: " + line);
    ThetaRow row;
    table.model = model_from_string(fields[0]);
    table.t = std::stod(fields[1]);
    row.n = std::stoi(fields[2]);
    row.theta_hat = std::stod(fields[3]);
    row.stderr_ = std::stod(fields[4]);
    row.replicates = std::stoi(fields[5]);
    row.pad = std::stoi(fields[6]);
    table.master_seed = std::stoull(fields[7]);
    if (fields.size() > 8 && !fields[8].empty()) row.zero_upper95 = std::stod(fields[8]);
    table.rows.push_back(row);
    any_row = true;
  }
  if (!any_row) throw std::runtime_error("read_theta_csv: no data rows");
  std::sort(table.rows.begin(), table.rows.end(),
            [](const ThetaRow& a, const ThetaRow& b) { return a.n < b.n; });
  return table;
}

void write_scan_csv(std::ostream& os, const ScanResult& scan, const OutputStamp& stamp) {
  write_stamp_comments(os, stamp);
  if (scan.crossed) os << "# crossing-t: " << format_double(scan.crossing) << "\n";
  else os << "# crossing-t: none\n";
  os << "model,t,n,theta_hat,stderr,replicates,pad,seed\n";
  for (std::size_t i = 0; i < scan.t_grid.size(); ++i) {
    os << to_string(scan.model) << ',' << format_double(scan.t_grid[i]) << ',' << scan.n << ','
       << format_double(scan.theta[i]) << ',' << format_double(scan.stderr_[i]) << ','
       << scan.replicates << ',' << scan.pad << ',' << scan.master_seed << '\n';
  }
}

void write_configuration_csv(std::ostream& os, const Configuration& config,
                             const OutputStamp& stamp) {
  write_stamp_comments(os, stamp);
  os << "# model: " << to_string(config.model) << "  t: " << format_double(config.t) << "\n";
  os << "edge_a_x1,edge_a_x2,edge_b_x1,edge_b_x2,open_bit\n";
  for (std::size_t i = 0; i < config.edges.size(); ++i) {
    const Edge& e = config.edges[i];
    os << e.a.x << ',' << e.a.y << ',' << e.b.x << ',' << e.b.y << ','
       << (config.open[i] ? 1 : 0) << '\n';
  }
}

void write_environment_json(std::ostream& os, const Environment& env, const OutputStamp& stamp) {
  json j = stamp_json(stamp);
  j["records"] = json::array();
  for (std::size_t i = 0; i < env.region.size(); ++i) {
    j["records"].push_back(
        {{"x", env.region[i].x}, {"y", env.region[i].y}, {"kappa", env.kappa[i]}});
  }
  os << j.dump(1) << '\n';
}

void write_clocks_json(std::ostream& os, const ClockField& clocks, const OutputStamp& stamp) {
  json j = stamp_json(stamp);
  j["records"] = json::array();
  for (std::size_t i = 0; i < clocks.size(); ++i) {
    const Edge& e = clocks.edges()[i];
    j["records"].push_back({{"ax", e.a.x},
                            {"ay", e.a.y},
                            {"bx", e.b.x},
                            {"by", e.b.y},
                            {"u", full_precision(clocks.values()[i])}});
  }
  os << j.dump(1) << '\n';
}

void write_mzone_csv(std::ostream& os, const MzoneEstimate& est, const OutputStamp& stamp) {
  write_stamp_comments(os, stamp);
  os << "m,n,t,estimate,stderr,replicates,bound,seed\n";
  os << est.m << ",," << format_double(est.t) << ',' << format_double(est.frequency) << ','
     << format_double(est.stderr_) << ',' << est.replicates << ',' << format_double(est.bound)
     << ',' << stamp.master_seed << '\n';
}

void write_covariance_csv(std::ostream& os, const CovarianceEstimate& est,
                          const OutputStamp& stamp) {
  write_stamp_comments(os, stamp);
  os << "# w: " << est.w.x << ":" << est.w.y << "\n";
  os << "# within-bound: " << (est.within_bound ? 1 : 0) << "\n";
  os << "m,n,t,estimate,stderr,replicates,bound,seed\n";
  os << est.m << ',' << est.n << ',' << format_double(est.t) << ',' << format_double(est.cov_hat)
     << ',' << format_double(est.stderr_) << ',' << est.replicates << ','
     << format_double(est.bound) << ',' << stamp.master_seed << '\n';
}

void write_revealment_csv(std::ostream& os, const RevealmentReport& report,
                          const OutputStamp& stamp) {
  write_stamp_comments(os, stamp);
  os << "# t: " << format_double(report.t) << "  n: " << report.n
     << "  s_n: " << format_double(report.s_n) << "  beta_hat: " << format_double(report.beta_hat)
     << "\n";
  os << "k,edge,delta_hat,stderr\n";
  const double r = report.replicates;
  for (std::size_t k = 0; k < report.delta.size(); ++k) {
    for (std::size_t e = 0; e < report.edges.size(); ++e) {
      double d = report.delta[k][e];
      if (d == 0.0) continue;  // untouched edges would dominate the file
      os << (k + 1) << ',' << edge_text(report.edges[e]) << ',' << format_double(d) << ','
         << format_double(std::sqrt(d * (1.0 - d) / r)) << '\n';
    }
  }
}

void write_influence_csv(std::ostream& os, const InfluenceReport& report,
                         const OutputStamp& stamp) {
  write_stamp_comments(os, stamp);
  os << "# t: " << format_double(report.t) << "  n: " << report.n
     << "  resamples: " << report.resamples << "\n";
  os << "edge,inf_hat,stderr\n";
  for (std::size_t i = 0; i < report.edges.size(); ++i) {
    os << edge_text(report.edges[i]) << ',' << format_double(report.inf_hat[i]) << ','
       << format_double(report.stderr_[i]) << '\n';
  }
}

void write_osss_json(std::ostream& os, const OsssReport& report, const OutputStamp& stamp) {
  json j = stamp_json(stamp);
  j["t"] = report.t;
  j["n"] = report.n;
  j["replicates"] = report.replicates;
  j["theta_hat"] = report.theta_hat;
  j["var_hat"] = report.var_hat;
  j["var_stderr"] = report.var_stderr;
  j["s_n"] = report.s_n;
  j["per_k"] = json::array();
  for (std::size_t k = 0; k < report.rhs.size(); ++k) {
    j["per_k"].push_back({{"k", k + 1},
                          {"rhs", report.rhs[k]},
                          {"rhs_stderr", report.rhs_stderr[k]},
                          {"margin", report.margin[k]}});
  }
  os << j.dump(1) << '\n';
}

void write_fit_json(std::ostream& os, const DecayFit& fit, const OutputStamp& stamp) {
  json j = stamp_json(stamp);
  j["family"] = fit.family == DecayFamily::pure_exponential ? "pure_exponential" : "stretched";
  j["alpha_hat"] = fit.alpha_hat;
  j["alpha_stderr"] = fit.alpha_stderr;
  j["epsilon"] = fit.epsilon;
  j["r_squared"] = fit.r_squared;
  j["n_lo"] = fit.n_lo;
  j["n_hi"] = fit.n_hi;
  j["skipped_zero_rows"] = fit.skipped_zero_rows;
  os << j.dump(1) << '\n';
}

void write_blocks_json(std::ostream& os, const std::vector<BlockGeometry>& blocks,
                       const OutputStamp& stamp) {
  json j = stamp_json(stamp);
  j["blocks"] = json::array();
  for (const BlockGeometry& bg : blocks) {
    json b;
    b["r"] = bg.index.r;
    b["s"] = bg.index.s;
    b["g"] = edge_json(bg.g);
    b["lambda"] = json::array();
    for (const Vertex& v : bg.lambda) b["lambda"].push_back(vertex_json(v));
    b["lambda_bar"] = json::array();
    for (const Vertex& v : bg.lambda_bar) b["lambda_bar"].push_back(vertex_json(v));
    b["a_set"] = json::array();
    for (const Edge& e : bg.a_set) b["a_set"].push_back(edge_json(e));
    b["b_set"] = json::array();
    for (const Edge& e : bg.b_set) b["b_set"].push_back(edge_json(e));
    j["blocks"].push_back(std::move(b));
  }
  os << j.dump(1) << '\n';
}

void write_dominance_csv(std::ostream& os, const ConstraintDist& dist,
                         const std::vector<DominanceCheck>& checks, const OutputStamp& stamp) {
  write_stamp_comments(os, stamp);
  os << "rho0,rho1,rho2,rho3,t,window_n,replicates,cdpre_above_intermediate,"
        "intermediate_above_bernoulli,degree_cap_violations\n";
  for (const DominanceCheck& c : checks) {
    os << format_double(dist.rho()[0]) << ',' << format_double(dist.rho()[1]) << ','
       << format_double(dist.rho()[2]) << ',' << format_double(dist.rho()[3]) << ','
       << format_double(c.t) << ',' << c.window_n << ',' << c.replicates << ','
       << c.cdpre_above_intermediate << ',' << c.intermediate_above_bernoulli << ','
       << c.degree_cap_violations << '\n';
  }
}

}  // namespace cdpre
