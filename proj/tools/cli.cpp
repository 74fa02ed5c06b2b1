#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cdpre/analysis.hpp"
#include "cdpre/dynamics.hpp"
#include "cdpre/env.hpp"
#include "cdpre/estimate.hpp"
#include "cdpre/fixtures.hpp"
#include "cdpre/io.hpp"
#include "cdpre/osss.hpp"
#include "cdpre/parallel.hpp"

namespace cdpre::cli {

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitCheckFailed = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CheckFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> out;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stoi(item));
  }
  return out;
}

// "lo:hi:step" expands to an inclusive grid; otherwise a comma list.
std::vector<double> parse_grid(const std::string& text) {
  if (text.find(':') == std::string::npos) return parse_doubles(text);
  std::istringstream is(text);
  std::string part;
  std::vector<double> parts;
  while (std::getline(is, part, ':')) parts.push_back(std::stod(part));
  if (parts.size() != 3 || parts[2] <= 0.0) throw ConfigError("bad grid spec: " + text);
  std::vector<double> out;
  for (double v = parts[0]; v <= parts[1] + 1e-12; v += parts[2]) out.push_back(v);
  return out;
}

std::string list_text(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += format_double(v[i]);
  }
  return s;
}

std::string list_text(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s;
}

// JSON config values become string defaults for the matching options; any
// flag given on the command line still wins.
std::string json_as_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ',';
      s += json_as_text(v[i]);
    }
    return s;
  }
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

class OptionBag {
 public:
  OptionBag(CLI::App* sub, json cfg) : sub_(sub), cfg_(std::move(cfg)) {}

  template <typename T>
  CLI::Option* add(const std::string& flag, T& var, const std::string& help) {
    CLI::Option* opt = sub_->add_option(flag, var, help);
    const std::string key = flag.substr(flag.find_first_not_of('-'));
    if (cfg_.contains(key)) opt->default_val(json_as_text(cfg_.at(key)));
    return opt;
  }

  CLI::Option* add_flag(const std::string& flag, bool& var, const std::string& help) {
    CLI::Option* opt = sub_->add_flag(flag, var, help);
    const std::string key = flag.substr(flag.find_first_not_of('-'));
    if (cfg_.contains(key) && cfg_.at(key).is_boolean()) var = cfg_.at(key).get<bool>();
    return opt;
  }

 private:
  CLI::App* sub_;
  json cfg_;
};

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path, std::ios::binary);
  if (!file) throw ConfigError("cannot open output file: " + path);
  return file;
}

ConstraintDist parse_rho(const std::string& text) {
  std::vector<double> parts = parse_doubles(text);
  if (parts.size() != 4) throw ConfigError("rho needs exactly 4 probabilities");
  try {
    return ConstraintDist({parts[0], parts[1], parts[2], parts[3]});
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

int auto_pad(Model model, int pad) {
  if (pad >= 0) return pad;
  return model == Model::cdpre ? 8 : 0;
}

using KV = std::vector<std::pair<std::string, std::string>>;

OutputStamp make_stamp(std::uint64_t seed, const KV& kv) {
  return OutputStamp{seed, config_hash(kv)};
}

// ---------------------------------------------------------------------------

struct ThetaArgs {
  std::string model = "bernoulli";
  std::string rho = "0,0,0,1";
  double t = 0.5;
  std::string n_list = "4,8,16";
  int reps = 1000;
  int pad = -1;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out;
};

int cmd_theta(const ThetaArgs& a) {
  Model model = model_from_string(a.model);
  ConstraintDist dist = parse_rho(a.rho);
  std::vector<int> ns = parse_ints(a.n_list);
  int pad = auto_pad(model, a.pad);
  KV kv{{"cmd", "theta"},    {"model", a.model},           {"rho", a.rho},
        {"t", format_double(a.t)}, {"n", list_text(ns)},   {"reps", std::to_string(a.reps)},
        {"pad", std::to_string(pad)}, {"seed", std::to_string(a.seed)}};
  ThetaTable table = theta_table(model, dist, a.t, ns, a.reps, pad, a.seed, a.threads);
  std::ofstream file;
  write_theta_csv(open_output(a.out, file), table, make_stamp(a.seed, kv));
  return kExitOk;
}

struct DominanceArgs {
  std::string rho = "0,0,0,1";
  std::string t_list = "0.3,0.6,0.9";
  int n = 16;
  int reps = 1000;
  std::uint64_t seed = 1;
  int threads = 0;
  bool allow_rho0 = false;
  std::string out;
};

int cmd_dominance(const DominanceArgs& a) {
  ConstraintDist dist = parse_rho(a.rho);
  if (dist.rho0() > 0.0 && !a.allow_rho0)
    throw ConfigError("dominance requires rho_0 = 0; pass --allow-rho0 to run anyway "
                      "(the first link of the chain may break)");
  std::vector<double> ts = parse_doubles(a.t_list);
  KV kv{{"cmd", "dominance"}, {"rho", a.rho},           {"t", list_text(ts)},
        {"n", std::to_string(a.n)}, {"reps", std::to_string(a.reps)},
        {"seed", std::to_string(a.seed)}};
  std::vector<DominanceCheck> checks;
  long long total = 0;
  for (double t : ts) {
    checks.push_back(dominance_check(dist, t, a.n, a.reps, a.seed, a.threads));
    total += checks.back().cdpre_above_intermediate + checks.back().intermediate_above_bernoulli +
             checks.back().degree_cap_violations;
  }
  std::ofstream file;
  write_dominance_csv(open_output(a.out, file), dist, checks, make_stamp(a.seed, kv));
  if (total != 0) throw CheckFailed("dominance violations detected: " + std::to_string(total));
  return kExitOk;
}

struct OracleArgs {
  std::string t_list = "0.2,0.5,0.8";
  int reps = 100000;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string fixture;  // empty = all
  std::string out;
};

int cmd_oracle_check(const OracleArgs& a) {
  std::vector<double> ts = parse_doubles(a.t_list);
  KV kv{{"cmd", "oracle-check"},
        {"t", list_text(ts)},
        {"reps", std::to_string(a.reps)},
        {"fixture", a.fixture},
        {"seed", std::to_string(a.seed)}};
  json rows = json::array();
  bool all_pass = true;
  for (const OracleFixture& fixture : oracle_fixtures()) {
    if (!a.fixture.empty() && fixture.name != a.fixture) continue;
    for (double t : ts) {
      const double exact = exact_distribution(fixture.graph, fixture.kappa, t, fixture.event);
      const double mc = fixture_mc_frequency(fixture, t, a.reps, a.seed, a.threads);
      const double tol = 4.0 * std::sqrt(exact * (1.0 - exact) / a.reps);
      const bool pass = std::abs(mc - exact) <= tol;
      all_pass = all_pass && pass;
      rows.push_back({{"fixture", fixture.name},
                      {"event", fixture.event_description},
                      {"t", t},
                      {"exact", exact},
                      {"mc", mc},
                      {"tolerance", tol},
                      {"pass", pass}});
      std::cout << (pass ? "[pass] " : "[FAIL] ") << fixture.name << " t=" << format_double(t)
                << " exact=" << format_double(exact) << " mc=" << format_double(mc) << "\n";
    }
  }
  if (!a.out.empty()) {
    OutputStamp stamp = make_stamp(a.seed, kv);
    json j{{"version", version_string()},
           {"master_seed", stamp.master_seed},
           {"config_hash", stamp.config_hash},
           {"results", rows}};
    std::ofstream file;
    open_output(a.out, file) << j.dump(1) << '\n';
  }
  if (!all_pass) throw CheckFailed("oracle fixtures outside tolerance");
  return kExitOk;
}

struct MzoneArgs {
  int m = 7;
  double t = 1.0;
  int reps = 10000;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out;
};

int cmd_mzone(const MzoneArgs& a) {
  KV kv{{"cmd", "mzone"},
        {"m", std::to_string(a.m)},
        {"t", format_double(a.t)},
        {"reps", std::to_string(a.reps)},
        {"seed", std::to_string(a.seed)}};
  MzoneEstimate est = mzone_escape_frequency(a.m, a.t, a.reps, a.seed, a.threads);
  std::ofstream file;
  write_mzone_csv(open_output(a.out, file), est, make_stamp(a.seed, kv));
  return kExitOk;
}

struct CovArgs {
  std::string model = "cdpre";
  std::string rho = "0,0,0,1";
  int m = 6;
  int n = 16;
  std::string w;  // default (2m, 0)
  double t = 0.45;
  int reps = 10000;
  int pad = -1;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out;
};

int cmd_covariance(const CovArgs& a) {
  Model model = model_from_string(a.model);
  ConstraintDist dist = parse_rho(a.rho);
  Vertex w{2 * a.m, 0};
  if (!a.w.empty()) {
    std::vector<int> parts = parse_ints(a.w);
    if (parts.size() != 2) throw ConfigError("w must be 'x,y'");
    w = {parts[0], parts[1]};
  }
  int pad = auto_pad(model, a.pad);
  KV kv{{"cmd", "covariance"},      {"model", a.model},        {"rho", a.rho},
        {"m", std::to_string(a.m)}, {"n", std::to_string(a.n)},
        {"w", std::to_string(w.x) + "," + std::to_string(w.y)},
        {"t", format_double(a.t)},  {"reps", std::to_string(a.reps)},
        {"pad", std::to_string(pad)}, {"seed", std::to_string(a.seed)}};
  CovarianceEstimate est =
      covariance_pair(model, dist, a.m, a.n, w, a.t, a.reps, a.seed, pad, a.threads);
  std::ofstream file;
  write_covariance_csv(open_output(a.out, file), est, make_stamp(a.seed, kv));
  return kExitOk;
}

struct OsssArgs {
  double t = 0.45;
  int n = 8;
  int reps = 1000;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out;
  std::string delta_out;
  std::string influence_out;
};

int cmd_osss(const OsssArgs& a) {
  KV kv{{"cmd", "osss"},
        {"t", format_double(a.t)},
        {"n", std::to_string(a.n)},
        {"reps", std::to_string(a.reps)},
        {"seed", std::to_string(a.seed)}};
  OutputStamp stamp = make_stamp(a.seed, kv);
  RevealmentReport rev = revealment_table(a.t, a.n, a.reps, a.seed, a.threads);
  InfluenceReport inf = influence_table(a.t, a.n, a.reps, 1, a.seed, a.threads);
  OsssReport report = osss_combine(rev, inf);
  if (!a.delta_out.empty()) {
    std::ofstream file;
    write_revealment_csv(open_output(a.delta_out, file), rev, stamp);
  }
  if (!a.influence_out.empty()) {
    std::ofstream file;
    write_influence_csv(open_output(a.influence_out, file), inf, stamp);
  }
  std::ofstream file;
  write_osss_json(open_output(a.out, file), report, stamp);
  return kExitOk;
}

struct ScanArgs {
  std::string model = "bernoulli";
  std::string rho = "0,0,0,1";
  int n = 32;
  std::string t_grid = "0.40:0.60:0.02";
  int reps = 400;
  int pad = -1;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out;
};

int cmd_scan(const ScanArgs& a) {
  Model model = model_from_string(a.model);
  ConstraintDist dist = parse_rho(a.rho);
  std::vector<double> grid = parse_grid(a.t_grid);
  int pad = auto_pad(model, a.pad);
  KV kv{{"cmd", "scan"},        {"model", a.model},           {"rho", a.rho},
        {"n", std::to_string(a.n)}, {"t_grid", list_text(grid)},
        {"reps", std::to_string(a.reps)}, {"pad", std::to_string(pad)},
        {"seed", std::to_string(a.seed)}};
  ScanResult scan = threshold_scan(model, dist, a.n, grid, a.reps, a.seed, pad, a.threads);
  std::ofstream file;
  write_scan_csv(open_output(a.out, file), scan, make_stamp(a.seed, kv));
  return kExitOk;
}

struct BlocksArgs {
  int r0 = 0, r1 = 0, s0 = 0, s1 = 0;
  std::string out;
};

int cmd_blocks(const BlocksArgs& a) {
  if (a.r1 < a.r0 || a.s1 < a.s0) throw ConfigError("blocks: need r0 <= r1 and s0 <= s1");
  KV kv{{"cmd", "blocks"},
        {"r0", std::to_string(a.r0)},
        {"r1", std::to_string(a.r1)},
        {"s0", std::to_string(a.s0)},
        {"s1", std::to_string(a.s1)}};
  std::vector<BlockGeometry> blocks;
  for (int r = a.r0; r <= a.r1; ++r)
    for (int s = a.s0; s <= a.s1; ++s) blocks.push_back(block_geometry(r, s));
  std::ofstream file;
  write_blocks_json(open_output(a.out, file), blocks, make_stamp(0, kv));
  return kExitOk;
}

struct FitArgs {
  std::string input;
  std::string family = "pure";
  double epsilon = 0.0;
  int n_lo = 0;
  int n_hi = 1 << 30;
  std::string out;
};

int cmd_fit(const FitArgs& a) {
  if (a.input.empty()) throw ConfigError("fit: --input is required");
  std::ifstream is(a.input);
  if (!is) throw ConfigError("fit: cannot read " + a.input);
  ThetaTable table = read_theta_csv(is);
  DecayFamily family;
  if (a.family == "pure" || a.family == "pure_exponential") family = DecayFamily::pure_exponential;
  else if (a.family == "stretched") family = DecayFamily::stretched;
  else throw ConfigError("fit: family must be 'pure' or 'stretched'");
  KV kv{{"cmd", "fit"},          {"input", a.input},
        {"family", a.family},    {"epsilon", format_double(a.epsilon)},
        {"n_lo", std::to_string(a.n_lo)}, {"n_hi", std::to_string(a.n_hi)}};
  DecayFit fit = decay_fit(table, family, a.epsilon, a.n_lo, a.n_hi);
  std::ofstream file;
  write_fit_json(open_output(a.out, file), fit, make_stamp(table.master_seed, kv));
  return kExitOk;
}

struct DumpArgs {
  std::string what = "config";
  std::string model = "bernoulli";
  std::string rho = "0,0,0,1";
  double t = 0.5;
  int n = 8;
  int pad = -1;
  std::uint64_t seed = 1;
  std::uint64_t rep = 0;
  std::string out;
};

int cmd_dump(const DumpArgs& a) {
  Model model = model_from_string(a.model);
  ConstraintDist dist = parse_rho(a.rho);
  int pad = auto_pad(model, a.pad);
  KV kv{{"cmd", "dump"},   {"what", a.what},          {"model", a.model},
        {"rho", a.rho},    {"t", format_double(a.t)}, {"n", std::to_string(a.n)},
        {"pad", std::to_string(pad)}, {"seed", std::to_string(a.seed)},
        {"rep", std::to_string(a.rep)}};
  OutputStamp stamp = make_stamp(a.seed, kv);
  VertexList window = model == Model::intermediate
                          ? block_closure(Box{a.n + pad}.vertices())
                          : Box{a.n + pad}.vertices();
  std::ofstream file;
  std::ostream& os = open_output(a.out, file);
  if (a.what == "env") {
    Environment env = sample_environment(dist, window, {a.seed, a.rep, Stream::constraints});
    write_environment_json(os, env, stamp);
    return kExitOk;
  }
  ClockField clocks = sample_clocks(edges_in(window), {a.seed, a.rep, Stream::clocks});
  if (a.what == "clocks") {
    write_clocks_json(os, clocks, stamp);
    return kExitOk;
  }
  if (a.what != "config") throw ConfigError("dump: --what must be config, env, or clocks");
  Configuration config;
  switch (model) {
    case Model::bernoulli:
      config = evolve_bernoulli(clocks, a.t);
      break;
    case Model::intermediate:
      config = evolve_intermediate(clocks, a.t, window).first;
      break;
    case Model::cdpre: {
      Environment env = sample_environment(dist, window, {a.seed, a.rep, Stream::constraints});
      config = evolve_cdpre(env, clocks, a.t);
      break;
    }
  }
  write_configuration_csv(os, config, stamp);
  return kExitOk;
}

json load_config_json(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    if (path.empty()) continue;
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read config file: " + path);
    json j = json::parse(is, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw ConfigError("config file is not a JSON object");
    return j;
  }
  return json::object();
}

}  // namespace

int run(const std::vector<std::string>& args) {
  try {
    json cfg = load_config_json(args);

    CLI::App app{"Constrained-degree percolation in random environment: "
                 "simulation and verification toolkit"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file; flags override its values");

    ThetaArgs theta;
    {
      OptionBag o(app.add_subcommand("theta", "Connection probability table"), cfg);
      o.add("--model", theta.model, "cdpre | intermediate | bernoulli");
      o.add("--rho", theta.rho, "constraint law rho0,rho1,rho2,rho3");
      o.add("--t", theta.t, "time in [0,1]");
      o.add("--n", theta.n_list, "comma list of radii");
      o.add("--reps", theta.reps, "replicates");
      o.add("--pad", theta.pad, "window padding; -1 = model default");
      o.add("--seed", theta.seed, "master seed");
      o.add("--threads", theta.threads, "worker threads; 0 = hardware");
      o.add("--out", theta.out, "output CSV path (default stdout)");
    }
    DominanceArgs dom;
    {
      OptionBag o(app.add_subcommand("dominance", "Pathwise coupling violation counts"), cfg);
      o.add("--rho", dom.rho, "constraint law");
      o.add("--t", dom.t_list, "comma list of times");
      o.add("--n", dom.n, "window radius");
      o.add("--reps", dom.reps, "replicates");
      o.add("--seed", dom.seed, "master seed");
      o.add("--threads", dom.threads, "worker threads");
      o.add_flag("--allow-rho0", dom.allow_rho0, "run even with rho_0 > 0");
      o.add("--out", dom.out, "output CSV path");
    }
    OracleArgs oracle;
    {
      OptionBag o(app.add_subcommand("oracle-check", "Monte Carlo vs exact enumeration"), cfg);
      o.add("--t", oracle.t_list, "comma list of times");
      o.add("--reps", oracle.reps, "replicates per fixture");
      o.add("--seed", oracle.seed, "master seed");
      o.add("--threads", oracle.threads, "worker threads");
      o.add("--fixture", oracle.fixture, "run a single fixture by name");
      o.add("--out", oracle.out, "JSON report path");
    }
    MzoneArgs mzone;
    {
      OptionBag o(app.add_subcommand("mzone", "Influence zone escape frequency"), cfg);
      o.add("--m", mzone.m, "target radius");
      o.add("--t", mzone.t, "time");
      o.add("--reps", mzone.reps, "replicates");
      o.add("--seed", mzone.seed, "master seed");
      o.add("--threads", mzone.threads, "worker threads");
      o.add("--out", mzone.out, "output CSV path");
    }
    CovArgs cov;
    {
      OptionBag o(app.add_subcommand("covariance", "Decoupling covariance estimate"), cfg);
      o.add("--model", cov.model, "model");
      o.add("--rho", cov.rho, "constraint law");
      o.add("--m", cov.m, "inner radius");
      o.add("--n", cov.n, "outer radius (needs 2m < n)");
      o.add("--w", cov.w, "second source 'x,y'; default (2m,0)");
      o.add("--t", cov.t, "time");
      o.add("--reps", cov.reps, "replicates");
      o.add("--pad", cov.pad, "window padding; -1 = model default");
      o.add("--seed", cov.seed, "master seed");
      o.add("--threads", cov.threads, "worker threads");
      o.add("--out", cov.out, "output CSV path");
    }
    OsssArgs osss;
    {
      OptionBag o(app.add_subcommand("osss", "Revealment/influence variance inequality"), cfg);
      o.add("--t", osss.t, "time");
      o.add("--n", osss.n, "event radius");
      o.add("--reps", osss.reps, "replicates");
      o.add("--seed", osss.seed, "master seed");
      o.add("--threads", osss.threads, "worker threads");
      o.add("--out", osss.out, "summary JSON path");
      o.add("--delta-out", osss.delta_out, "revealment CSV path");
      o.add("--influence-out", osss.influence_out, "influence CSV path");
    }
    ScanArgs scan;
    {
      OptionBag o(app.add_subcommand("scan", "Threshold scan with 0.5 crossing"), cfg);
      o.add("--model", scan.model, "model");
      o.add("--rho", scan.rho, "constraint law");
      o.add("--n", scan.n, "radius");
      o.add("--t-grid", scan.t_grid, "comma list or lo:hi:step");
      o.add("--reps", scan.reps, "replicates");
      o.add("--pad", scan.pad, "window padding; -1 = model default");
      o.add("--seed", scan.seed, "master seed");
      o.add("--threads", scan.threads, "worker threads");
      o.add("--out", scan.out, "output CSV path");
    }
    BlocksArgs blocks;
    {
      OptionBag o(app.add_subcommand("blocks", "Dump block geometry as JSON"), cfg);
      o.add("--r0", blocks.r0, "first block row");
      o.add("--r1", blocks.r1, "last block row");
      o.add("--s0", blocks.s0, "first block column");
      o.add("--s1", blocks.s1, "last block column");
      o.add("--out", blocks.out, "output JSON path");
    }
    FitArgs fit;
    {
      OptionBag o(app.add_subcommand("fit", "Decay-law fit of a theta table"), cfg);
      o.add("--input", fit.input, "theta CSV produced by the theta subcommand");
      o.add("--family", fit.family, "pure | stretched");
      o.add("--epsilon", fit.epsilon, "stretching exponent offset");
      o.add("--n-lo", fit.n_lo, "fit range lower bound");
      o.add("--n-hi", fit.n_hi, "fit range upper bound");
      o.add("--out", fit.out, "output JSON path");
    }
    DumpArgs dump;
    {
      OptionBag o(app.add_subcommand("dump", "Dump a configuration, environment, or clock field"),
                  cfg);
      o.add("--what", dump.what, "config | env | clocks");
      o.add("--model", dump.model, "model (for config)");
      o.add("--rho", dump.rho, "constraint law");
      o.add("--t", dump.t, "time (for config)");
      o.add("--n", dump.n, "window radius");
      o.add("--pad", dump.pad, "window padding; -1 = model default");
      o.add("--seed", dump.seed, "master seed");
      o.add("--rep", dump.rep, "replicate index");
      o.add("--out", dump.out, "output path");
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
      app.parse(reversed);
    } catch (const CLI::ParseError& e) {
      int code = app.exit(e);
      return code == 0 ? kExitOk : kExitConfig;
    }

    if (app.got_subcommand("theta")) return cmd_theta(theta);
    if (app.got_subcommand("dominance")) return cmd_dominance(dom);
    if (app.got_subcommand("oracle-check")) return cmd_oracle_check(oracle);
    if (app.got_subcommand("mzone")) return cmd_mzone(mzone);
    if (app.got_subcommand("covariance")) return cmd_covariance(cov);
    if (app.got_subcommand("osss")) return cmd_osss(osss);
    if (app.got_subcommand("scan")) return cmd_scan(scan);
    if (app.got_subcommand("blocks")) return cmd_blocks(blocks);
    if (app.got_subcommand("fit")) return cmd_fit(fit);
    if (app.got_subcommand("dump")) return cmd_dump(dump);
    return kExitConfig;
  } catch (const CheckFailed& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace cdpre::cli
