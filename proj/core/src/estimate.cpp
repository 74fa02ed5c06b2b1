#include "cdpre/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cdpre/parallel.hpp"
#include "cdpre/region.hpp"
#include "sim_common.hpp"

namespace cdpre {

namespace {

double binomial_stderr(double p, double n) { return std::sqrt(p * (1.0 - p) / n); }

}  // namespace

const ThetaRow* ThetaTable::find(int n) const {
  auto it = std::lower_bound(rows.begin(), rows.end(), n,
                             [](const ThetaRow& r, int v) { return r.n < v; });
  if (it == rows.end() || it->n != n) return nullptr;
  return &*it;
}

ThetaTable theta_table(Model model, const ConstraintDist& dist, double t,
                       const std::vector<int>& n_list, int replicates, int pad,
                       std::uint64_t master_seed, int threads) {
  if (replicates < 1) throw std::invalid_argument("theta_table: replicates must be >= 1");
  if (pad < 0) throw std::invalid_argument("theta_table: pad must be >= 0");
  std::vector<int> ns = n_list;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  if (ns.empty() || ns.front() < 0) throw std::invalid_argument("theta_table: invalid n list");

  ThetaTable table;
  table.model = model;
  table.t = t;
  table.master_seed = master_seed;

  for (int n : ns) {
    detail::ReplicateSim sim(model, dist, detail::model_window(model, n, pad), master_seed);
    std::vector<std::uint8_t> hit(static_cast<std::size_t>(replicates), 0);
    parallel_chunks(replicates, threads, [&](int, std::int64_t lo, std::int64_t hi) {
      detail::ReplicateSim::Scratch scratch;
      for (std::int64_t rep = lo; rep < hi; ++rep) {
        sim.realize(static_cast<std::uint64_t>(rep), t, scratch);
        hit[static_cast<std::size_t>(rep)] =
            reaches_norm(sim.region(), scratch.open, {0, 0}, n, scratch.bfs) ? 1 : 0;
      }
    });
    long hits = 0;
    for (std::uint8_t h : hit) hits += h;
    ThetaRow row;
    row.n = n;
    row.replicates = replicates;
    row.pad = pad;
    row.theta_hat = static_cast<double>(hits) / replicates;
    row.stderr_ = binomial_stderr(row.theta_hat, replicates);
    if (hits == 0) row.zero_upper95 = 3.0 / replicates;
    table.rows.push_back(row);
  }
  return table;
}

SusceptibilityEstimate susceptibility(Model model, const ConstraintDist& dist, double t, int box_n,
                                      int replicates, std::uint64_t master_seed, int pad,
                                      int threads) {
  if (box_n < 1) throw std::invalid_argument("susceptibility: box_n must be >= 1");
  if (replicates < 1) throw std::invalid_argument("susceptibility: replicates must be >= 1");

  detail::ReplicateSim sim(model, dist, detail::model_window(model, box_n, pad), master_seed);
  const LatticeRegion& region = sim.region();
  // Truncated cluster: count only vertices reached inside B(box_n) through
  // edges that stay inside B(box_n).
  std::vector<std::uint8_t> in_box(static_cast<std::size_t>(region.edge_count()), 0);
  for (int eid = 0; eid < region.edge_count(); ++eid) {
    const Edge& e = region.edge(eid);
    in_box[static_cast<std::size_t>(eid)] =
        chebyshev_norm(e.a) <= box_n && chebyshev_norm(e.b) <= box_n ? 1 : 0;
  }
  std::vector<std::int32_t> size(static_cast<std::size_t>(replicates), 0);
  parallel_chunks(replicates, threads, [&](int, std::int64_t lo, std::int64_t hi) {
    detail::ReplicateSim::Scratch scratch;
    for (std::int64_t rep = lo; rep < hi; ++rep) {
      sim.realize(static_cast<std::uint64_t>(rep), t, scratch);
      scratch.bfs.reset(region.vertex_count());
      scratch.bfs.queue.clear();
      int start = region.vertex_id({0, 0});
      scratch.bfs.visit(start);
      scratch.bfs.queue.push_back(start);
      for (std::size_t head = 0; head < scratch.bfs.queue.size(); ++head) {
        int v = scratch.bfs.queue[head];
        for (const LatticeRegion::Arc& a : region.arcs(v)) {
          if (!scratch.open[static_cast<std::size_t>(a.edge)] ||
              !in_box[static_cast<std::size_t>(a.edge)] || scratch.bfs.seen(a.to))
            continue;
          scratch.bfs.visit(a.to);
          scratch.bfs.queue.push_back(a.to);
        }
      }
      size[static_cast<std::size_t>(rep)] = static_cast<std::int32_t>(scratch.bfs.queue.size());
    }
  });

  long long sum = 0, sum2 = 0;
  for (std::int32_t s : size) {
    sum += s;
    sum2 += static_cast<long long>(s) * s;
  }
  SusceptibilityEstimate est;
  est.box_n = box_n;
  est.t = t;
  est.replicates = replicates;
  est.mean_size = static_cast<double>(sum) / replicates;
  if (replicates > 1) {
    double var = (static_cast<double>(sum2) - static_cast<double>(sum) * sum / replicates) /
                 (replicates - 1.0);
    est.stderr_ = std::sqrt(std::max(0.0, var) / replicates);
  }
  return est;
}

SimonLiebCheck simon_lieb_check(const ThetaTable& table, int n, int stage_k) {
  if (stage_k < 1) throw std::invalid_argument("simon_lieb_check: stage must be >= 1");
  SimonLiebCheck check;
  check.n = n;
  check.stage_k = stage_k;
  const double exponent = static_cast<double>(stage_k) / (stage_k + 1);
  check.scale = static_cast<int>(std::floor(std::pow(static_cast<double>(n), exponent)));
  if (check.scale < 1 || check.scale >= n)
    throw std::invalid_argument("simon_lieb_check: degenerate scale for this n and stage");
  const ThetaRow* row_n = table.find(n);
  const ThetaRow* row_scale = table.find(check.scale);
  const ThetaRow* row_rest = table.find(n - check.scale);
  if (!row_n || !row_scale || !row_rest)
    throw std::invalid_argument("simon_lieb_check: table is missing a required scale");
  check.theta_n_hat = row_n->theta_hat;
  const double c = 8.0 * check.scale;
  check.product_term = c * row_scale->theta_hat * row_rest->theta_hat;
  check.margin = check.theta_n_hat - check.product_term;
  const double var = row_n->stderr_ * row_n->stderr_ +
                     c * c * (row_rest->theta_hat * row_scale->stderr_) *
                         (row_rest->theta_hat * row_scale->stderr_) +
                     c * c * (row_scale->theta_hat * row_rest->stderr_) *
                         (row_scale->theta_hat * row_rest->stderr_);
  check.margin_stderr = std::sqrt(var);
  check.c3_term = check.scale * std::exp(-0.5 * check.scale * std::log(static_cast<double>(check.scale)));
  return check;
}

DecayFit decay_fit(const ThetaTable& table, DecayFamily family, double epsilon, int n_lo,
                   int n_hi) {
  DecayFit fit;
  fit.family = family;
  fit.epsilon = family == DecayFamily::stretched ? epsilon : 0.0;
  fit.n_lo = n_lo;
  fit.n_hi = n_hi;

  std::vector<double> xs, ys;
  for (const ThetaRow& row : table.rows) {
    if (row.n < n_lo || row.n > n_hi) continue;
    if (row.theta_hat <= 0.0) {
      fit.skipped_zero_rows.push_back(row.n);
      continue;
    }
    double x = family == DecayFamily::stretched
                   ? std::pow(static_cast<double>(row.n), 1.0 - epsilon)
                   : static_cast<double>(row.n);
    xs.push_back(x);
    ys.push_back(std::log(row.theta_hat));
  }
  const std::size_t m = xs.size();
  if (m < 3) throw std::invalid_argument("decay_fit: fewer than 3 usable rows in range");

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = m * sxx - sx * sx;
  const double slope = (m * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / m;
  fit.alpha_hat = -slope;

  double ss_res = 0, ss_tot = 0;
  const double ybar = sy / m;
  for (std::size_t i = 0; i < m; ++i) {
    double r = ys[i] - (intercept + slope * xs[i]);
    ss_res += r * r;
    ss_tot += (ys[i] - ybar) * (ys[i] - ybar);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  if (m > 2) {
    double s2 = ss_res / (m - 2);
    fit.alpha_stderr = std::sqrt(s2 * m / denom);
  }
  return fit;
}

ScanResult threshold_scan(Model model, const ConstraintDist& dist, int n,
                          const std::vector<double>& t_grid, int replicates,
                          std::uint64_t master_seed, int pad, int threads) {
  if (n < 1) throw std::invalid_argument("threshold_scan: n must be >= 1");
  if (replicates < 1) throw std::invalid_argument("threshold_scan: replicates must be >= 1");
  if (t_grid.empty() || !std::is_sorted(t_grid.begin(), t_grid.end()))
    throw std::invalid_argument("threshold_scan: grid must be sorted and non-empty");

  detail::ReplicateSim sim(model, dist, detail::model_window(model, n, pad), master_seed);
  const int g = static_cast<int>(t_grid.size());
  // hit[rep * g + i]; clocks shared across the grid within a replicate.
  std::vector<std::uint8_t> hit(static_cast<std::size_t>(replicates) * g, 0);
  parallel_chunks(replicates, threads, [&](int, std::int64_t lo, std::int64_t hi) {
    detail::ReplicateSim::Scratch scratch;
    for (std::int64_t rep = lo; rep < hi; ++rep) {
      sim.fill_clocks(static_cast<std::uint64_t>(rep), scratch.clocks);
      for (int i = 0; i < g; ++i) {
        sim.evolve(static_cast<std::uint64_t>(rep), t_grid[static_cast<std::size_t>(i)], scratch);
        hit[static_cast<std::size_t>(rep) * g + static_cast<std::size_t>(i)] =
            reaches_norm(sim.region(), scratch.open, {0, 0}, n, scratch.bfs) ? 1 : 0;
      }
    }
  });

  ScanResult result;
  result.model = model;
  result.n = n;
  result.master_seed = master_seed;
  result.pad = pad;
  result.replicates = replicates;
  result.t_grid = t_grid;
  result.theta.resize(static_cast<std::size_t>(g));
  result.stderr_.resize(static_cast<std::size_t>(g));
  for (int i = 0; i < g; ++i) {
    long hits = 0;
    for (int rep = 0; rep < replicates; ++rep)
      hits += hit[static_cast<std::size_t>(rep) * g + static_cast<std::size_t>(i)];
    result.theta[static_cast<std::size_t>(i)] = static_cast<double>(hits) / replicates;
    result.stderr_[static_cast<std::size_t>(i)] =
        binomial_stderr(result.theta[static_cast<std::size_t>(i)], replicates);
  }
  for (int i = 0; i + 1 < g; ++i) {
    double lo = result.theta[static_cast<std::size_t>(i)];
    double hi = result.theta[static_cast<std::size_t>(i) + 1];
    if (lo <= 0.5 && hi >= 0.5 && hi > lo) {
      result.crossed = true;
      result.crossing = t_grid[static_cast<std::size_t>(i)] +
                        (0.5 - lo) / (hi - lo) *
                            (t_grid[static_cast<std::size_t>(i) + 1] - t_grid[static_cast<std::size_t>(i)]);
      break;
    }
  }
  return result;
}

CombinatoricReport verify_block_combinatorics(int mc_replicates, std::uint64_t master_seed,
                                              int threads) {
  CombinatoricReport report;
  BlockGeometry bg = block_geometry(0, 0);
  report.block_edge_count = static_cast<int>(edges_in(bg.lambda).size());
  report.a_count = static_cast<int>(bg.a_set.size());

  // binomial(49, 6) in exact integer arithmetic
  std::uint64_t num = 1;
  for (int i = 0; i < report.a_count; ++i) num = num * static_cast<std::uint64_t>(report.block_edge_count - i) / (i + 1);
  report.c_denominator = num;
  report.p_c_exact = 1.0 / static_cast<double>(num);

  report.reduced_exact = 0.1;  // 1 / binomial(5,2)
  report.reduced_replicates = mc_replicates;
  std::vector<std::uint8_t> hit(static_cast<std::size_t>(mc_replicates), 0);
  parallel_chunks(mc_replicates, threads, [&](int, std::int64_t lo, std::int64_t hi) {
    for (std::int64_t rep = lo; rep < hi; ++rep) {
      const std::uint64_t key =
          stream_key({master_seed, static_cast<std::uint64_t>(rep), Stream::clocks});
      double u[5];
      for (int i = 0; i < 5; ++i) u[i] = uniform_open_closed(key, static_cast<std::uint64_t>(i));
      double max_fixed = std::max(u[0], u[1]);
      double min_rest = std::min(u[2], std::min(u[3], u[4]));
      hit[static_cast<std::size_t>(rep)] = max_fixed < min_rest ? 1 : 0;
    }
  });
  long hits = 0;
  for (std::uint8_t h : hit) hits += h;
  report.reduced_mc = static_cast<double>(hits) / mc_replicates;
  report.reduced_stderr = binomial_stderr(report.reduced_mc, mc_replicates);
  return report;
}

}  // namespace cdpre
