#include "cdpre/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "cdpre/parallel.hpp"
#include "sim_common.hpp"

namespace cdpre {

namespace {

// Region view of a configuration with open bits aligned to region edge ids.
struct ConfigView {
  LatticeRegion region;
  std::vector<std::uint8_t> open;
};

ConfigView config_view(const Configuration& config) {
  VertexList vs;
  vs.reserve(config.edges.size() * 2);
  for (const Edge& e : config.edges) {
    vs.push_back(e.a);
    vs.push_back(e.b);
  }
  ConfigView view{LatticeRegion(std::move(vs)), {}};
  view.open.assign(static_cast<std::size_t>(view.region.edge_count()), 0);
  for (std::size_t i = 0; i < config.edges.size(); ++i) {
    if (!config.open[i]) continue;
    int id = view.region.edge_id(config.edges[i]);
    view.open[static_cast<std::size_t>(id)] = 1;
  }
  return view;
}

bool reaches_norm_outside(const LatticeRegion& region, std::span<const std::uint8_t> open,
                          Vertex from, int n, int min_norm, BfsScratch& scratch) {
  if (chebyshev_norm(from) >= n) return true;
  if (chebyshev_norm(from) < min_norm) return false;
  int start = region.vertex_id(from);
  if (start < 0) return false;
  scratch.reset(region.vertex_count());
  scratch.queue.clear();
  scratch.visit(start);
  scratch.queue.push_back(start);
  for (std::size_t head = 0; head < scratch.queue.size(); ++head) {
    int v = scratch.queue[head];
    for (const LatticeRegion::Arc& a : region.arcs(v)) {
      if (!open[static_cast<std::size_t>(a.edge)] || scratch.seen(a.to)) continue;
      int norm = chebyshev_norm(region.vertex(a.to));
      if (norm < min_norm) continue;
      if (norm >= n) return true;
      scratch.visit(a.to);
      scratch.queue.push_back(a.to);
    }
  }
  return false;
}

double binomial_stderr(double p, int n) { return std::sqrt(p * (1.0 - p) / n); }

}  // namespace

ClusterReport cluster_of(const Configuration& config, Vertex v,
                         const std::vector<int>& query_radii) {
  ConfigView view = config_view(config);
  int start = view.region.vertex_id(v);
  if (start < 0) throw std::out_of_range("cluster_of: vertex outside configuration region");

  ClusterReport report;
  report.root = v;
  std::vector<std::int32_t> dist(static_cast<std::size_t>(view.region.vertex_count()), -1);
  std::vector<std::int32_t> queue;
  dist[static_cast<std::size_t>(start)] = 0;
  queue.push_back(start);
  int max_norm = chebyshev_norm(v);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    int u = queue[static_cast<std::size_t>(head)];
    for (const LatticeRegion::Arc& a : view.region.arcs(u)) {
      if (!view.open[static_cast<std::size_t>(a.edge)] || dist[static_cast<std::size_t>(a.to)] >= 0)
        continue;
      dist[static_cast<std::size_t>(a.to)] = dist[static_cast<std::size_t>(u)] + 1;
      queue.push_back(a.to);
      report.radius = std::max(report.radius, dist[static_cast<std::size_t>(a.to)]);
      max_norm = std::max(max_norm, chebyshev_norm(view.region.vertex(a.to)));
    }
  }
  report.size = static_cast<int>(queue.size());
  for (int n : query_radii) report.reached.emplace_back(n, max_norm >= n);
  return report;
}

bool connects(const Configuration& config, Vertex v, int n) {
  ConfigView view = config_view(config);
  if (view.region.vertex_id(v) < 0 && chebyshev_norm(v) < n)
    throw std::out_of_range("connects: vertex outside configuration region");
  if (n > 0) {
    const Vertex probes[4] = {{n, 0}, {-n, 0}, {0, n}, {0, -n}};
    for (const Vertex& p : probes)
      if (view.region.vertex_id(p) < 0)
        throw std::out_of_range("connects: region does not contain B(n)");
  }
  BfsScratch scratch;
  return reaches_norm(view.region, view.open, v, n, scratch);
}

bool connects_outside(const Configuration& config, Vertex v, int n, int min_norm) {
  ConfigView view = config_view(config);
  BfsScratch scratch;
  return reaches_norm_outside(view.region, view.open, v, n, min_norm, scratch);
}

InfluenceZone influence_zone(const ClockField& clocks, double t, const VertexList& source) {
  InfluenceZone zone;
  zone.source = source;
  canonicalize(zone.source);
  zone.t = t;

  VertexList vs;
  vs.reserve(clocks.size() * 2);
  for (const Edge& e : clocks.edges()) {
    vs.push_back(e.a);
    vs.push_back(e.b);
  }
  LatticeRegion region(std::move(vs));
  std::vector<double> value(static_cast<std::size_t>(region.edge_count()),
                            std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < clocks.size(); ++i)
    value[static_cast<std::size_t>(region.edge_id(clocks.edges()[i]))] = clocks.values()[i];

  // budget[v] = largest clock usable to continue from v; sources start at t.
  std::vector<double> budget(static_cast<std::size_t>(region.vertex_count()),
                             -std::numeric_limits<double>::infinity());
  std::priority_queue<std::pair<double, int>> heap;
  for (const Vertex& s : zone.source) {
    int id = region.vertex_id(s);
    if (id < 0) continue;  // isolated source: still a member, never expands
    budget[static_cast<std::size_t>(id)] = t;
    heap.emplace(t, id);
  }
  while (!heap.empty()) {
    auto [b, v] = heap.top();
    heap.pop();
    if (b < budget[static_cast<std::size_t>(v)]) continue;
    for (const LatticeRegion::Arc& a : region.arcs(v)) {
      double u = value[static_cast<std::size_t>(a.edge)];
      if (!(u < b)) continue;  // strict decrease; NaN never qualifies
      if (u > budget[static_cast<std::size_t>(a.to)]) {
        budget[static_cast<std::size_t>(a.to)] = u;
        heap.emplace(u, a.to);
      }
    }
  }
  for (int i = 0; i < region.vertex_count(); ++i)
    if (budget[static_cast<std::size_t>(i)] > -std::numeric_limits<double>::infinity())
      zone.members.push_back(region.vertex(i));
  for (const Vertex& s : zone.source)
    if (region.vertex_id(s) < 0) zone.members.push_back(s);
  canonicalize(zone.members);
  return zone;
}

MzoneEstimate mzone_escape_frequency(int m, double t, int replicates, std::uint64_t master_seed,
                                     int threads) {
  if (m < 1) throw std::invalid_argument("mzone_escape_frequency: m must be >= 1");
  if (replicates < 1) throw std::invalid_argument("mzone_escape_frequency: replicates must be >= 1");

  // The first passage to norm m happens inside B(m), so clocks on E(B(m))
  // determine the event.
  LatticeRegion region(Box{m}.vertices());
  std::vector<std::uint64_t> ekeys;
  ekeys.reserve(static_cast<std::size_t>(region.edge_count()));
  for (const Edge& e : region.edges()) ekeys.push_back(edge_key(e));
  const int origin = region.vertex_id({0, 0});

  std::vector<std::uint8_t> hit(static_cast<std::size_t>(replicates), 0);
  parallel_chunks(replicates, threads, [&](int, std::int64_t lo, std::int64_t hi) {
    std::vector<double> value(ekeys.size());
    std::vector<double> budget(static_cast<std::size_t>(region.vertex_count()));
    std::priority_queue<std::pair<double, int>> heap;
    for (std::int64_t rep = lo; rep < hi; ++rep) {
      const std::uint64_t key =
          stream_key({master_seed, static_cast<std::uint64_t>(rep), Stream::clocks});
      for (std::size_t i = 0; i < ekeys.size(); ++i) value[i] = uniform_open_closed(key, ekeys[i]);
      std::fill(budget.begin(), budget.end(), -1.0);
      budget[static_cast<std::size_t>(origin)] = t;
      heap.emplace(t, origin);
      bool escaped = false;
      while (!heap.empty()) {
        auto [b, v] = heap.top();
        heap.pop();
        if (b < budget[static_cast<std::size_t>(v)]) continue;
        for (const LatticeRegion::Arc& a : region.arcs(v)) {
          double u = value[static_cast<std::size_t>(a.edge)];
          if (!(u < b) || u <= budget[static_cast<std::size_t>(a.to)]) continue;
          if (chebyshev_norm(region.vertex(a.to)) >= m) {
            escaped = true;
            break;
          }
          budget[static_cast<std::size_t>(a.to)] = u;
          heap.emplace(u, a.to);
        }
        if (escaped) break;
      }
      while (!heap.empty()) heap.pop();
      hit[static_cast<std::size_t>(rep)] = escaped ? 1 : 0;
    }
  });

  MzoneEstimate est;
  est.m = m;
  est.t = t;
  est.replicates = replicates;
  long hits = 0;
  for (std::uint8_t h : hit) hits += h;
  est.frequency = static_cast<double>(hits) / replicates;
  est.stderr_ = binomial_stderr(est.frequency, replicates);
  double bound = 4.0;
  for (int i = 1; i < m; ++i) bound *= 3.0;
  for (int i = 2; i <= m; ++i) bound /= i;
  est.bound = std::min(1.0, bound);
  return est;
}

CovarianceEstimate covariance_pair(Model model, const ConstraintDist& dist, int m, int n, Vertex w,
                                   double t, int replicates, std::uint64_t master_seed, int pad,
                                   int threads) {
  if (!(2 * m < n)) throw std::invalid_argument("covariance_pair: need 2m < n");
  if (chebyshev_norm(w) != 2 * m)
    throw std::invalid_argument("covariance_pair: w must lie on the boundary of B(2m)");
  if (replicates < 2) throw std::invalid_argument("covariance_pair: need at least 2 replicates");

  detail::ReplicateSim sim(model, dist, detail::model_window(model, n, pad), master_seed);
  std::vector<std::uint8_t> xs(static_cast<std::size_t>(replicates)),
      ys(static_cast<std::size_t>(replicates));
  parallel_chunks(replicates, threads, [&](int, std::int64_t lo, std::int64_t hi) {
    detail::ReplicateSim::Scratch scratch;
    for (std::int64_t rep = lo; rep < hi; ++rep) {
      sim.realize(static_cast<std::uint64_t>(rep), t, scratch);
      xs[static_cast<std::size_t>(rep)] =
          reaches_norm(sim.region(), scratch.open, {0, 0}, m, scratch.bfs) ? 1 : 0;
      ys[static_cast<std::size_t>(rep)] =
          reaches_norm_outside(sim.region(), scratch.open, w, n, 2 * m, scratch.bfs) ? 1 : 0;
    }
  });

  long sx = 0, sy = 0, sxy = 0;
  for (int i = 0; i < replicates; ++i) {
    sx += xs[static_cast<std::size_t>(i)];
    sy += ys[static_cast<std::size_t>(i)];
    sxy += xs[static_cast<std::size_t>(i)] & ys[static_cast<std::size_t>(i)];
  }
  const double r = replicates;
  const double mx = sx / r, my = sy / r;
  CovarianceEstimate est;
  est.m = m;
  est.n = n;
  est.w = w;
  est.t = t;
  est.replicates = replicates;
  est.cov_hat = (sxy - r * mx * my) / (r - 1.0);
  double sz2 = 0.0;
  for (int i = 0; i < replicates; ++i) {
    double z = (xs[static_cast<std::size_t>(i)] - mx) * (ys[static_cast<std::size_t>(i)] - my);
    sz2 += (z - est.cov_hat) * (z - est.cov_hat);
  }
  est.stderr_ = std::sqrt(sz2 / (r - 1.0)) / std::sqrt(r);
  est.bound = m * std::exp(-0.5 * m * std::log(static_cast<double>(m)));
  est.within_bound = std::abs(est.cov_hat) - 3.0 * est.stderr_ <= est.bound;
  return est;
}

}  // namespace cdpre
