#include "cdpre/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cdpre {

ConstraintDist::ConstraintDist(std::array<double, 4> rho) : rho_(rho) {
  double sum = 0.0;
  for (double p : rho_) {
    if (!(p >= 0.0)) throw std::invalid_argument("ConstraintDist: negative or NaN probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("ConstraintDist: probabilities must sum to 1");
  for (double& p : rho_) p /= sum;
  double c = 0.0;
  for (int j = 0; j < 4; ++j) {
    c += rho_[j];
    cum_[j] = c;
  }
  cum_[3] = 1.0;
}

int ConstraintDist::quantile(double u) const {
  for (int j = 0; j < 3; ++j)
    if (u <= cum_[j]) return j;
  return 3;
}

bool Environment::has(Vertex v) const {
  return std::binary_search(region.begin(), region.end(), v);
}

int Environment::at(Vertex v) const {
  auto it = std::lower_bound(region.begin(), region.end(), v);
  if (it == region.end() || *it != v) throw std::out_of_range("Environment::at: vertex has no constraint");
  return kappa[static_cast<std::size_t>(it - region.begin())];
}

ClockField::ClockField(EdgeList edges, std::vector<double> values)
    : edges_(std::move(edges)), values_(std::move(values)) {
  if (edges_.size() != values_.size())
    throw std::invalid_argument("ClockField: edge/value size mismatch");
  if (!std::is_sorted(edges_.begin(), edges_.end()))
    throw std::invalid_argument("ClockField: edges must be in canonical sorted order");
  for (double u : values_)
    if (!(u > 0.0) || u > 1.0) throw std::invalid_argument("ClockField: value outside (0,1]");
}

int ClockField::index_of(const Edge& e) const {
  auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
  if (it == edges_.end() || *it != e) return -1;
  return static_cast<int>(it - edges_.begin());
}

double ClockField::at(const Edge& e) const {
  int i = index_of(e);
  if (i < 0) throw std::out_of_range("ClockField::at: edge not in field");
  return values_[static_cast<std::size_t>(i)];
}

bool ClockField::covers(const EdgeList& es) const {
  for (const Edge& e : es)
    if (index_of(e) < 0) return false;
  return true;
}

void ClockField::set(const Edge& e, double value) {
  int i = index_of(e);
  if (i < 0) throw std::out_of_range("ClockField::set: edge not in field");
  if (!(value > 0.0) || value > 1.0) throw std::invalid_argument("ClockField::set: value outside (0,1]");
  values_[static_cast<std::size_t>(i)] = value;
}

double clock_value(const SeedSpec& spec, const Edge& e) {
  return uniform_open_closed(stream_key(spec), edge_key(e));
}

Environment sample_environment(const ConstraintDist& dist, const VertexList& region,
                               const SeedSpec& seed) {
  Environment env;
  env.region = region;
  canonicalize(env.region);
  env.kappa.resize(env.region.size());
  const std::uint64_t key = stream_key(seed);
  for (std::size_t i = 0; i < env.region.size(); ++i) {
    double u = uniform_open_closed(key, vertex_key(env.region[i]));
    env.kappa[i] = static_cast<std::uint8_t>(dist.quantile(u));
  }
  return env;
}

ClockField sample_clocks(const EdgeList& region_edges, const SeedSpec& seed) {
  EdgeList edges = region_edges;
  canonicalize(edges);
  std::vector<double> values(edges.size());
  const std::uint64_t key = stream_key(seed);
  for (std::size_t i = 0; i < edges.size(); ++i) values[i] = uniform_open_closed(key, edge_key(edges[i]));
  return ClockField(std::move(edges), std::move(values));
}

ClockField resample_edge(const ClockField& clocks, const Edge& e, const SeedSpec& seed) {
  ClockField out = clocks;
  out.set(e, clock_value(seed, e));
  return out;
}

}  // namespace cdpre
