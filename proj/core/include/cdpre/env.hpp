#pragma once

// Random environment: per-vertex degree constraints drawn from a four-point
// law, and per-edge uniform attempt clocks on (0,1].

#include <array>
#include <cstdint>
#include <vector>

#include "cdpre/lattice.hpp"
#include "cdpre/rng.hpp"

namespace cdpre {

class ConstraintDist {
 public:
  // Validates: entries nonnegative, sum within 1e-12 of 1, then renormalizes.
  // Throws std::invalid_argument otherwise.
  explicit ConstraintDist(std::array<double, 4> rho);
  ConstraintDist() : ConstraintDist({0.0, 0.0, 0.0, 1.0}) {}

  const std::array<double, 4>& rho() const { return rho_; }
  double rho0() const { return rho_[0]; }

  // Inverse CDF at u in (0,1].
  int quantile(double u) const;

 private:
  std::array<double, 4> rho_;
  std::array<double, 4> cum_;
};

struct Environment {
  VertexList region;                 // sorted canonically
  std::vector<std::uint8_t> kappa;   // aligned with region

  bool has(Vertex v) const;
  int at(Vertex v) const;  // throws std::out_of_range if absent
};

class ClockField {
 public:
  ClockField() = default;
  // Edges are canonicalized; values must lie in (0,1] and stay aligned with
  // the sorted edge order the caller supplied.
  ClockField(EdgeList edges, std::vector<double> values);

  const EdgeList& edges() const { return edges_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return edges_.size(); }

  int index_of(const Edge& e) const;  // -1 if absent
  double at(const Edge& e) const;     // throws std::out_of_range if absent
  bool covers(const EdgeList& es) const;

  void set(const Edge& e, double value);  // throws if absent or out of range

 private:
  EdgeList edges_;
  std::vector<double> values_;
};

// The clock value the counter-based field assigns to one edge.
double clock_value(const SeedSpec& spec, const Edge& e);

// i.i.d. constraints over the region; bit-identical for identical seeds.
Environment sample_environment(const ConstraintDist& dist, const VertexList& region,
                               const SeedSpec& seed);

// i.i.d. uniforms on (0,1] over the edges; bit-identical for identical seeds.
ClockField sample_clocks(const EdgeList& region_edges, const SeedSpec& seed);

// Copy of `clocks` with U_e redrawn independently from the given stream.
// Throws std::out_of_range if e is not in the field.
ClockField resample_edge(const ClockField& clocks, const Edge& e, const SeedSpec& seed);

}  // namespace cdpre
