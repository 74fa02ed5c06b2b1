#pragma once

// Dense indexing of a finite lattice region: sorted vertex/edge ids plus a
// CSR adjacency, so per-replicate inner loops (evolution sweeps, BFS) run on
// flat integer arrays instead of hashed coordinates.

#include <cstdint>
#include <span>
#include <vector>

#include "cdpre/lattice.hpp"

namespace cdpre {

class LatticeRegion {
 public:
  LatticeRegion() = default;
  explicit LatticeRegion(VertexList vertices);

  const VertexList& vertices() const { return verts_; }
  const EdgeList& edges() const { return edges_; }
  int vertex_count() const { return static_cast<int>(verts_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  int vertex_id(Vertex v) const;       // -1 if absent
  int edge_id(const Edge& e) const;    // -1 if absent
  Vertex vertex(int id) const { return verts_[static_cast<std::size_t>(id)]; }
  const Edge& edge(int id) const { return edges_[static_cast<std::size_t>(id)]; }

  struct Arc {
    std::int32_t edge;
    std::int32_t to;
  };
  std::span<const Arc> arcs(int vertex_id) const {
    return {arcs_.data() + arc_start_[static_cast<std::size_t>(vertex_id)],
            arcs_.data() + arc_start_[static_cast<std::size_t>(vertex_id) + 1]};
  }

 private:
  VertexList verts_;
  EdgeList edges_;
  std::vector<std::int32_t> arc_start_;
  std::vector<Arc> arcs_;
};

// Reusable epoch-stamped BFS scratch; one instance per thread.
struct BfsScratch {
  std::vector<std::int32_t> mark;
  std::vector<std::int32_t> queue;
  std::int32_t epoch = 0;

  void reset(int vertex_count) {
    if (static_cast<int>(mark.size()) < vertex_count) mark.assign(static_cast<std::size_t>(vertex_count), 0);
    ++epoch;
  }
  bool seen(int v) const { return mark[static_cast<std::size_t>(v)] == epoch; }
  void visit(int v) { mark[static_cast<std::size_t>(v)] = epoch; }
};

// True iff an open path from `from` reaches chebyshev norm >= n (about the
// origin). A start vertex already at norm >= n counts as connected.
bool reaches_norm(const LatticeRegion& region, std::span<const std::uint8_t> open, Vertex from,
                  int n, BfsScratch& scratch);

// Largest chebyshev norm reached from `from` through open edges; -1 if the
// start vertex is outside the region.
int max_norm_reached(const LatticeRegion& region, std::span<const std::uint8_t> open, Vertex from,
                     BfsScratch& scratch);

}  // namespace cdpre
