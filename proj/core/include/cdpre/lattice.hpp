#pragma once

// Square-lattice geometry: vertices, canonical edges, boxes with their
// boundaries, and the 6x5 block tiling with its distinguished edge g and
// surrounding edge set A.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace cdpre {

struct Vertex {
  int x = 0;
  int y = 0;
  friend constexpr bool operator==(const Vertex&, const Vertex&) = default;
  friend constexpr auto operator<=>(const Vertex&, const Vertex&) = default;
};

// Nearest neighbours on Z^2 (graph distance 1).
bool adjacent(Vertex u, Vertex v);

// |v|_inf, the box norm used for B(n) membership.
int chebyshev_norm(Vertex v);

// Endpoints are stored with the lexicographically smaller one first, so an
// edge has exactly one representation and can key sorted containers.
struct Edge {
  Vertex a;
  Vertex b;
  friend constexpr bool operator==(const Edge&, const Edge&) = default;
  friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

// Canonical edge between nearest neighbours; throws std::invalid_argument
// if u and v are not adjacent.
Edge make_edge(Vertex u, Vertex v);

struct VertexHash {
  std::size_t operator()(const Vertex& v) const noexcept;
};
struct EdgeHash {
  std::size_t operator()(const Edge& e) const noexcept;
};

using VertexList = std::vector<Vertex>;
using EdgeList = std::vector<Edge>;

// Sort + dedupe, in place.
void canonicalize(VertexList& vs);
void canonicalize(EdgeList& es);

// B(radius) + center, i.e. vertex set [-radius, radius]^2 translated.
struct Box {
  int radius = 0;
  Vertex center{};

  bool contains(Vertex v) const;
  VertexList vertices() const;  // sorted
};

// Vertices of the region adjacent to at least one vertex outside it.
VertexList vertex_boundary(const VertexList& region);

// Boundary of a box. For radius 0 this is the singleton {center}, which keeps
// origin-to-boundary connectivity total (the n = 0 event is trivially true).
VertexList boundary(const Box& box);

// All lattice edges with both endpoints in the region; sorted canonically.
EdgeList edges_in(const VertexList& region);

// Edges <u,v> with u inside the region and v outside; sorted canonically.
EdgeList external_edge_boundary(const VertexList& region);

// ---------------------------------------------------------------------------
// Block tiling: Lambda_{r,s} spans x in [6r, 6r+5], y in [5s, 5s+4], so the
// blocks partition Z^2. Each block carries one distinguished interior edge g
// and the six edges A joining g's endpoints to the rest of the inner
// rectangle Lambda_bar.

struct BlockIndex {
  int r = 0;
  int s = 0;
  friend constexpr bool operator==(const BlockIndex&, const BlockIndex&) = default;
  friend constexpr auto operator<=>(const BlockIndex&, const BlockIndex&) = default;
};

struct BlockGeometry {
  BlockIndex index;
  VertexList lambda;      // 30 vertices, the full 6x5 block
  VertexList lambda_bar;  // 12 vertices, the inner 4x3 rectangle
  Edge g;
  EdgeList a_set;  // 6 edges of E(lambda_bar) with one endpoint on its boundary
  EdgeList b_set;  // the remaining 42 edges of E(lambda)
};

BlockIndex block_of_vertex(Vertex v);

// One index if both endpoints share a block, else the two straddled blocks.
std::vector<BlockIndex> block_of_edge(const Edge& e);

BlockGeometry block_geometry(int r, int s);

// The g edge of block (r,s) without building the full geometry.
Edge block_g_edge(int r, int s);

// True iff e is the g edge of the block containing it.
bool is_g_edge(const Edge& e);

// Blocks whose Lambda intersects the box / region; lexicographically sorted.
std::vector<BlockIndex> blocks_intersecting(const Box& box);
std::vector<BlockIndex> blocks_intersecting(const VertexList& region);

// Union of Lambda over all blocks meeting the region (block-aligned
// enlargement); sorted.
VertexList block_closure(const VertexList& region);

}  // namespace cdpre
