#include "cdpre/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <unordered_set>

namespace cdpre {

namespace {

// Floor division, exact for negative coordinates.
int floor_div(int a, int b) {
  int q = a / b;
  int r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return q;
}

std::uint64_t pack(Vertex v) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(v.x)) << 32) |
         static_cast<std::uint32_t>(v.y);
}

std::uint64_t scramble(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

}  // namespace

bool adjacent(Vertex u, Vertex v) {
  return std::abs(u.x - v.x) + std::abs(u.y - v.y) == 1;
}

int chebyshev_norm(Vertex v) { return std::max(std::abs(v.x), std::abs(v.y)); }

Edge make_edge(Vertex u, Vertex v) {
  if (!adjacent(u, v)) throw std::invalid_argument("make_edge: endpoints are not nearest neighbours");
  if (v < u) std::swap(u, v);
  return Edge{u, v};
}

std::size_t VertexHash::operator()(const Vertex& v) const noexcept {
  return static_cast<std::size_t>(scramble(pack(v)));
}

std::size_t EdgeHash::operator()(const Edge& e) const noexcept {
  return static_cast<std::size_t>(scramble(pack(e.a) ^ scramble(pack(e.b))));
}

void canonicalize(VertexList& vs) {
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
}

void canonicalize(EdgeList& es) {
  std::sort(es.begin(), es.end());
  es.erase(std::unique(es.begin(), es.end()), es.end());
}

bool Box::contains(Vertex v) const {
  return std::abs(v.x - center.x) <= radius && std::abs(v.y - center.y) <= radius;
}

VertexList Box::vertices() const {
  VertexList out;
  out.reserve(static_cast<std::size_t>(2 * radius + 1) * (2 * radius + 1));
  for (int x = center.x - radius; x <= center.x + radius; ++x)
    for (int y = center.y - radius; y <= center.y + radius; ++y)
      out.push_back({x, y});
  return out;  // already sorted: x major, y minor
}

VertexList vertex_boundary(const VertexList& region) {
  std::unordered_set<Vertex, VertexHash> in(region.begin(), region.end());
  VertexList out;
  for (const Vertex& v : region) {
    const Vertex nb[4] = {{v.x + 1, v.y}, {v.x - 1, v.y}, {v.x, v.y + 1}, {v.x, v.y - 1}};
    for (const Vertex& w : nb) {
      if (!in.count(w)) {
        out.push_back(v);
        break;
      }
    }
  }
  canonicalize(out);
  return out;
}

VertexList boundary(const Box& box) {
  if (box.radius == 0) return {box.center};
  VertexList out;
  out.reserve(static_cast<std::size_t>(8) * box.radius);
  for (int x = box.center.x - box.radius; x <= box.center.x + box.radius; ++x)
    for (int y = box.center.y - box.radius; y <= box.center.y + box.radius; ++y)
      if (std::max(std::abs(x - box.center.x), std::abs(y - box.center.y)) == box.radius)
        out.push_back({x, y});
  return out;
}

EdgeList edges_in(const VertexList& region) {
  std::unordered_set<Vertex, VertexHash> in(region.begin(), region.end());
  VertexList sorted = region;
  canonicalize(sorted);
  EdgeList out;
  out.reserve(2 * sorted.size());
  for (const Vertex& v : sorted) {
    // Up-edge precedes right-edge in canonical order for a shared endpoint.
    Vertex up{v.x, v.y + 1};
    if (in.count(up)) out.push_back(Edge{v, up});
    Vertex right{v.x + 1, v.y};
    if (in.count(right)) out.push_back(Edge{v, right});
  }
  return out;
}

EdgeList external_edge_boundary(const VertexList& region) {
  std::unordered_set<Vertex, VertexHash> in(region.begin(), region.end());
  EdgeList out;
  for (const Vertex& v : region) {
    const Vertex nb[4] = {{v.x + 1, v.y}, {v.x - 1, v.y}, {v.x, v.y + 1}, {v.x, v.y - 1}};
    for (const Vertex& w : nb)
      if (!in.count(w)) out.push_back(make_edge(v, w));
  }
  canonicalize(out);
  return out;
}

BlockIndex block_of_vertex(Vertex v) {
  return BlockIndex{floor_div(v.x, 6), floor_div(v.y, 5)};
}

std::vector<BlockIndex> block_of_edge(const Edge& e) {
  BlockIndex ba = block_of_vertex(e.a);
  BlockIndex bb = block_of_vertex(e.b);
  if (ba == bb) return {ba};
  return {std::min(ba, bb), std::max(ba, bb)};
}

Edge block_g_edge(int r, int s) {
  return Edge{{6 * r + 2, 5 * s + 2}, {6 * r + 3, 5 * s + 2}};
}

bool is_g_edge(const Edge& e) {
  BlockIndex ba = block_of_vertex(e.a);
  if (ba != block_of_vertex(e.b)) return false;
  return e == block_g_edge(ba.r, ba.s);
}

BlockGeometry block_geometry(int r, int s) {
  BlockGeometry bg;
  bg.index = {r, s};
  bg.lambda.reserve(30);
  for (int x = 6 * r; x <= 6 * r + 5; ++x)
    for (int y = 5 * s; y <= 5 * s + 4; ++y) bg.lambda.push_back({x, y});
  bg.lambda_bar.reserve(12);
  for (int x = 6 * r + 1; x <= 6 * r + 4; ++x)
    for (int y = 5 * s + 1; y <= 5 * s + 3; ++y) bg.lambda_bar.push_back({x, y});
  bg.g = block_g_edge(r, s);

  // A is derived from its defining predicate (one endpoint on the inner
  // rectangle's boundary), not hard-coded, so the geometry is self-checking.
  VertexList bar_boundary = vertex_boundary(bg.lambda_bar);
  std::unordered_set<Vertex, VertexHash> on_boundary(bar_boundary.begin(), bar_boundary.end());
  for (const Edge& e : edges_in(bg.lambda_bar)) {
    int hits = static_cast<int>(on_boundary.count(e.a)) + static_cast<int>(on_boundary.count(e.b));
    if (hits == 1) bg.a_set.push_back(e);
  }

  std::unordered_set<Edge, EdgeHash> skip(bg.a_set.begin(), bg.a_set.end());
  skip.insert(bg.g);
  for (const Edge& e : edges_in(bg.lambda))
    if (!skip.count(e)) bg.b_set.push_back(e);
  return bg;
}

std::vector<BlockIndex> blocks_intersecting(const Box& box) {
  int r0 = floor_div(box.center.x - box.radius, 6);
  int r1 = floor_div(box.center.x + box.radius, 6);
  int s0 = floor_div(box.center.y - box.radius, 5);
  int s1 = floor_div(box.center.y + box.radius, 5);
  std::vector<BlockIndex> out;
  out.reserve(static_cast<std::size_t>(r1 - r0 + 1) * (s1 - s0 + 1));
  for (int r = r0; r <= r1; ++r)
    for (int s = s0; s <= s1; ++s) out.push_back({r, s});
  return out;
}

std::vector<BlockIndex> blocks_intersecting(const VertexList& region) {
  std::vector<BlockIndex> out;
  out.reserve(region.size() / 16 + 4);
  for (const Vertex& v : region) out.push_back(block_of_vertex(v));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

VertexList block_closure(const VertexList& region) {
  VertexList out;
  for (const BlockIndex& b : blocks_intersecting(region)) {
    for (int x = 6 * b.r; x <= 6 * b.r + 5; ++x)
      for (int y = 5 * b.s; y <= 5 * b.s + 4; ++y) out.push_back({x, y});
  }
  canonicalize(out);
  return out;
}

}  // namespace cdpre
