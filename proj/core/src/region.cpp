#include "cdpre/region.hpp"

#include <algorithm>

namespace cdpre {

LatticeRegion::LatticeRegion(VertexList vertices) : verts_(std::move(vertices)) {
  canonicalize(verts_);
  edges_ = edges_in(verts_);

  const std::size_t nv = verts_.size();
  std::vector<std::int32_t> degree(nv, 0);
  std::vector<std::pair<std::int32_t, std::int32_t>> ends(edges_.size());
  for (std::size_t ei = 0; ei < edges_.size(); ++ei) {
    const std::int32_t u = vertex_id(edges_[ei].a);
    const std::int32_t v = vertex_id(edges_[ei].b);
    ends[ei] = {u, v};
    ++degree[static_cast<std::size_t>(u)];
    ++degree[static_cast<std::size_t>(v)];
  }
  arc_start_.assign(nv + 1, 0);
  for (std::size_t i = 0; i < nv; ++i) arc_start_[i + 1] = arc_start_[i] + degree[i];
  arcs_.resize(static_cast<std::size_t>(arc_start_[nv]));
  std::vector<std::int32_t> fill(arc_start_.begin(), arc_start_.end() - 1);
  for (std::size_t ei = 0; ei < edges_.size(); ++ei) {
    auto [u, v] = ends[ei];
    arcs_[static_cast<std::size_t>(fill[static_cast<std::size_t>(u)]++)] = {static_cast<std::int32_t>(ei), v};
    arcs_[static_cast<std::size_t>(fill[static_cast<std::size_t>(v)]++)] = {static_cast<std::int32_t>(ei), u};
  }
}

int LatticeRegion::vertex_id(Vertex v) const {
  auto it = std::lower_bound(verts_.begin(), verts_.end(), v);
  if (it == verts_.end() || *it != v) return -1;
  return static_cast<int>(it - verts_.begin());
}

int LatticeRegion::edge_id(const Edge& e) const {
  auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
  if (it == edges_.end() || *it != e) return -1;
  return static_cast<int>(it - edges_.begin());
}

bool reaches_norm(const LatticeRegion& region, std::span<const std::uint8_t> open, Vertex from,
                  int n, BfsScratch& scratch) {
  if (chebyshev_norm(from) >= n) return true;
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
      if (chebyshev_norm(region.vertex(a.to)) >= n) return true;
      scratch.visit(a.to);
      scratch.queue.push_back(a.to);
    }
  }
  return false;
}

int max_norm_reached(const LatticeRegion& region, std::span<const std::uint8_t> open, Vertex from,
                     BfsScratch& scratch) {
  int start = region.vertex_id(from);
  if (start < 0) return -1;
  scratch.reset(region.vertex_count());
  scratch.queue.clear();
  scratch.visit(start);
  scratch.queue.push_back(start);
  int best = chebyshev_norm(from);
  for (std::size_t head = 0; head < scratch.queue.size(); ++head) {
    int v = scratch.queue[head];
    for (const LatticeRegion::Arc& a : region.arcs(v)) {
      if (!open[static_cast<std::size_t>(a.edge)] || scratch.seen(a.to)) continue;
      scratch.visit(a.to);
      scratch.queue.push_back(a.to);
      best = std::max(best, chebyshev_norm(region.vertex(a.to)));
    }
  }
  return best;
}

}  // namespace cdpre
