#include <doctest.h>

#include <algorithm>
#include <set>

#include "cdpre/lattice.hpp"

using namespace cdpre;

namespace {

// Independent edge counter: all unordered adjacent pairs inside the region.
int count_edges_brute(const VertexList& region) {
  int count = 0;
  for (std::size_t i = 0; i < region.size(); ++i)
    for (std::size_t j = i + 1; j < region.size(); ++j)
      if (adjacent(region[i], region[j])) ++count;
  return count;
}

// Independent outward-edge counter: per-vertex neighbours outside the region.
int count_external_brute(const VertexList& region) {
  std::set<Vertex> in(region.begin(), region.end());
  int count = 0;
  for (const Vertex& v : region) {
    for (Vertex w : {Vertex{v.x + 1, v.y}, Vertex{v.x - 1, v.y}, Vertex{v.x, v.y + 1},
                     Vertex{v.x, v.y - 1}})
      if (!in.count(w)) ++count;
  }
  return count;
}

}  // namespace

TEST_SUITE("lattice") {

TEST_CASE("canonical edges") {
  Edge e = make_edge({3, 2}, {2, 2});
  CHECK(e.a == Vertex{2, 2});
  CHECK(e.b == Vertex{3, 2});
  CHECK(e == make_edge({2, 2}, {3, 2}));
  CHECK_THROWS_AS(make_edge({0, 0}, {1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(make_edge({0, 0}, {0, 0}), std::invalid_argument);
}

TEST_CASE("box boundary sizes") {
  CHECK(boundary(Box{0}).size() == 1);
  CHECK(boundary(Box{0})[0] == Vertex{0, 0});
  CHECK(boundary(Box{1}).size() == 8);
  CHECK(boundary(Box{3}).size() == 24);
  for (const Vertex& v : boundary(Box{3})) CHECK(chebyshev_norm(v) == 3);
  // off-center box
  VertexList b = boundary(Box{2, {5, -1}});
  CHECK(b.size() == 16);
  CHECK(std::count(b.begin(), b.end(), Vertex{3, -3}) == 1);
}

TEST_CASE("edges_in examples and oracle") {
  VertexList square = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  CHECK(edges_in(square).size() == 4);
  CHECK(edges_in(VertexList{{5, 5}}).empty());

  BlockGeometry bg = block_geometry(0, 0);
  EdgeList lam = edges_in(bg.lambda);
  CHECK(lam.size() == 49);
  CHECK(count_edges_brute(bg.lambda) == 49);
  CHECK(std::is_sorted(lam.begin(), lam.end()));

  // 5x5 horizontal + 6x4 vertical
  CHECK(49 == 5 * 5 + 6 * 4);
}

TEST_CASE("external edge boundary examples and oracle") {
  CHECK(external_edge_boundary(VertexList{{0, 0}}).size() == 4);
  CHECK(external_edge_boundary(Box{1}.vertices()).size() == 12);
  BlockGeometry bg = block_geometry(0, 0);
  EdgeList ext = external_edge_boundary(bg.lambda);
  CHECK(ext.size() == 22);
  CHECK(count_external_brute(bg.lambda) == 22);
}

TEST_CASE("boundary consistency") {
  // edges_in plus the external boundary is exactly the set of edges with at
  // least one endpoint inside, for an irregular region.
  VertexList region = {{0, 0}, {1, 0}, {2, 0}, {2, 1}, {2, 2}, {0, 2}};
  EdgeList inside = edges_in(region);
  EdgeList ext = external_edge_boundary(region);
  std::set<Edge> got(inside.begin(), inside.end());
  for (const Edge& e : ext) {
    CHECK(!got.count(e));
    got.insert(e);
  }
  std::set<Vertex> in(region.begin(), region.end());
  std::set<Edge> expected;
  for (const Vertex& v : region)
    for (Vertex w : {Vertex{v.x + 1, v.y}, Vertex{v.x - 1, v.y}, Vertex{v.x, v.y + 1},
                     Vertex{v.x, v.y - 1}})
      expected.insert(make_edge(v, w));
  CHECK(got == expected);
}

TEST_CASE("block geometry of the origin block") {
  BlockGeometry bg = block_geometry(0, 0);
  CHECK(bg.lambda.size() == 30);
  CHECK(bg.lambda_bar.size() == 12);
  CHECK(bg.g == make_edge({2, 2}, {3, 2}));

  EdgeList expected_a = {make_edge({1, 2}, {2, 2}), make_edge({2, 1}, {2, 2}),
                         make_edge({2, 2}, {2, 3}), make_edge({3, 2}, {4, 2}),
                         make_edge({3, 1}, {3, 2}), make_edge({3, 2}, {3, 3})};
  canonicalize(expected_a);
  EdgeList got_a = bg.a_set;
  canonicalize(got_a);
  CHECK(got_a == expected_a);

  CHECK(bg.a_set.size() == 6);
  CHECK(bg.b_set.size() == 42);
  CHECK(std::find(bg.a_set.begin(), bg.a_set.end(), bg.g) == bg.a_set.end());

  // {g} + A + B partitions E(lambda)
  EdgeList all = bg.b_set;
  all.insert(all.end(), bg.a_set.begin(), bg.a_set.end());
  all.push_back(bg.g);
  canonicalize(all);
  CHECK(all == edges_in(bg.lambda));
}

TEST_CASE("block geometry translates") {
  BlockGeometry bg = block_geometry(1, -1);
  CHECK(bg.g == make_edge({8, -3}, {9, -3}));
  CHECK(bg.a_set.size() == 6);
  CHECK(bg.b_set.size() == 42);
  for (const Vertex& v : bg.lambda) {
    CHECK(v.x >= 6);
    CHECK(v.x <= 11);
    CHECK(v.y >= -5);
    CHECK(v.y <= -1);
  }
}

TEST_CASE("blocks tile the plane") {
  for (const Vertex& v : Box{17}.vertices()) {
    BlockIndex b = block_of_vertex(v);
    BlockGeometry bg = block_geometry(b.r, b.s);
    CHECK(std::binary_search(bg.lambda.begin(), bg.lambda.end(), v));
    // no neighbouring block also contains v
    for (int dr = -1; dr <= 1; ++dr)
      for (int ds = -1; ds <= 1; ++ds) {
        if (dr == 0 && ds == 0) continue;
        BlockGeometry other = block_geometry(b.r + dr, b.s + ds);
        CHECK(!std::binary_search(other.lambda.begin(), other.lambda.end(), v));
      }
  }
}

TEST_CASE("block_of_edge") {
  CHECK(block_of_edge(block_g_edge(0, 0)) == std::vector<BlockIndex>{{0, 0}});
  CHECK(block_of_edge(make_edge({5, 0}, {6, 0})) == std::vector<BlockIndex>{{0, 0}, {1, 0}});
  CHECK(block_of_edge(make_edge({0, 4}, {0, 5})) == std::vector<BlockIndex>{{0, 0}, {0, 1}});
}

TEST_CASE("g edge identification") {
  CHECK(is_g_edge(block_g_edge(0, 0)));
  CHECK(is_g_edge(block_g_edge(-3, 7)));
  CHECK(!is_g_edge(make_edge({0, 0}, {1, 0})));
  CHECK(!is_g_edge(make_edge({5, 0}, {6, 0})));
}

TEST_CASE("blocks intersecting a box") {
  std::vector<BlockIndex> blocks = blocks_intersecting(Box{10});
  CHECK(blocks.size() == 20);  // r in [-2,1], s in [-2,2]
  CHECK(std::is_sorted(blocks.begin(), blocks.end()));
  CHECK(std::binary_search(blocks.begin(), blocks.end(), BlockIndex{0, 0}));
  CHECK(std::binary_search(blocks.begin(), blocks.end(), BlockIndex{-2, -2}));
  CHECK(!std::binary_search(blocks.begin(), blocks.end(), BlockIndex{2, 0}));

  VertexList closure = block_closure(Box{10}.vertices());
  CHECK(closure.size() == 20 * 30);
  for (const Vertex& v : Box{10}.vertices())
    CHECK(std::binary_search(closure.begin(), closure.end(), v));
}

}  // TEST_SUITE
