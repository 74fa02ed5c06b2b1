#pragma once

// Counter-based random streams. Every random value is a hash of
// (master seed, replicate index, stream label, entity), so a field restricted
// to two different regions agrees on their shared vertices/edges, replicates
// can be generated in any order or on any thread, and resampling a single
// edge never perturbs the rest of the field.

#include <cstdint>

#include "cdpre/lattice.hpp"

namespace cdpre {

enum class Stream : std::uint64_t {
  constraints = 0x636f6e7374ull,
  clocks = 0x636c6f636bull,
  resample = 0x7265736d70ull,
};

struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t replicate = 0;
  Stream stream = Stream::clocks;
};

// splitmix64 finalizer; full-avalanche 64-bit mixer.
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  return mix64(h + 0x9E3779B97F4A7C15ull + v);
}

inline std::uint64_t stream_key(const SeedSpec& spec) {
  std::uint64_t h = mix64(spec.master_seed);
  h = hash_combine(h, static_cast<std::uint64_t>(spec.stream));
  h = hash_combine(h, spec.replicate);
  return h;
}

inline std::uint64_t vertex_key(Vertex v) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(v.x)) << 32) |
         static_cast<std::uint32_t>(v.y);
}

inline std::uint64_t edge_key(const Edge& e) {
  return hash_combine(vertex_key(e.a), vertex_key(e.b));
}

// Uniform on (0,1]. A raw zero (probability 2^-53 per draw) is rejected and
// redrawn from the next salt. `draw` selects independent redraws of the same
// entity, e.g. repeated resampling of one edge.
inline double uniform_open_closed(std::uint64_t key, std::uint64_t entity, std::uint64_t draw = 0) {
  std::uint64_t h = hash_combine(key, entity);
  if (draw != 0) h = hash_combine(h, draw);
  for (std::uint64_t salt = 0;; ++salt) {
    std::uint64_t bits = mix64(h + salt);
    double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
    if (u > 0.0) return u;
  }
}

}  // namespace cdpre
