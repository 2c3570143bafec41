// Internal graph-search helpers shared by the explore and faces modules.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <cstdint>
#include <vector>

#include "winding_lab/lattice.hpp"

namespace winding_lab::detail {

enum class Hand { left, right };

// Nearest lattice direction (by Euclidean angle) to the given angle.
int nearest_direction(double angle);

// True for a lattice edge between two sites of dB(inner) whose segment cuts
// through the inside of the ring, such as (1,0)-(0,1) for inner = 1. Arms
// in a closed annulus must not use these edges.
inline bool through_hole(Site a, Site b, int inner) {
  if (inner < 1 || linf_norm(a) != inner || linf_norm(b) != inner) return false;
  return std::max(std::abs(a.x + b.x), std::abs(a.y + b.y)) < 2 * inner;
}

// Depth-first search that prefers the sharpest turn to `hand` at every
// site, relative to the direction it was entered by. The path of the DFS
// tree from `start` to the first site satisfying `target` is returned
// (empty if none). `allowed(from, to)` filters steps. `visited` is shared so repeated calls skip explored
// sites.
template <typename Allowed, typename Target>
std::vector<Site> extremal_dfs(Site start, int start_dir, Hand hand,
                               Allowed&& allowed, Target&& target,
                               BoxGrid<std::uint8_t>& visited) {
  static constexpr std::array<int, 6> kLeftOrder = {2, 1, 0, -1, -2, 3};
  static constexpr std::array<int, 6> kRightOrder = {-2, -1, 0, 1, 2, 3};
  const auto& order = hand == Hand::left ? kLeftOrder : kRightOrder;

  struct Frame {
    Site site;
    int in_dir;
    int next;
  };
  std::vector<Frame> stack;
  visited[start] = 1;
  if (target(start)) return {start};
  stack.push_back({start, start_dir, 0});
  while (!stack.empty()) {
    Frame& top = stack.back();
    // Only the root may step back along its entry direction.
    const int limit = stack.size() == 1 ? 6 : 5;
    if (top.next >= limit) {
      stack.pop_back();
      continue;
    }
    const int d = wrap_direction(top.in_dir + order[top.next++]);
    const Site s = top.site + kDirections[d];
    if (!visited.in_range(s) || visited[s] || !allowed(top.site, s)) continue;
    visited[s] = 1;
    stack.push_back({s, d, 0});
    if (target(s)) {
      std::vector<Site> path;
      path.reserve(stack.size());
      for (const auto& f : stack) path.push_back(f.site);
      return path;
    }
  }
  return {};
}

// Depth-first search that at every site tries the lattice direction nearest
// to the outward radial one first, then turns progressively to `hand`
// (left: 0, +1, +2, -1, -2, +3 around the outward direction). In an open
// region it runs straight outward instead of circling the inner ring.
template <typename Allowed, typename Target>
std::vector<Site> outward_dfs(Site start, Hand hand, Allowed&& allowed, Target&& target,
                              BoxGrid<std::uint8_t>& visited) {
  static constexpr std::array<int, 6> kLeftOrder = {0, 1, 2, -1, -2, 3};
  static constexpr std::array<int, 6> kRightOrder = {0, -1, -2, 1, 2, 3};
  const auto& order = hand == Hand::left ? kLeftOrder : kRightOrder;
  auto outward = [](Site s) {
    return s == Site{0, 0} ? 0 : nearest_direction(std::atan2(double(s.y), double(s.x)));
  };

  struct Frame {
    Site site;
    int base;
    int next;
  };
  std::vector<Frame> stack;
  visited[start] = 1;
  if (target(start)) return {start};
  stack.push_back({start, outward(start), 0});
  while (!stack.empty()) {
    Frame& top = stack.back();
    if (top.next >= 6) {
      stack.pop_back();
      continue;
    }
    const int d = wrap_direction(top.base + order[top.next++]);
    const Site s = top.site + kDirections[d];
    if (!visited.in_range(s) || visited[s] || !allowed(top.site, s)) continue;
    visited[s] = 1;
    stack.push_back({s, outward(s), 0});
    if (target(s)) {
      std::vector<Site> path;
      path.reserve(stack.size());
      for (const auto& f : stack) path.push_back(f.site);
      return path;
    }
  }
  return {};
}

// Maximum number of vertex-disjoint paths from source sites to sink sites
// inside a node set, with unit vertex capacities (Dinic on the split
// graph). A single site that is both source and sink counts as a path.
int max_vertex_disjoint_paths(const std::vector<Site>& nodes,
                              const std::vector<char>& is_source,
                              const std::vector<char>& is_sink);

}  // namespace winding_lab::detail
