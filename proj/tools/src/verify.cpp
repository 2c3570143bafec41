#include "verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <ostream>
#include <queue>

#include "output.hpp"
#include "winding_lab/montecarlo.hpp"
#include "winding_lab/winding.hpp"

namespace wl_cli {

using namespace winding_lab;

namespace {

struct BatteryResult {
  std::uint64_t checked = 0;
  std::uint64_t mismatches = 0;
  json first_failure = nullptr;
  std::string error;
};

// ---------------------------------------------------------------------------
// Exhaustive arm events on A(1, 2)

// Radial edges (ring-1 site, ring-2 site). Any arm of A(1, 2) contains one:
// its last ring-1 site and the ring-2 site after it. Disjoint arms give
// disjoint radial edges in the same cyclic order, and radial edges are
// arms themselves.
struct RadialEdge {
  int inner;  // index into ring 1
  int outer;  // index into ring 2
};

std::vector<RadialEdge> radial_edges() {
  std::vector<RadialEdge> out;
  const auto ring1 = boundary_sites(Box{1});
  for (int i = 0; i < int(ring1.size()); ++i) {
    for (Site t : neighbors(ring1[i])) {
      if (linf_norm(t) == 2) out.push_back({i, ring_index(t, 2)});
    }
  }
  std::sort(out.begin(), out.end(), [](RadialEdge a, RadialEdge b) {
    return a.inner != b.inner ? a.inner < b.inner : a.outer < b.outer;
  });
  return out;
}

// Colors are bits: ring 1 in bits 0..7, ring 2 in bits 8..23 (1 = white).
bool oracle_arms(std::uint32_t mask, const std::vector<RadialEdge>& edges,
                 const ColorSequence& sigma) {
  const std::size_t k = sigma.size();
  std::vector<int> color(edges.size(), -1);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const int a = (mask >> edges[e].inner) & 1, b = (mask >> (8 + edges[e].outer)) & 1;
    if (a == b) color[e] = a;
  }
  // Pick k edges with strictly increasing inner index and distinct outer
  // index whose colors read sigma from some rotation.
  std::vector<std::size_t> chosen;
  std::function<bool(std::size_t, std::size_t)> extend = [&](std::size_t from,
                                                             std::size_t rot) -> bool {
    if (chosen.size() == k) return true;
    const Color want = sigma[chosen.size() + rot];
    for (std::size_t e = from; e < edges.size(); ++e) {
      if (color[e] != int(want)) continue;
      if (!chosen.empty() && edges[e].inner == edges[chosen.back()].inner) continue;
      bool clash = false;
      for (std::size_t c : chosen) clash |= edges[c].outer == edges[e].outer;
      if (clash) continue;
      chosen.push_back(e);
      if (extend(e + 1, rot)) return true;
      chosen.pop_back();
    }
    return false;
  };
  for (std::size_t rot = 0; rot < k; ++rot) {
    chosen.clear();
    if (extend(0, rot)) return true;
  }
  return false;
}

BatteryResult battery_arms() {
  BatteryResult r;
  const auto ring1 = boundary_sites(Box{1});
  const auto ring2 = boundary_sites(Box{2});
  const auto edges = radial_edges();
  const std::vector<ColorSequence> sigmas = {ColorSequence::parse("B"), ColorSequence::parse("BW"),
                                             ColorSequence::parse("BWBW")};
  std::vector<std::pair<Site, Color>> overrides;
  for (Site s : ring1) overrides.push_back({s, Color::black});
  for (Site s : ring2) overrides.push_back({s, Color::black});
  const Annulus a(1, 2);
  for (std::uint32_t mask = 0; mask < (1u << 24); ++mask) {
    for (std::size_t i = 0; i < 24; ++i) overrides[i].second = Color((mask >> i) & 1);
    const Coloring c(0, 0, overrides);
    for (const auto& sigma : sigmas) {
      ++r.checked;
      const bool got = has_arm_event(c, a, sigma);
      const bool want = oracle_arms(mask, edges, sigma);
      if (got != want && r.mismatches++ == 0) {
        r.first_failure = {{"mask", mask}, {"sigma", sigma.to_string()}, {"expected", want}};
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Telescoping identity on configurations with faces planted in odd annuli

int dyadic_index(Site s) {
  const int r = linf_norm(s);
  int t = 0;
  while ((2 << t) < r) ++t;
  return t;
}

BatteryResult battery_telescoping() {
  BatteryResult r;
  const int q = 4, n_exp = 8;
  const Annulus a(1, (1 << n_exp) - 1);
  const auto sigma = ColorSequence::parse("BWBW");
  for (std::uint64_t sid = 1; sid <= 600; ++sid) {
    const Coloring c = Coloring::painted(
        1 << n_exp,
        [sid](Site s) {
          if (linf_norm(s) > 2 && dyadic_index(s) % 2 == 1) {
            return std::abs(s.x) >= std::abs(s.y) ? Color::black : Color::white;
          }
          return Coloring::random_color(sid, s);
        },
        sid);
    if (!has_arm_event(c, a, sigma)) continue;
    const auto ladder = build_scale_ladder(c, q, n_exp);
    if (!ladder.m(q)) continue;
    const auto t = telescoping_check(ladder, balanced_arm(c, a, Color::black));
    if (!t.applicable) continue;
    ++r.checked;
    if (!(t.residual < 1e-9) && r.mismatches++ == 0) {
      r.first_failure = {{"stream_id", sid}, {"total", t.total}, {"sum", t.sum}};
    }
  }
  if (r.checked < 20) r.error = "too few applicable samples";
  return r;
}

// ---------------------------------------------------------------------------
// Reflection antisymmetry

BatteryResult battery_reflection() {
  BatteryResult r;
  auto fail = [&](json detail) {
    if (r.mismatches++ == 0) r.first_failure = std::move(detail);
  };
  const auto spec = ConditionSpec::make(ColorSequence::parse("BWBW"), ConditionMode::four_arm);
  StreamCursor cursor(cell_seed(0, "verify/reflection"), 0);
  const Annulus a(1, 32);
  for (int i = 0; i < 300; ++i) {
    const auto s = draw_conditioned(spec, 5, cursor);
    const double th = arm_winding(balanced_arm(s.coloring, a));
    const double th_ref = arm_winding(balanced_arm(s.coloring.reflect(), a));
    ++r.checked;
    if (std::fabs(th + th_ref) > 1e-9) {
      fail({{"check", "balanced arm"}, {"replicate", s.replicate}, {"theta", th},
            {"reflected", th_ref}});
    }
    ArmPath mirrored = canonical_arm(s.coloring, a);
    const double w = arm_winding(mirrored);
    for (Site& z : mirrored.sites) z = Coloring::reflect_site(z);
    ++r.checked;
    if (std::fabs(w + arm_winding(mirrored)) > 1e-9) {
      fail({{"check", "path winding"}, {"replicate", s.replicate}});
    }
  }
  const auto one = ConditionSpec::make(ColorSequence::parse("B"), ConditionMode::one_arm);
  StreamCursor cursor1(cell_seed(0, "verify/reflection/sheets"), 0);
  for (int i = 0; i < 200; ++i) {
    const auto s = draw_conditioned(one, 4, cursor1);
    const auto lo = winding_sheet_range(s.coloring, Annulus(0, 16));
    const auto hi = winding_sheet_range(s.coloring.reflect(), Annulus(0, 16));
    ++r.checked;
    if (std::fabs(lo.theta_max + hi.theta_min) > 1e-9 ||
        std::fabs(lo.theta_min + hi.theta_max) > 1e-9) {
      fail({{"check", "sheet range"}, {"replicate", s.replicate}});
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Peeling count against max flow

// Vertex-disjoint path count by augmenting paths on the split graph.
int max_flow_crossings(const Coloring& c, int m, int n) {
  const auto rect = crossing_rectangle(m, n);
  const int k = int(rect.sites.size());
  // Node 2i = in(i), 2i+1 = out(i), source 2k, sink 2k+1.
  const int source = 2 * k, sink = 2 * k + 1, nodes = 2 * k + 2;
  std::vector<std::vector<int>> cap(nodes, std::vector<int>(nodes, 0));
  std::vector<int> index(std::size_t((2 * n + 1) * (2 * n + 1)), -1);
  auto at = [&](Site s) -> int& { return index[std::size_t((s.x + n) * (2 * n + 1) + s.y + n)]; };
  for (int i = 0; i < k; ++i) at(rect.sites[i]) = i;
  for (int i = 0; i < k; ++i) {
    const Site s = rect.sites[i];
    if (c.color_of(s) != Color::black) continue;
    cap[2 * i][2 * i + 1] = 1;
    if (rect.near_lower[i]) cap[source][2 * i] = 1;
    if (rect.near_upper[i]) cap[2 * i + 1][sink] = 1;
    for (Site t : neighbors(s)) {
      if (std::abs(t.x) > n || std::abs(t.y) > n) continue;
      const int j = at(t);
      if (j >= 0 && c.color_of(t) == Color::black) cap[2 * i + 1][2 * j] = 1;
    }
  }
  int flow = 0;
  for (;;) {
    std::vector<int> parent(nodes, -1);
    parent[source] = source;
    std::queue<int> bfs;
    bfs.push(source);
    while (!bfs.empty() && parent[sink] < 0) {
      const int u = bfs.front();
      bfs.pop();
      for (int v = 0; v < nodes; ++v) {
        if (parent[v] < 0 && cap[u][v] > 0) {
          parent[v] = u;
          bfs.push(v);
        }
      }
    }
    if (parent[sink] < 0) return flow;
    for (int v = sink; v != source; v = parent[v]) {
      --cap[parent[v]][v];
      ++cap[v][parent[v]];
    }
    ++flow;
  }
}

BatteryResult battery_peeling() {
  BatteryResult r;
  const std::uint64_t seed = cell_seed(0, "verify/peeling");
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const Coloring c = derive_stream(seed, 0, i);
    ++r.checked;
    const int got = count_disjoint_black_crossings(c, 2, 5);
    const int want = max_flow_crossings(c, 2, 5);
    if (got != want && r.mismatches++ == 0) {
      r.first_failure = {{"replicate", i}, {"peeling", got}, {"max_flow", want}};
    }
  }
  return r;
}

}  // namespace

bool run_verify(const VerifyOptions& opt, std::ostream& report) {
  const std::vector<std::pair<std::string, std::function<BatteryResult()>>> batteries = {
      {"arms", battery_arms},
      {"telescoping", battery_telescoping},
      {"reflection", battery_reflection},
      {"peeling", battery_peeling},
  };
  set_turn_fault(opt.inject_fault == "turning");
  bool all = true;
  for (const auto& [name, fn] : batteries) {
    if (!opt.filters.empty() &&
        std::find(opt.filters.begin(), opt.filters.end(), name) == opt.filters.end()) {
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    BatteryResult r;
    try {
      r = fn();
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = r.mismatches == 0 && r.error.empty();
    all = all && pass;
    json line;
    line["battery"] = name;
    line["status"] = pass ? "pass" : "fail";
    line["checked"] = r.checked;
    line["mismatches"] = r.mismatches;
    line["first_failure"] = r.first_failure;
    line["error"] = r.error.empty() ? json(nullptr) : json(r.error);
    line["seconds"] = std::round(secs * 100) / 100;
    report << line.dump() << std::endl;
  }
  set_turn_fault(false);
  return all;
}

}  // namespace wl_cli
