#include "winding_lab/explore.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <unordered_set>

#include "search.hpp"
#include "winding_lab/winding.hpp"

namespace winding_lab {

namespace detail {

int nearest_direction(double angle) {
  int best = 0;
  double best_gap = 10.0;
  for (int d = 0; d < 6; ++d) {
    const double a = std::atan2(double(kDirections[d].y), double(kDirections[d].x));
    double gap = std::fabs(std::remainder(angle - a, kTwoPi));
    if (gap < best_gap - 1e-12) {
      best_gap = gap;
      best = d;
    }
  }
  return best;
}

namespace {

struct FlowEdge {
  int to;
  int cap;
};

class Dinic {
 public:
  explicit Dinic(int n) : adj_(n), level_(n), it_(n) {}

  void add(int u, int v, int cap) {
    adj_[u].push_back(int(edges_.size()));
    edges_.push_back({v, cap});
    adj_[v].push_back(int(edges_.size()));
    edges_.push_back({u, 0});
  }

  int run(int s, int t) {
    int flow = 0;
    while (bfs(s, t)) {
      std::fill(it_.begin(), it_.end(), 0);
      while (int f = dfs(s, t, 1 << 30)) flow += f;
    }
    return flow;
  }

 private:
  bool bfs(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::vector<int> queue{s};
    level_[s] = 0;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      const int u = queue[h];
      for (int id : adj_[u]) {
        const auto& e = edges_[id];
        if (e.cap > 0 && level_[e.to] < 0) {
          level_[e.to] = level_[u] + 1;
          queue.push_back(e.to);
        }
      }
    }
    return level_[t] >= 0;
  }

  int dfs(int u, int t, int f) {
    if (u == t) return f;
    for (int& i = it_[u]; i < int(adj_[u].size()); ++i) {
      const int id = adj_[u][i];
      auto& e = edges_[id];
      if (e.cap <= 0 || level_[e.to] != level_[u] + 1) continue;
      if (int got = dfs(e.to, t, std::min(f, e.cap))) {
        e.cap -= got;
        edges_[id ^ 1].cap += got;
        return got;
      }
    }
    return 0;
  }

  std::vector<std::vector<int>> adj_;
  std::vector<FlowEdge> edges_;
  std::vector<int> level_, it_;
};

}  // namespace

int max_vertex_disjoint_paths(const std::vector<Site>& nodes,
                              const std::vector<char>& is_source,
                              const std::vector<char>& is_sink) {
  const int n = int(nodes.size());
  if (n == 0) return 0;
  std::unordered_map<Site, int> index;
  index.reserve(nodes.size() * 2);
  for (int i = 0; i < n; ++i) index.emplace(nodes[i], i);
  const int s = 2 * n, t = 2 * n + 1;
  Dinic g(2 * n + 2);
  for (int i = 0; i < n; ++i) {
    g.add(2 * i, 2 * i + 1, 1);
    if (is_source[i]) g.add(s, 2 * i, 1);
    if (is_sink[i]) g.add(2 * i + 1, t, 1);
    for (Site d : kDirections) {
      auto it = index.find(nodes[i] + d);
      if (it != index.end()) g.add(2 * i + 1, 2 * it->second, 1);
    }
  }
  return g.run(s, t);
}

}  // namespace detail

using detail::Hand;

// ---------------------------------------------------------------------------
// Dual structure

std::array<Site, 3> DualVertex::corners() const {
  if (orientation == Orientation::lower) {
    return {base, base + Site{1, 0}, base + Site{0, 1}};
  }
  return {base + Site{1, 0}, base + Site{1, 1}, base + Site{0, 1}};
}

Point2 DualVertex::centroid() const {
  const auto c = corners();
  return {(c[0].x + c[1].x + c[2].x) / 3.0, (c[0].y + c[1].y + c[2].y) / 3.0};
}

DualVertex triangle_of(Site a, Site b, Site c) {
  if (!adjacent(a, b) || !adjacent(b, c) || !adjacent(a, c)) {
    throw std::invalid_argument("sites do not form a lattice triangle");
  }
  const Site base{std::min({a.x, b.x, c.x}), std::min({a.y, b.y, c.y})};
  const int top = std::max({a.x + a.y, b.x + b.y, c.x + c.y});
  const int at_top = int(a.x + a.y == top) + int(b.x + b.y == top) + int(c.x + c.y == top);
  return {base, at_top == 2 ? DualVertex::Orientation::lower
                            : DualVertex::Orientation::upper};
}

namespace {

// The third corner of the triangle ahead of an oriented crossed edge.
Site forward_vertex(const DualEdge& e) {
  return e.right + kDirections[wrap_direction(direction_index(e.left - e.right) - 1)];
}

Site backward_vertex(const DualEdge& e) {
  return e.right + kDirections[wrap_direction(direction_index(e.left - e.right) + 1)];
}

std::atomic<int> g_turn_fault{0};

std::uint64_t edge_key(Site a, Site b) {
  if (b < a) std::swap(a, b);
  auto pack = [](Site s) {
    return (std::uint64_t(std::uint16_t(s.x)) << 16) | std::uint16_t(s.y);
  };
  return (pack(a) << 32) | pack(b);
}

}  // namespace

std::vector<DualVertex> InterfaceCurve::vertices() const {
  std::vector<DualVertex> out;
  if (edges.size() < 2) return out;
  out.reserve(edges.size() - 1);
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    out.push_back(triangle_of(edges[k].left, edges[k].right, forward_vertex(edges[k])));
  }
  return out;
}

namespace {

std::vector<Site> loop_erased_side(const std::vector<DualEdge>& edges, bool left) {
  std::vector<Site> path;
  std::unordered_map<Site, std::size_t> position;
  for (const auto& e : edges) {
    const Site s = left ? e.left : e.right;
    if (!path.empty() && path.back() == s) continue;
    auto it = position.find(s);
    if (it != position.end()) {
      for (std::size_t k = it->second + 1; k < path.size(); ++k) position.erase(path[k]);
      path.resize(it->second + 1);
      continue;
    }
    position.emplace(s, path.size());
    path.push_back(s);
  }
  return path;
}

}  // namespace

std::vector<Site> InterfaceCurve::left_arm() const { return loop_erased_side(edges, true); }

std::vector<Site> InterfaceCurve::right_arm() const { return loop_erased_side(edges, false); }

// ---------------------------------------------------------------------------
// Interface tracing

CrossingSet trace_interfaces(const Coloring& c, Annulus a, TraceOptions options) {
  if (a.inner < 1) throw std::invalid_argument("interface tracing needs inner radius >= 1");
  const int n = a.inner, m = a.outer;
  CrossingSet out;
  out.inner_radius = n;
  out.outer_radius = m;

  std::unordered_set<std::uint64_t> used;
  std::vector<DualEdge> buffer;
  // No simple dual path in B(m + 1) is longer than its number of edges.
  const std::size_t step_cap = 3 * std::size_t(2 * m + 3) * std::size_t(2 * m + 3);
  const auto ring = boundary_sites(Box{n});
  std::vector<Color> ring_color(ring.size());
  for (std::size_t i = 0; i < ring.size(); ++i) ring_color[i] = c.color_of(ring[i]);

  // The hole is the region enclosed by the ring cycle of radius n: a
  // triangle belongs to it when a corner lies inside B(n - 1), or when all
  // three corners sit on the ring (the corner triangles at (n, n) and
  // (-n, -n)).
  auto in_hole = [n](Site l, Site r, Site v) {
    const int nv = linf_norm(v);
    return nv < n || (nv == n && linf_norm(l) == n && linf_norm(r) == n);
  };

  for (std::size_t ia = 0; ia < ring.size(); ++ia) {
    const Site s = ring[ia];
    for (int i = 0; i < 3; ++i) {
      const Site t = s + kDirections[i];
      if (linf_norm(t) != n) continue;
      const Color cs = ring_color[ia];
      const Color ct = ring_color[ring_index(t, n)];
      if (cs == ct) continue;
      const Site u1 = s + kDirections[wrap_direction(i - 1)];
      const Site u2 = s + kDirections[wrap_direction(i + 1)];
      const bool h1 = in_hole(s, t, u1), h2 = in_hole(s, t, u2);
      if (h1 == h2) continue;
      {
        const Site u = h1 ? u1 : u2;
        DualEdge e{s, t};
        if (backward_vertex(e) != u) e = {t, s};
        if (used.count(edge_key(e.left, e.right))) continue;
        used.insert(edge_key(e.left, e.right));

        const Color left = e.left == s ? cs : ct;
        buffer.clear();
        buffer.push_back(e);
        bool crossed = false;
        for (;;) {
          const Site v = forward_vertex(e);
          const int nv = linf_norm(v);
          if (nv > m) {
            crossed = true;
            break;
          }
          if (in_hole(e.left, e.right, v)) {
            used.insert(edge_key(e.left, e.right));
            break;
          }
          if ((c.color_of(v) == left) != (g_turn_fault.load(std::memory_order_relaxed) != 0)) {
            e = {v, e.right};
          } else {
            e = {e.left, v};
          }
          buffer.push_back(e);
          if (buffer.size() > step_cap) throw std::logic_error("interface walk did not terminate");
        }
        if (!crossed) {
          ++out.returned;
          continue;
        }
        InterfaceCurve curve;
        curve.edges = buffer;
        curve.left_color = left;
        curve.crossed = true;
        out.interfaces.push_back(std::move(curve));
        if (out.interfaces.size() >= options.stop_at) {
          out.truncated = true;
          goto done;
        }
      }
    }
  }
done:
  std::sort(out.interfaces.begin(), out.interfaces.end(),
            [](const InterfaceCurve& x, const InterfaceCurve& y) {
              return arg_positive(x.outer_endpoint()) < arg_positive(y.outer_endpoint());
            });
  return out;
}

void set_turn_fault(bool on) { g_turn_fault.store(on ? 1 : 0); }

double quality(const CrossingSet& g) {
  if (g.size() < 2 || g.outer_radius <= 0) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = i + 1; j < g.size(); ++j) {
      const Point2 p = g.interfaces[i].outer_endpoint();
      const Point2 q = g.interfaces[j].outer_endpoint();
      best = std::min(best, std::hypot(p.x - q.x, p.y - q.y));
    }
  }
  return best / g.outer_radius;
}

// ---------------------------------------------------------------------------
// Arm events

namespace {

// Sites of `color` in the closed annulus reachable from its inner ring.
bool color_crosses(const Coloring& c, Annulus a, Color color) {
  BoxGrid<std::uint8_t> seen(a.outer);
  std::vector<Site> stack;
  for (Site s : boundary_sites(Box{a.inner})) {
    if (c.color_of(s) != color) continue;
    if (linf_norm(s) == a.outer) return true;
    seen[s] = 1;
    stack.push_back(s);
  }
  while (!stack.empty()) {
    const Site s = stack.back();
    stack.pop_back();
    for (Site d : kDirections) {
      const Site t = s + d;
      const int nt = linf_norm(t);
      if (nt < a.inner || nt > a.outer || seen[t]) continue;
      seen[t] = 1;
      if (c.color_of(t) != color) continue;
      if (nt == a.outer) return true;
      stack.push_back(t);
    }
  }
  return false;
}

int disjoint_in_region(const std::vector<Site>& region, Annulus a) {
  std::vector<char> src(region.size()), snk(region.size());
  for (std::size_t i = 0; i < region.size(); ++i) {
    const int r = linf_norm(region[i]);
    src[i] = r == a.inner;
    snk[i] = r == a.outer;
  }
  return detail::max_vertex_disjoint_paths(region, src, snk);
}

// Cyclic sector colors and capacities; checks whether sigma can be read
// off them in order, using at most cap[j] arms from sector j.
bool match_cyclic(const ColorSequence& sigma, const std::vector<Color>& col,
                  const std::vector<int>& cap) {
  const std::size_t k = col.size();
  const std::size_t len = sigma.size();
  for (std::size_t r = 0; r < len; ++r) {
    for (std::size_t j0 = 0; j0 < k; ++j0) {
      std::size_t idx = 0;
      for (std::size_t t = 0; t < k && idx < len; ++t) {
        const std::size_t j = (j0 + t) % k;
        int used = 0;
        while (idx < len && used < cap[j] && sigma[r + idx] == col[j]) {
          ++idx;
          ++used;
        }
      }
      if (idx == len) return true;
    }
  }
  return false;
}

}  // namespace

int max_disjoint_arms(const Coloring& c, Annulus a, Color color) {
  std::vector<Site> region;
  for (int r = a.inner; r <= a.outer; ++r) {
    for (Site s : boundary_sites(Box{r})) {
      if (c.color_of(s) == color) region.push_back(s);
    }
  }
  return disjoint_in_region(region, a);
}

bool has_arm_event(const Coloring& c, Annulus a, const ColorSequence& sigma) {
  if (std::size_t(Box{a.inner}.boundary_size()) < sigma.size()) {
    throw std::invalid_argument("inner boundary too small for sigma");
  }
  if (sigma.size() == 1) return color_crosses(c, a, sigma[0]);
  if (sigma.alternating()) {
    const auto g = trace_interfaces(c, a, {sigma.size()});
    return g.size() >= sigma.size();
  }

  const auto g = trace_interfaces(c, a);
  const std::size_t k = g.size();
  if (k == 0) {
    // A single color class crosses; no opposite-color arm exists.
    if (!sigma.monochromatic()) return false;
    return max_disjoint_arms(c, a, sigma[0]) >= int(sigma.size());
  }

  // Sector j lies counterclockwise of interface j, i.e. on its left side,
  // and is bounded by interface j + 1.
  std::unordered_set<std::uint64_t> barrier;
  for (const auto& curve : g.interfaces) {
    for (const auto& e : curve.edges) barrier.insert(edge_key(e.left, e.right));
  }
  BoxGrid<int> label(a.outer, -1);
  std::vector<Color> col(k);
  std::vector<int> cap(k);
  for (std::size_t j = 0; j < k; ++j) {
    const auto& curve = g.interfaces[j];
    col[j] = curve.left_color;
    const Site seed = curve.edges.front().left;
    std::vector<Site> region;
    if (label[seed] < 0) {
      std::vector<Site> stack{seed};
      label[seed] = int(j);
      while (!stack.empty()) {
        const Site s = stack.back();
        stack.pop_back();
        if (c.color_of(s) == col[j]) region.push_back(s);
        for (Site d : kDirections) {
          const Site t = s + d;
          if (!a.closed_contains(t) || label[t] >= 0) continue;
          if (barrier.count(edge_key(s, t)) || detail::through_hole(s, t, a.inner)) continue;
          label[t] = int(j);
          stack.push_back(t);
        }
      }
    }
    cap[j] = disjoint_in_region(region, a);
  }
  return match_cyclic(sigma, col, cap);
}

// ---------------------------------------------------------------------------
// Canonical arms

namespace {

std::vector<Site> inner_starts(Annulus a) {
  if (a.inner == 0) return {Site{0, 0}};
  auto ring = boundary_sites(Box{a.inner});
  std::stable_sort(ring.begin(), ring.end(), [](Site p, Site q) {
    const double ap = arg_positive(to_point(p)), aq = arg_positive(to_point(q));
    if (ap != aq) return ap < aq;
    return p < q;
  });
  return ring;
}

ArmPath leftmost_arm(const Coloring& c, Annulus a, Color color) {
  BoxGrid<std::uint8_t> visited(a.outer + 1);
  auto allowed = [&](Site from, Site s) {
    return a.closed_contains(s) && c.color_of(s) == color &&
           !detail::through_hole(from, s, a.inner);
  };
  auto target = [&](Site s) { return linf_norm(s) == a.outer; };
  for (Site s : inner_starts(a)) {
    if (visited[s] || c.color_of(s) != color) continue;
    auto path = detail::outward_dfs(s, Hand::left, allowed, target, visited);
    if (!path.empty()) return {std::move(path), color};
  }
  throw NoCrossingArm();
}

}  // namespace

ArmPath canonical_arm(const Coloring& c, Annulus a, Color color) {
  return leftmost_arm(c, a, color);
}

ArmPath mirrored_canonical_arm(const Coloring& c, Annulus a, Color color) {
  ArmPath arm = leftmost_arm(c.reflect(), a, color);
  for (Site& s : arm.sites) s = Coloring::reflect_site(s);
  return arm;
}

double arm_winding(const ArmPath& arm) {
  std::span<const Site> sites(arm.sites);
  if (!sites.empty() && sites.front() == Site{0, 0}) sites = sites.subspan(1);
  return winding_angle(sites);
}

ArmPath balanced_arm(const Coloring& c, Annulus a, Color color) {
  ArmPath left = canonical_arm(c, a, color);
  ArmPath right = mirrored_canonical_arm(c, a, color);
  const double wl = arm_winding(left), wr = arm_winding(right);
  if (a.inner >= 1) {
    const auto g = trace_interfaces(c, a);
    if (!g.interfaces.empty()) {
      double ref = 0.0;
      for (const auto& curve : g.interfaces) {
        ref += arm_winding(ArmPath{curve.left_arm(), curve.left_color});
        ref += arm_winding(ArmPath{curve.right_arm(), !curve.left_color});
      }
      ref /= 2.0 * double(g.size());
      const double dl = std::fabs(wl - ref), dr = std::fabs(wr - ref);
      if (dl != dr) return dl < dr ? std::move(left) : std::move(right);
    }
  }
  return wl + wr >= 0.0 ? std::move(left) : std::move(right);
}

std::vector<ArmPath> interface_arms(const CrossingSet& g, const Coloring& c) {
  std::vector<ArmPath> out;
  out.reserve(g.size());
  for (const auto& curve : g.interfaces) {
    ArmPath arm{curve.left_arm(), curve.left_color};
    for (Site s : arm.sites) {
      if (c.color_of(s) != arm.color) throw std::logic_error("interface side has wrong color");
    }
    out.push_back(std::move(arm));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Crossings of R(m, n)

CrossingRectangle crossing_rectangle(int m, int n) {
  if (m <= 0 || n <= m) throw std::invalid_argument("crossing rectangle needs 0 < m < n");
  const Sector sec = crossing_sector();
  const double phi = kPi / 10.0;
  const double root2 = std::sqrt(2.0);
  CrossingRectangle out;
  for (int x = -n; x <= n; ++x) {
    for (int y = -n; y <= n; ++y) {
      const Site s{x, y};
      const int r = linf_norm(s);
      if (r <= m || r > n || !sec.contains(s)) continue;
      // Distance to the rays t * (cos(+-phi), sin(+-phi)), t >= 0; sites in
      // the sector project positively onto both.
      const double d_lo = std::fabs(x * std::sin(-phi) - y * std::cos(-phi));
      const double d_hi = std::fabs(x * std::sin(phi) - y * std::cos(phi));
      out.sites.push_back(s);
      out.near_lower.push_back(d_lo < root2);
      out.near_upper.push_back(d_hi < root2);
    }
  }
  return out;
}

int count_disjoint_black_crossings(const Coloring& c, int m, int n) {
  const auto rect = crossing_rectangle(m, n);
  BoxGrid<std::uint8_t> kind(n + 1);  // bit0 member, bit1 lower end, bit2 upper end
  std::vector<std::pair<double, Site>> starts;
  for (std::size_t i = 0; i < rect.sites.size(); ++i) {
    const Site s = rect.sites[i];
    if (c.color_of(s) != Color::black) continue;
    kind[s] = 1 | (rect.near_lower[i] ? 2 : 0) | (rect.near_upper[i] ? 4 : 0);
    if (rect.near_lower[i]) starts.push_back({std::hypot(s.x, s.y), s});
  }
  std::sort(starts.begin(), starts.end());

  BoxGrid<std::uint8_t> visited(n + 1);
  auto allowed = [&](Site, Site s) { return (kind[s] & 1) != 0; };
  auto target = [&](Site s) { return (kind[s] & 4) != 0; };
  int count = 0;
  for (;;) {
    visited.fill(0);
    std::vector<Site> path;
    for (const auto& [r, s] : starts) {
      if (!(kind[s] & 1) || visited[s]) continue;
      const int d0 = detail::nearest_direction(arg(s) + kPi / 2);
      path = detail::extremal_dfs(s, d0, Hand::left, allowed, target, visited);
      if (!path.empty()) break;
    }
    if (path.empty()) return count;
    ++count;
    for (Site s : path) kind[s] = 0;
  }
}

// ---------------------------------------------------------------------------
// Sheet range

int default_sheet_window(int outer_radius) {
  return std::max(1, int(std::ceil(3.0 * std::log2(std::max(2, outer_radius)))));
}

namespace {

struct SheetScan {
  bool found = false;
  double theta_min = 0.0, theta_max = 0.0;
  int w_min = 0, w_max = 0;
};

// Outward root direction. The right-hand tree uses the mirror image under
// (x, y) -> (y, x) of the left-hand choice, which maps direction d to 1 - d,
// so that reflecting a configuration swaps the two trees exactly.
int root_direction(double angle, Hand hand) {
  if (hand == Hand::left) return detail::nearest_direction(angle);
  return wrap_direction(1 - detail::nearest_direction(kPi / 2 - angle));
}

// Full extremal DFS tree from `start`, recording the lifted angle of each
// tree path and the extreme windings reaching the outer ring.
void scan_tree(const Coloring& c, Annulus a, Site start, Hand hand, SheetScan& out) {
  static constexpr std::array<int, 6> kLeftOrder = {2, 1, 0, -1, -2, 3};
  static constexpr std::array<int, 6> kRightOrder = {-2, -1, 0, 1, 2, 3};
  const auto& order = hand == Hand::left ? kLeftOrder : kRightOrder;

  struct Frame {
    Site site;
    int in_dir;
    int next;
    double phi;     // lifted angle; unused at the origin
    double phi0;    // lifted angle of the first site off the origin
  };
  BoxGrid<std::uint8_t> visited(a.outer + 1);
  auto record = [&](const Frame& f) {
    if (linf_norm(f.site) != a.outer) return;
    const double theta = f.phi - f.phi0;
    const int w = int(std::floor(f.phi / kTwoPi));
    if (!out.found) {
      out.found = true;
      out.theta_min = out.theta_max = theta;
      out.w_min = out.w_max = w;
      return;
    }
    out.theta_min = std::min(out.theta_min, theta);
    out.theta_max = std::max(out.theta_max, theta);
    out.w_min = std::min(out.w_min, w);
    out.w_max = std::max(out.w_max, w);
  };

  const bool at_origin = start == Site{0, 0};
  std::vector<Frame> stack;
  visited[start] = 1;
  if (at_origin) {
    stack.push_back({start, hand == Hand::left ? 0 : 1, 0, 0.0, 0.0});
  } else {
    const double phi = arg_positive(to_point(start));
    stack.push_back({start, root_direction(phi, hand), 0, phi, phi});
    record(stack.back());
  }
  while (!stack.empty()) {
    Frame& top = stack.back();
    const int limit = stack.size() == 1 ? 6 : 5;
    if (top.next >= limit) {
      stack.pop_back();
      continue;
    }
    const int d = wrap_direction(top.in_dir + order[top.next++]);
    const Site s = top.site + kDirections[d];
    if (!a.closed_contains(s) || visited[s] || c.color_of(s) != Color::black ||
        detail::through_hole(top.site, s, a.inner)) {
      continue;
    }
    visited[s] = 1;
    Frame next{s, d, 0, 0.0, 0.0};
    if (top.site == Site{0, 0}) {
      next.phi = next.phi0 = arg_positive(to_point(s));
    } else {
      next.phi = top.phi + angle_increment(to_point(top.site), to_point(s));
      next.phi0 = top.phi0;
    }
    stack.push_back(next);
    record(stack.back());
  }
}

}  // namespace

SheetRange winding_sheet_range(const Coloring& c, Annulus a, int window) {
  if (window <= 0) window = default_sheet_window(a.outer);
  SheetScan scan;
  for (Site s : inner_starts(a)) {
    if (c.color_of(s) != Color::black) continue;
    scan_tree(c, a, s, Hand::left, scan);
    scan_tree(c, a, s, Hand::right, scan);
  }
  SheetRange out;
  if (!scan.found) return out;
  if (scan.w_max >= window || scan.w_min <= -window) throw SheetWindowExhausted();
  out.empty = false;
  out.w_min = scan.w_min;
  out.w_max = scan.w_max;
  out.theta_min = scan.theta_min;
  out.theta_max = scan.theta_max;
  return out;
}

}  // namespace winding_lab
