#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <vector>

namespace winding_lab {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// A site of the triangular lattice realized on Z^2. Its Euclidean
// embedding is the integer point (x, y).
struct Site {
  int x = 0;
  int y = 0;

  friend constexpr bool operator==(Site, Site) = default;
  friend constexpr auto operator<=>(Site, Site) = default;

  constexpr Site operator+(Site o) const { return {x + o.x, y + o.y}; }
  constexpr Site operator-(Site o) const { return {x - o.x, y - o.y}; }
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr bool operator==(Point2, Point2) = default;
};

constexpr Point2 to_point(Site s) { return {double(s.x), double(s.y)}; }

inline int linf_norm(Site s) { return std::max(std::abs(s.x), std::abs(s.y)); }

// The six lattice directions in counterclockwise order starting from +x.
inline constexpr std::array<Site, 6> kDirections = {
    Site{1, 0}, Site{0, 1}, Site{-1, 1}, Site{-1, 0}, Site{0, -1}, Site{1, -1}};

constexpr int wrap_direction(int d) { return ((d % 6) + 6) % 6; }

// Index of `offset` in kDirections, or -1 if it is not a lattice step.
int direction_index(Site offset);

std::array<Site, 6> neighbors(Site s);
bool adjacent(Site a, Site b);

// Argument in (-pi, pi]. Throws std::domain_error at the origin.
double arg(Point2 p);
double arg(Site s);
// Argument in [0, 2pi); this is the branch used when the plane is cut
// along the positive x-axis.
double arg_positive(Point2 p);

// B(r) = { s : ||s||_inf <= r }.
struct Box {
  int r = 0;

  bool contains(Site s) const { return linf_norm(s) <= r; }
  int boundary_size() const { return r == 0 ? 1 : 8 * r; }
};

// Inner vertex boundary of B(r): member sites adjacent to a non-member.
// Returned in counterclockwise order, see ring_index.
std::vector<Site> boundary_sites(Box b);

// Position of a site of the l_inf ring of radius r >= 1 in counterclockwise
// order; the ring is enumerated starting at (r, -r + 1). Returns -1 for
// sites not on the ring.
int ring_index(Site s, int r);
Site ring_site(int index, int r);

// A(inner, outer) = B(outer) \ B(inner).
struct Annulus {
  int inner = 1;
  int outer = 2;

  Annulus() = default;
  Annulus(int inner_radius, int outer_radius);

  bool contains(Site s) const {
    const int n = linf_norm(s);
    return n > inner && n <= outer;
  }
  // Closed annulus used for arm events: both boundary rings included.
  bool closed_contains(Site s) const {
    const int n = linf_norm(s);
    return n >= inner && n <= outer;
  }
};

// Dyadic annulus A(p) = A(2^p, 2^(p+1)).
Annulus dyadic_annulus(int p);

// Open angular sector lo < arg(z) < hi, taken cyclically. When `wraps` is
// set the arc crosses the branch cut at pi, i.e. hi is expressed past pi.
struct Sector {
  double lo = 0.0;
  double hi = 0.0;
  bool wraps = false;

  static Sector between(double lo, double hi);
  bool contains(Point2 p) const;
  bool contains(Site s) const { return contains(to_point(s)); }
};

// C_i = { -3pi/8 + i pi/4 < arg z < -pi/8 + i pi/4 }, indices taken mod 8.
Sector octant_sector(int i);
// Angular part of R(m, n): |arg z| < pi/10.
Sector crossing_sector();

// Dense storage over the sites of a box, for per-call scratch state.
template <typename T>
class BoxGrid {
 public:
  explicit BoxGrid(int radius, T fill = T{})
      : radius_(radius), side_(2 * radius + 1),
        cells_(std::size_t(side_) * std::size_t(side_), fill) {}

  int radius() const { return radius_; }
  bool in_range(Site s) const { return linf_norm(s) <= radius_; }

  T& operator[](Site s) { return cells_[offset(s)]; }
  const T& operator[](Site s) const { return cells_[offset(s)]; }

  void fill(T v) { std::fill(cells_.begin(), cells_.end(), v); }

 private:
  std::size_t offset(Site s) const {
    return std::size_t(s.x + radius_) * std::size_t(side_) +
           std::size_t(s.y + radius_);
  }

  int radius_;
  int side_;
  std::vector<T> cells_;
};

}  // namespace winding_lab

template <>
struct std::hash<winding_lab::Site> {
  std::size_t operator()(winding_lab::Site s) const noexcept {
    const auto k = (std::uint64_t(std::uint32_t(s.x)) << 32) | std::uint32_t(s.y);
    return std::size_t(k * 0x9E3779B97F4A7C15ull ^ (k >> 29));
  }
};
