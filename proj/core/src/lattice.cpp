#include "winding_lab/lattice.hpp"

#include <stdexcept>

namespace winding_lab {

int direction_index(Site offset) {
  for (int d = 0; d < 6; ++d) {
    if (kDirections[d] == offset) return d;
  }
  return -1;
}

std::array<Site, 6> neighbors(Site s) {
  std::array<Site, 6> out;
  for (int d = 0; d < 6; ++d) out[d] = s + kDirections[d];
  return out;
}

bool adjacent(Site a, Site b) { return direction_index(b - a) >= 0; }

double arg(Point2 p) {
  if (p.x == 0.0 && p.y == 0.0) {
    throw std::domain_error("argument undefined at origin");
  }
  return std::atan2(p.y, p.x);
}

double arg(Site s) { return arg(to_point(s)); }

double arg_positive(Point2 p) {
  const double a = arg(p);
  return a < 0.0 ? a + kTwoPi : a;
}

std::vector<Site> boundary_sites(Box b) {
  if (b.r < 0) throw std::invalid_argument("box radius must be nonnegative");
  if (b.r == 0) return {Site{0, 0}};
  std::vector<Site> out;
  out.reserve(std::size_t(8 * b.r));
  for (int i = 0; i < 8 * b.r; ++i) out.push_back(ring_site(i, b.r));
  return out;
}

int ring_index(Site s, int r) {
  if (r < 1 || linf_norm(s) != r) return -1;
  if (s.x == r && s.y > -r) return s.y + r - 1;
  if (s.y == r) return 2 * r + (r - 1 - s.x);
  if (s.x == -r) return 4 * r + (r - 1 - s.y);
  return 6 * r + (s.x + r - 1);
}

Site ring_site(int index, int r) {
  const int side = index / (2 * r);
  const int k = index % (2 * r);
  switch (side) {
    case 0: return {r, k - r + 1};
    case 1: return {r - 1 - k, r};
    case 2: return {-r, r - 1 - k};
    default: return {k - r + 1, -r};
  }
}

Annulus::Annulus(int inner_radius, int outer_radius)
    : inner(inner_radius), outer(outer_radius) {
  if (inner < 0 || outer <= inner) {
    throw std::invalid_argument("annulus requires 0 <= inner < outer");
  }
}

Annulus dyadic_annulus(int p) {
  if (p < 0 || p > 29) throw std::invalid_argument("dyadic exponent out of range");
  return Annulus(1 << p, 1 << (p + 1));
}

Sector Sector::between(double lo, double hi) {
  const double width = hi - lo;
  if (!(width > 0.0) || width >= kTwoPi) {
    throw std::invalid_argument("sector width must lie in (0, 2pi)");
  }
  double l = std::remainder(lo, kTwoPi);  // [-pi, pi]
  if (l <= -kPi) l += kTwoPi;
  return Sector{l, l + width, l + width > kPi};
}

bool Sector::contains(Point2 p) const {
  double a = arg(p);
  if (a <= lo) a += kTwoPi;
  return lo < a && a < hi;
}

Sector octant_sector(int i) {
  return Sector::between(-3.0 * kPi / 8.0 + i * kPi / 4.0,
                         -kPi / 8.0 + i * kPi / 4.0);
}

Sector crossing_sector() { return Sector::between(-kPi / 10.0, kPi / 10.0); }

}  // namespace winding_lab
