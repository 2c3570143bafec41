#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "winding_lab/config.hpp"
#include "winding_lab/lattice.hpp"

namespace winding_lab {

// One of the two triangles of the rhombus at `base`:
//   lower = {(x,y), (x+1,y), (x,y+1)},  upper = {(x+1,y), (x+1,y+1), (x,y+1)}.
// Triangles are the vertices of the dual hexagonal lattice.
struct DualVertex {
  enum class Orientation : std::uint8_t { lower, upper };

  Site base;
  Orientation orientation = Orientation::lower;

  std::array<Site, 3> corners() const;
  Point2 centroid() const;

  friend bool operator==(const DualVertex&, const DualVertex&) = default;
};

DualVertex triangle_of(Site a, Site b, Site c);

// A lattice edge crossed by an interface, oriented so that `left` lies on
// the walker's left.
struct DualEdge {
  Site left;
  Site right;

  Point2 midpoint() const {
    return {0.5 * (left.x + right.x), 0.5 * (left.y + right.y)};
  }
  friend bool operator==(const DualEdge&, const DualEdge&) = default;
};

// Interface traced from the inner boundary of a closed annulus. Consecutive
// crossed edges share a triangle; every crossed edge has a left_color site
// on its left and an opposite-color site on its right.
struct InterfaceCurve {
  std::vector<DualEdge> edges;
  Color left_color = Color::black;
  bool crossed = false;

  const DualEdge& start_anchor() const { return edges.front(); }
  const DualEdge& end_anchor() const { return edges.back(); }
  Point2 inner_endpoint() const { return edges.front().midpoint(); }
  Point2 outer_endpoint() const { return edges.back().midpoint(); }

  // Triangles visited between consecutive crossed edges.
  std::vector<DualVertex> vertices() const;
  // Sites on the left of the curve, chronologically loop-erased: a
  // left_color path from the inner ring to the outer ring when crossed.
  std::vector<Site> left_arm() const;
  // Same for the right side, a path of the opposite color.
  std::vector<Site> right_arm() const;
};

// Interfaces crossing a closed annulus, sorted counterclockwise by the
// argument of their outer endpoint in [0, 2pi).
struct CrossingSet {
  std::vector<InterfaceCurve> interfaces;
  int inner_radius = 0;
  int outer_radius = 0;
  // Interfaces launched from the inner boundary that returned to it.
  std::size_t returned = 0;
  // Set when tracing stopped early at a caller-provided limit.
  bool truncated = false;

  std::size_t size() const { return interfaces.size(); }
};

struct TraceOptions {
  // Stop as soon as this many crossing interfaces have been found.
  std::size_t stop_at = std::numeric_limits<std::size_t>::max();
};

// Traces every interface launched from the inner boundary of the closed
// annulus {a.inner <= ||z|| <= a.outer} and keeps those reaching the outer
// ring. Interfaces on the triangular lattice are forced: each bichromatic
// triangle has exactly two bichromatic edges.
CrossingSet trace_interfaces(const Coloring& c, Annulus a, TraceOptions options = {});

// Mutation hook for `verify --inject-fault`: when on, every dual-vertex
// turn of the interface walk goes the wrong way. Process-wide; off by
// default.
void set_turn_fault(bool on);

// Minimal pairwise distance of the outer endpoints divided by the outer
// radius; 0 for fewer than two interfaces.
double quality(const CrossingSet& g);

// Monochromatic path of adjacent sites from the inner ring to the outer
// ring, ordered inner to outer.
struct ArmPath {
  std::vector<Site> sites;
  Color color = Color::black;
};

class NoCrossingArm : public std::runtime_error {
 public:
  NoCrossingArm() : std::runtime_error("no crossing arm") {}
};

class SheetWindowExhausted : public std::runtime_error {
 public:
  SheetWindowExhausted() : std::runtime_error("sheet window exhausted") {}
};

// True iff |sigma| disjoint arms with the prescribed colors in
// counterclockwise cyclic order connect the two boundary rings of the
// closed annulus. Alternating sigma is decided by the crossing-interface
// count; other sequences by matching sigma against the per-sector arm
// capacities between consecutive crossing interfaces.
bool has_arm_event(const Coloring& c, Annulus a, const ColorSequence& sigma);

// Maximum number of vertex-disjoint `color` crossings of the closed
// annulus.
int max_disjoint_arms(const Coloring& c, Annulus a, Color color);

// Deterministic arm: the left-most depth-first search of the `color`
// cluster, launched from the inner-ring site of smallest argument in
// [0, 2pi) that reaches the outer ring, stopping at first contact with it.
// Throws NoCrossingArm.
ArmPath canonical_arm(const Coloring& c, Annulus a, Color color = Color::black);

// The canonical rule applied to the reflected configuration and mapped
// back, i.e. the right-most counterpart of canonical_arm.
ArmPath mirrored_canonical_arm(const Coloring& c, Annulus a,
                               Color color = Color::black);

// Winding of an arm. When the arm starts at the origin the origin is
// dropped, as the argument is undefined there.
double arm_winding(const ArmPath& arm);

// The reflection-balanced arm used for winding statistics, one of
// canonical_arm and mirrored_canonical_arm. If the annulus has crossing
// interfaces, the one whose winding is closer to the mean winding of the
// interface side arms is taken. Otherwise (and on ties) canonical_arm is
// taken when the two windings sum to a nonnegative value. Reflecting the
// configuration reflects the selected arm.
ArmPath balanced_arm(const Coloring& c, Annulus a, Color color = Color::black);

// One arm per crossing interface, read off its left side. The arms are
// pairwise disjoint since each lies in a different sector.
std::vector<ArmPath> interface_arms(const CrossingSet& g, const Coloring& c);

// Maximum number of vertex-disjoint black paths in
// R(m, n) = { m < ||z||_inf <= n, |arg z| < pi/10 } joining the two
// bounding rays (endpoints within Euclidean distance sqrt(2) of the rays),
// by repeatedly removing the innermost crossing.
int count_disjoint_black_crossings(const Coloring& c, int m, int n);

// Site set and ray-adjacent end sets of R(m, n).
struct CrossingRectangle {
  std::vector<Site> sites;
  std::vector<char> near_lower;  // within sqrt(2) of the ray at -pi/10
  std::vector<char> near_upper;  // within sqrt(2) of the ray at +pi/10
};
CrossingRectangle crossing_rectangle(int m, int n);

struct SheetRange {
  bool empty = true;
  int w_min = 0;
  int w_max = 0;
  // Windings of the extremal witness arms.
  double theta_min = 0.0;
  double theta_max = 0.0;
};

int default_sheet_window(int outer_radius);

// Lifts black arms to the universal cover cut along the positive x-axis
// (inner start on sheet 0) and reports the extreme sheets reached on the
// outer ring together with the exact windings of the witnessing arms.
// Witnesses are the paths of left- and right-most depth-first trees of the
// black clusters, one tree per inner start. Throws SheetWindowExhausted
// if a sheet index reaches +-window.
SheetRange winding_sheet_range(const Coloring& c, Annulus a, int window = 0);

}  // namespace winding_lab
