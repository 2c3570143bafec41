#pragma once

#include <span>
#include <vector>

#include "winding_lab/lattice.hpp"

namespace winding_lab {

struct FaceRing;
struct ArmPath;

// Signed angle from the position vector of `from` to that of `to`, in
// (-pi, pi). Throws std::domain_error("origin on path") or
// std::domain_error("antipodal step").
double angle_increment(Point2 from, Point2 to);

// Total signed variation of the argument along the polyline.
double winding_angle(std::span<const Point2> points);
double winding_angle(std::span<const Site> sites);

// A polyline together with its cumulative winding.
class WindingTrace {
 public:
  WindingTrace() = default;
  explicit WindingTrace(std::vector<Point2> points);

  const std::vector<Point2>& points() const { return points_; }
  double theta() const { return theta_; }

  void append(Point2 p);
  // Joins `tail` at this trace's last point; the first point of `tail`
  // must coincide with it.
  WindingTrace concat(const WindingTrace& tail) const;

 private:
  std::vector<Point2> points_;
  double theta_ = 0.0;
};

// Anchor 2^(exponent+1) * exp(i (k-1) pi/2) attached to face path k.
Point2 face_anchor(int exponent, int k);

// Winding between two good-face rings along `connector`, with the radial
// anchor segments attached at both ends. Equal rings give 0.
// Throws std::invalid_argument("connector endpoint not on face") or
// std::invalid_argument("connector leaves region").
double winding_between_faces(const FaceRing& inner, const FaceRing& outer,
                             const ArmPath& connector);

// Winding from the boundary of `inner` to `face`: only the outer anchor
// segment is attached.
double winding_from_inner(Box inner, const FaceRing& face, const ArmPath& connector);
double winding_from_inner(const FaceRing& inner, const FaceRing& face,
                          const ArmPath& connector);

}  // namespace winding_lab
