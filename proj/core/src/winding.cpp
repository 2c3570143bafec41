#include "winding_lab/winding.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

#include "winding_lab/explore.hpp"
#include "winding_lab/faces.hpp"

namespace winding_lab {

double angle_increment(Point2 from, Point2 to) {
  if ((from.x == 0.0 && from.y == 0.0) || (to.x == 0.0 && to.y == 0.0)) {
    throw std::domain_error("origin on path");
  }
  const double cross = from.x * to.y - from.y * to.x;
  const double dot = from.x * to.x + from.y * to.y;
  if (cross == 0.0 && dot < 0.0) throw std::domain_error("antipodal step");
  return std::atan2(cross, dot);
}

double winding_angle(std::span<const Point2> points) {
  double theta = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    theta += angle_increment(points[i - 1], points[i]);
  }
  if (points.size() == 1 && points[0].x == 0.0 && points[0].y == 0.0) {
    throw std::domain_error("origin on path");
  }
  return theta;
}

double winding_angle(std::span<const Site> sites) {
  double theta = 0.0;
  for (std::size_t i = 1; i < sites.size(); ++i) {
    theta += angle_increment(to_point(sites[i - 1]), to_point(sites[i]));
  }
  if (sites.size() == 1 && sites[0] == Site{0, 0}) throw std::domain_error("origin on path");
  return theta;
}

WindingTrace::WindingTrace(std::vector<Point2> points) : points_(std::move(points)) {
  theta_ = winding_angle(std::span<const Point2>(points_));
}

void WindingTrace::append(Point2 p) {
  if (!points_.empty()) theta_ += angle_increment(points_.back(), p);
  else if (p.x == 0.0 && p.y == 0.0) throw std::domain_error("origin on path");
  points_.push_back(p);
}

WindingTrace WindingTrace::concat(const WindingTrace& tail) const {
  if (points_.empty()) return tail;
  if (tail.points_.empty()) return *this;
  if (!(tail.points_.front() == points_.back())) {
    throw std::invalid_argument("traces do not share an endpoint");
  }
  WindingTrace out = *this;
  out.points_.insert(out.points_.end(), tail.points_.begin() + 1, tail.points_.end());
  out.theta_ += tail.theta_;
  return out;
}

Point2 face_anchor(int exponent, int k) {
  const double r = std::ldexp(1.0, exponent + 1);
  switch (((k - 1) % 4 + 4) % 4) {
    case 0: return {r, 0.0};
    case 1: return {0.0, r};
    case 2: return {-r, 0.0};
    default: return {0.0, -r};
  }
}

namespace {

void check_region(const FaceRing* inner, const FaceRing& outer, const ArmPath& connector) {
  for (Site s : connector.sites) {
    if (outer.on_face(s)) continue;
    if (!outer.encloses(s)) throw std::invalid_argument("connector leaves region");
    if (inner != nullptr && !inner->on_face(s) && inner->encloses(s)) {
      throw std::invalid_argument("connector leaves region");
    }
  }
}

double anchored(std::optional<Point2> head, const ArmPath& connector, Point2 tail) {
  std::vector<Point2> pts;
  pts.reserve(connector.sites.size() + 2);
  if (head) pts.push_back(*head);
  for (Site s : connector.sites) pts.push_back(to_point(s));
  pts.push_back(tail);
  return winding_angle(std::span<const Point2>(pts));
}

}  // namespace

double winding_between_faces(const FaceRing& inner, const FaceRing& outer,
                             const ArmPath& connector) {
  if (inner == outer) return 0.0;
  if (connector.sites.empty()) throw std::invalid_argument("connector endpoint not on face");
  const int k1 = inner.path_index(connector.sites.front());
  const int k2 = outer.path_index(connector.sites.back());
  if (k1 == 0 || k2 == 0) throw std::invalid_argument("connector endpoint not on face");
  check_region(&inner, outer, connector);
  return anchored(face_anchor(inner.exponent, k1), connector, face_anchor(outer.exponent, k2));
}

double winding_from_inner(Box inner, const FaceRing& face, const ArmPath& connector) {
  if (connector.sites.empty() || linf_norm(connector.sites.front()) != inner.r ||
      !face.on_face(connector.sites.back())) {
    throw std::invalid_argument("connector endpoint not on face");
  }
  check_region(nullptr, face, connector);
  for (Site s : connector.sites) {
    if (s == Site{0, 0}) throw std::invalid_argument("connector leaves region");
  }
  const int k = face.path_index(connector.sites.back());
  return anchored(std::nullopt, connector, face_anchor(face.exponent, k));
}

double winding_from_inner(const FaceRing& inner, const FaceRing& face,
                          const ArmPath& connector) {
  if (inner == face) return 0.0;
  if (connector.sites.empty() || !inner.on_face(connector.sites.front()) ||
      !face.on_face(connector.sites.back())) {
    throw std::invalid_argument("connector endpoint not on face");
  }
  check_region(&inner, face, connector);
  const int k = face.path_index(connector.sites.back());
  return anchored(std::nullopt, connector, face_anchor(face.exponent, k));
}

}  // namespace winding_lab
