#include <doctest.h>

#include <cmath>
#include <map>
#include <queue>
#include <random>

#include "winding_lab/explore.hpp"
#include "winding_lab/faces.hpp"
#include "winding_lab/winding.hpp"

using namespace winding_lab;

namespace {

std::vector<Site> random_path(std::mt19937_64& rng, std::size_t length) {
  std::vector<Site> path{{2 + int(rng() % 5), int(rng() % 7) - 3}};
  while (path.size() < length) {
    const Site next = path.back() + kDirections[rng() % 6];
    if (linf_norm(next) >= 1) path.push_back(next);
  }
  return path;
}

Coloring quadrants() {
  return Coloring::painted(80, [](Site s) {
    return std::abs(s.x) >= std::abs(s.y) ? Color::black : Color::white;
  });
}

// Shortest path by BFS from `from` to any site accepted by `goal`, through
// sites accepted by `keep`; neighbor order is rotated by `twist`.
template <typename Keep, typename Goal>
std::vector<Site> bfs_path(Site from, Keep keep, Goal goal, int twist) {
  std::map<Site, Site> parent{{from, from}};
  std::queue<Site> q;
  q.push(from);
  while (!q.empty()) {
    const Site s = q.front();
    q.pop();
    if (goal(s)) {
      std::vector<Site> out{s};
      while (!(out.back() == from)) out.push_back(parent[out.back()]);
      return {out.rbegin(), out.rend()};
    }
    for (int i = 0; i < 6; ++i) {
      const Site t = s + kDirections[(i + twist) % 6];
      if (linf_norm(t) > 40 || parent.count(t) || !keep(t)) continue;
      parent[t] = s;
      q.push(t);
    }
  }
  return {};
}

}  // namespace

TEST_CASE("winding examples") {
  const std::vector<Site> short_path = {{5, 0}, {5, 1}, {5, 2}};
  CHECK(winding_angle(std::span<const Site>(short_path)) ==
        doctest::Approx(std::atan(2.0 / 5.0)).epsilon(1e-14));

  const std::vector<Point2> square = {{1, 0}, {1, 1}, {-1, 1}, {-1, -1}, {1, -1}, {1, 0}};
  CHECK(winding_angle(std::span<const Point2>(square)) == doctest::Approx(kTwoPi).epsilon(1e-14));
}

TEST_CASE("reversed paths negate the winding") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    auto path = random_path(rng, 30);
    const double forward = winding_angle(std::span<const Site>(path));
    std::reverse(path.begin(), path.end());
    CHECK(winding_angle(std::span<const Site>(path)) == doctest::Approx(-forward).epsilon(1e-12));
  }
}

TEST_CASE("angle increments reject the origin and antipodal steps") {
  CHECK_THROWS_AS(angle_increment({0, 0}, {1, 0}), std::domain_error);
  CHECK_THROWS_AS(angle_increment({1, 0}, {-1, 0}), std::domain_error);
  CHECK(angle_increment({1, 0}, {0, 1}) == doctest::Approx(kPi / 2));
  const std::vector<Site> origin = {{0, 0}};
  CHECK_THROWS_AS(winding_angle(std::span<const Site>(origin)), std::domain_error);
}

TEST_CASE("winding traces concatenate additively") {
  WindingTrace a({{3, 0}, {3, 1}, {2, 2}});
  WindingTrace b({{2, 2}, {0, 3}, {-2, 2}});
  const auto ab = a.concat(b);
  CHECK(ab.points().size() == 5);
  CHECK(ab.theta() == doctest::Approx(a.theta() + b.theta()));
  CHECK(ab.theta() == doctest::Approx(3 * kPi / 4));
  a.append({0, 3});
  CHECK(a.theta() == doctest::Approx(kPi / 2));
  CHECK_THROWS_AS(a.concat(WindingTrace({{5, 5}, {6, 6}})), std::invalid_argument);
}

TEST_CASE("face anchors") {
  CHECK(face_anchor(2, 1) == Point2{8, 0});
  CHECK(face_anchor(2, 2) == Point2{0, 8});
  CHECK(face_anchor(3, 3) == Point2{-16, 0});
  CHECK(face_anchor(3, 4) == Point2{0, -16});
}

TEST_CASE("winding between planted faces") {
  const auto c = quadrants();
  const auto inner = detect_good_faces(c, 2);
  const auto outer = detect_good_faces(c, 3);
  REQUIRE(inner);
  REQUIRE(outer);

  CHECK(winding_between_faces(*inner, *inner, ArmPath{}) == 0.0);

  // Region between the two circuits, faces included.
  auto keep = [&](Site s) {
    if (outer->on_face(s) || inner->on_face(s)) return true;
    return outer->encloses(s) && !inner->encloses(s);
  };
  std::vector<double> thetas;
  for (int k1 = 1; k1 <= 4; ++k1) {
    for (Site start : inner->paths[k1 - 1].sites) {
      const int k2 = k1 % 4 + 1;
      for (int twist = 0; twist < 6; twist += 3) {
        const auto path = bfs_path(start, keep, [&](Site s) { return outer->path_index(s) == k2; }, twist);
        REQUIRE_FALSE(path.empty());
        if (inner->path_index(path.front()) != k1) continue;
        const double th = winding_between_faces(*inner, *outer, ArmPath{path, Color::black});
        // A connector from path k1 to path k1 + 1 that turns less than a
        // half turn gives exactly a quarter turn between the anchors.
        if (std::fabs(winding_angle(std::span<const Site>(path))) < kPi) {
          CHECK(th == doctest::Approx(kPi / 2).epsilon(1e-12));
        }
        thetas.push_back(th);
      }
    }
  }
  REQUIRE(thetas.size() > 10);
}

TEST_CASE("winding between faces does not depend on the connector") {
  // Connectors are monochromatic, like the arms they stand for; in the
  // quadrant pattern each color class between the faces is a pair of
  // wedges, so a connector cannot wind around the origin.
  const auto c = quadrants();
  const auto inner = detect_good_faces(c, 2);
  const auto outer = detect_good_faces(c, 4);
  REQUIRE(inner);
  REQUIRE(outer);
  std::mt19937 rng(9);
  int compared = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = 1 + int(rng() % 4);
    const Color color = inner->paths[k - 1].color;
    auto keep = [&](Site s) {
      if (c.color_of(s) != color) return false;
      if (outer->on_face(s) || inner->on_face(s)) return true;
      return outer->encloses(s) && !inner->encloses(s);
    };
    const auto& from = inner->paths[k - 1].sites;
    const Site a = from[rng() % from.size()], b = from[rng() % from.size()];
    const auto goal = [&](Site s) { return outer->path_index(s) != 0; };
    const auto p = bfs_path(a, keep, goal, int(rng() % 6));
    const auto q = bfs_path(b, keep, goal, int(rng() % 6));
    REQUIRE_FALSE(p.empty());
    REQUIRE_FALSE(q.empty());
    if (inner->path_index(p.front()) != k || inner->path_index(q.front()) != k) continue;
    if (outer->path_index(p.back()) != outer->path_index(q.back())) continue;
    const double tp = winding_between_faces(*inner, *outer, ArmPath{p, color});
    const double tq = winding_between_faces(*inner, *outer, ArmPath{q, color});
    CHECK(std::fabs(tp - tq) < 1e-9);
    ++compared;
  }
  CHECK(compared > 500);
}

TEST_CASE("connectors must stay in the region between faces") {
  const auto c = quadrants();
  const auto inner = detect_good_faces(c, 2);
  const auto outer = detect_good_faces(c, 3);
  REQUIRE(inner);
  REQUIRE(outer);
  const Site on_inner = inner->paths[0].sites.front();
  CHECK_THROWS_AS(winding_between_faces(*inner, *outer, ArmPath{{on_inner, {1, 0}}, Color::black}),
                  std::invalid_argument);
  CHECK_THROWS_AS(winding_between_faces(*inner, *outer, ArmPath{{{1, 0}}, Color::black}),
                  std::invalid_argument);
}

TEST_CASE("winding from the inner box") {
  const auto c = quadrants();
  const auto face = detect_good_faces(c, 3);
  REQUIRE(face);
  // Straight radial connector along the x-axis, meeting path 1.
  std::vector<Site> ray;
  for (int x = 1; face->path_index(ray.empty() ? Site{0, 0} : ray.back()) == 0; ++x) {
    ray.push_back({x, 0});
  }
  REQUIRE(face->path_index(ray.back()) == 1);
  CHECK(winding_from_inner(Box{1}, *face, ArmPath{ray, Color::black}) == 0.0);

  const auto arm = canonical_arm(c, Annulus(1, 40));
  std::vector<Site> cut;
  for (Site s : arm.sites) {
    cut.push_back(s);
    if (face->on_face(s)) break;
  }
  REQUIRE(face->on_face(cut.back()));
  const double x = winding_from_inner(Box{1}, *face, ArmPath{cut, Color::black});
  CHECK(std::isfinite(x));
  CHECK(x == winding_from_inner(Box{1}, *face, ArmPath{cut, Color::black}));
}
