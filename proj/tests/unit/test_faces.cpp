#include <doctest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "winding_lab/faces.hpp"

using namespace winding_lab;

namespace {

Coloring quadrants(int radius) {
  return Coloring::painted(radius, [](Site s) {
    return std::abs(s.x) >= std::abs(s.y) ? Color::black : Color::white;
  });
}

FaceRing synthetic(int exponent, std::array<Point2, 4> endpoints) {
  FaceRing f;
  f.exponent = exponent;
  f.endpoints = endpoints;
  return f;
}

}  // namespace

TEST_CASE("uniform coloring has no good faces") {
  const auto c = Coloring::painted(40, [](Site) { return Color::black; });
  for (int p = 1; p <= 4; ++p) CHECK_FALSE(detect_good_faces(c, p));
}

TEST_CASE("quadrant coloring has good faces at every scale") {
  const auto c = quadrants(70);
  for (int p = 1; p <= 5; ++p) {
    const auto f = detect_good_faces(c, p);
    REQUIRE(f);
    CHECK(f->exponent == p);
    for (int k = 0; k < 4; ++k) {
      CHECK(f->paths[k].color != f->paths[(k + 1) % 4].color);
      CHECK_FALSE(f->paths[k].sites.empty());
      for (Site s : f->paths[k].sites) {
        CHECK(c.color_of(s) == f->paths[k].color);
        CHECK(face_path_sector(k + 1).contains(s));
        CHECK(linf_norm(s) > (1 << p));
        CHECK(linf_norm(s) <= (2 << p));
      }
      for (std::size_t i = 1; i < f->paths[k].sites.size(); ++i) {
        CHECK(oracle::touching(f->paths[k].sites[i - 1], f->paths[k].sites[i]));
      }
    }
    CHECK(f->quality > 0.0);
    CHECK(f->quality <= 2 * std::sqrt(2.0));
    CHECK(face_quality(*f) == doctest::Approx(f->quality));
  }
}

TEST_CASE("face circuit separates the inner box from the far boundary") {
  const auto c = quadrants(70);
  for (int p = 1; p <= 4; ++p) {
    const auto f = detect_good_faces(c, p);
    REQUIRE(f);
    const auto circuit = f->circuit();
    const std::set<Site> wall(circuit.begin(), circuit.end());
    for (std::size_t i = 0; i < circuit.size(); ++i) {
      CHECK(oracle::touching(circuit[i], circuit[(i + 1) % circuit.size()]));
    }
    for (Site s : boundary_sites(Box{1 << p})) CHECK(f->encloses(s));
    for (Site s : boundary_sites(Box{4 << p})) CHECK_FALSE(f->encloses(s));
    // No path from B(2^p) to dB(2^(p+2)) avoids the circuit.
    std::vector<Site> inner;
    for (int x = -(1 << p); x <= (1 << p); ++x) {
      for (int y = -(1 << p); y <= (1 << p); ++y) inner.push_back({x, y});
    }
    const auto reached = oracle::reachable(inner, 4 << p, [&](Site s) { return !wall.count(s); });
    for (Site s : reached) CHECK(linf_norm(s) < (4 << p));
  }
}

TEST_CASE("face quality examples") {
  const double r = 8;
  const auto axes = synthetic(2, {Point2{r, 0}, Point2{0, r}, Point2{-r, 0}, Point2{0, -r}});
  CHECK(face_quality(axes) == doctest::Approx(std::sqrt(2.0)));
  const auto pinched = synthetic(2, {Point2{r, 0}, Point2{r, 0}, Point2{-r, 0}, Point2{0, -r}});
  CHECK(face_quality(pinched) == 0.0);
}

TEST_CASE("serialized faces round-trip") {
  const auto c = quadrants(40);
  const auto f = detect_good_faces(c, 3);
  REQUIRE(f);
  const std::string text = serialize_face(*f);
  const FaceRing back = parse_face(text);
  CHECK(back == *f);
  CHECK(serialize_face(back) == text);
  CHECK_THROWS(parse_face("not a face"));
}

TEST_CASE("ladder with faces at every scale") {
  const auto c = quadrants(140);
  const auto ladder = build_scale_ladder(c, 4);
  REQUIRE(ladder.entries.size() == 4);
  for (const auto& e : ladder.entries) {
    REQUIRE(e.m);
    CHECK(*e.m == e.p);
  }
  CHECK(ladder.face_at(3) != nullptr);
  CHECK(ladder.face_at(3)->exponent == 3);
}

TEST_CASE("ladder with faces at even scales only") {
  const int q = 6;
  std::vector<std::optional<FaceRing>> detections(20);
  for (int t = 0; t < 20; t += 2) {
    FaceRing f;
    f.exponent = t;
    detections[t] = f;
  }
  const auto ladder = ladder_from_detections(q, detections);
  REQUIRE(ladder.entries.size() == std::size_t(q));
  for (const auto& e : ladder.entries) {
    REQUIRE(e.m);
    CHECK(*e.m == e.p + (e.p % 2));
  }
}

TEST_CASE("ladder window and exhaustion") {
  CHECK(ladder_window(1, 1) == 1 + 1 + 4);
  CHECK(ladder_window(3, 8) == 3 + 2 + 4);
  CHECK(ladder_window(3, 9) == 3 + 3 + 4);
  std::vector<std::optional<FaceRing>> none(30);
  const auto ladder = ladder_from_detections(3, none);
  for (const auto& e : ladder.entries) CHECK_FALSE(e.m);
  CHECK_FALSE(ladder.m(2));
}
