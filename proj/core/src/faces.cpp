#include "winding_lab/faces.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "search.hpp"
#include "winding_lab/winding.hpp"

namespace winding_lab {

int FaceRing::path_index(Site s) const {
  for (int k = 0; k < 4; ++k) {
    const auto& sites = paths[k].sites;
    if (std::find(sites.begin(), sites.end(), s) != sites.end()) return k + 1;
  }
  return 0;
}

std::vector<Site> FaceRing::circuit() const {
  std::vector<Site> out;
  for (const auto& path : paths) out.insert(out.end(), path.sites.begin(), path.sites.end());
  return out;
}

bool FaceRing::encloses(Site s) const {
  if (on_face(s)) return false;
  const auto loop = circuit();
  double total = 0.0;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const Site a = loop[i] - s;
    const Site b = loop[(i + 1) % loop.size()] - s;
    total += std::atan2(double(a.x) * b.y - double(a.y) * b.x,
                        double(a.x) * b.x + double(a.y) * b.y);
  }
  return std::fabs(total) > kPi;
}

bool operator==(const FaceRing& a, const FaceRing& b) {
  if (a.exponent != b.exponent) return false;
  for (int k = 0; k < 4; ++k) {
    if (a.paths[k].sites != b.paths[k].sites || a.paths[k].color != b.paths[k].color) {
      return false;
    }
    if (!(a.endpoints[k] == b.endpoints[k])) return false;
  }
  return true;
}

Sector face_path_sector(int k) {
  return Sector::between((k - 2) * kPi / 2 - kPi / 8, k * kPi / 2 + kPi / 8);
}

namespace {

// Index i in 1..8 of the octant sector containing p, 0 on a boundary ray.
int octant_of(Point2 p) {
  for (int i = 1; i <= 8; ++i) {
    if (octant_sector(i).contains(p)) return i;
  }
  return 0;
}

}  // namespace

std::optional<FaceRing> detect_good_faces(const Coloring& c, int p) {
  if (p < 1) throw std::invalid_argument("good faces need p >= 1");
  const Annulus a = dyadic_annulus(p);
  const auto g = trace_interfaces(c, a, {5});
  if (g.size() != 4) return std::nullopt;

  // by_octant[j] = interface ending in C_{2j+2}.
  std::array<const InterfaceCurve*, 4> by_octant{};
  for (const auto& curve : g.interfaces) {
    const int i = octant_of(curve.outer_endpoint());
    if (i == 0 || i % 2 != 0) return std::nullopt;
    if (octant_of(curve.inner_endpoint()) != i) return std::nullopt;
    auto& slot = by_octant[i / 2 - 1];
    if (slot != nullptr) return std::nullopt;
    slot = &curve;
    const Sector corridor = Sector::between(-3 * kPi / 8 + (i - 1) * kPi / 4,
                                            -kPi / 8 + (i + 1) * kPi / 4);
    for (const auto& v : curve.vertices()) {
      if (!corridor.contains(v.centroid())) return std::nullopt;
    }
  }

  FaceRing face;
  face.exponent = p;
  // Face paths avoid the inner ring, so faces of adjacent annuli are disjoint.
  const Annulus open_annulus(a.inner + 1, a.outer);
  BoxGrid<std::uint8_t> visited(a.outer + 1);
  for (int k = 1; k <= 4; ++k) {
    const InterfaceCurve& from = *by_octant[(k + 2) % 4];  // C_{2k-2}
    const InterfaceCurve& to = *by_octant[k - 1];          // C_{2k}
    const Color color = from.left_color;
    if (to.left_color == color) return std::nullopt;
    const Site start = from.end_anchor().left;
    const Site goal = to.end_anchor().right;
    auto allowed = [&](Site, Site s) {
      return open_annulus.contains(s) && c.color_of(s) == color;
    };
    auto target = [&](Site s) { return s == goal; };
    visited.fill(0);
    if (!open_annulus.contains(start)) return std::nullopt;
    const int d0 = detail::nearest_direction(arg(start) + kPi / 2);
    auto path = detail::extremal_dfs(start, d0, detail::Hand::right, allowed, target, visited);
    if (path.empty()) return std::nullopt;
    const Sector sec = face_path_sector(k);
    for (Site s : path) {
      if (!sec.contains(s)) return std::nullopt;
    }
    face.paths[k - 1] = ArmPath{std::move(path), color};
    face.endpoints[k - 1] = from.outer_endpoint();
  }
  face.quality = face_quality(face);
  return face;
}

double face_quality(const FaceRing& f) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      best = std::min(best, std::hypot(f.endpoints[i].x - f.endpoints[j].x,
                                       f.endpoints[i].y - f.endpoints[j].y));
    }
  }
  return best / f.outer_radius();
}

std::string serialize_face(const FaceRing& f) {
  std::ostringstream out;
  out.precision(17);
  out << "face " << f.exponent << ' ' << f.quality << '\n';
  for (int k = 0; k < 4; ++k) {
    out << "path " << (k + 1) << ' ' << color_letter(f.paths[k].color) << ' '
        << f.paths[k].sites.size();
    for (Site s : f.paths[k].sites) out << ' ' << s.x << ' ' << s.y;
    out << '\n';
  }
  out << "endpoints";
  for (const auto& e : f.endpoints) out << ' ' << e.x << ' ' << e.y;
  out << '\n';
  return out.str();
}

FaceRing parse_face(const std::string& text) {
  std::istringstream in(text);
  auto fail = [] { throw std::invalid_argument("malformed face record"); };
  std::string word;
  FaceRing f;
  if (!(in >> word) || word != "face" || !(in >> f.exponent >> f.quality)) fail();
  for (int k = 0; k < 4; ++k) {
    int index = 0;
    char letter = 0;
    std::size_t count = 0;
    if (!(in >> word) || word != "path" || !(in >> index >> letter >> count)) fail();
    if (index != k + 1 || (letter != 'B' && letter != 'W')) fail();
    f.paths[k].color = letter == 'B' ? Color::black : Color::white;
    f.paths[k].sites.resize(count);
    for (auto& s : f.paths[k].sites) {
      if (!(in >> s.x >> s.y)) fail();
    }
  }
  if (!(in >> word) || word != "endpoints") fail();
  for (auto& e : f.endpoints) {
    if (!(in >> e.x >> e.y)) fail();
  }
  return f;
}

const FaceRing* ScaleLadder::face_at(int t) const {
  for (const auto& [exp, face] : faces) {
    if (exp == t) return &face;
  }
  return nullptr;
}

std::optional<int> ScaleLadder::m(int p) const {
  for (const auto& e : entries) {
    if (e.p == p) return e.m;
  }
  return std::nullopt;
}

int ladder_window(int p, int q) {
  return p + int(std::ceil(std::cbrt(double(q)) - 1e-12)) + 4;
}

ScaleLadder ladder_from_detections(int q, const std::vector<std::optional<FaceRing>>& detections) {
  ScaleLadder ladder;
  ladder.q = q;
  for (std::size_t t = 0; t < detections.size(); ++t) {
    if (detections[t]) ladder.faces.emplace_back(int(t), *detections[t]);
  }
  for (int p = 1; p <= q; ++p) {
    LadderEntry entry{p, std::nullopt};
    const int cap = std::min(ladder_window(p, q), int(detections.size()) - 1);
    for (int t = p; t <= cap; ++t) {
      if (detections[t]) {
        entry.m = t;
        break;
      }
    }
    ladder.entries.push_back(entry);
  }
  const auto mq = ladder.m(q);
  ladder.a_q_holds = mq && double(*mq) <= q + std::cbrt(double(q)) + 1e-12;
  return ladder;
}

ScaleLadder build_scale_ladder(const Coloring& c, int q, int max_exponent) {
  if (q < 1) throw std::invalid_argument("ladder needs q >= 1");
  int top = ladder_window(q, q);
  if (max_exponent > 0) top = std::min(top, max_exponent - 1);
  std::vector<std::optional<FaceRing>> detections(std::max(top + 1, 1));
  for (int t = 1; t <= top; ++t) detections[t] = detect_good_faces(c, t);
  return ladder_from_detections(q, detections);
}

}  // namespace winding_lab
