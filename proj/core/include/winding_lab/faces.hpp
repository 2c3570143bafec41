#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "winding_lab/config.hpp"
#include "winding_lab/explore.hpp"
#include "winding_lab/lattice.hpp"

namespace winding_lab {

// Good faces of the dyadic annulus A(p): four monochromatic paths of
// alternating colors. Path k (stored at index k - 1) runs counterclockwise
// from the crossing interface ending in C_{2k-2} to the one ending in
// C_{2k}, hugging the outer boundary; consecutive paths end and start on
// the two sides of the same interface edge, so their union is a circuit
// around B(2^p).
struct FaceRing {
  int exponent = 0;
  std::array<ArmPath, 4> paths;
  // Outer endpoint of the interface at the start of path k.
  std::array<Point2, 4> endpoints;
  double quality = 0.0;

  int outer_radius() const { return 2 << exponent; }
  // Index k in 1..4 of the first path containing s, 0 if none.
  int path_index(Site s) const;
  bool on_face(Site s) const { return path_index(s) != 0; }
  std::vector<Site> circuit() const;
  // Sites strictly inside the circuit (nonzero winding number).
  bool encloses(Site s) const;

  friend bool operator==(const FaceRing& a, const FaceRing& b);
};

// Angular range allowed for path k: (k-2)pi/2 - pi/8 < arg < k pi/2 + pi/8.
Sector face_path_sector(int k);

// Event R of A(p): exactly four crossing interfaces of the closed annulus,
// interface i in {2,4,6,8} ending in C_i on both rings and confined to
// C_{i-1} u C_i u C_{i+1}. Returns the induced face ring, or nothing.
std::optional<FaceRing> detect_good_faces(const Coloring& c, int p);

// Min pairwise endpoint distance over 2^(p+1).
double face_quality(const FaceRing& f);

// Line-oriented text record: a header line, one line per path with its
// color and sites, and one line with the endpoints.
std::string serialize_face(const FaceRing& f);
FaceRing parse_face(const std::string& text);

struct LadderEntry {
  int p = 0;
  std::optional<int> m;  // m(p), absent when the window was exhausted
};

struct ScaleLadder {
  int q = 0;
  std::vector<LadderEntry> entries;  // p = 1..q
  // Detected faces keyed by exponent t, for every t with good faces.
  std::vector<std::pair<int, FaceRing>> faces;
  bool a_q_holds = false;

  const FaceRing* face_at(int t) const;
  std::optional<int> m(int p) const;
};

class WindowExhausted : public std::runtime_error {
 public:
  WindowExhausted() : std::runtime_error("window exhausted") {}
};

// Window cap p + ceil(q^(1/3)) + 4 for the search of m(p).
int ladder_window(int p, int q);

// Computes m(p) for p = 1..q by scanning exponents once. Exponents t with
// 2^(t+1) > 2^max_exponent are never inspected; pass the conditioning
// radius exponent (0 means no extra limit).
ScaleLadder build_scale_ladder(const Coloring& c, int q, int max_exponent = 0);

// Ladder built from precomputed detections, indexed by t (detections[t]
// describes A(t)); used to test the ladder logic on synthetic patterns.
ScaleLadder ladder_from_detections(int q, const std::vector<std::optional<FaceRing>>& detections);

}  // namespace winding_lab
