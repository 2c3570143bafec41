#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "winding_lab/lattice.hpp"

namespace winding_lab {

enum class Color : std::uint8_t { black = 0, white = 1 };

constexpr Color operator!(Color c) {
  return c == Color::black ? Color::white : Color::black;
}

constexpr char color_letter(Color c) { return c == Color::black ? 'B' : 'W'; }

// 64-bit finalizer (MurmurHash3 fmix64 constants).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 33;
  z *= 0xff51afd7ed558ccdull;
  z ^= z >> 33;
  z *= 0xc4ceb9fe1a85ec53ull;
  z ^= z >> 33;
  return z;
}

// Cyclic sequence of arm colors, read counterclockwise.
class ColorSequence {
 public:
  ColorSequence() = default;
  explicit ColorSequence(std::vector<Color> colors);
  // Parses a string over {B, W}; throws std::invalid_argument otherwise.
  static ColorSequence parse(std::string_view text);

  std::size_t size() const { return colors_.size(); }
  Color operator[](std::size_t i) const { return colors_[i % colors_.size()]; }
  const std::vector<Color>& colors() const { return colors_; }

  bool monochromatic() const;
  // Even length and colors alternate cyclically.
  bool alternating() const;
  std::string to_string() const;

  friend bool operator==(const ColorSequence&, const ColorSequence&) = default;

 private:
  std::vector<Color> colors_;
};

// Sites whose color is pinned, stored densely over their bounding window.
class OverrideField {
 public:
  OverrideField() = default;
  explicit OverrideField(std::span<const std::pair<Site, Color>> entries);

  bool empty() const { return cells_.empty(); }
  std::size_t size() const { return count_; }

  std::optional<Color> find(Site s) const {
    if (s.x < x0_ || s.x >= x0_ + w_ || s.y < y0_ || s.y >= y0_ + h_) {
      return std::nullopt;
    }
    const std::int8_t v = cells_[std::size_t(s.x - x0_) * std::size_t(h_) +
                                 std::size_t(s.y - y0_)];
    if (v < 0) return std::nullopt;
    return Color(v);
  }

 private:
  int x0_ = 0, y0_ = 0, w_ = 0, h_ = 0;
  std::size_t count_ = 0;
  std::vector<std::int8_t> cells_;
};

// The percolation configuration at p = 1/2. Colors are a pure function of
// (stream_id, site) through a counter-based hash, so any site can be
// queried in any order without generating the others. Immutable after
// construction; copies share the override field.
class Coloring {
 public:
  Coloring() = default;
  Coloring(std::uint64_t master_seed, std::uint64_t stream_id);
  Coloring(std::uint64_t master_seed, std::uint64_t stream_id,
           std::span<const std::pair<Site, Color>> overrides);

  // Overrides every site of B(radius) with paint(site); random outside.
  static Coloring painted(int radius, const std::function<Color(Site)>& paint,
                          std::uint64_t stream_id = 0);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  bool reflected() const { return reflected_; }
  std::size_t override_count() const { return overrides_ ? overrides_->size() : 0; }

  Color color_of(Site s) const {
    if (reflected_) s = reflect_site(s);
    if (overrides_) {
      if (auto c = overrides_->find(s)) return *c;
    }
    return random_color(stream_id_, s);
  }

  bool is_black(Site s) const { return color_of(s) == Color::black; }

  // View of the configuration under (x, y) -> (y, x). This reflection maps
  // the six-neighbor adjacency onto itself and is a Euclidean isometry
  // reversing orientation, so winding angles change sign exactly.
  Coloring reflect() const;

  static constexpr Site reflect_site(Site s) { return {s.y, s.x}; }

  static Color random_color(std::uint64_t stream_id, Site s) {
    const std::uint64_t key =
        (std::uint64_t(std::uint32_t(s.x)) << 32) | std::uint32_t(s.y);
    const std::uint64_t h = mix64(mix64(key) + stream_id * 0x9E3779B97F4A7C15ull);
    return Color(h >> 63);
  }

 private:
  std::uint64_t master_seed_ = 0;
  std::uint64_t stream_id_ = 0;
  bool reflected_ = false;
  std::shared_ptr<const OverrideField> overrides_;
};

// Mixes (master_seed, shard, replicate) through three rounds of mix64, with
// shard and replicate entering through odd multipliers. For fixed
// (master_seed, shard) the map replicate -> stream_id is injective.
std::uint64_t derive_stream_id(std::uint64_t master_seed, std::uint64_t shard,
                               std::uint64_t replicate);
Coloring derive_stream(std::uint64_t master_seed, std::uint64_t shard,
                       std::uint64_t replicate);

}  // namespace winding_lab
