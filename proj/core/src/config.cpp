#include "winding_lab/config.hpp"

#include <algorithm>
#include <climits>
#include <stdexcept>

namespace winding_lab {

ColorSequence::ColorSequence(std::vector<Color> colors) : colors_(std::move(colors)) {
  if (colors_.empty()) throw std::invalid_argument("color sequence must be nonempty");
}

ColorSequence ColorSequence::parse(std::string_view text) {
  std::vector<Color> colors;
  for (char ch : text) {
    if (ch == 'B' || ch == 'b') {
      colors.push_back(Color::black);
    } else if (ch == 'W' || ch == 'w') {
      colors.push_back(Color::white);
    } else {
      throw std::invalid_argument("sigma must be a string over {B, W}");
    }
  }
  return ColorSequence(std::move(colors));
}

bool ColorSequence::monochromatic() const {
  return std::all_of(colors_.begin(), colors_.end(),
                     [&](Color c) { return c == colors_.front(); });
}

bool ColorSequence::alternating() const {
  if (colors_.size() % 2 != 0) return false;
  for (std::size_t i = 0; i < colors_.size(); ++i) {
    if ((*this)[i] == (*this)[i + 1]) return false;
  }
  return true;
}

std::string ColorSequence::to_string() const {
  std::string out;
  for (Color c : colors_) out.push_back(color_letter(c));
  return out;
}

OverrideField::OverrideField(std::span<const std::pair<Site, Color>> entries) {
  if (entries.empty()) return;
  int xmin = INT_MAX, xmax = INT_MIN, ymin = INT_MAX, ymax = INT_MIN;
  for (const auto& [s, c] : entries) {
    xmin = std::min(xmin, s.x);
    xmax = std::max(xmax, s.x);
    ymin = std::min(ymin, s.y);
    ymax = std::max(ymax, s.y);
  }
  x0_ = xmin;
  y0_ = ymin;
  w_ = xmax - xmin + 1;
  h_ = ymax - ymin + 1;
  cells_.assign(std::size_t(w_) * std::size_t(h_), std::int8_t(-1));
  for (const auto& [s, c] : entries) {
    auto& cell = cells_[std::size_t(s.x - x0_) * std::size_t(h_) + std::size_t(s.y - y0_)];
    if (cell < 0) ++count_;
    cell = std::int8_t(c);
  }
}

Coloring::Coloring(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_seed_(master_seed), stream_id_(stream_id) {}

Coloring::Coloring(std::uint64_t master_seed, std::uint64_t stream_id,
                   std::span<const std::pair<Site, Color>> overrides)
    : master_seed_(master_seed), stream_id_(stream_id) {
  if (!overrides.empty()) {
    overrides_ = std::make_shared<const OverrideField>(overrides);
  }
}

Coloring Coloring::painted(int radius, const std::function<Color(Site)>& paint,
                           std::uint64_t stream_id) {
  std::vector<std::pair<Site, Color>> entries;
  entries.reserve(std::size_t(2 * radius + 1) * std::size_t(2 * radius + 1));
  for (int x = -radius; x <= radius; ++x) {
    for (int y = -radius; y <= radius; ++y) {
      entries.emplace_back(Site{x, y}, paint(Site{x, y}));
    }
  }
  return Coloring(0, stream_id, entries);
}

Coloring Coloring::reflect() const {
  Coloring out = *this;
  out.reflected_ = !reflected_;
  return out;
}

std::uint64_t derive_stream_id(std::uint64_t master_seed, std::uint64_t shard,
                               std::uint64_t replicate) {
  std::uint64_t h = mix64(master_seed ^ 0x6a09e667f3bcc909ull);
  h = mix64(h ^ (shard * 0xbb67ae8584caa73bull + 0x3c6ef372fe94f82bull));
  h = mix64(h ^ (replicate * 0xa54ff53a5f1d36f1ull + 0x510e527fade682d1ull));
  return h;
}

Coloring derive_stream(std::uint64_t master_seed, std::uint64_t shard,
                       std::uint64_t replicate) {
  return Coloring(master_seed, derive_stream_id(master_seed, shard, replicate));
}

}  // namespace winding_lab
