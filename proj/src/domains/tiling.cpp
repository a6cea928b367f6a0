#include "ltscm/domains/tiling.hpp"

#include <algorithm>

namespace ltscm {

std::size_t tiling_count(const TilingSpec& s) {
  const long rows = 2L * s.row_dist + 2 - s.row_span;
  const long cols = 2L * s.col_dist + 2 - s.col_span;
  if (s.row_span < 1 || s.col_span < 1 || rows <= 0 || cols <= 0) return 0;
  return static_cast<std::size_t>(rows * cols);
}

std::vector<RelativeTile> tiling_mutex_sets(const TilingSpec& s) {
  if (s.row_span < 1 || s.col_span < 1) throw ConfigError("tiling: spans must be >= 1");
  if (s.row_dist < 0 || s.col_dist < 0) throw ConfigError("tiling: distances must be >= 0");
  const int r_hi = s.row_dist - s.row_span + 1;
  const int c_hi = s.col_dist - s.col_span + 1;
  if (r_hi < -s.row_dist || c_hi < -s.col_dist)
    throw ConfigError("tiling: empty offset range (span larger than 2D+1)");
  std::vector<RelativeTile> out;
  for (int dr = -s.row_dist; dr <= r_hi; ++dr)
    for (int dc = -s.col_dist; dc <= c_hi; ++dc) out.push_back({dr, dc, s.row_span, s.col_span});
  return out;
}

TileSuite::TileSuite(std::span<const TilingSpec> specs, int base, int grid_rows, int grid_cols)
    : base_(base), grid_rows_(grid_rows), grid_cols_(grid_cols) {
  if (base < 2) throw ConfigError("TileSuite: base must be >= 2");
  if (grid_rows < 1 || grid_cols < 1) throw ConfigError("TileSuite: empty grid");
  std::vector<RelativeTile> tiles;
  for (const auto& s : specs) {
    auto t = tiling_mutex_sets(s);
    tiles.insert(tiles.end(), t.begin(), t.end());
    margin_ = std::max({margin_, s.row_dist, s.col_dist});
  }
  const int pc = padded_cols();
  for (const auto& t : tiles) {
    long double cap = 1;
    for (int i = 0; i < t.rows * t.cols; ++i) cap *= base;
    if (cap > static_cast<long double>(ContextKey::kMaxPattern) + 1)
      throw ConfigError("TileSuite: window pattern does not fit in a context key");
    for (int r = 0; r < t.rows; ++r)
      for (int c = 0; c < t.cols; ++c) cell_offsets_.push_back((t.dr + r) * pc + t.dc + c);
    tile_offsets_.push_back(cell_offsets_.size());
  }
}

void TileSuite::encode(const std::uint8_t* padded, int agent_index, std::uint32_t first_id,
                       std::span<ContextKey> out) const {
  const std::uint8_t* centre = padded + agent_index;
  const std::uint64_t mutex_shift = std::uint64_t{1} << ContextKey::kPatternBits;
  for (std::size_t t = 0; t + 1 < tile_offsets_.size(); ++t) {
    std::uint64_t code = 0;
    for (std::size_t i = tile_offsets_[t]; i < tile_offsets_[t + 1]; ++i)
      code = code * base_ + centre[cell_offsets_[i]];
    out[t] = ContextKey::from_bits((first_id + t) * mutex_shift | code);
  }
}

}  // namespace ltscm
