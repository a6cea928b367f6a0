#pragma once

// Relative tilings: fixed-shape windows placed at every offset around an
// agent cell. R_T(s_r, s_c, D_r, D_c) places an s_r x s_c window with its
// top-left corner at (r0 + d_r, c0 + d_c) for
//   d_r in [-D_r, D_r - s_r + 1],  d_c in [-D_c, D_c - s_c + 1],
// so every window stays within distance D of the agent. Each placement is
// one mutex set; the cell values it reads form the pattern.

#include <cstdint>
#include <span>
#include <vector>

#include "ltscm/types.hpp"

namespace ltscm {

struct TilingSpec {
  int row_span = 1;
  int col_span = 1;
  int row_dist = 0;
  int col_dist = 0;
};

struct RelativeTile {
  int dr = 0;  // top-left offset from the agent
  int dc = 0;
  int rows = 1;
  int cols = 1;
};

// (2D_r + 2 - s_r)(2D_c + 2 - s_c); 0 when either range is empty.
std::size_t tiling_count(const TilingSpec& spec);

// Every placement, row offsets outer, column offsets inner. Throws
// ConfigError when a span is < 1 or an offset range is empty.
std::vector<RelativeTile> tiling_mutex_sets(const TilingSpec& spec);

// A list of tilings compiled against a padded grid layout. The grid is
// stored row-major with `margin` padding cells on every side, so reading a
// window never needs a bounds check.
class TileSuite {
 public:
  // Cell values must be < base. Throws ConfigError if some window's pattern
  // would not fit in a ContextKey.
  TileSuite(std::span<const TilingSpec> specs, int base, int grid_rows, int grid_cols);

  std::size_t size() const { return tile_offsets_.size() - 1; }
  int margin() const { return margin_; }
  int padded_cols() const { return grid_cols_ + 2 * margin_; }
  int padded_rows() const { return grid_rows_ + 2 * margin_; }
  std::size_t padded_size() const {
    return static_cast<std::size_t>(padded_rows()) * padded_cols();
  }
  // Index in the padded grid of cell (r, c) of the unpadded grid.
  int padded_index(int r, int c) const { return (r + margin_) * padded_cols() + c + margin_; }

  // Writes size() keys, mutex set ids first_id, first_id + 1, ... The
  // pattern is the window's cell values read row-major as base-`base` digits.
  void encode(const std::uint8_t* padded, int agent_index, std::uint32_t first_id,
              std::span<ContextKey> out) const;

 private:
  int base_;
  int grid_rows_;
  int grid_cols_;
  int margin_ = 0;
  std::vector<std::size_t> tile_offsets_{0};
  std::vector<int> cell_offsets_;  // relative to the agent's padded index
};

}  // namespace ltscm
