#pragma once

// Sokoban on 10x10 Boxoban grids. Actions 0 up, 1 down, 2 left, 3 right move
// the player; walking into a box pushes it if the cell behind is free. Moves
// into walls and blocked pushes are not valid. Goal: every box on a goal.
//
// Contexts: player-centred relative tilings over the cell alphabet
//   0 wall, 1 empty, 2 goal, 3 box, 4 box on goal
// (the player's own cell reads as its floor type, walls pad the outside),
// plus a last-action mutex set: 0 at the root, else 1 + 2*dir + pushed.

#include <array>
#include <bitset>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ltscm/domains/tiling.hpp"
#include "ltscm/types.hpp"

namespace ltscm {

inline constexpr int kSokobanSide = 10;
inline constexpr int kSokobanCells = kSokobanSide * kSokobanSide;

enum SokobanCell : std::uint8_t { kWall = 0, kEmpty = 1, kGoal = 2, kBox = 3, kBoxOnGoal = 4 };

struct SokobanLevel {
  std::string id;
  std::array<std::uint8_t, kSokobanCells> floor{};  // kWall, kEmpty or kGoal
  std::bitset<kSokobanCells> boxes;
  int player = 0;
};

struct SokobanState {
  const SokobanLevel* level = nullptr;
  std::bitset<kSokobanCells> boxes;
  std::uint8_t player = 0;
  bool pushed = false;  // whether the move into this state pushed a box
};

// The player-centred suite. Its tile count is 49+16+16+16+6+6 = 109.
std::span<const TilingSpec> sokoban_tilings();

// Levels as `; <id>` lines each followed by 10 rows of 10 characters from
// "# $.@*+"; blank lines between levels are ignored. Throws ParseError naming
// the level id and line on any malformation.
std::vector<SokobanLevel> parse_boxoban(std::string_view text);
std::vector<SokobanLevel> load_boxoban(const std::string& path);

// The level's (or state's) rows in the same character set, one per line,
// preceded by the `; <id>` line.
std::string render(const SokobanLevel& level);
std::string render(const SokobanState& s);

class SokobanDomain {
 public:
  using State = SokobanState;
  using Problem = SokobanLevel;

  SokobanDomain();

  int num_actions() const { return 4; }
  std::size_t num_mutex_sets() const { return suite_.size() + 1; }
  std::size_t num_tiles() const { return suite_.size(); }

  State initial_state(const Problem& p) const;
  State transition(const State& s, int a) const;
  ActionSet valid_actions(const State& s) const;
  bool is_goal(const State& s) const;
  void active_contexts(const State& s, int last_action, std::span<ContextKey> out) const;
  StateKey state_key(const State& s) const;

 private:
  TileSuite suite_;
};

}  // namespace ltscm
