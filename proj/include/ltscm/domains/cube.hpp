#pragma once

// Rubik's cube in the quarter-turn metric, cubie representation.
//
// Locations, corners then edges:
//   corners 0..7:  URF UFL ULB UBR DFR DLF DBL DRB
//   edges   8..19: UR UF UL UB DR DF DL DB FR FL BL BR
// cp[i]/ep[i] is the cubie sitting at location i, co/eo its twist/flip.
// A corner twist counts clockwise turns of the cubie's U/D sticker away from
// the U/D face; an edge flip is relative to the U/D (or F/B on the middle
// layer) reference facelet.
//
// Actions 0..11: U U' D D' F F' B B' L L' R R' (a ^ 1 is the inverse of a).
//
// Contexts: for every pair of locations i < j (190 pairs) the pattern
// slot(i) * 24 + slot(j), where slot is cubie * 3 + twist for corners and
// cubie * 2 + flip for edges; plus a last-action mutex set (0 at the root,
// 1 + action otherwise).

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ltscm/types.hpp"

namespace ltscm {

struct CubeState {
  std::array<std::uint8_t, 8> cp{0, 1, 2, 3, 4, 5, 6, 7};
  std::array<std::uint8_t, 8> co{};
  std::array<std::uint8_t, 12> ep{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  std::array<std::uint8_t, 12> eo{};
  friend bool operator==(const CubeState&, const CubeState&) = default;
};

struct CubeProblem {
  std::vector<Action> scramble;
};

inline constexpr int kCubeActions = 12;
inline constexpr int kCubeLocations = 20;

// Throws ContractViolation when the permutations or orientations are invalid.
void validate_cube(const CubeState& s);

// Slot code in [0, 24) of location i.
int cube_slot_code(const CubeState& s, int location);

CubeState cube_apply(const CubeState& s, int action);
CubeState cube_apply(CubeState s, std::span<const Action> moves);

// "U", "U'", ... ; parse throws ParseError on unknown tokens.
std::string_view cube_move_name(int action);
Action parse_cube_move(std::string_view token);
std::vector<Action> parse_cube_moves(std::string_view text);
std::string format_cube_moves(std::span<const Action> moves);

class CubeDomain {
 public:
  using State = CubeState;
  using Problem = CubeProblem;

  int num_actions() const { return kCubeActions; }
  std::size_t num_mutex_sets() const { return kNumPairs + 1; }

  State initial_state(const Problem& p) const;
  State transition(const State& s, int a) const { return cube_apply(s, a); }
  ActionSet valid_actions(const State&) const { return ActionSet::all(kCubeActions); }
  bool is_goal(const State& s) const { return s == CubeState{}; }
  void active_contexts(const State& s, int last_action, std::span<ContextKey> out) const;
  StateKey state_key(const State& s) const;

  static constexpr std::size_t kNumPairs = kCubeLocations * (kCubeLocations - 1) / 2;
};

// Random walks from the solved cube of length uniform in [m, m_hi], never
// undoing the previous move. Deterministic in seed.
std::vector<CubeProblem> gen_cube_scrambles(std::size_t count, int m, int m_hi,
                                            std::uint64_t seed);

}  // namespace ltscm
