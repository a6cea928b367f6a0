#pragma once

// Sliding-tile puzzle (n x n, n in 2..5). Cell i of the goal holds tile i,
// with the blank (0) in the top-left corner. Actions move the blank:
// 0 up, 1 down, 2 left, 3 right. Blocked moves are not valid.
//
// Contexts: blank-centred relative tilings over the tile identities, with
// value n*n as padding outside the board, plus one last-action mutex set
// (pattern 0 at the root, 1 + action otherwise).

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "ltscm/domains/tiling.hpp"
#include "ltscm/types.hpp"

namespace ltscm {

struct StpProblem {
  int size = 3;
  std::vector<std::uint8_t> tiles;  // tiles[cell], 0 is the blank
};

struct StpState {
  std::array<std::uint8_t, 25> cells{};
  std::uint8_t blank = 0;
  friend bool operator==(const StpState&, const StpState&) = default;
};

// The blank-centred suite used for every board size.
std::span<const TilingSpec> stp_tilings();

// Parity test: odd width needs an even inversion count (blank excluded);
// even width needs inversions + blank row (from the top) to be even.
bool stp_solvable(std::span<const std::uint8_t> tiles, int size);

// Throws ContractViolation unless tiles is a permutation of 0..n*n-1.
void validate_stp(const StpProblem& p);

class StpDomain {
 public:
  using State = StpState;
  using Problem = StpProblem;

  static constexpr int kUp = 0, kDown = 1, kLeft = 2, kRight = 3;

  explicit StpDomain(int size);

  int size() const { return n_; }
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
  int n_;
  TileSuite suite_;
};

// Uniformly random solvable boards; deterministic in seed.
std::vector<StpProblem> gen_stp(std::size_t count, int size, std::uint64_t seed);

}  // namespace ltscm
