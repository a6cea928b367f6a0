#include "ltscm/domains/cube.hpp"

#include <random>
#include <sstream>

namespace ltscm {

namespace {

struct Move {
  std::array<std::uint8_t, 8> cp, co;
  std::array<std::uint8_t, 12> ep, eo;
};

// Clockwise quarter turns in face order U D F B L R.
constexpr Move kFaceTurns[6] = {
    // U
    {{3, 0, 1, 2, 4, 5, 6, 7}, {0, 0, 0, 0, 0, 0, 0, 0},
     {3, 0, 1, 2, 4, 5, 6, 7, 8, 9, 10, 11}, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    // D
    {{0, 1, 2, 3, 5, 6, 7, 4}, {0, 0, 0, 0, 0, 0, 0, 0},
     {0, 1, 2, 3, 5, 6, 7, 4, 8, 9, 10, 11}, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    // F
    {{1, 5, 2, 3, 0, 4, 6, 7}, {1, 2, 0, 0, 2, 1, 0, 0},
     {0, 9, 2, 3, 4, 8, 6, 7, 1, 5, 10, 11}, {0, 1, 0, 0, 0, 1, 0, 0, 1, 1, 0, 0}},
    // B
    {{0, 1, 3, 7, 4, 5, 2, 6}, {0, 0, 1, 2, 0, 0, 2, 1},
     {0, 1, 2, 11, 4, 5, 6, 10, 8, 9, 3, 7}, {0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 1, 1}},
    // L
    {{0, 2, 6, 3, 4, 1, 5, 7}, {0, 1, 2, 0, 0, 2, 1, 0},
     {0, 1, 10, 3, 4, 5, 9, 7, 8, 2, 6, 11}, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    // R
    {{4, 1, 2, 0, 7, 5, 6, 3}, {2, 0, 0, 1, 1, 0, 0, 2},
     {8, 1, 2, 3, 11, 5, 6, 7, 4, 9, 10, 0}, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
};

constexpr std::string_view kNames[kCubeActions] = {"U", "U'", "D", "D'", "F", "F'",
                                                   "B", "B'", "L", "L'", "R", "R'"};

CubeState turn(const CubeState& s, const Move& m) {
  CubeState t;
  for (int i = 0; i < 8; ++i) {
    t.cp[i] = s.cp[m.cp[i]];
    t.co[i] = static_cast<std::uint8_t>((s.co[m.cp[i]] + m.co[i]) % 3);
  }
  for (int i = 0; i < 12; ++i) {
    t.ep[i] = s.ep[m.ep[i]];
    t.eo[i] = static_cast<std::uint8_t>((s.eo[m.ep[i]] + m.eo[i]) % 2);
  }
  return t;
}

// All 12 actions as single tables (a prime move is three quarter turns).
const std::array<Move, kCubeActions>& action_tables() {
  static const std::array<Move, kCubeActions> tables = [] {
    std::array<Move, kCubeActions> out{};
    for (int f = 0; f < 6; ++f) {
      // Compose on the identity to read the resulting permutation back out.
      CubeState q = turn(CubeState{}, kFaceTurns[f]);
      CubeState p = turn(turn(q, kFaceTurns[f]), kFaceTurns[f]);
      for (int k = 0; k < 2; ++k) {
        const CubeState& s = k == 0 ? q : p;
        Move& m = out[2 * f + k];
        m.cp = s.cp;
        m.co = s.co;
        m.ep = s.ep;
        m.eo = s.eo;
      }
    }
    return out;
  }();
  return tables;
}

}  // namespace

void validate_cube(const CubeState& s) {
  unsigned seen_c = 0, seen_e = 0;
  int twist = 0, flip = 0;
  for (int i = 0; i < 8; ++i) {
    if (s.cp[i] >= 8 || s.co[i] >= 3) throw ContractViolation("cube: bad corner");
    seen_c |= 1u << s.cp[i];
    twist += s.co[i];
  }
  for (int i = 0; i < 12; ++i) {
    if (s.ep[i] >= 12 || s.eo[i] >= 2) throw ContractViolation("cube: bad edge");
    seen_e |= 1u << s.ep[i];
    flip += s.eo[i];
  }
  if (seen_c != 0xFFu || seen_e != 0xFFFu) throw ContractViolation("cube: not a permutation");
  if (twist % 3 != 0 || flip % 2 != 0) throw ContractViolation("cube: orientation sum");
}

int cube_slot_code(const CubeState& s, int location) {
  if (location < 8) return s.cp[location] * 3 + s.co[location];
  const int e = location - 8;
  return s.ep[e] * 2 + s.eo[e];
}

CubeState cube_apply(const CubeState& s, int action) {
  if (action < 0 || action >= kCubeActions) throw ContractViolation("cube: bad action");
  return turn(s, action_tables()[action]);
}

CubeState cube_apply(CubeState s, std::span<const Action> moves) {
  for (Action a : moves) s = cube_apply(s, a);
  return s;
}

std::string_view cube_move_name(int action) {
  if (action < 0 || action >= kCubeActions) throw ContractViolation("cube: bad action");
  return kNames[action];
}

Action parse_cube_move(std::string_view token) {
  for (int a = 0; a < kCubeActions; ++a)
    if (kNames[a] == token) return static_cast<Action>(a);
  throw ParseError("cube: unknown move '" + std::string(token) + "'");
}

std::vector<Action> parse_cube_moves(std::string_view text) {
  std::vector<Action> out;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    if (tok == "-") continue;
    out.push_back(parse_cube_move(tok));
  }
  return out;
}

std::string format_cube_moves(std::span<const Action> moves) {
  if (moves.empty()) return "-";
  std::string out;
  for (std::size_t i = 0; i < moves.size(); ++i) {
    if (i) out += ' ';
    out += cube_move_name(moves[i]);
  }
  return out;
}

CubeState CubeDomain::initial_state(const CubeProblem& p) const {
  return cube_apply(CubeState{}, p.scramble);
}

void CubeDomain::active_contexts(const CubeState& s, int last_action,
                                 std::span<ContextKey> out) const {
  int code[kCubeLocations];
  for (int i = 0; i < kCubeLocations; ++i) code[i] = cube_slot_code(s, i);
  std::uint32_t id = 0;
  for (int i = 0; i < kCubeLocations; ++i)
    for (int j = i + 1; j < kCubeLocations; ++j, ++id)
      out[id] = ContextKey(id, static_cast<std::uint64_t>(code[i] * 24 + code[j]));
  out[id] = ContextKey(id, static_cast<std::uint64_t>(last_action + 1));
}

StateKey CubeDomain::state_key(const CubeState& s) const {
  // Corners: 5 bits each (40 bits); edges: 5 bits each (60 bits).
  StateKey k;
  for (int i = 0; i < 8; ++i) k.hi = (k.hi << 5) | cube_slot_code(s, i);
  for (int i = 8; i < kCubeLocations; ++i) k.lo = (k.lo << 5) | cube_slot_code(s, i);
  return k;
}

std::vector<CubeProblem> gen_cube_scrambles(std::size_t count, int m, int m_hi,
                                            std::uint64_t seed) {
  if (m < 0 || m > m_hi) throw ConfigError("gen_cube_scrambles: need 0 <= m <= m'");
  std::mt19937_64 rng(seed);
  std::vector<CubeProblem> out(count);
  for (auto& p : out) {
    const int len = m + static_cast<int>(rng() % static_cast<std::uint64_t>(m_hi - m + 1));
    int prev = -1;
    for (int i = 0; i < len; ++i) {
      int a;
      do a = static_cast<int>(rng() % kCubeActions);
      while (prev >= 0 && a == (prev ^ 1));
      p.scramble.push_back(static_cast<Action>(a));
      prev = a;
    }
  }
  return out;
}

}  // namespace ltscm
