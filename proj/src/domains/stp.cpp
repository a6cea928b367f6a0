#include "ltscm/domains/stp.hpp"

#include <algorithm>
#include <numeric>

namespace ltscm {

namespace {

constexpr TilingSpec kStpTilings[] = {{2, 2, 3, 3}, {2, 1, 2, 2}, {1, 2, 2, 2}, {1, 1, 2, 2}};

int count_inversions(std::span<const std::uint8_t> tiles) {
  int inv = 0;
  for (std::size_t i = 0; i < tiles.size(); ++i)
    for (std::size_t j = i + 1; j < tiles.size(); ++j)
      if (tiles[i] && tiles[j] && tiles[i] > tiles[j]) ++inv;
  return inv;
}

}  // namespace

std::span<const TilingSpec> stp_tilings() { return kStpTilings; }

bool stp_solvable(std::span<const std::uint8_t> tiles, int size) {
  const int inv = count_inversions(tiles);
  if (size % 2 == 1) return inv % 2 == 0;
  const auto blank = std::find(tiles.begin(), tiles.end(), 0) - tiles.begin();
  return (inv + blank / size) % 2 == 0;
}

void validate_stp(const StpProblem& p) {
  if (p.size < 2 || p.size > 5) throw ContractViolation("stp: size must be in 2..5");
  const std::size_t cells = static_cast<std::size_t>(p.size) * p.size;
  if (p.tiles.size() != cells) throw ContractViolation("stp: wrong number of tiles");
  std::vector<bool> seen(cells, false);
  for (auto t : p.tiles) {
    if (t >= cells || seen[t]) throw ContractViolation("stp: tiles are not a permutation");
    seen[t] = true;
  }
}

StpDomain::StpDomain(int size) : n_(size), suite_(kStpTilings, size * size + 1, size, size) {
  if (size < 2 || size > 5) throw ConfigError("stp: size must be in 2..5");
}

StpState StpDomain::initial_state(const StpProblem& p) const {
  validate_stp(p);
  if (p.size != n_) throw ContractViolation("stp: problem size differs from the domain");
  StpState s;
  std::copy(p.tiles.begin(), p.tiles.end(), s.cells.begin());
  s.blank = static_cast<std::uint8_t>(std::find(p.tiles.begin(), p.tiles.end(), 0) - p.tiles.begin());
  return s;
}

ActionSet StpDomain::valid_actions(const StpState& s) const {
  const int r = s.blank / n_, c = s.blank % n_;
  ActionSet v;
  if (r > 0) v.insert(kUp);
  if (r < n_ - 1) v.insert(kDown);
  if (c > 0) v.insert(kLeft);
  if (c < n_ - 1) v.insert(kRight);
  return v;
}

StpState StpDomain::transition(const StpState& s, int a) const {
  if (!valid_actions(s).contains(a)) throw ContractViolation("stp: invalid move");
  static constexpr int kDr[] = {-1, 1, 0, 0};
  static constexpr int kDc[] = {0, 0, -1, 1};
  StpState t = s;
  const int to = s.blank + kDr[a] * n_ + kDc[a];
  t.cells[s.blank] = s.cells[to];
  t.cells[to] = 0;
  t.blank = static_cast<std::uint8_t>(to);
  return t;
}

bool StpDomain::is_goal(const StpState& s) const {
  for (int i = 0; i < n_ * n_; ++i)
    if (s.cells[i] != i) return false;
  return true;
}

void StpDomain::active_contexts(const StpState& s, int last_action,
                                std::span<ContextKey> out) const {
  std::uint8_t padded[(5 + 6) * (5 + 6)];
  std::fill_n(padded, suite_.padded_size(), static_cast<std::uint8_t>(n_ * n_));
  for (int r = 0; r < n_; ++r)
    for (int c = 0; c < n_; ++c) padded[suite_.padded_index(r, c)] = s.cells[r * n_ + c];
  suite_.encode(padded, suite_.padded_index(s.blank / n_, s.blank % n_), 0, out);
  out[suite_.size()] = ContextKey(static_cast<std::uint32_t>(suite_.size()),
                                  static_cast<std::uint64_t>(last_action + 1));
}

StateKey StpDomain::state_key(const StpState& s) const {
  // 5 bits per cell, up to 25 cells.
  StateKey k;
  for (int i = 0; i < n_ * n_; ++i) {
    k.hi = (k.hi << 5) | (k.lo >> 59);
    k.lo = (k.lo << 5) | s.cells[i];
  }
  return k;
}

std::vector<StpProblem> gen_stp(std::size_t count, int size, std::uint64_t seed) {
  if (size < 2 || size > 5) throw ConfigError("gen_stp: size must be in 2..5");
  std::mt19937_64 rng(seed);
  const int cells = size * size;
  std::vector<StpProblem> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    StpProblem p{size, std::vector<std::uint8_t>(cells)};
    std::iota(p.tiles.begin(), p.tiles.end(), 0);
    for (int i = cells - 1; i > 0; --i) std::swap(p.tiles[i], p.tiles[rng() % (i + 1)]);
    if (!stp_solvable(p.tiles, size)) {
      // Swapping two tiles flips the parity; the map is a bijection between
      // unsolvable and solvable boards, so the result stays uniform.
      int a = 0, b = 1;
      if (p.tiles[a] == 0) a = 2;
      if (p.tiles[b] == 0) b = 2;
      std::swap(p.tiles[a], p.tiles[b]);
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace ltscm
