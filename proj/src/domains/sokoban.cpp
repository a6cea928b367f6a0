#include "ltscm/domains/sokoban.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace ltscm {

namespace {

constexpr TilingSpec kSokobanTilings[] = {{3, 3, 4, 4}, {2, 4, 2, 3}, {4, 2, 3, 2},
                                          {2, 2, 2, 2}, {1, 2, 1, 1}, {2, 1, 1, 1}};

constexpr int kDr[] = {-1, 1, 0, 0};
constexpr int kDc[] = {0, 0, -1, 1};

// Neighbour of cell in direction a, or -1 off the grid.
int step(int cell, int a) {
  const int r = cell / kSokobanSide + kDr[a], c = cell % kSokobanSide + kDc[a];
  if (r < 0 || r >= kSokobanSide || c < 0 || c >= kSokobanSide) return -1;
  return r * kSokobanSide + c;
}

[[noreturn]] void fail(const std::string& id, std::size_t line, const std::string& what) {
  throw ParseError("boxoban level '" + id + "' line " + std::to_string(line) + ": " + what);
}

char cell_char(std::uint8_t floor, bool box, bool player) {
  if (floor == kWall) return '#';
  const bool goal = floor == kGoal;
  if (box) return goal ? '*' : '$';
  if (player) return goal ? '+' : '@';
  return goal ? '.' : ' ';
}

std::string render_grid(const SokobanLevel& level, const std::bitset<kSokobanCells>& boxes,
                        int player) {
  std::string out = "; " + level.id + "\n";
  for (int r = 0; r < kSokobanSide; ++r) {
    for (int c = 0; c < kSokobanSide; ++c) {
      const int i = r * kSokobanSide + c;
      out += cell_char(level.floor[i], boxes[i], i == player);
    }
    out += '\n';
  }
  return out;
}

}  // namespace

std::span<const TilingSpec> sokoban_tilings() { return kSokobanTilings; }

std::vector<SokobanLevel> parse_boxoban(std::string_view text) {
  std::vector<std::string> lines;
  {
    std::istringstream in{std::string(text)};
    std::string l;
    while (std::getline(in, l)) {
      if (!l.empty() && l.back() == '\r') l.pop_back();
      lines.push_back(std::move(l));
    }
  }
  std::vector<SokobanLevel> out;
  std::size_t i = 0;
  while (i < lines.size()) {
    if (lines[i].empty()) {
      ++i;
      continue;
    }
    const std::size_t header = i + 1;
    if (lines[i][0] != ';') fail("?", header, "expected '; <id>'");
    std::string id = lines[i].substr(1);
    id.erase(0, id.find_first_not_of(' '));
    if (id.empty()) fail("?", header, "empty level id");
    SokobanLevel lv;
    lv.id = id;
    int players = 0, goals = 0;
    for (int r = 0; r < kSokobanSide; ++r) {
      const std::size_t ln = i + 1 + r;
      if (ln >= lines.size() || (!lines[ln].empty() && lines[ln][0] == ';'))
        fail(id, ln + 1, "level has fewer than 10 rows");
      const std::string& row = lines[ln];
      if (row.size() != kSokobanSide) fail(id, ln + 1, "row is not 10 characters wide");
      for (int c = 0; c < kSokobanSide; ++c) {
        const int cell = r * kSokobanSide + c;
        std::uint8_t floor = kEmpty;
        switch (row[c]) {
          case '#': floor = kWall; break;
          case ' ': break;
          case '$': lv.boxes.set(cell); break;
          case '.': floor = kGoal; break;
          case '@': lv.player = cell, ++players; break;
          case '*': floor = kGoal, lv.boxes.set(cell); break;
          case '+': floor = kGoal, lv.player = cell, ++players; break;
          default: fail(id, ln + 1, std::string("unknown character '") + row[c] + "'");
        }
        lv.floor[cell] = floor;
        goals += floor == kGoal;
      }
    }
    const std::size_t last = i + kSokobanSide;
    if (last + 1 < lines.size() && !lines[last + 1].empty() && lines[last + 1][0] != ';')
      fail(id, last + 2, "level has more than 10 rows");
    if (players != 1) fail(id, header, "level needs exactly one player");
    if (static_cast<int>(lv.boxes.count()) != goals)
      fail(id, header, "box count differs from goal count");
    out.push_back(std::move(lv));
    i = last + 1;
  }
  return out;
}

std::vector<SokobanLevel> load_boxoban(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open boxoban file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_boxoban(ss.str());
}

std::string render(const SokobanLevel& level) {
  return render_grid(level, level.boxes, level.player);
}

std::string render(const SokobanState& s) { return render_grid(*s.level, s.boxes, s.player); }

SokobanDomain::SokobanDomain() : suite_(kSokobanTilings, 5, kSokobanSide, kSokobanSide) {}

SokobanState SokobanDomain::initial_state(const SokobanLevel& p) const {
  return {&p, p.boxes, static_cast<std::uint8_t>(p.player), false};
}

ActionSet SokobanDomain::valid_actions(const SokobanState& s) const {
  const auto& floor = s.level->floor;
  ActionSet v;
  for (int a = 0; a < 4; ++a) {
    const int n = step(s.player, a);
    if (n < 0 || floor[n] == kWall) continue;
    if (s.boxes[n]) {
      const int b = step(n, a);
      if (b < 0 || floor[b] == kWall || s.boxes[b]) continue;
    }
    v.insert(a);
  }
  return v;
}

SokobanState SokobanDomain::transition(const SokobanState& s, int a) const {
  if (!valid_actions(s).contains(a)) throw ContractViolation("sokoban: invalid move");
  SokobanState t = s;
  const int n = step(s.player, a);
  t.pushed = s.boxes[n];
  if (t.pushed) {
    t.boxes.reset(n);
    t.boxes.set(step(n, a));
  }
  t.player = static_cast<std::uint8_t>(n);
  return t;
}

bool SokobanDomain::is_goal(const SokobanState& s) const {
  for (int i = 0; i < kSokobanCells; ++i)
    if (s.boxes[i] && s.level->floor[i] != kGoal) return false;
  return true;
}

void SokobanDomain::active_contexts(const SokobanState& s, int last_action,
                                    std::span<ContextKey> out) const {
  std::uint8_t padded[(kSokobanSide + 8) * (kSokobanSide + 8)];
  std::fill_n(padded, suite_.padded_size(), static_cast<std::uint8_t>(kWall));
  for (int r = 0; r < kSokobanSide; ++r)
    for (int c = 0; c < kSokobanSide; ++c) {
      const int i = r * kSokobanSide + c;
      std::uint8_t v = s.level->floor[i];
      if (s.boxes[i]) v = v == kGoal ? kBoxOnGoal : kBox;
      padded[suite_.padded_index(r, c)] = v;
    }
  suite_.encode(padded, suite_.padded_index(s.player / kSokobanSide, s.player % kSokobanSide), 0,
                out);
  const std::uint64_t code = last_action < 0 ? 0 : 1 + 2 * last_action + (s.pushed ? 1 : 0);
  out[suite_.size()] = ContextKey(static_cast<std::uint32_t>(suite_.size()), code);
}

StateKey SokobanDomain::state_key(const SokobanState& s) const {
  // Boxes: 100 bits; player: 7 bits. The level is implied by the search.
  StateKey k;
  for (int i = 0; i < 64; ++i) k.lo |= std::uint64_t{s.boxes[i]} << i;
  for (int i = 64; i < kSokobanCells; ++i) k.hi |= std::uint64_t{s.boxes[i]} << (i - 64);
  k.hi |= std::uint64_t{s.player} << 40;
  return k;
}

}  // namespace ltscm
