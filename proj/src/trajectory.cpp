#include "ltscm/trajectory.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace ltscm {

void Trajectory::add_step(std::span<const ContextKey> active, ActionSet valid, Action chosen) {
  if (!valid.contains(chosen)) throw ContractViolation("Trajectory: chosen action not in valid set");
  contexts_.insert(contexts_.end(), active.begin(), active.end());
  offsets_.push_back(static_cast<std::uint32_t>(contexts_.size()));
  valid_.push_back(valid);
  chosen_.push_back(chosen);
}

TrajectoryStep Trajectory::step(std::size_t j) const {
  std::span<const ContextKey> all(contexts_);
  return {all.subspan(offsets_[j], offsets_[j + 1] - offsets_[j]), valid_[j], chosen_[j]};
}

void write_trajectories(std::ostream& out, std::span<const Trajectory> trajs) {
  out << "ltscm-trajectories v1 " << trajs.size() << '\n';
  for (const Trajectory& t : trajs) {
    out << "traj " << t.problem_id() << ' ' << t.depth() << '\n';
    for (std::size_t j = 0; j < t.depth(); ++j) {
      TrajectoryStep s = t.step(j);
      out << s.valid.bits() << ' ' << int(s.chosen);
      for (ContextKey k : s.active) out << ' ' << k.mutex_set_id() << ':' << k.pattern_code();
      out << '\n';
    }
  }
}

namespace {

template <class Int>
Int to_int(std::string_view s, const std::string& where) {
  Int v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ParseError(where + ": bad integer '" + std::string(s) + "'");
  return v;
}

}  // namespace

std::vector<Trajectory> read_trajectories(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("trajectories: missing header");
  std::istringstream hs(line);
  std::string magic, version;
  std::size_t count = 0;
  if (!(hs >> magic >> version >> count) || magic != "ltscm-trajectories" || version != "v1")
    throw ParseError("trajectories: bad header '" + line + "'");

  std::vector<Trajectory> out;
  out.reserve(count);
  int line_no = 1;
  auto next_line = [&]() -> std::string& {
    if (!std::getline(in, line)) throw ParseError("trajectories: unexpected end of file");
    ++line_no;
    return line;
  };
  std::vector<ContextKey> active;
  for (std::size_t i = 0; i < count; ++i) {
    std::istringstream rec(next_line());
    std::string tag;
    std::uint64_t pid = 0;
    std::size_t depth = 0;
    if (!(rec >> tag >> pid >> depth) || tag != "traj")
      throw ParseError("trajectories line " + std::to_string(line_no) + ": expected 'traj'");
    Trajectory t(pid);
    for (std::size_t j = 0; j < depth; ++j) {
      std::istringstream st(next_line());
      const std::string where = "trajectories line " + std::to_string(line_no);
      std::string mask_tok, chosen_tok, ctx_tok;
      if (!(st >> mask_tok >> chosen_tok)) throw ParseError(where + ": truncated step");
      ActionSet valid(to_int<std::uint32_t>(mask_tok, where));
      int chosen = to_int<int>(chosen_tok, where);
      active.clear();
      while (st >> ctx_tok) {
        auto colon = ctx_tok.find(':');
        if (colon == std::string::npos) throw ParseError(where + ": bad context '" + ctx_tok + "'");
        std::string_view sv(ctx_tok);
        try {
          active.emplace_back(to_int<std::uint32_t>(sv.substr(0, colon), where),
                              to_int<std::uint64_t>(sv.substr(colon + 1), where));
        } catch (const ContractViolation& e) {
          throw ParseError(where + ": " + e.what());
        }
      }
      if (chosen < 0 || chosen >= kMaxActions || !valid.contains(chosen))
        throw ParseError(where + ": chosen action not in valid set");
      t.add_step(active, valid, static_cast<Action>(chosen));
    }
    out.push_back(std::move(t));
  }
  return out;
}

void save_trajectories(const std::filesystem::path& path, std::span<const Trajectory> trajs) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_trajectories(out, trajs);
}

std::vector<Trajectory> load_trajectories(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return read_trajectories(in);
}

}  // namespace ltscm
