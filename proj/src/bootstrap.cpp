#include "ltscm/bootstrap.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace ltscm {

void BootstrapConfig::validate() const {
  if (initial_budget < 1) throw ConfigError("bootstrap: initial budget must be >= 1");
  if (!(growth_trigger > 0.0)) throw ConfigError("bootstrap: growth trigger must be > 0");
  if (max_outer_iters < 1) throw ConfigError("bootstrap: max_outer_iters must be >= 1");
}

std::vector<Trajectory> SolutionStore::values() const {
  std::vector<Trajectory> out;
  out.reserve(by_id_.size());
  for (const auto& [id, t] : by_id_) out.push_back(t);
  return out;
}

std::string IterationStats::to_line() const {
  char obj[64];
  std::snprintf(obj, sizeof obj, "%.17g", log_objective);
  std::ostringstream s;
  s << iter << ' ' << budget << ' ' << attempted << ' ' << solved_total << ' ' << newly_solved
    << ' ' << expansions_total << ' ' << optim_iters << ' ' << obj << ' ' << stop_reason << ' '
    << solved_this_iter << ' ' << expansions_solved << ' ' << unsolved_remaining;
  return s.str();
}

IterationStats IterationStats::from_line(const std::string& line) {
  std::istringstream in(line);
  IterationStats s;
  std::string obj;
  in >> s.iter >> s.budget >> s.attempted >> s.solved_total >> s.newly_solved >>
      s.expansions_total >> s.optim_iters >> obj >> s.stop_reason >> s.solved_this_iter >>
      s.expansions_solved >> s.unsolved_remaining;
  std::string extra;
  if (!in || (in >> extra)) throw ParseError("history: malformed line '" + line + "'");
  s.log_objective = std::strtod(obj.c_str(), nullptr);
  return s;
}

void write_history(std::ostream& out, std::span<const IterationStats> history) {
  out << "# iter budget attempted solved_total newly_solved expansions_total optim_iters "
         "log_objective stop_reason solved_this_iter expansions_solved unsolved_remaining\n";
  for (const auto& s : history) out << s.to_line() << '\n';
}

std::vector<IterationStats> read_history(std::istream& in) {
  std::vector<IterationStats> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    out.push_back(IterationStats::from_line(line));
  }
  return out;
}

std::uint64_t next_budget(std::span<const IterationStats> history, std::uint64_t initial_budget,
                          double growth_trigger) {
  if (history.empty()) throw ContractViolation("next_budget: no completed iteration");
  const IterationStats& s = history.back();
  const double before = static_cast<double>(s.solved_total - s.newly_solved);
  if (s.solved_this_iter > 0 &&
      static_cast<double>(s.solved_this_iter) >= (1.0 + growth_trigger) * before)
    return std::max(initial_budget, s.budget / 2);
  if (s.unsolved_remaining == 0)
    throw ContractViolation("next_budget: no unsolved problems left to grow the budget for");
  const std::uint64_t r = s.unsolved_remaining;
  return 2 * s.budget + (s.expansions_solved + r - 1) / r;
}

}  // namespace ltscm
