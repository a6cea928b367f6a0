#pragma once

// The outer search-and-learn loop. Each iteration searches every remaining
// problem (solved ones included) under the current budget, keeps the latest
// solution per problem, drops problems proven unsolvable, re-optimizes the
// weights on all stored solutions and picks the next budget.

#include <atomic>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "ltscm/optimizer.hpp"
#include "ltscm/policy.hpp"
#include "ltscm/search.hpp"
#include "ltscm/trajectory.hpp"

namespace ltscm {

struct BootstrapConfig {
  std::uint64_t initial_budget = 2000;
  double growth_trigger = 0.25;
  int max_outer_iters = 1000;
  int workers = 1;
  bool prune = true;

  void validate() const;
};

// Latest solution per problem id.
class SolutionStore {
 public:
  void put(Trajectory traj) { by_id_.insert_or_assign(traj.problem_id(), std::move(traj)); }
  bool contains(std::uint64_t id) const { return by_id_.contains(id); }
  void erase(std::uint64_t id) { by_id_.erase(id); }
  const Trajectory& at(std::uint64_t id) const { return by_id_.at(id); }
  std::size_t size() const { return by_id_.size(); }
  // In increasing problem id order.
  std::vector<Trajectory> values() const;

 private:
  std::map<std::uint64_t, Trajectory> by_id_;
};

struct IterationStats {
  int iter = 0;
  std::uint64_t budget = 0;
  std::size_t attempted = 0;
  std::size_t solved_total = 0;    // |solutions| after this iteration
  std::size_t newly_solved = 0;    // solved now, never before
  std::uint64_t expansions_total = 0;
  int optim_iters = 0;
  double log_objective = 0.0;      // NaN when no optimization ran
  std::string stop_reason = "none";
  std::size_t solved_this_iter = 0;    // |N_t|
  std::uint64_t expansions_solved = 0; // T+
  std::size_t unsolved_remaining = 0;  // s-

  // Space-separated, fields in declaration order.
  std::string to_line() const;
  static IterationStats from_line(const std::string& line);
};

void write_history(std::ostream& out, std::span<const IterationStats> history);
std::vector<IterationStats> read_history(std::istream& in);

// Budget for the iteration after history.back():
//   max(B1, B_t / 2)           if |N_t| > 0 and |N_t| >= (1 + b) * (solved before t)
//   2 B_t + ceil(T+ / s-)      otherwise.
// Throws ContractViolation on an empty history or when the second rule would
// divide by s- = 0.
std::uint64_t next_budget(std::span<const IterationStats> history, std::uint64_t initial_budget,
                          double growth_trigger);

// Runs the search on problems[i] for every i in `which`. results[k] belongs to
// which[k]; trajectories carry problem id which[k].
template <SearchDomain D>
std::vector<SearchResult> solve_all(const D& domain, std::span<const typename D::Problem> problems,
                                    std::span<const std::size_t> which, std::uint64_t budget,
                                    const ParamStore& store, int workers, bool prune = true) {
  if (budget < 1) throw ConfigError("solve_all: budget must be >= 1");
  std::vector<SearchResult> results(which.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < which.size();)
      results[k] = lts_search(domain, problems[which[k]], store,
                              SearchOptions{budget, prune, which[k]});
  };
  const int w = std::max(1, std::min<int>(workers, static_cast<int>(which.size())));
  if (w == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < w; ++i) pool.emplace_back(work);
  }
  return results;
}

struct BootstrapResult {
  SolutionStore solutions;
  std::vector<IterationStats> history;
  std::vector<std::size_t> removed;  // proven unsolvable
  bool all_solved = false;           // every remaining problem has a solution
};

template <SearchDomain D>
BootstrapResult run_bootstrap(const D& domain, std::span<const typename D::Problem> problems,
                              ParamStore& store, const BootstrapConfig& cfg,
                              const OptimConfig& optim,
                              const std::function<void(const IterationStats&)>& on_iter = {}) {
  cfg.validate();
  optim.validate();
  if (problems.empty()) throw ContractViolation("run_bootstrap: empty problem set");
  BootstrapResult out;
  std::vector<std::size_t> working(problems.size());
  for (std::size_t i = 0; i < working.size(); ++i) working[i] = i;
  std::uint64_t budget = cfg.initial_budget;

  for (int t = 1; t <= cfg.max_outer_iters; ++t) {
    auto results = solve_all(domain, problems, std::span<const std::size_t>(working), budget,
                             store, cfg.workers, cfg.prune);
    IterationStats st;
    st.iter = t;
    st.budget = budget;
    st.attempted = working.size();
    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < working.size(); ++k) {
      auto& r = results[k];
      st.expansions_total += r.expansions;
      if (r.outcome == SearchOutcome::no_solution) {
        out.removed.push_back(working[k]);
        out.solutions.erase(working[k]);
        continue;
      }
      keep.push_back(working[k]);
      if (r.solved()) {
        ++st.solved_this_iter;
        st.expansions_solved += r.expansions;
        if (!out.solutions.contains(working[k])) ++st.newly_solved;
        if (!r.trajectory.empty()) out.solutions.put(std::move(r.trajectory));
        else out.solutions.put(Trajectory(working[k]));
      }
    }
    working = std::move(keep);
    st.solved_total = out.solutions.size();
    st.unsolved_remaining = working.size() - out.solutions.size();

    if (out.solutions.size() == working.size()) {
      st.log_objective = std::numeric_limits<double>::quiet_NaN();
      out.history.push_back(st);
      if (on_iter) on_iter(st);
      out.all_solved = true;
      break;
    }
    const auto trajs = out.solutions.values();
    const OptimReport rep = ftl_update(trajs, store, optim);
    st.optim_iters = rep.iterations_run;
    st.log_objective = rep.final_log_objective;
    st.stop_reason = std::string(to_string(rep.stop_reason));
    out.history.push_back(st);
    if (on_iter) on_iter(st);
    budget = next_budget(out.history, cfg.initial_budget, cfg.growth_trigger);
  }
  return out;
}

}  // namespace ltscm
