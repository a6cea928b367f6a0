#pragma once

// Command-line driver: gen, train, solve, eval.
//
// Settings come from an optional flat key=value file (--config) and are
// overridden by flags of the same name.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "ltscm/bootstrap.hpp"
#include "ltscm/optimizer.hpp"
#include "ltscm/policy.hpp"
#include "ltscm/search.hpp"

namespace ltscm::cli {

struct RunConfig {
  std::string domain = "stp";  // stp | cube | sokoban
  int size = 3;                // stp board width

  std::string train_path;
  std::string test_path;
  std::string params_path;     // snapshot to load (solve/eval, or resume for train)
  std::string out_path = "out";  // train: directory; gen: problem file
  std::string metrics_path;    // eval: TSV output, appended to stdout when empty
  std::string dataset_name;    // eval: row label, defaults to the test file name

  std::uint64_t initial_budget = 2000;
  double growth_trigger = 0.25;
  int max_outer_iters = 1000;
  std::uint64_t budget = 100000;  // solve/eval expansion budget

  OptimConfig optim;
  double eps_low = kDefaultEpsLow;
  double eps_mix = kDefaultEpsMix;
  int workers = 0;  // 0: hardware concurrency
  std::uint64_t seed = 1;
  bool prune = true;

  // gen
  std::size_t count = 100;
  int min_moves = 0;
  int max_moves = 10;

  // cube curriculum for train
  bool curriculum = false;
  int curriculum_step = 5;
  int curriculum_max = 50;
  std::size_t curriculum_count = 2000;
  std::size_t curriculum_final_count = 2000;  // problems in the fixed (max, max) phase; 0 skips it

  int resolved_workers() const;
  // Throws ConfigError.
  void validate() const;
};

// Scramble bands [0, step], [step, 2 step], ... up to max_moves, then
// (max_moves, max_moves) when fixed_final.
std::vector<std::pair<int, int>> cube_curriculum(int step, int max_moves, bool fixed_final);

struct ProblemOutcome {
  std::size_t index = 0;
  SearchOutcome outcome = SearchOutcome::no_solution;
  std::uint64_t expansions = 0;
  std::size_t length = 0;
  double time_ms = 0.0;
};

struct EvalMetrics {
  std::string dataset;
  double solved_pct = 0.0;
  double mean_length = 0.0;      // over solved instances
  double mean_expansions = 0.0;  // over all instances
  double mean_time_ms = 0.0;
  std::size_t n = 0;
  std::size_t solved = 0;
  std::uint64_t total_expansions = 0;
};

EvalMetrics summarize(const std::string& dataset, std::span<const ProblemOutcome> outcomes);

// Header line plus one tab-separated row per dataset; read_metrics inverts it.
void write_metrics(std::ostream& out, std::span<const EvalMetrics> rows);
std::vector<EvalMetrics> read_metrics(std::istream& in);

// Throws ConfigError when the snapshot was trained for another action count
// or uses mutex sets the domain does not have.
void check_compatible(const ParamStore& store, int num_actions, std::size_t num_mutex_sets);

template <SearchDomain D>
std::vector<ProblemOutcome> solve_problems(const D& domain,
                                           std::span<const typename D::Problem> problems,
                                           const ParamStore& store, std::uint64_t budget,
                                           int workers, bool prune = true) {
  std::vector<ProblemOutcome> out(problems.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < problems.size();) {
      const auto t0 = std::chrono::steady_clock::now();
      SearchResult r = lts_search(domain, problems[i], store, SearchOptions{budget, prune, i});
      const auto t1 = std::chrono::steady_clock::now();
      out[i] = {i, r.outcome, r.expansions, r.solution_depth(),
                std::chrono::duration<double, std::milli>(t1 - t0).count()};
    }
  };
  const int w = std::max(1, std::min<int>(workers, static_cast<int>(problems.size())));
  if (w == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < w; ++i) pool.emplace_back(work);
  }
  return out;
}

int cmd_gen(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_train(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_eval(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Full entry point: parses argv, dispatches, maps exceptions to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ltscm::cli
