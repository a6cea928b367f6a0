#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "ltscm/bootstrap.hpp"
#include "ltscm/oracles.hpp"

using namespace ltscm;

namespace {

// Walk on a line of cells 0..length-1 starting at 0; the goal cell (or none)
// is per problem. Contexts: the last move, and which wall (if any) is adjacent.
struct LineDomain {
  using State = int;
  struct Problem {
    int length = 1;
    int goal = -1;
  };
  static constexpr int kRight = 0, kLeft = 1;

  const Problem* current = nullptr;

  int num_actions() const { return 2; }
  std::size_t num_mutex_sets() const { return 2; }
  // The state carries the problem through a side table keyed by length/goal.
  State initial_state(const Problem& p) const { return encode(p, 0); }
  State transition(State s, int a) const { return s + (a == kRight ? 1 : -1); }
  ActionSet valid_actions(State s) const {
    ActionSet v;
    if (pos(s) + 1 < length(s)) v.insert(kRight);
    if (pos(s) > 0) v.insert(kLeft);
    return v;
  }
  bool is_goal(State s) const { return goal(s) == pos(s); }
  void active_contexts(State s, int last, std::span<ContextKey> out) const {
    out[0] = ContextKey(0, static_cast<std::uint64_t>(last + 1));
    out[1] = ContextKey(1, pos(s) == 0 ? 1 : pos(s) + 1 == length(s) ? 2 : 0);
  }
  StateKey state_key(State s) const { return {0, static_cast<std::uint64_t>(s)}; }

  // pos in the low 8 bits, length in the next 8, goal + 1 above.
  static State encode(const Problem& p, int pos) { return pos | (p.length << 8) | ((p.goal + 1) << 16); }
  static int pos(State s) { return s & 0xFF; }
  static int length(State s) { return (s >> 8) & 0xFF; }
  static int goal(State s) { return (s >> 16) - 1; }
};

IterationStats stats(std::uint64_t budget, std::size_t this_iter, std::size_t total,
                     std::size_t newly, std::uint64_t tplus, std::size_t sminus) {
  IterationStats s;
  s.iter = 1;
  s.budget = budget;
  s.solved_this_iter = this_iter;
  s.solved_total = total;
  s.newly_solved = newly;
  s.expansions_solved = tplus;
  s.unsolved_remaining = sminus;
  return s;
}

}  // namespace

TEST_CASE("next_budget: hand-evaluated rules") {
  // 100 solved before, 130 solved now (>= 125): halve, floored at B1.
  std::vector<IterationStats> h{stats(4000, 130, 130, 30, 50000, 20)};
  CHECK(next_budget(h, 2000, 0.25) == 2000);
  h[0].budget = 16000;
  CHECK(next_budget(h, 2000, 0.25) == 8000);
  // Below the trigger: 2 B + ceil(T+ / s-).
  h = {stats(2000, 120, 120, 20, 10000, 5)};
  CHECK(next_budget(h, 2000, 0.25) == 6000);
  h = {stats(2000, 120, 120, 20, 10001, 5)};
  CHECK(next_budget(h, 2000, 0.25) == 6001);
  // First iteration, nothing solved.
  h = {stats(2000, 0, 0, 0, 0, 50)};
  CHECK(next_budget(h, 2000, 0.25) == 4000);
  // First iteration with solutions: 0 solved before, so any |N_1| > 0 halves.
  h = {stats(2000, 3, 3, 3, 900, 47)};
  CHECK(next_budget(h, 2000, 0.25) == 2000);
  h = {stats(2000, 0, 0, 0, 0, 0)};
  CHECK_THROWS_AS(next_budget(h, 2000, 0.25), ContractViolation);
  CHECK_THROWS_AS(next_budget({}, 2000, 0.25), ContractViolation);
}

TEST_CASE("IterationStats: line and history round trip") {
  IterationStats s = stats(12345, 7, 9, 2, 4242, 3);
  s.iter = 4;
  s.attempted = 12;
  s.expansions_total = 99999;
  s.optim_iters = 41;
  s.log_objective = 9.9193435428960317;
  s.stop_reason = "gap_certified";
  auto back = IterationStats::from_line(s.to_line());
  CHECK(back.to_line() == s.to_line());
  CHECK(back.log_objective == s.log_objective);
  IterationStats n;
  n.log_objective = std::nan("");
  CHECK(std::isnan(IterationStats::from_line(n.to_line()).log_objective));
  std::stringstream ss;
  std::vector<IterationStats> hist{s, n};
  write_history(ss, hist);
  auto read = read_history(ss);
  REQUIRE(read.size() == 2);
  CHECK(read[0].to_line() == s.to_line());
  CHECK_THROWS(IterationStats::from_line("1 2 3"));
}

TEST_CASE("SolutionStore") {
  SolutionStore s;
  Trajectory a(5), b(2), c(5);
  const ContextKey ctx[] = {ContextKey(0, 0)};
  c.add_step(ctx, ActionSet(1), 0);
  s.put(a);
  s.put(b);
  s.put(c);
  CHECK(s.size() == 2);
  CHECK(s.at(5).depth() == 1);
  auto v = s.values();
  CHECK(v[0].problem_id() == 2);
  CHECK(v[1].problem_id() == 5);
  s.erase(2);
  CHECK(!s.contains(2));
}

TEST_CASE("solve_all: trivial, budget 1, and mixed outcomes") {
  LineDomain d;
  ParamStore store(2);
  std::vector<LineDomain::Problem> trivial(4, {3, 0});
  std::vector<std::size_t> all{0, 1, 2, 3};
  for (const auto& r : solve_all(d, std::span<const LineDomain::Problem>(trivial), all, 5, store, 2)) {
    CHECK(r.solved());
    CHECK(r.expansions == 0);
  }
  std::vector<LineDomain::Problem> far(3, {40, 20});
  std::vector<std::size_t> three{0, 1, 2};
  for (const auto& r : solve_all(d, std::span<const LineDomain::Problem>(far), three, 1, store, 2))
    CHECK(r.outcome == SearchOutcome::budget_reached);
  CHECK(store.empty());

  // One solvable within the budget, one not, one without any goal.
  std::vector<LineDomain::Problem> mixed{{10, 3}, {60, 50}, {4, -1}};
  auto rs = solve_all(d, std::span<const LineDomain::Problem>(mixed), three, 20, store, 3);
  CHECK(rs[0].solved());
  CHECK(rs[0].trajectory.problem_id() == 0);
  CHECK(rs[1].outcome == SearchOutcome::budget_reached);
  CHECK(rs[2].outcome == SearchOutcome::no_solution);
  CHECK_THROWS_AS(solve_all(d, std::span<const LineDomain::Problem>(mixed), three, 0, store, 1),
                  ConfigError);
}

TEST_CASE("run_bootstrap: single trivial problem stops before optimizing") {
  LineDomain d;
  ParamStore store(2);
  std::vector<LineDomain::Problem> one{{3, 0}};
  auto r = run_bootstrap(d, std::span<const LineDomain::Problem>(one), store, BootstrapConfig{},
                         OptimConfig{});
  REQUIRE(r.history.size() == 1);
  CHECK(r.all_solved);
  CHECK(std::isnan(r.history[0].log_objective));
  CHECK(r.history[0].stop_reason == "none");
  CHECK(store.empty());
  CHECK_THROWS_AS(run_bootstrap(d, std::span<const LineDomain::Problem>{}, store,
                                BootstrapConfig{}, OptimConfig{}),
                  ContractViolation);
}

TEST_CASE("run_bootstrap: line walks, replay, monotonicity, removal, determinism") {
  LineDomain d;
  std::vector<LineDomain::Problem> probs;
  for (int g = 1; g <= 40; ++g) probs.push_back({64, g});
  probs.push_back({5, -1});
  probs.push_back({7, -1});
  BootstrapConfig cfg;
  cfg.initial_budget = 4;
  OptimConfig optim;
  optim.max_iters = 40;

  ParamStore store(2);
  std::vector<IterationStats> seen;
  auto r = run_bootstrap(d, std::span<const LineDomain::Problem>(probs), store, cfg, optim,
                         [&](const IterationStats& s) { seen.push_back(s); });
  CHECK(r.all_solved);
  CHECK(r.solutions.size() == 40);
  CHECK(r.removed == std::vector<std::size_t>{40, 41});
  CHECK(!r.solutions.contains(40));
  REQUIRE(seen.size() == r.history.size());
  REQUIRE(r.history.size() >= 2);
  CHECK(r.history[0].budget == cfg.initial_budget);
  CHECK(r.history[0].attempted == 42);
  for (std::size_t t = 1; t < r.history.size(); ++t) {
    CHECK(r.history[t].solved_total >= r.history[t - 1].solved_total);
    // Removed problems are never attempted again.
    CHECK(r.history[t].attempted <= r.history[t - 1].attempted);
    CHECK(r.history[t].attempted >= 40);
    std::span<const IterationStats> prefix(r.history.data(), t);
    CHECK(next_budget(prefix, cfg.initial_budget, cfg.growth_trigger) == r.history[t].budget);
  }
  CHECK(r.history.back().attempted == 40);
  // The learned policy walks right from the start.
  const ContextKey root_ctx[] = {ContextKey(0, 0), ContextKey(1, 1)};
  const ContextKey mid_ctx[] = {ContextKey(0, 1 + LineDomain::kRight), ContextKey(1, 0)};
  const ActionSet both(0b11);
  CHECK(policy_prob(mid_ctx, both, store, false)[LineDomain::kRight] > 0.9);
  CHECK(policy_prob(root_ctx, ActionSet(1), store, false)[LineDomain::kRight] == 1.0);

  ParamStore store2(2);
  cfg.workers = 3;
  auto r2 = run_bootstrap(d, std::span<const LineDomain::Problem>(probs), store2, cfg, optim);
  REQUIRE(r2.history.size() == r.history.size());
  for (std::size_t t = 0; t < r.history.size(); ++t)
    CHECK(r2.history[t].to_line() == r.history[t].to_line());
  CHECK(std::equal(store.weights().begin(), store.weights().end(), store2.weights().begin(),
                   store2.weights().end()));
}

TEST_CASE("bootstrap step: optimizing never worsens the stored solutions' objective") {
  // One outer iteration at a time, checking the best-iterate contract on the
  // optimized objective log(L + R) and reporting how L alone moved.
  LineDomain d;
  std::vector<LineDomain::Problem> probs;
  for (int g = 1; g <= 30; ++g) probs.push_back({48, g});
  std::vector<std::size_t> all(probs.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  ParamStore store(2);
  SolutionStore sols;
  OptimConfig optim;
  optim.max_iters = 30;
  std::uint64_t budget = 8;
  for (int t = 0; t < 6; ++t, budget *= 2) {
    auto rs = solve_all(d, std::span<const LineDomain::Problem>(probs), all, budget, store, 1);
    for (auto& r : rs)
      if (r.solved()) sols.put(std::move(r.trajectory));
    auto trajs = sols.values();
    if (trajs.empty()) continue;
    ParamStore before = store;
    for (const auto& tr : trajs)
      for (std::size_t j = 0; j < tr.depth(); ++j)
        for (auto c : tr.step(j).active) before.materialize(c);
    const double lb = log_total_loss(trajs, before);
    const double ob = std::log(std::exp(lb) + regularizer(before, optim.reg_coeff).value);
    auto rep = ftl_update(trajs, store, optim);
    const double la = log_total_loss(trajs, store);
    const double oa = std::log(std::exp(la) + regularizer(store, optim.reg_coeff).value);
    CHECK(oa <= ob + 1e-12);
    CHECK(rep.final_log_objective == doctest::Approx(oa).epsilon(1e-9));
    MESSAGE("t=" << t << " log L " << lb << " -> " << la);
  }
}
