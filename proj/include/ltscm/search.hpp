#pragma once

// Budgeted Levin tree search guided by a context-model policy.
//
// Nodes are expanded in increasing order of d(n)/pi(n). Children are queued
// with their parent's expanded-node index and the action leading to them; the
// child's state is only computed when it is extracted. An optional table of
// visited states skips a node whose state was already expanded with a
// probability at least as high.

#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <queue>
#include <span>
#include <vector>

#include <absl/container/flat_hash_map.h>

#include "ltscm/policy.hpp"
#include "ltscm/trajectory.hpp"
#include "ltscm/types.hpp"

namespace ltscm {

// What a puzzle domain provides to the search. `active_contexts` fills exactly
// num_mutex_sets() keys, one per mutex set, for the state reached by
// `last_action` (kNoAction at the root).
template <class D>
concept SearchDomain = requires(const D& d, const typename D::Problem& p,
                                const typename D::State& s, int a, std::span<ContextKey> out) {
  { d.num_actions() } -> std::convertible_to<int>;
  { d.num_mutex_sets() } -> std::convertible_to<std::size_t>;
  { d.initial_state(p) } -> std::same_as<typename D::State>;
  { d.transition(s, a) } -> std::same_as<typename D::State>;
  { d.valid_actions(s) } -> std::same_as<ActionSet>;
  { d.is_goal(s) } -> std::same_as<bool>;
  d.active_contexts(s, a, out);
  { d.state_key(s) } -> std::same_as<StateKey>;
};

// Ordering key for a node of depth d and log-probability ln pi: the root maps
// to -inf; every other node to ln d - ln pi, a monotone transform of d/pi.
inline double priority_key(std::uint32_t depth, double log_prob) {
  if (depth == 0) return -std::numeric_limits<double>::infinity();
  return std::log(static_cast<double>(depth)) - log_prob;
}

struct SearchNode {
  std::uint32_t depth = 0;
  double log_prob = 0.0;
  std::uint32_t parent = kNoParent;  // index of the expanded parent
  int action_in = kNoAction;

  static constexpr std::uint32_t kNoParent = std::numeric_limits<std::uint32_t>::max();
};

// Min-queue entry: cost key, then insertion order (FIFO among equal keys).
struct QueueEntry {
  double key;
  std::uint64_t seq;
  SearchNode node;

  friend bool operator>(const QueueEntry& a, const QueueEntry& b) {
    if (a.key != b.key) return a.key > b.key;
    return a.seq > b.seq;
  }
};

enum class SearchOutcome { solved, budget_reached, no_solution };

struct SearchResult {
  SearchOutcome outcome = SearchOutcome::no_solution;
  std::uint64_t expansions = 0;
  // Filled when solved.
  Trajectory trajectory;
  std::vector<Action> solution;
  double solution_log_prob = 0.0;

  bool solved() const { return outcome == SearchOutcome::solved; }
  std::size_t solution_depth() const { return solution.size(); }
};

struct SearchOptions {
  std::uint64_t budget = 0;
  bool prune = true;
  std::uint64_t problem_id = 0;
};

// Replays `path` from the problem's initial state and records, for every step,
// the active contexts, valid actions and chosen action. Throws InternalError if
// an action is invalid along the way and ContractViolation if the path does
// not end at a goal.
template <SearchDomain D>
Trajectory extract_trajectory(const D& domain, const typename D::Problem& problem,
                              std::span<const Action> path, std::uint64_t problem_id = 0) {
  Trajectory traj(problem_id);
  std::vector<ContextKey> ctx(domain.num_mutex_sets());
  auto state = domain.initial_state(problem);
  int last = kNoAction;
  for (Action a : path) {
    ActionSet valid = domain.valid_actions(state);
    if (!valid.contains(a)) throw InternalError("extract_trajectory: replayed action is not valid");
    domain.active_contexts(state, last, std::span<ContextKey>(ctx));
    traj.add_step(ctx, valid, a);
    state = domain.transition(state, a);
    last = a;
  }
  if (!domain.is_goal(state)) throw ContractViolation("extract_trajectory: path does not reach a goal");
  return traj;
}

// Action path from the root to `node`, walking the parents of expanded nodes.
inline std::vector<Action> path_to(const SearchNode& node,
                                   std::span<const std::uint32_t> expanded_parent,
                                   std::span<const int> expanded_action) {
  std::vector<Action> path;
  path.reserve(node.depth);
  std::uint32_t cur = node.parent;
  int action = node.action_in;
  while (action != kNoAction) {
    path.push_back(static_cast<Action>(action));
    if (cur == SearchNode::kNoParent || cur >= expanded_parent.size())
      throw InternalError("path_to: broken parent chain");
    std::uint32_t up = expanded_parent[cur];
    if (up != SearchNode::kNoParent && up >= cur) throw InternalError("path_to: parent cycle");
    action = expanded_action[cur];
    cur = up;
  }
  if (cur != SearchNode::kNoParent || path.size() != node.depth)
    throw InternalError("path_to: parent chain does not match node depth");
  return {path.rbegin(), path.rend()};
}

template <SearchDomain D>
SearchResult lts_search(const D& domain, const typename D::Problem& problem,
                        const ParamStore& store, const SearchOptions& opts) {
  using State = typename D::State;
  if (opts.budget < 1) throw ConfigError("lts_search: budget must be >= 1");
  if (store.num_actions() != domain.num_actions())
    throw ContractViolation("lts_search: store and domain disagree on the action count");

  const int A = domain.num_actions();
  PolicyEvaluator policy(store);
  std::vector<ContextKey> ctx(domain.num_mutex_sets());
  std::vector<double> log_pi(A);

  std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> queue;
  absl::flat_hash_map<StateKey, double> visited;
  std::vector<State> states;
  std::vector<std::uint32_t> exp_parent;
  std::vector<int> exp_action;

  std::uint64_t seq = 0;
  queue.push({priority_key(0, 0.0), seq++, SearchNode{}});

  SearchResult result;
  std::uint64_t expanded = 0;
  while (true) {
    if (queue.empty()) {
      result.outcome = SearchOutcome::no_solution;
      break;
    }
    const SearchNode n = queue.top().node;
    queue.pop();

    State s = n.parent == SearchNode::kNoParent ? domain.initial_state(problem)
                                                : domain.transition(states[n.parent], n.action_in);
    if (domain.is_goal(s)) {
      result.outcome = SearchOutcome::solved;
      result.solution = path_to(n, exp_parent, exp_action);
      result.solution_log_prob = n.log_prob;
      break;
    }
    if (opts.prune) {
      auto [it, inserted] = visited.try_emplace(domain.state_key(s), n.log_prob);
      if (!inserted) {
        if (it->second >= n.log_prob) continue;
        it->second = n.log_prob;
      }
    }

    ++expanded;
    if (expanded == opts.budget) {
      result.outcome = SearchOutcome::budget_reached;
      break;
    }

    const ActionSet valid = domain.valid_actions(s);
    const auto idx = static_cast<std::uint32_t>(states.size());
    if (valid.empty()) continue;

    domain.active_contexts(s, n.action_in, std::span<ContextKey>(ctx));
    policy.log_policy(ctx, valid, /*use_mix_floor=*/true, log_pi);
    states.push_back(std::move(s));
    exp_parent.push_back(n.parent);
    exp_action.push_back(n.action_in);

    const std::uint32_t child_depth = n.depth + 1;
    valid.for_each([&](int a) {
      SearchNode child{child_depth, n.log_prob + log_pi[a], idx, a};
      queue.push({priority_key(child_depth, child.log_prob), seq++, child});
    });
  }
  result.expansions = expanded;
  if (result.solved())
    result.trajectory = extract_trajectory(domain, problem, result.solution, opts.problem_id);
  return result;
}

}  // namespace ltscm
