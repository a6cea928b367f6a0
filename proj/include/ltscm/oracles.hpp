#pragma once

// Brute-force checks of the search bounds on explicit probability-annotated
// trees, and a finite-difference gradient estimator.
//
// Node cost is d(n)/pi(n); N(n*) is the set of nodes with cost <= cost(n*)
// and the frontier L'(n*) the nodes outside it whose parent is inside.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ltscm/policy.hpp"
#include "ltscm/types.hpp"

namespace ltscm {

class SyntheticTree {
 public:
  SyntheticTree();  // just the root (depth 0, pi 1)

  // Appends a child of `parent` reached with probability p. Returns its id.
  int add_child(int parent, double p);

  std::size_t size() const { return parent_.size(); }
  int parent(int n) const { return parent_[n]; }
  int depth(int n) const { return depth_[n]; }
  double edge_prob(int n) const { return edge_[n]; }
  long double pi(int n) const { return pi_[n]; }
  // d / pi, 0 for the root, +inf when pi is 0.
  long double cost(int n) const;
  std::span<const int> children(int n) const { return children_[n]; }
  bool is_leaf(int n) const { return children_[n].empty(); }
  // Largest number of children of any node.
  int branching() const;
  // Every internal node's children sum to 1 (within tol).
  bool is_proper(double tol = 1e-12) const;

  void set_goal(int n, bool g = true) { goal_[n] = g; }
  bool is_goal(int n) const { return goal_[n]; }

 private:
  std::vector<int> parent_;
  std::vector<int> depth_;
  std::vector<double> edge_;
  std::vector<long double> pi_;
  std::vector<std::vector<int>> children_;
  std::vector<bool> goal_;
};

struct RandomTreeParams {
  int max_depth = 12;
  int max_branching = 4;
  std::size_t max_nodes = 10000;
  double expand_prob = 0.75;  // chance that a node below max_depth gets children
  bool proper = true;         // children sum to 1; otherwise to a random value < 1
};

// Deterministic in seed. Children are added to a node all at once, so the
// node budget never leaves a partially expanded node.
SyntheticTree random_tree(std::uint64_t seed, const RandomTreeParams& params = {});

// Full tree of the given branching and depth, uniform probabilities.
SyntheticTree uniform_tree(int branching, int depth);

// The two-branch tree used to show the (A - 1) factor of the lower bound is
// needed: the root has n1 (prob 1 - 2/A, A children of 1/A each) and n2
// (prob 2/A, two children of 1/2 each). Node ids: 0 root, 1 n1, 2 n2,
// 3 n_{2,1}, 4 n_{2,2}, then the children of n1.
SyntheticTree two_branch_tree(int A);
inline constexpr int kTwoBranchTarget = 3;

// Relative tolerance used to treat two costs as equal.
inline constexpr long double kCostTieTol = 1e-12L;

// |N(target)|. Throws ContractViolation when pi(target) = 0.
std::size_t count_cheaper_nodes(const SyntheticTree& tree, int target);

struct BoundCheck {
  bool ok = true;
  std::size_t count = 0;
  long double bound = 0;
  long double slack = 0;  // |bound - count| in the direction that must be >= 0
};

// count <= 1 + d/pi.
BoundCheck check_upper_bound(const SyntheticTree& tree, int target);

// count >= (1/(A-1)) ((1/dbar) d/pi - 1), 1/dbar = sum over L' of pi/d.
// Throws ContractViolation on an improper tree.
BoundCheck check_lower_bound(const SyntheticTree& tree, int target);

// Both bounds for every node of the tree as target in one sorted sweep.
// Returns the number of violations of each.
struct SweepResult {
  std::size_t targets = 0;
  std::size_t upper_violations = 0;
  std::size_t lower_violations = 0;
};
SweepResult sweep_bounds(const SyntheticTree& tree, bool check_lower);

struct SumToOne {
  bool ok = true;
  long double sum = 0;
};
// Sum of pi over the leaves; ok when <= 1 (+tol) and, for a proper tree, = 1
// within tol.
SumToOne check_sum_to_one(const SyntheticTree& tree, long double tol = 1e-12L);

// Central differences on f at `point`, step h per coordinate.
std::vector<double> finite_difference_grad(const std::function<double(std::span<const double>)>& f,
                                           std::span<const double> point, double h);

// Adapter that runs lts_search on a synthetic tree. Every node is its own
// context with weights ln(child edge probability), so with eps_mix = 0 the
// search policy reproduces the tree's probabilities (to rounding).
class SyntheticTreeDomain {
 public:
  using State = int;
  struct Problem {};

  explicit SyntheticTreeDomain(const SyntheticTree& tree);

  int num_actions() const { return actions_; }
  std::size_t num_mutex_sets() const { return 1; }
  State initial_state(const Problem&) const { return 0; }
  State transition(State s, int a) const { return tree_->children(s)[a]; }
  ActionSet valid_actions(State s) const;
  bool is_goal(State s) const { return tree_->is_goal(s); }
  void active_contexts(State s, int, std::span<ContextKey> out) const {
    out[0] = ContextKey(0, static_cast<std::uint64_t>(s));
  }
  StateKey state_key(State s) const { return {0, static_cast<std::uint64_t>(s)}; }

  // Weights reproducing the tree's edge probabilities. Zero-probability
  // edges are not representable and are rejected.
  ParamStore make_store() const;

 private:
  const SyntheticTree* tree_;
  int actions_;
};

}  // namespace ltscm
