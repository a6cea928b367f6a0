#include "ltscm/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace ltscm {

namespace {

// Neumaier-compensated running sum.
struct CompensatedSum {
  long double sum = 0, comp = 0;
  void add(long double x) {
    const long double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) comp += (sum - t) + x;
    else comp += (x - t) + sum;
    sum = t;
  }
  long double value() const { return sum + comp; }
};

long double lower_bound_value(long double inv_dbar, long double cost, int A) {
  return (inv_dbar * cost - 1) / (A - 1);
}

}  // namespace

SyntheticTree::SyntheticTree()
    : parent_{-1}, depth_{0}, edge_{1.0}, pi_{1.0L}, children_(1), goal_{false} {}

int SyntheticTree::add_child(int parent, double p) {
  if (parent < 0 || static_cast<std::size_t>(parent) >= size())
    throw ContractViolation("SyntheticTree: bad parent");
  if (!(p >= 0.0 && p <= 1.0)) throw ContractViolation("SyntheticTree: probability out of [0, 1]");
  const int id = static_cast<int>(size());
  parent_.push_back(parent);
  depth_.push_back(depth_[parent] + 1);
  edge_.push_back(p);
  pi_.push_back(pi_[parent] * p);
  children_.emplace_back();
  children_[parent].push_back(id);
  goal_.push_back(false);
  return id;
}

long double SyntheticTree::cost(int n) const {
  if (depth_[n] == 0) return 0;
  if (pi_[n] == 0) return std::numeric_limits<long double>::infinity();
  return depth_[n] / pi_[n];
}

int SyntheticTree::branching() const {
  std::size_t b = 0;
  for (const auto& c : children_) b = std::max(b, c.size());
  return static_cast<int>(b);
}

bool SyntheticTree::is_proper(double tol) const {
  for (const auto& ch : children_) {
    if (ch.empty()) continue;
    long double s = 0;
    for (int c : ch) s += edge_[c];
    if (std::fabs(s - 1) > tol) return false;
  }
  return true;
}

SyntheticTree random_tree(std::uint64_t seed, const RandomTreeParams& params) {
  if (params.max_branching < 1 || params.max_depth < 0 || params.max_nodes < 1)
    throw ConfigError("random_tree: bad parameters");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SyntheticTree t;
  // Breadth-first growth.
  for (std::size_t n = 0; n < t.size(); ++n) {
    if (t.depth(static_cast<int>(n)) >= params.max_depth) continue;
    if (n > 0 && unit(rng) >= params.expand_prob) continue;
    const int k = 1 + static_cast<int>(rng() % params.max_branching);
    if (t.size() + k > params.max_nodes) break;
    std::vector<double> w(k);
    for (auto& x : w) x = 0.05 + unit(rng);
    const double mass = params.proper ? 1.0 : 0.5 + 0.45 * unit(rng);
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (int i = 0; i < k; ++i) t.add_child(static_cast<int>(n), mass * w[i] / total);
  }
  return t;
}

SyntheticTree uniform_tree(int branching, int depth) {
  SyntheticTree t;
  std::vector<int> layer{0};
  for (int d = 0; d < depth; ++d) {
    std::vector<int> next;
    for (int n : layer)
      for (int a = 0; a < branching; ++a) next.push_back(t.add_child(n, 1.0 / branching));
    layer = std::move(next);
  }
  return t;
}

SyntheticTree two_branch_tree(int A) {
  if (A < 3) throw ConfigError("two_branch_tree: needs A >= 3");
  SyntheticTree t;
  const int n1 = t.add_child(0, 1.0 - 2.0 / A);
  const int n2 = t.add_child(0, 2.0 / A);
  t.add_child(n2, 0.5);
  t.add_child(n2, 0.5);
  for (int a = 0; a < A; ++a) t.add_child(n1, 1.0 / A);
  return t;
}

std::size_t count_cheaper_nodes(const SyntheticTree& tree, int target) {
  if (tree.pi(target) <= 0) throw ContractViolation("count_cheaper_nodes: target has pi = 0");
  const long double c = tree.cost(target) * (1 + kCostTieTol);
  std::size_t k = 0;
  for (std::size_t n = 0; n < tree.size(); ++n) k += tree.cost(static_cast<int>(n)) <= c;
  return k;
}

// Sum of pi/d over the frontier of N(target), compensated.
static long double frontier_inverse_dbar(const SyntheticTree& tree, long double threshold) {
  CompensatedSum s;
  for (std::size_t n = 1; n < tree.size(); ++n) {
    const int i = static_cast<int>(n);
    if (tree.cost(i) > threshold && tree.cost(tree.parent(i)) <= threshold)
      s.add(tree.pi(i) / tree.depth(i));
  }
  return s.value();
}

BoundCheck check_upper_bound(const SyntheticTree& tree, int target) {
  BoundCheck r;
  r.count = count_cheaper_nodes(tree, target);
  r.bound = 1 + tree.cost(target);
  r.slack = r.bound - r.count;
  r.ok = r.count <= r.bound * (1 + kCostTieTol);
  return r;
}

BoundCheck check_lower_bound(const SyntheticTree& tree, int target) {
  if (!tree.is_proper(1e-9)) throw ContractViolation("check_lower_bound: tree is not proper");
  BoundCheck r;
  r.count = count_cheaper_nodes(tree, target);
  const int A = std::max(2, tree.branching());
  const long double threshold = tree.cost(target) * (1 + kCostTieTol);
  r.bound = lower_bound_value(frontier_inverse_dbar(tree, threshold), tree.cost(target), A);
  r.slack = r.count - r.bound;
  r.ok = r.count >= r.bound * (1 - 1e-9L) - 1e-9L;
  return r;
}

SweepResult sweep_bounds(const SyntheticTree& tree, bool check_lower) {
  if (check_lower && !tree.is_proper(1e-9))
    throw ContractViolation("sweep_bounds: lower bound needs a proper tree");
  const std::size_t n = tree.size();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<long double> cost(n);
  for (std::size_t i = 0; i < n; ++i) cost[i] = tree.cost(static_cast<int>(i));
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return cost[a] < cost[b]; });
  const int A = std::max(2, tree.branching());

  SweepResult res;
  CompensatedSum frontier;  // sum of pi/d over the current frontier
  std::size_t included = 0;
  std::size_t k = 0;
  while (k < n) {
    // Group of targets whose costs are equal within the tie tolerance.
    const long double threshold = cost[order[k]] * (1 + kCostTieTol);
    while (included < n && cost[order[included]] <= threshold) {
      const int v = order[included++];
      if (v != 0) frontier.add(-tree.pi(v) / tree.depth(v));
      for (int c : tree.children(v)) frontier.add(tree.pi(c) / tree.depth(c));
    }
    for (; k < included; ++k) {
      const int t = order[k];
      if (tree.pi(t) <= 0) continue;
      ++res.targets;
      const long double c = cost[t];
      if (included > (1 + c) * (1 + kCostTieTol)) ++res.upper_violations;
      if (check_lower) {
        const long double lb = lower_bound_value(frontier.value(), c, A);
        if (included < lb * (1 - 1e-9L) - 1e-9L) ++res.lower_violations;
      }
    }
  }
  return res;
}

SumToOne check_sum_to_one(const SyntheticTree& tree, long double tol) {
  CompensatedSum s;
  for (std::size_t n = 0; n < tree.size(); ++n)
    if (tree.is_leaf(static_cast<int>(n))) s.add(tree.pi(static_cast<int>(n)));
  SumToOne r;
  r.sum = s.value();
  r.ok = r.sum <= 1 + tol;
  if (tree.is_proper(1e-12)) r.ok = r.ok && std::fabs(r.sum - 1) <= tol;
  return r;
}

std::vector<double> finite_difference_grad(const std::function<double(std::span<const double>)>& f,
                                           std::span<const double> point, double h) {
  if (!(h > 0.0)) throw ContractViolation("finite_difference_grad: h must be > 0");
  std::vector<double> x(point.begin(), point.end()), g(point.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double x0 = x[i];
    x[i] = x0 + h;
    const double fp = f(x);
    x[i] = x0 - h;
    const double fm = f(x);
    x[i] = x0;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

SyntheticTreeDomain::SyntheticTreeDomain(const SyntheticTree& tree)
    : tree_(&tree), actions_(std::max(1, tree.branching())) {
  if (actions_ > kMaxActions) throw ConfigError("SyntheticTreeDomain: branching above 32");
}

ActionSet SyntheticTreeDomain::valid_actions(State s) const {
  const auto k = static_cast<int>(tree_->children(s).size());
  return k == 0 ? ActionSet{} : ActionSet::all(k);
}

ParamStore SyntheticTreeDomain::make_store() const {
  ParamStore store(actions_, 1e-300, 0.0);
  std::vector<double> w(actions_);
  for (std::size_t n = 0; n < tree_->size(); ++n) {
    auto ch = tree_->children(static_cast<int>(n));
    if (ch.empty()) continue;
    std::fill(w.begin(), w.end(), store.lower_bound());
    for (std::size_t a = 0; a < ch.size(); ++a) {
      const double p = tree_->edge_prob(ch[a]);
      if (!(p > 0.0)) throw ContractViolation("SyntheticTreeDomain: zero-probability edge");
      w[a] = std::max(store.lower_bound(), std::log(p));
    }
    store.set_block(ContextKey(0, n), w);
  }
  return store;
}

}  // namespace ltscm
