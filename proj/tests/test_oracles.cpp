#include <cmath>
#include <vector>

#include "doctest.h"
#include "ltscm/oracles.hpp"
#include "ltscm/policy.hpp"

using namespace ltscm;

TEST_CASE("count_cheaper_nodes: root, uniform binary tree, zero-probability target") {
  SyntheticTree t = uniform_tree(2, 11);
  CHECK(count_cheaper_nodes(t, 0) == 1);
  auto up = check_upper_bound(t, 0);
  CHECK(up.ok);
  CHECK(up.bound == 1);
  // First depth-10 node: all shallower nodes are cheaper, all depth-10 nodes tie.
  const int target = (1 << 10) - 1;
  REQUIRE(t.depth(target) == 10);
  CHECK(count_cheaper_nodes(t, target) == 2047);
  up = check_upper_bound(t, target);
  CHECK(up.ok);
  CHECK(up.bound == doctest::Approx(1 + 10 * 1024));
  auto lo = check_lower_bound(t, target);
  CHECK(lo.ok);
  CHECK(lo.bound == doctest::Approx(1024.0 * 10 / 11 - 1));

  SyntheticTree z;
  const int dead = z.add_child(0, 0.0);
  z.add_child(0, 1.0);
  CHECK_THROWS_AS(count_cheaper_nodes(z, dead), ContractViolation);
}

TEST_CASE("two-branch tree construction") {
  for (int A : {3, 4, 8}) {
    SyntheticTree t = two_branch_tree(A);
    CHECK(t.is_proper());
    CHECK(t.branching() == A);
    CHECK(count_cheaper_nodes(t, kTwoBranchTarget) == 5);
    auto lo = check_lower_bound(t, kTwoBranchTarget);
    CHECK(lo.ok);
    CHECK(lo.bound <= 5);
    CHECK(check_upper_bound(t, kTwoBranchTarget).ok);
  }
}

TEST_CASE("bound sweeps on random trees agree with per-target checks") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    RandomTreeParams p;
    p.max_nodes = seed % 3 == 0 ? 10000 : 400;
    SyntheticTree t = random_tree(seed, p);
    CHECK(t.is_proper());
    auto sw = sweep_bounds(t, true);
    CHECK(sw.targets == t.size());
    CHECK(sw.upper_violations == 0);
    CHECK(sw.lower_violations == 0);
    if (t.size() > 500) continue;
    for (int n = 0; n < static_cast<int>(t.size()); ++n) {
      CHECK(check_upper_bound(t, n).ok);
      CHECK(check_lower_bound(t, n).ok);
    }
  }
  RandomTreeParams imp;
  imp.proper = false;
  SyntheticTree t = random_tree(3, imp);
  CHECK(!t.is_proper());
  CHECK(sweep_bounds(t, false).upper_violations == 0);
  int internal = 0;
  while (t.is_leaf(internal)) ++internal;
  CHECK_THROWS_AS(check_lower_bound(t, internal), ContractViolation);
}

TEST_CASE("sum to one") {
  SyntheticTree root;
  CHECK(check_sum_to_one(root).ok);
  CHECK(check_sum_to_one(root).sum == 1);
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    auto s = check_sum_to_one(random_tree(seed));
    CHECK(s.ok);
    CHECK(std::fabs(static_cast<double>(s.sum - 1)) <= 1e-12);
  }
  SyntheticTree t;
  t.add_child(0, 0.45);
  t.add_child(0, 0.45);
  auto s = check_sum_to_one(t);
  CHECK(s.ok);
  CHECK(s.sum == doctest::Approx(0.9));
  RandomTreeParams imp;
  imp.proper = false;
  CHECK(check_sum_to_one(random_tree(8, imp)).sum < 1);
}

TEST_CASE("finite_difference_grad") {
  auto quad = [](std::span<const double> x) { return 3 * x[0] * x[0] - 2 * x[0] * x[1] + x[1]; };
  const std::vector<double> pt{0.5, -1.5};
  auto g = finite_difference_grad(quad, pt, 1e-4);
  CHECK(g[0] == doctest::Approx(3 * 2 * 0.5 + 2 * 1.5).epsilon(1e-8));
  CHECK(g[1] == doctest::Approx(-2 * 0.5 + 1).epsilon(1e-8));
  auto c = finite_difference_grad([](std::span<const double>) { return 7.0; }, pt, 1e-3);
  CHECK(c == std::vector<double>{0.0, 0.0});
}

TEST_CASE("SyntheticTreeDomain reproduces the tree's edge probabilities") {
  SyntheticTree t = random_tree(17);
  SyntheticTreeDomain d(t);
  ParamStore store = d.make_store();
  CHECK(store.eps_mix() == 0.0);
  std::vector<ContextKey> ctx(1);
  for (int n = 0; n < static_cast<int>(t.size()); ++n) {
    if (t.is_leaf(n)) continue;
    d.active_contexts(n, kNoAction, ctx);
    auto p = policy_prob(ctx, d.valid_actions(n), store, true);
    auto kids = t.children(n);
    for (std::size_t i = 0; i < kids.size(); ++i)
      CHECK(std::fabs(p[i] - t.edge_prob(kids[i])) <= 1e-12);
  }
}
