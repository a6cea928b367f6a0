#pragma once

// LTS loss over a set of solution trajectories, in the log domain.
//
//   log l(tau)  = ln d - sum_j ln p_x(a_j | Q_j)          (product mixing, no eps_mix)
//   log L       = LSE over trajectories of log l(tau)
//
// The gradient of ln l with respect to beta[c][a], for a context c active at
// step j, is p_x(a) - 1{a = chosen} over the valid actions at that step.

#include <cstdint>
#include <span>
#include <vector>

#include <absl/container/flat_hash_map.h>

#include "ltscm/policy.hpp"
#include "ltscm/trajectory.hpp"
#include "ltscm/types.hpp"

namespace ltscm {

// Gradient blocks keyed by context. Blocks appear in first-touch order.
class SparseGradient {
 public:
  explicit SparseGradient(int num_actions = 1) : num_actions_(num_actions) {}

  int num_actions() const { return num_actions_; }
  std::size_t size() const { return keys_.size(); }
  bool empty() const { return keys_.empty(); }
  std::span<const ContextKey> keys() const { return keys_; }
  std::span<const double> block_at(std::size_t i) const {
    return {values_.data() + i * num_actions_, static_cast<std::size_t>(num_actions_)};
  }
  // Empty span when the key has no block.
  std::span<const double> find(ContextKey key) const;
  // Block for key, zero-initialized on first access.
  std::span<double> at(ContextKey key);
  // this += other, key by key.
  void merge(const SparseGradient& other);

 private:
  int num_actions_;
  absl::flat_hash_map<ContextKey, std::uint32_t> index_;
  std::vector<ContextKey> keys_;
  std::vector<double> values_;
};

// Throws ContractViolation on an empty trajectory.
double log_instant_loss(const Trajectory& traj, const ParamStore& store);

// LSE of the instant log losses; -inf for an empty set. Depth-0 trajectories
// contribute nothing. Throws ContractViolation on duplicate problem ids.
double log_total_loss(std::span<const Trajectory> trajs, const ParamStore& store);

struct LossAndGrad {
  double scaled_loss = 0.0;  // sum over tau of exp(log l(tau) - shift)
  SparseGradient grad;       // its gradient
};

LossAndGrad loss_and_grad(std::span<const Trajectory> trajs, const ParamStore& store,
                          double shift, int workers = 1);

// Trajectories compiled against a dense parameter vector. Every distinct
// context gets a local block; x holds the blocks back to back (block i at
// [i*A, (i+1)*A)). This is what the optimizer evaluates repeatedly.
class LossModel {
 public:
  // Depth-0 trajectories are dropped. Throws ContractViolation on duplicate
  // problem ids or when a trajectory's actions do not fit in A.
  LossModel(std::span<const Trajectory> trajs, int num_actions, int workers = 1);

  int num_actions() const { return num_actions_; }
  std::size_t num_blocks() const { return keys_.size(); }
  std::size_t num_trajectories() const { return traj_offsets_.size() - 1; }
  std::size_t num_steps() const { return chosen_.size(); }
  std::span<const ContextKey> keys() const { return keys_; }

  // x from the store; absent contexts read as all-zero blocks.
  std::vector<double> gather(const ParamStore& store) const;
  // Writes every block of x into the store.
  void scatter(std::span<const double> x, ParamStore& store) const;

  // Per-trajectory log losses.
  void log_losses(std::span<const double> x, std::span<double> out) const;
  double log_total(std::span<const double> x) const;
  // sum_tau exp(log l(tau) - shift). When grad is non-empty (size m*A) its
  // gradient is added into it.
  double scaled_loss(std::span<const double> x, double shift, std::span<double> grad) const;

 private:
  // Fills step_logp_ (and step_probs_ when want_probs) for every step.
  void eval_steps(std::span<const double> x, bool want_probs) const;
  void eval_range(std::span<const double> x, bool want_probs, std::size_t lo,
                  std::size_t hi) const;

  int num_actions_;
  int workers_;
  std::vector<ContextKey> keys_;
  std::vector<std::size_t> traj_offsets_{0};  // into steps
  std::vector<double> log_depth_;
  std::vector<std::size_t> ctx_offsets_{0};  // per step, into ctx_
  std::vector<std::uint32_t> ctx_;
  std::vector<ActionSet> valid_;
  std::vector<Action> chosen_;

  mutable std::vector<double> step_logp_;
  mutable std::vector<double> step_probs_;
};

}  // namespace ltscm
