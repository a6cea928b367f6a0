#pragma once

// Regularized follow-the-leader update of the context-model weights:
//
//   beta <- argmin over [ln eps_low, 0]^{Q x A} of L(trajs, beta) + R(beta),
//   R(beta) = reg_coeff * ||beta - beta0||^2.
//
// First-order method: one AdaGrad step size per context (accumulators reset at
// t = 1, 2, 4, 8, ...), a global step length from a golden-section line search
// on log(L + R) in scheduled iterations and reused while it keeps improving,
// projection onto the box, and early stopping by a duality gap taken over the
// beta-simplex.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ltscm/loss.hpp"
#include "ltscm/policy.hpp"
#include "ltscm/trajectory.hpp"

namespace ltscm {

struct OptimConfig {
  int max_iters = 200;
  int gap_check_every = 20;
  double reg_coeff = 5.0;
  // Line search runs when ls_first <= t mod ls_period <= ls_last.
  int ls_period = 20;
  int ls_first = 1;
  int ls_last = 3;
  double factor_target = 2.0;
  int stall_window = 20;
  double stall_tol = 1e-12;
  int workers = 1;

  // Throws ConfigError.
  void validate() const;
  bool line_search_window(int t) const {
    const int r = t % ls_period;
    return ls_first <= r && r <= ls_last;
  }
};

enum class StopReason { max_iters, gap_certified, stalled };

std::string_view to_string(StopReason r);

struct OptimReport {
  int iterations_run = 0;
  double initial_log_objective = 0.0;
  double final_log_objective = 0.0;
  // Gap of the scaled objective (L+R)/(L+R)(beta) at the last check.
  std::optional<double> final_gap;
  StopReason stop_reason = StopReason::max_iters;
  std::size_t num_blocks = 0;

  std::string to_string() const;
};

struct Regularization {
  double value = 0.0;
  std::vector<double> grad;  // aligned with ParamStore::weights()
};

// Over every stored block.
Regularization regularizer(const ParamStore& store, double reg_coeff);

// sum_c grad_c . (beta_c - s_c), s_c the beta-simplex vertex with 0 at the
// coordinate of smallest gradient and ln eps_low elsewhere. Blocks are A wide
// and aligned between x and grad.
double duality_gap(std::span<const double> x, std::span<const double> grad, int num_actions,
                   double lower);
// Same, over the gradient's blocks; contexts absent from the store read as
// all-zero blocks, as in the loss.
double duality_gap(const ParamStore& store, const SparseGradient& grad);

// Optimizes, in place, the blocks of every context appearing in `trajs`
// (materialized at beta0 first). Other stored blocks are left untouched and
// are not part of the objective. Throws NumericalError on a non-finite
// objective or gradient.
OptimReport ftl_update(std::span<const Trajectory> trajs, ParamStore& store,
                       const OptimConfig& cfg);

}  // namespace ltscm
