#pragma once

// Context-model policy: per-context categorical predictors combined by
// product mixing (a renormalized product of the active predictors).
//
// Each context c holds a block of A weights beta[c][a] in [ln eps_low, 0].
// Its predictor over the valid actions is softmax(beta[c]). Product mixing
// of the active contexts reduces to a softmax of the summed weights, which is
// how everything here computes it.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <absl/container/flat_hash_map.h>

#include "ltscm/types.hpp"

namespace ltscm {

// One context's weights, length A.
using ParamBlock = std::span<const double>;

inline constexpr double kDefaultEpsLow = 1e-4;
inline constexpr double kDefaultEpsMix = 1e-3;

// Table ContextKey -> weight block. Blocks are stored contiguously in
// insertion order; a key that was never written behaves as a uniform block
// (it contributes a zero logit to every action).
//
// Read-only use is thread-safe. Writers need exclusive access.
class ParamStore {
 public:
  explicit ParamStore(int num_actions, double eps_low = kDefaultEpsLow,
                      double eps_mix = kDefaultEpsMix);

  int num_actions() const { return num_actions_; }
  double eps_low() const { return eps_low_; }
  double eps_mix() const { return eps_mix_; }
  // ln(eps_low): lower end of every weight's range.
  double lower_bound() const { return lower_; }
  // (1 - 1/A) ln eps_low, the centre of the beta-simplex.
  double init_value() const { return init_value_; }

  std::size_t size() const { return keys_.size(); }
  bool empty() const { return keys_.empty(); }

  // Block for key, or an empty span when the key is not stored.
  ParamBlock find(ContextKey key) const;
  // Pointer to the first weight of the block, nullptr when absent.
  const double* row(ContextKey key) const;
  bool contains(ContextKey key) const { return index_.contains(key); }
  // Block index, or -1.
  std::int64_t index_of(ContextKey key) const;

  // Ensures key is stored, creating it at init_value(). Returns its index.
  std::size_t materialize(ContextKey key);
  // Stores (or overwrites) a block. Throws ContractViolation when a weight is
  // outside [ln eps_low, 0] or the length differs from A.
  void set_block(ContextKey key, std::span<const double> weights);

  ContextKey key_at(std::size_t index) const { return keys_[index]; }
  std::span<const ContextKey> keys() const { return keys_; }
  std::span<const double> block_at(std::size_t index) const {
    return {weights_.data() + index * num_actions_, static_cast<std::size_t>(num_actions_)};
  }

  // All stored weights, block-major (block i occupies [i*A, (i+1)*A)).
  std::span<double> weights() { return weights_; }
  std::span<const double> weights() const { return weights_; }

  bool in_range(double w) const { return w >= lower_ && w <= 0.0; }

  void set_eps_mix(double eps_mix);

 private:
  int num_actions_;
  double eps_low_;
  double eps_mix_;
  double lower_;
  double init_value_;
  // Keys with small pattern codes are also indexed directly, per mutex set,
  // which keeps the per-expansion lookups off the hash table.
  static constexpr std::uint64_t kDenseLimit = 1u << 14;
  static constexpr std::uint32_t kAbsent = 0xFFFFFFFFu;

  absl::flat_hash_map<ContextKey, std::uint32_t> index_;
  std::vector<std::vector<std::uint32_t>> dense_;
  std::vector<ContextKey> keys_;
  std::vector<double> weights_;
};

// exp(beta[a]) / sum_{a' in valid} exp(beta[a']).
double predictor_prob(ParamBlock block, int action, ActionSet valid);

// Product mixing of the active contexts' predictors. The returned vector has
// length A; entries outside `valid` are zero and the rest sum to one.
std::vector<double> product_mix(std::span<const ContextKey> active, ActionSet valid,
                                const ParamStore& store);

// product_mix, optionally mixed with the uniform distribution over the valid
// actions with weight eps_mix (search time). Without the floor it equals
// product_mix exactly.
std::vector<double> policy_prob(std::span<const ContextKey> active, ActionSet valid,
                                const ParamStore& store, bool use_mix_floor);

// Reusable scratch for the per-expansion hot path. Not thread-safe; create one
// per search.
class PolicyEvaluator {
 public:
  explicit PolicyEvaluator(const ParamStore& store);

  // Writes ln pi(a | n) for every valid action into log_probs[a] (size >= A).
  // Entries for invalid actions are left as -inf.
  void log_policy(std::span<const ContextKey> active, ActionSet valid, bool use_mix_floor,
                  std::span<double> log_probs);

  // Summed logits of the active contexts (absent contexts add zero).
  void logits(std::span<const ContextKey> active, std::span<double> out);

 private:
  const ParamStore* store_;
  std::vector<const double*> rows_;
};

// Stable softmax of logits over `valid`, written into probs (invalid -> 0).
// Returns log of the normalizer after max subtraction, i.e. ln sum exp(z - max),
// and the max through `max_out`.
double softmax_valid(std::span<const double> logits, ActionSet valid, std::span<double> probs,
                     double* max_out = nullptr);

}  // namespace ltscm
