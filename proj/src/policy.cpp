#include "ltscm/policy.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "ltscm/kernels.hpp"

namespace ltscm {

ParamStore::ParamStore(int num_actions, double eps_low, double eps_mix)
    : num_actions_(num_actions), eps_low_(eps_low), eps_mix_(eps_mix) {
  if (num_actions < 1 || num_actions > kMaxActions)
    throw ConfigError("ParamStore: number of actions must be in [1, 32]");
  if (!(eps_low > 0.0 && eps_low <= 1.0)) throw ConfigError("ParamStore: eps_low must be in (0, 1]");
  set_eps_mix(eps_mix);
  lower_ = std::log(eps_low_);
  init_value_ = (1.0 - 1.0 / num_actions_) * lower_;
}

void ParamStore::set_eps_mix(double eps_mix) {
  if (!(eps_mix >= 0.0 && eps_mix < 1.0)) throw ConfigError("ParamStore: eps_mix must be in [0, 1)");
  eps_mix_ = eps_mix;
}

ParamBlock ParamStore::find(ContextKey key) const {
  auto it = index_.find(key);
  if (it == index_.end()) return {};
  return block_at(it->second);
}

const double* ParamStore::row(ContextKey key) const {
  const std::uint64_t pattern = key.pattern_code();
  if (pattern < kDenseLimit) {
    const std::uint32_t m = key.mutex_set_id();
    if (m >= dense_.size() || pattern >= dense_[m].size()) return nullptr;
    const std::uint32_t i = dense_[m][pattern];
    return i == kAbsent ? nullptr : weights_.data() + std::size_t{i} * num_actions_;
  }
  auto it = index_.find(key);
  if (it == index_.end()) return nullptr;
  return weights_.data() + static_cast<std::size_t>(it->second) * num_actions_;
}

std::int64_t ParamStore::index_of(ContextKey key) const {
  auto it = index_.find(key);
  return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

std::size_t ParamStore::materialize(ContextKey key) {
  auto [it, inserted] = index_.try_emplace(key, static_cast<std::uint32_t>(keys_.size()));
  if (inserted) {
    keys_.push_back(key);
    weights_.resize(weights_.size() + num_actions_, init_value_);
    const std::uint64_t pattern = key.pattern_code();
    if (pattern < kDenseLimit) {
      const std::uint32_t m = key.mutex_set_id();
      if (m >= dense_.size()) dense_.resize(m + 1);
      if (pattern >= dense_[m].size()) dense_[m].resize(pattern + 1, kAbsent);
      dense_[m][pattern] = it->second;
    }
  }
  return it->second;
}

void ParamStore::set_block(ContextKey key, std::span<const double> weights) {
  if (weights.size() != static_cast<std::size_t>(num_actions_))
    throw ContractViolation("ParamStore::set_block: block length differs from A");
  for (double w : weights)
    if (!in_range(w))
      throw ContractViolation("ParamStore::set_block: weight " + std::to_string(w) +
                              " outside [ln eps_low, 0]");
  std::size_t idx = materialize(key);
  std::copy(weights.begin(), weights.end(), weights_.begin() + idx * num_actions_);
}

double softmax_valid(std::span<const double> logits, ActionSet valid, std::span<double> probs,
                     double* max_out) {
  double mx = -std::numeric_limits<double>::infinity();
  valid.for_each([&](int a) { mx = std::max(mx, logits[a]); });
  double z = 0.0;
  std::fill(probs.begin(), probs.end(), 0.0);
  valid.for_each([&](int a) {
    probs[a] = std::exp(logits[a] - mx);
    z += probs[a];
  });
  valid.for_each([&](int a) { probs[a] /= z; });
  if (max_out) *max_out = mx;
  return std::log(z);
}

double predictor_prob(ParamBlock block, int action, ActionSet valid) {
  if (valid.empty()) throw ContractViolation("predictor_prob: empty valid-action set");
  if (!valid.contains(action)) throw ContractViolation("predictor_prob: action not valid");
  if (block.empty()) return 1.0 / valid.size();
  std::vector<double> probs(block.size());
  softmax_valid(block, valid, probs);
  return probs[action];
}

std::vector<double> product_mix(std::span<const ContextKey> active, ActionSet valid,
                                const ParamStore& store) {
  if (valid.empty()) throw ContractViolation("product_mix: empty valid-action set");
  const int A = store.num_actions();
  std::vector<const double*> rows(active.size());
  for (std::size_t i = 0; i < active.size(); ++i) rows[i] = store.row(active[i]);
  std::vector<double> z(A), p(A);
  kernels::active().sum_rows(rows.data(), rows.size(), A, z.data());
  softmax_valid(z, valid, p);
  return p;
}

std::vector<double> policy_prob(std::span<const ContextKey> active, ActionSet valid,
                                const ParamStore& store, bool use_mix_floor) {
  std::vector<double> p = product_mix(active, valid, store);
  if (!use_mix_floor) return p;
  const double eps = store.eps_mix();
  const double floor = eps / valid.size();
  valid.for_each([&](int a) { p[a] = (1.0 - eps) * p[a] + floor; });
  return p;
}

PolicyEvaluator::PolicyEvaluator(const ParamStore& store) : store_(&store) {}

void PolicyEvaluator::logits(std::span<const ContextKey> active, std::span<double> out) {
  rows_.resize(active.size());
  for (std::size_t i = 0; i < active.size(); ++i) rows_[i] = store_->row(active[i]);
  kernels::active().sum_rows(rows_.data(), rows_.size(), store_->num_actions(), out.data());
}

void PolicyEvaluator::log_policy(std::span<const ContextKey> active, ActionSet valid,
                                 bool use_mix_floor, std::span<double> log_probs) {
  if (valid.empty()) throw ContractViolation("log_policy: empty valid-action set");
  const int A = store_->num_actions();
  double z[kMaxActions];
  double p[kMaxActions];
  logits(active, std::span<double>(z, A));
  softmax_valid(std::span<const double>(z, A), valid, std::span<double>(p, A));
  std::fill(log_probs.begin(), log_probs.begin() + A, -std::numeric_limits<double>::infinity());
  const double eps = use_mix_floor ? store_->eps_mix() : 0.0;
  const double floor = eps / valid.size();
  valid.for_each([&](int a) { log_probs[a] = std::log((1.0 - eps) * p[a] + floor); });
}

}  // namespace ltscm
