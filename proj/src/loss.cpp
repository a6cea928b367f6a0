#include "ltscm/loss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include <absl/container/flat_hash_set.h>

#include "ltscm/kernels.hpp"

namespace ltscm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_distinct_ids(std::span<const Trajectory> trajs) {
  absl::flat_hash_set<std::uint64_t> seen;
  for (const auto& t : trajs)
    if (!seen.insert(t.problem_id()).second)
      throw ContractViolation("loss: duplicate problem id " + std::to_string(t.problem_id()));
}

double log_sum_exp(std::span<const double> v) {
  double mx = kNegInf;
  for (double x : v) mx = std::max(mx, x);
  if (mx == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : v) s += std::exp(x - mx);
  return mx + std::log(s);
}

}  // namespace

std::span<const double> SparseGradient::find(ContextKey key) const {
  auto it = index_.find(key);
  if (it == index_.end()) return {};
  return block_at(it->second);
}

std::span<double> SparseGradient::at(ContextKey key) {
  auto [it, inserted] = index_.try_emplace(key, static_cast<std::uint32_t>(keys_.size()));
  if (inserted) {
    keys_.push_back(key);
    values_.resize(values_.size() + num_actions_, 0.0);
  }
  return {values_.data() + std::size_t{it->second} * num_actions_,
          static_cast<std::size_t>(num_actions_)};
}

void SparseGradient::merge(const SparseGradient& other) {
  if (other.num_actions_ != num_actions_)
    throw ContractViolation("SparseGradient::merge: action counts differ");
  for (std::size_t i = 0; i < other.size(); ++i) {
    auto dst = at(other.keys_[i]);
    auto src = other.block_at(i);
    for (int a = 0; a < num_actions_; ++a) dst[a] += src[a];
  }
}

double log_instant_loss(const Trajectory& traj, const ParamStore& store) {
  if (traj.empty()) throw ContractViolation("log_instant_loss: empty trajectory");
  const int A = store.num_actions();
  PolicyEvaluator policy(store);
  double z[kMaxActions], p[kMaxActions];
  double sum = 0.0;
  for (std::size_t j = 0; j < traj.depth(); ++j) {
    const TrajectoryStep st = traj.step(j);
    if (st.chosen >= A) throw ContractViolation("log_instant_loss: action outside alphabet");
    policy.logits(st.active, std::span<double>(z, A));
    double mx = 0.0;
    double log_z = softmax_valid(std::span<const double>(z, A), st.valid,
                                 std::span<double>(p, A), &mx);
    sum += z[st.chosen] - mx - log_z;
  }
  return std::log(static_cast<double>(traj.depth())) - sum;
}

double log_total_loss(std::span<const Trajectory> trajs, const ParamStore& store) {
  check_distinct_ids(trajs);
  std::vector<double> terms;
  terms.reserve(trajs.size());
  for (const auto& t : trajs)
    if (!t.empty()) terms.push_back(log_instant_loss(t, store));
  return log_sum_exp(terms);
}

LossAndGrad loss_and_grad(std::span<const Trajectory> trajs, const ParamStore& store,
                          double shift, int workers) {
  const int A = store.num_actions();
  LossModel model(trajs, A, workers);
  LossAndGrad out{0.0, SparseGradient(A)};
  if (model.num_trajectories() == 0) return out;
  std::vector<double> x = model.gather(store);
  std::vector<double> g(x.size(), 0.0);
  out.scaled_loss = model.scaled_loss(x, shift, g);
  for (std::size_t i = 0; i < model.num_blocks(); ++i) {
    auto dst = out.grad.at(model.keys()[i]);
    std::copy_n(g.begin() + i * A, A, dst.begin());
  }
  return out;
}

LossModel::LossModel(std::span<const Trajectory> trajs, int num_actions, int workers)
    : num_actions_(num_actions), workers_(std::max(1, workers)) {
  if (num_actions < 1 || num_actions > kMaxActions)
    throw ContractViolation("LossModel: action count out of range");
  check_distinct_ids(trajs);
  absl::flat_hash_map<ContextKey, std::uint32_t> local;
  const std::uint32_t alphabet = ActionSet::all(num_actions).bits();
  for (const auto& t : trajs) {
    if (t.empty()) continue;
    for (std::size_t j = 0; j < t.depth(); ++j) {
      const TrajectoryStep st = t.step(j);
      if ((st.valid.bits() & ~alphabet) != 0 || st.chosen >= num_actions)
        throw ContractViolation("LossModel: trajectory action outside alphabet");
      for (ContextKey k : st.active) {
        auto [it, inserted] = local.try_emplace(k, static_cast<std::uint32_t>(keys_.size()));
        if (inserted) keys_.push_back(k);
        ctx_.push_back(it->second);
      }
      ctx_offsets_.push_back(ctx_.size());
      valid_.push_back(st.valid);
      chosen_.push_back(st.chosen);
    }
    traj_offsets_.push_back(chosen_.size());
    log_depth_.push_back(std::log(static_cast<double>(t.depth())));
  }
}

std::vector<double> LossModel::gather(const ParamStore& store) const {
  if (store.num_actions() != num_actions_)
    throw ContractViolation("LossModel::gather: store action count differs");
  std::vector<double> x(keys_.size() * num_actions_, 0.0);
  for (std::size_t i = 0; i < keys_.size(); ++i) {
    auto b = store.find(keys_[i]);
    if (!b.empty()) std::copy(b.begin(), b.end(), x.begin() + i * num_actions_);
  }
  return x;
}

void LossModel::scatter(std::span<const double> x, ParamStore& store) const {
  for (std::size_t i = 0; i < keys_.size(); ++i)
    store.set_block(keys_[i], x.subspan(i * num_actions_, num_actions_));
}

void LossModel::eval_range(std::span<const double> x, bool want_probs, std::size_t lo,
                           std::size_t hi) const {
  const int A = num_actions_;
  const auto& k = kernels::active();
  std::vector<const double*> rows;
  double z[kMaxActions], p[kMaxActions];
  for (std::size_t s = lo; s < hi; ++s) {
    rows.clear();
    for (std::size_t i = ctx_offsets_[s]; i < ctx_offsets_[s + 1]; ++i)
      rows.push_back(x.data() + std::size_t{ctx_[i]} * A);
    k.sum_rows(rows.data(), rows.size(), A, z);
    double mx = 0.0;
    double log_z = softmax_valid(std::span<const double>(z, A), valid_[s],
                                 std::span<double>(p, A), &mx);
    step_logp_[s] = z[chosen_[s]] - mx - log_z;
    if (want_probs) std::copy_n(p, A, step_probs_.begin() + s * A);
  }
}

void LossModel::eval_steps(std::span<const double> x, bool want_probs) const {
  if (x.size() != keys_.size() * num_actions_)
    throw ContractViolation("LossModel: parameter vector has the wrong size");
  const std::size_t n = num_steps();
  step_logp_.resize(n);
  if (want_probs) step_probs_.resize(n * num_actions_);
  const std::size_t w = std::min<std::size_t>(workers_, std::max<std::size_t>(1, n / 256));
  if (w <= 1) {
    eval_range(x, want_probs, 0, n);
    return;
  }
  // Each worker writes a disjoint slice of the per-step buffers.
  std::vector<std::jthread> pool;
  for (std::size_t i = 0; i < w; ++i)
    pool.emplace_back([&, i] { eval_range(x, want_probs, n * i / w, n * (i + 1) / w); });
}

void LossModel::log_losses(std::span<const double> x, std::span<double> out) const {
  eval_steps(x, false);
  for (std::size_t t = 0; t < num_trajectories(); ++t) {
    double sum = 0.0;
    for (std::size_t s = traj_offsets_[t]; s < traj_offsets_[t + 1]; ++s) sum += step_logp_[s];
    out[t] = log_depth_[t] - sum;
  }
}

double LossModel::log_total(std::span<const double> x) const {
  std::vector<double> v(num_trajectories());
  log_losses(x, v);
  return log_sum_exp(v);
}

double LossModel::scaled_loss(std::span<const double> x, double shift,
                              std::span<double> grad) const {
  const bool want_grad = !grad.empty();
  if (want_grad && grad.size() != x.size())
    throw ContractViolation("LossModel::scaled_loss: gradient buffer has the wrong size");
  eval_steps(x, want_grad);
  const int A = num_actions_;
  const auto& k = kernels::active();
  double total = 0.0;
  std::vector<double*> rows;
  double delta[kMaxActions];
  for (std::size_t t = 0; t < num_trajectories(); ++t) {
    double sum = 0.0;
    for (std::size_t s = traj_offsets_[t]; s < traj_offsets_[t + 1]; ++s) sum += step_logp_[s];
    const double w = std::exp(log_depth_[t] - sum - shift);
    total += w;
    if (!want_grad) continue;
    // Scatter in trajectory/step order so results do not depend on workers.
    for (std::size_t s = traj_offsets_[t]; s < traj_offsets_[t + 1]; ++s) {
      std::fill_n(delta, A, 0.0);
      const double* p = step_probs_.data() + s * A;
      valid_[s].for_each([&](int a) { delta[a] = w * p[a]; });
      delta[chosen_[s]] -= w;
      rows.clear();
      for (std::size_t i = ctx_offsets_[s]; i < ctx_offsets_[s + 1]; ++i)
        rows.push_back(grad.data() + std::size_t{ctx_[i]} * A);
      k.add_to_rows(rows.data(), rows.size(), delta, A);
    }
  }
  return total;
}

}  // namespace ltscm
