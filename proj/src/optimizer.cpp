#include "ltscm/optimizer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>

#include "ltscm/kernels.hpp"

namespace ltscm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kGolden = 0.6180339887498949;
constexpr double kMaxStep = 1048576.0;  // 2^20
constexpr double kMinStep = 0x1p-40;
constexpr double kStepRelTol = 1e-3;

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw NumericalError(std::string("ftl_update: non-finite ") + what);
}

// log(L + R) and, optionally, the gradient of (L + R) * exp(-shift).
class Objective {
 public:
  Objective(const LossModel& model, double reg_coeff, double center)
      : model_(model), reg_(reg_coeff), center_(center) {}

  double log_value(std::span<const double> x) const {
    const double log_l = model_.log_total(x);
    const double r = reg_ * kernels::active().sq_dist(x.data(), center_, x.size());
    const double v = log_add(log_l, r > 0.0 ? std::log(r) : kNegInf);
    return v;
  }

  // Returns log(L + R) at x and writes the scaled gradient into grad.
  double value_and_grad(std::span<const double> x, std::span<double> grad) const {
    const double shift = log_value(x);
    if (shift == kNegInf) {
      std::fill(grad.begin(), grad.end(), 0.0);
      return shift;
    }
    require_finite(shift, "objective");
    std::fill(grad.begin(), grad.end(), 0.0);
    model_.scaled_loss(x, shift, grad);
    const double c = 2.0 * reg_ * std::exp(-shift);
    for (std::size_t i = 0; i < x.size(); ++i) {
      grad[i] += c * (x[i] - center_);
      require_finite(grad[i], "gradient");
    }
    return shift;
  }

 private:
  const LossModel& model_;
  double reg_;
  double center_;
};

}  // namespace

void OptimConfig::validate() const {
  if (max_iters < 1) throw ConfigError("optimizer: max_iters must be >= 1");
  if (gap_check_every < 1) throw ConfigError("optimizer: gap_check_every must be >= 1");
  if (!(reg_coeff >= 0.0)) throw ConfigError("optimizer: reg_coeff must be >= 0");
  if (!(factor_target > 1.0)) throw ConfigError("optimizer: factor_target must be > 1");
  if (ls_period < 1 || ls_first > ls_last) throw ConfigError("optimizer: bad line-search window");
  if (stall_window < 1) throw ConfigError("optimizer: stall_window must be >= 1");
}

std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::max_iters: return "max_iters";
    case StopReason::gap_certified: return "gap_certified";
    case StopReason::stalled: return "stalled";
  }
  return "?";
}

std::string OptimReport::to_string() const {
  char buf[256];
  std::snprintf(buf, sizeof buf, "iters=%d log_obj %.6g -> %.6g gap=%s stop=%s blocks=%zu",
                iterations_run, initial_log_objective, final_log_objective,
                final_gap ? std::to_string(*final_gap).c_str() : "-",
                std::string(ltscm::to_string(stop_reason)).c_str(), num_blocks);
  return buf;
}

Regularization regularizer(const ParamStore& store, double reg_coeff) {
  auto w = store.weights();
  const double b0 = store.init_value();
  Regularization out;
  out.value = reg_coeff * kernels::active().sq_dist(w.data(), b0, w.size());
  out.grad.resize(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out.grad[i] = 2.0 * reg_coeff * (w[i] - b0);
  return out;
}

double duality_gap(std::span<const double> x, std::span<const double> grad, int num_actions,
                   double lower) {
  if (x.size() != grad.size() || x.size() % num_actions != 0)
    throw ContractViolation("duality_gap: mismatched block layout");
  const auto& k = kernels::active();
  double gap = 0.0;
  for (std::size_t b = 0; b < x.size(); b += num_actions) {
    const double* g = grad.data() + b;
    int best = 0;
    double sum_g = 0.0;
    for (int a = 0; a < num_actions; ++a) {
      if (g[a] < g[best]) best = a;
      sum_g += g[a];
    }
    // g . s with s = lower everywhere except 0 at `best`.
    const double gs = lower * (sum_g - g[best]);
    gap += k.dot(g, x.data() + b, num_actions) - gs;
  }
  return gap;
}

double duality_gap(const ParamStore& store, const SparseGradient& grad) {
  const int A = store.num_actions();
  if (grad.num_actions() != A) throw ContractViolation("duality_gap: action counts differ");
  std::vector<double> x(grad.size() * A, 0.0), g(grad.size() * A);
  for (std::size_t i = 0; i < grad.size(); ++i) {
    auto b = store.find(grad.keys()[i]);
    if (!b.empty()) std::copy(b.begin(), b.end(), x.begin() + i * A);
    auto gb = grad.block_at(i);
    std::copy(gb.begin(), gb.end(), g.begin() + i * A);
  }
  return duality_gap(x, g, A, store.lower_bound());
}

OptimReport ftl_update(std::span<const Trajectory> trajs, ParamStore& store,
                       const OptimConfig& cfg) {
  cfg.validate();
  const int A = store.num_actions();
  const double lo = store.lower_bound();
  LossModel model(trajs, A, cfg.workers);
  for (ContextKey key : model.keys()) store.materialize(key);
  std::vector<double> x = model.gather(store);
  const std::size_t n = x.size();
  const std::size_t nb = model.num_blocks();
  const auto& k = kernels::active();
  Objective obj(model, cfg.reg_coeff, store.init_value());

  OptimReport rep;
  rep.num_blocks = nb;

  std::vector<double> grad(n), dir(n), probe(n);
  std::vector<double> accum(nb, 0.0);
  std::vector<double> best_x = x;

  auto phi = [&](double eta) {
    std::copy(x.begin(), x.end(), probe.begin());
    k.step_clamp(probe.data(), dir.data(), eta, lo, 0.0, n);
    const double v = obj.log_value(probe);
    if (std::isnan(v) || v == std::numeric_limits<double>::infinity())
      throw NumericalError("ftl_update: non-finite objective in line search");
    return v;
  };

  // Golden-section search for the step on [0, 2h]; h is grown (or shrunk)
  // by factors of 2 until phi(h) < phi(0) <= ... and phi(2h) >= phi(h).
  // Returns the best probed step and its value; {0, f0} when nothing improves.
  auto line_search = [&](double f0) -> std::pair<double, double> {
    double h = 1.0;
    double fh = phi(h);
    if (fh >= f0) {
      while (h > kMinStep) {
        h *= 0.5;
        fh = phi(h);
        if (fh < f0) break;
      }
      if (fh >= f0) return {0.0, f0};
    } else {
      while (h < kMaxStep) {
        const double f2 = phi(2.0 * h);
        if (f2 >= fh) break;
        h *= 2.0;
        fh = f2;
      }
    }
    double best_eta = h, best_f = fh;
    double a = 0.0, b = 2.0 * h;
    double c = b - kGolden * (b - a), d = a + kGolden * (b - a);
    double fc = phi(c), fd = phi(d);
    while (b - a > kStepRelTol * h) {
      if (fc < fd) {
        b = d; d = c; fd = fc;
        c = b - kGolden * (b - a);
        fc = phi(c);
      } else {
        a = c; c = d; fc = fd;
        d = a + kGolden * (b - a);
        fd = phi(d);
      }
      if (fc < best_f) best_eta = c, best_f = fc;
      if (fd < best_f) best_eta = d, best_f = fd;
    }
    if (fc < best_f) best_eta = c, best_f = fc;
    if (fd < best_f) best_eta = d, best_f = fd;
    return {best_eta, best_f};
  };

  double f = obj.value_and_grad(x, grad);
  rep.initial_log_objective = f;
  double best_f = f;
  double stored_eta = 0.0;
  bool last_failed = true;
  int stall = 0;

  for (int t = 1; t <= cfg.max_iters; ++t) {
    rep.iterations_run = t;
    if (t > 1) f = obj.value_and_grad(x, grad);
    if (f < best_f) {
      best_f = f;
      best_x = x;
    }
    if (f == kNegInf) {
      // Zero objective: nothing to minimize.
      rep.final_gap = 0.0;
      rep.stop_reason = StopReason::gap_certified;
      break;
    }
    if ((t - 1) % cfg.gap_check_every == 0) {
      const double gap = duality_gap(x, grad, A, lo);
      rep.final_gap = gap;
      // The scaled objective equals 1 at x.
      if (gap <= 1.0 - 1.0 / cfg.factor_target) {
        rep.stop_reason = StopReason::gap_certified;
        break;
      }
    }

    if (std::has_single_bit(static_cast<unsigned>(t))) std::fill(accum.begin(), accum.end(), 0.0);
    for (std::size_t b = 0; b < nb; ++b) {
      const double* g = grad.data() + b * A;
      accum[b] += k.dot(g, g, A);
      const double scale = accum[b] > 0.0 ? -1.0 / std::sqrt(accum[b]) : 0.0;
      for (int a = 0; a < A; ++a) dir[b * A + a] = scale * g[a];
    }

    double eta = 0.0, f_new = f;
    if (cfg.line_search_window(t) || last_failed || stored_eta <= 0.0) {
      std::tie(eta, f_new) = line_search(f);
    } else {
      f_new = phi(stored_eta);
      eta = stored_eta;
      if (!(f_new < f)) std::tie(eta, f_new) = line_search(f);
    }

    const double improvement = f - f_new;
    if (eta > 0.0 && f_new < f) {
      k.step_clamp(x.data(), dir.data(), eta, lo, 0.0, n);
      stored_eta = eta;
      last_failed = false;
      if (f_new < best_f) {
        best_f = f_new;
        best_x = x;
      }
    } else {
      last_failed = true;
    }
    stall = improvement < cfg.stall_tol ? stall + 1 : 0;
    if (stall >= cfg.stall_window) {
      rep.stop_reason = StopReason::stalled;
      break;
    }
    rep.stop_reason = StopReason::max_iters;
  }

  model.scatter(best_x, store);
  rep.final_log_objective = best_f;
  return rep;
}

}  // namespace ltscm
