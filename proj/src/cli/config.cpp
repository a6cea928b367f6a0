#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "ltscm/param_io.hpp"
#include "options.hpp"

namespace ltscm::cli {

int RunConfig::resolved_workers() const {
  if (workers > 0) return workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

void RunConfig::validate() const {
  if (domain != "stp" && domain != "cube" && domain != "sokoban")
    throw ConfigError("unknown domain '" + domain + "' (stp, cube, sokoban)");
  if (domain == "stp" && (size < 2 || size > 5)) throw ConfigError("size must be in 2..5");
  if (initial_budget < 1) throw ConfigError("initial_budget must be >= 1");
  if (budget < 1) throw ConfigError("budget must be >= 1");
  if (!(growth_trigger > 0.0)) throw ConfigError("growth_trigger must be > 0");
  if (!(eps_low > 0.0 && eps_low <= 1.0)) throw ConfigError("eps_low must be in (0, 1]");
  if (!(eps_mix >= 0.0 && eps_mix < 1.0)) throw ConfigError("eps_mix must be in [0, 1)");
  if (workers < 0) throw ConfigError("workers must be >= 0");
  if (min_moves < 0 || min_moves > max_moves) throw ConfigError("need 0 <= min_moves <= max_moves");
  if (curriculum_step < 1 || curriculum_max < 0) throw ConfigError("bad curriculum settings");
  optim.validate();
}

void register_options(CLI::App& app, RunConfig& cfg, std::string& command) {
  app.add_option("command", command, "gen | train | solve | eval")
      ->required()
      ->check(CLI::IsMember({"gen", "train", "solve", "eval"}));
  app.set_config("--config", "", "flat key=value settings file (keys are the flag names)");

  app.add_option("--domain", cfg.domain, "stp | cube | sokoban")->capture_default_str();
  app.add_option("--size", cfg.size, "sliding-tile board width")->capture_default_str();
  app.add_option("--train", cfg.train_path, "training problem file");
  app.add_option("--test", cfg.test_path, "problem file for solve/eval");
  app.add_option("--params", cfg.params_path, "parameter snapshot to load");
  app.add_option("--out", cfg.out_path, "train: output directory; gen: problem file")
      ->capture_default_str();
  app.add_option("--metrics", cfg.metrics_path, "eval: write the metrics table here");
  app.add_option("--name", cfg.dataset_name, "eval: dataset label");

  app.add_option("--initial_budget", cfg.initial_budget, "first bootstrap budget B1")
      ->capture_default_str();
  app.add_option("--growth_trigger", cfg.growth_trigger, "budget reduce trigger b")
      ->capture_default_str();
  app.add_option("--max_outer_iters", cfg.max_outer_iters, "bootstrap iteration cap")
      ->capture_default_str();
  app.add_option("--budget", cfg.budget, "solve/eval expansion budget")->capture_default_str();

  app.add_option("--max_iters", cfg.optim.max_iters, "optimizer iterations")->capture_default_str();
  app.add_option("--gap_check_every", cfg.optim.gap_check_every, "duality gap period")
      ->capture_default_str();
  app.add_option("--reg_coeff", cfg.optim.reg_coeff, "regularizer coefficient")
      ->capture_default_str();
  app.add_option("--factor_target", cfg.optim.factor_target, "gap stop factor")
      ->capture_default_str();
  app.add_option("--eps_low", cfg.eps_low, "weights live in [ln eps_low, 0]")->capture_default_str();
  app.add_option("--eps_mix", cfg.eps_mix, "uniform mixing at search time")->capture_default_str();
  app.add_option("--workers", cfg.workers, "threads, 0 = all cores")->capture_default_str();
  app.add_option("--seed", cfg.seed, "generator seed")->capture_default_str();
  app.add_option("--prune", cfg.prune, "skip states reached with lower probability")
      ->capture_default_str();

  app.add_option("--count", cfg.count, "gen: number of problems")->capture_default_str();
  app.add_option("--min_moves", cfg.min_moves, "gen cube: shortest scramble")->capture_default_str();
  app.add_option("--max_moves", cfg.max_moves, "gen cube: longest scramble")->capture_default_str();

  app.add_option("--curriculum", cfg.curriculum, "train cube on generated scramble bands")
      ->capture_default_str();
  app.add_option("--curriculum_step", cfg.curriculum_step, "band width")->capture_default_str();
  app.add_option("--curriculum_max", cfg.curriculum_max, "last band end")->capture_default_str();
  app.add_option("--curriculum_count", cfg.curriculum_count, "cubes per band")
      ->capture_default_str();
  app.add_option("--curriculum_final_count", cfg.curriculum_final_count,
                 "cubes at fixed max length after the bands, 0 to skip")
      ->capture_default_str();
}

std::vector<std::pair<int, int>> cube_curriculum(int step, int max_moves, bool fixed_final) {
  if (step < 1 || max_moves < 0) throw ConfigError("cube_curriculum: bad step or maximum");
  std::vector<std::pair<int, int>> bands;
  for (int m = 0; m < max_moves; m += step) bands.emplace_back(m, std::min(m + step, max_moves));
  if (fixed_final) bands.emplace_back(max_moves, max_moves);
  return bands;
}

EvalMetrics summarize(const std::string& dataset, std::span<const ProblemOutcome> outcomes) {
  EvalMetrics m;
  m.dataset = dataset;
  m.n = outcomes.size();
  double len = 0.0, time = 0.0;
  for (const auto& o : outcomes) {
    m.total_expansions += o.expansions;
    time += o.time_ms;
    if (o.outcome == SearchOutcome::solved) {
      ++m.solved;
      len += static_cast<double>(o.length);
    }
  }
  if (m.n > 0) {
    m.solved_pct = 100.0 * static_cast<double>(m.solved) / static_cast<double>(m.n);
    m.mean_expansions = static_cast<double>(m.total_expansions) / static_cast<double>(m.n);
    m.mean_time_ms = time / static_cast<double>(m.n);
  }
  if (m.solved > 0) m.mean_length = len / static_cast<double>(m.solved);
  return m;
}

void write_metrics(std::ostream& out, std::span<const EvalMetrics> rows) {
  out << "dataset\tsolved_pct\tmean_length\tmean_expansions\tmean_time_ms\tn\n";
  for (const auto& r : rows)
    out << r.dataset << '\t' << format_double(r.solved_pct) << '\t' << format_double(r.mean_length)
        << '\t' << format_double(r.mean_expansions) << '\t' << format_double(r.mean_time_ms)
        << '\t' << r.n << '\n';
}

std::vector<EvalMetrics> read_metrics(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("dataset\tsolved_pct", 0) != 0)
    throw ParseError("metrics: missing header");
  std::vector<EvalMetrics> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string tok; std::getline(ss, tok, '\t');) f.push_back(tok);
    if (f.size() != 6) throw ParseError("metrics: expected 6 fields in '" + line + "'");
    EvalMetrics m;
    m.dataset = f[0];
    m.solved_pct = parse_double(f[1]);
    m.mean_length = parse_double(f[2]);
    m.mean_expansions = parse_double(f[3]);
    m.mean_time_ms = parse_double(f[4]);
    m.n = std::stoull(f[5]);
    m.solved = static_cast<std::size_t>(std::llround(m.solved_pct * m.n / 100.0));
    out.push_back(std::move(m));
  }
  return out;
}

void check_compatible(const ParamStore& store, int num_actions, std::size_t num_mutex_sets) {
  if (store.num_actions() != num_actions)
    throw ConfigError("snapshot has A=" + std::to_string(store.num_actions()) +
                      " but the domain has " + std::to_string(num_actions) + " actions");
  for (ContextKey k : store.keys())
    if (k.mutex_set_id() >= num_mutex_sets)
      throw ConfigError("snapshot uses mutex set " + std::to_string(k.mutex_set_id()) +
                        " but the domain has " + std::to_string(num_mutex_sets));
}

}  // namespace ltscm::cli
