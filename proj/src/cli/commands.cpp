#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "ltscm/domains/cube.hpp"
#include "ltscm/domains/problem_io.hpp"
#include "ltscm/domains/sokoban.hpp"
#include "ltscm/domains/stp.hpp"
#include "ltscm/param_io.hpp"
#include "options.hpp"

namespace ltscm::cli {

namespace fs = std::filesystem;

namespace {

const char* outcome_name(SearchOutcome o) {
  switch (o) {
    case SearchOutcome::solved: return "solved";
    case SearchOutcome::budget_reached: return "budget_reached";
    case SearchOutcome::no_solution: return "no_solution";
  }
  return "?";
}

// Calls f(domain, problems) for the configured domain.
template <class F>
int with_problems(const RunConfig& cfg, const std::string& path, F&& f) {
  if (path.empty()) throw ConfigError("no problem file given");
  if (cfg.domain == "stp") {
    StpDomain d(cfg.size);
    auto probs = load_stp_problems(path);
    for (const auto& p : probs)
      if (p.size != cfg.size) throw ConfigError("problem file board size differs from --size");
    return f(d, std::span<const StpProblem>(probs));
  }
  if (cfg.domain == "cube") {
    CubeDomain d;
    auto probs = load_cube_problems(path);
    return f(d, std::span<const CubeProblem>(probs));
  }
  SokobanDomain d;
  auto probs = load_boxoban(path);
  return f(d, std::span<const SokobanLevel>(probs));
}

template <SearchDomain D>
ParamStore make_store(const RunConfig& cfg, const D& domain) {
  if (cfg.params_path.empty()) return ParamStore(domain.num_actions(), cfg.eps_low, cfg.eps_mix);
  ParamStore store = load_snapshot(cfg.params_path, cfg.eps_mix);
  check_compatible(store, domain.num_actions(), domain.num_mutex_sets());
  return store;
}

template <SearchDomain D>
int train_phases(const RunConfig& cfg, const D& domain,
                 const std::vector<std::vector<typename D::Problem>>& phases,
                 const std::vector<std::string>& labels, std::ostream& out) {
  fs::create_directories(cfg.out_path);
  ParamStore store = make_store(cfg, domain);
  BootstrapConfig boot{cfg.initial_budget, cfg.growth_trigger, cfg.max_outer_iters,
                       cfg.resolved_workers(), cfg.prune};
  OptimConfig optim = cfg.optim;
  optim.workers = cfg.resolved_workers();

  std::ofstream hist(fs::path(cfg.out_path) / "history.log");
  std::vector<IterationStats> none;
  write_history(hist, none);
  std::vector<Trajectory> all_solutions;
  std::uint64_t id_base = 0;
  bool all_solved = true;
  for (std::size_t ph = 0; ph < phases.size(); ++ph) {
    hist << "# phase " << ph << ' ' << labels[ph] << '\n';
    out << "phase " << ph << ' ' << labels[ph] << ": " << phases[ph].size() << " problems\n";
    auto res = run_bootstrap(domain, std::span<const typename D::Problem>(phases[ph]), store, boot,
                             optim, [&](const IterationStats& s) {
                               hist << s.to_line() << '\n';
                               hist.flush();
                               out << "  " << s.to_line() << '\n';
                             });
    all_solved = all_solved && res.all_solved;
    for (auto t : res.solutions.values()) {
      t.set_problem_id(id_base + t.problem_id());
      all_solutions.push_back(std::move(t));
    }
    id_base += phases[ph].size();
    out << "  solved " << res.solutions.size() << '/' << phases[ph].size() << ", removed "
        << res.removed.size() << '\n';
  }
  save_snapshot(fs::path(cfg.out_path) / "params.txt", store);
  save_trajectories(fs::path(cfg.out_path) / "solutions.txt", all_solutions);
  out << (all_solved ? "all problems solved" : "some problems remain unsolved") << "; "
      << store.size() << " contexts written to " << (fs::path(cfg.out_path) / "params.txt").string()
      << '\n';
  return 0;
}

}  // namespace

int cmd_gen(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  cfg.validate();
  if (cfg.count < 1) throw ConfigError("count must be >= 1");
  if (cfg.domain == "stp") {
    save_stp_problems(cfg.out_path, gen_stp(cfg.count, cfg.size, cfg.seed));
  } else if (cfg.domain == "cube") {
    save_cube_problems(cfg.out_path,
                       gen_cube_scrambles(cfg.count, cfg.min_moves, cfg.max_moves, cfg.seed));
  } else {
    throw ConfigError("gen: no generator for sokoban; use Boxoban level files");
  }
  out << "wrote " << cfg.count << ' ' << cfg.domain << " problems to " << cfg.out_path << '\n';
  return 0;
}

int cmd_train(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  cfg.validate();
  if (cfg.domain == "cube" && cfg.curriculum) {
    CubeDomain d;
    std::vector<std::vector<CubeProblem>> phases;
    std::vector<std::string> labels;
    const auto bands = cube_curriculum(cfg.curriculum_step, cfg.curriculum_max,
                                       cfg.curriculum_final_count > 0);
    for (std::size_t i = 0; i < bands.size(); ++i) {
      const bool fixed = cfg.curriculum_final_count > 0 && i + 1 == bands.size();
      const std::size_t n = fixed ? cfg.curriculum_final_count : cfg.curriculum_count;
      phases.push_back(gen_cube_scrambles(n, bands[i].first, bands[i].second, cfg.seed + i));
      labels.push_back(std::to_string(bands[i].first) + "-" + std::to_string(bands[i].second));
    }
    return train_phases(cfg, d, phases, labels, out);
  }
  return with_problems(cfg, cfg.train_path, [&](const auto& domain, auto problems) {
    using P = typename std::decay_t<decltype(domain)>::Problem;
    std::vector<std::vector<P>> phases{std::vector<P>(problems.begin(), problems.end())};
    if (phases[0].empty()) throw ConfigError("training set is empty");
    return train_phases(cfg, domain, phases, {cfg.train_path}, out);
  });
}

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  cfg.validate();
  return with_problems(cfg, cfg.test_path, [&](const auto& domain, auto problems) {
    const ParamStore store = make_store(cfg, domain);
    auto res = solve_problems(domain, problems, store, cfg.budget, cfg.resolved_workers(),
                              cfg.prune);
    out << "index\toutcome\texpansions\tlength\ttime_ms\n";
    for (const auto& r : res)
      out << r.index << '\t' << outcome_name(r.outcome) << '\t' << r.expansions << '\t'
          << r.length << '\t' << format_double(r.time_ms) << '\n';
    const EvalMetrics m = summarize(fs::path(cfg.test_path).filename().string(), res);
    write_metrics(out, std::span<const EvalMetrics>(&m, 1));
    return 0;
  });
}

int cmd_eval(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  cfg.validate();
  return with_problems(cfg, cfg.test_path, [&](const auto& domain, auto problems) {
    if (problems.empty()) throw ConfigError("eval: test set is empty");
    const ParamStore store = make_store(cfg, domain);
    auto res = solve_problems(domain, problems, store, cfg.budget, cfg.resolved_workers(),
                              cfg.prune);
    const std::string name =
        cfg.dataset_name.empty() ? fs::path(cfg.test_path).filename().string() : cfg.dataset_name;
    const EvalMetrics m = summarize(name, res);
    out << name << ": solved " << m.solved << '/' << m.n << " (" << m.solved_pct
        << "%), mean length " << m.mean_length << ", mean expansions " << m.mean_expansions
        << ", mean time " << m.mean_time_ms << " ms\n";
    if (cfg.metrics_path.empty()) {
      write_metrics(out, std::span<const EvalMetrics>(&m, 1));
    } else {
      std::ofstream f(cfg.metrics_path);
      if (!f) throw ConfigError("cannot write " + cfg.metrics_path);
      write_metrics(f, std::span<const EvalMetrics>(&m, 1));
    }
    return 0;
  });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Levin tree search with context models"};
  RunConfig cfg;
  std::string command;
  register_options(app, cfg, command);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  try {
    if (command == "gen") return cmd_gen(cfg, out, err);
    if (command == "train") return cmd_train(cfg, out, err);
    if (command == "solve") return cmd_solve(cfg, out, err);
    return cmd_eval(cfg, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace ltscm::cli
