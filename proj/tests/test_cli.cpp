#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "ltscm/bootstrap.hpp"
#include "ltscm/cli.hpp"
#include "ltscm/param_io.hpp"

using namespace ltscm;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("ltscm_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

struct Run {
  int code;
  std::string out, err;
};

Run run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ltscm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("cube_curriculum bands") {
  using B = std::vector<std::pair<int, int>>;
  CHECK(cli::cube_curriculum(5, 10, false) == B{{0, 5}, {5, 10}});
  CHECK(cli::cube_curriculum(5, 10, true) == B{{0, 5}, {5, 10}, {10, 10}});
  CHECK(cli::cube_curriculum(5, 50, false).size() == 10);
}

TEST_CASE("summarize and metrics round trip") {
  std::vector<cli::ProblemOutcome> o{{0, SearchOutcome::solved, 100, 10, 2.0},
                                     {1, SearchOutcome::budget_reached, 500, 0, 6.0},
                                     {2, SearchOutcome::solved, 300, 20, 4.0},
                                     {3, SearchOutcome::solved, 0, 0, 0.0}};
  auto m = cli::summarize("set", o);
  CHECK(m.n == 4);
  CHECK(m.solved == 3);
  CHECK(m.solved_pct == doctest::Approx(75));
  CHECK(m.mean_length == doctest::Approx(10));
  CHECK(m.mean_expansions == doctest::Approx(225));
  CHECK(m.total_expansions == 900);
  CHECK(m.mean_time_ms == doctest::Approx(3));
  std::stringstream ss;
  std::vector<cli::EvalMetrics> rows{m, cli::summarize("empty", {})};
  cli::write_metrics(ss, rows);
  CHECK(ss.str().rfind("dataset\tsolved_pct\tmean_length\tmean_expansions\tmean_time_ms\tn\n", 0) == 0);
  auto back = cli::read_metrics(ss);
  REQUIRE(back.size() == 2);
  CHECK(back[0].dataset == "set");
  CHECK(back[0].solved_pct == m.solved_pct);
  CHECK(back[0].mean_expansions == m.mean_expansions);
  CHECK(back[0].n == 4);
  CHECK(back[1].n == 0);
}

TEST_CASE("RunConfig validation and exit codes") {
  cli::RunConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.eps_low == 1e-4);
  CHECK(c.eps_mix == 1e-3);
  CHECK(c.optim.reg_coeff == 5);
  c.domain = "witness";
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.size = 7;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.min_moves = 5;
  c.max_moves = 2;
  CHECK_THROWS_AS(c.validate(), ConfigError);

  CHECK(run_cli({"eval", "--domain", "witness", "--test", "x"}).code == 2);
  CHECK(run_cli({"frobnicate"}).code != 0);
  CHECK(run_cli({"eval", "--no_such_flag", "1"}).code != 0);
  CHECK(run_cli({"eval", "--test", "/nonexistent/file.txt"}).code == 3);
  CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("gen, train, eval, solve end to end on the 8-puzzle") {
  TempDir tmp;
  auto g = run_cli({"gen", "--domain", "stp", "--size", "3", "--count", "40", "--seed", "3", "--out",
                    tmp / "train.txt"});
  REQUIRE(g.code == 0);
  REQUIRE(run_cli({"gen", "--count", "10", "--seed", "4", "--out", tmp / "test.txt"}).code == 0);

  auto t = run_cli({"train", "--train", tmp / "train.txt", "--out", tmp / "run", "--initial_budget",
                    "7000", "--workers", "2"});
  INFO(t.out << t.err);
  REQUIRE(t.code == 0);
  CHECK(t.out.find("all problems solved") != std::string::npos);
  for (const char* f : {"params.txt", "history.log", "solutions.txt"})
    CHECK(fs::exists(tmp.path / "run" / f));

  // The logged budgets replay from the logged stats.
  std::ifstream hist(tmp / "run/history.log");
  auto h = read_history(hist);
  REQUIRE(!h.empty());
  CHECK(h[0].budget == 7000);
  for (std::size_t i = 1; i < h.size(); ++i)
    CHECK(next_budget(std::span<const IterationStats>(h.data(), i), 7000, 0.25) == h[i].budget);
  CHECK(load_trajectories(tmp / "run/solutions.txt").size() == 40);

  auto e = run_cli({"eval", "--test", tmp / "test.txt", "--params", tmp / "run/params.txt",
                    "--budget", "1000000", "--metrics", tmp / "m.tsv", "--name", "held"});
  INFO(e.out << e.err);
  REQUIRE(e.code == 0);
  std::ifstream mf(tmp / "m.tsv");
  auto rows = cli::read_metrics(mf);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].dataset == "held");
  CHECK(rows[0].n == 10);
  CHECK(rows[0].solved_pct == 100);

  auto s = run_cli({"solve", "--test", tmp / "test.txt", "--params", tmp / "run/params.txt"});
  CHECK(s.code == 0);
  CHECK(s.out.find("index\toutcome") == 0);

  // Config file equivalent of flags.
  {
    std::ofstream cf(tmp / "eval.cfg");
    cf << "test=" << (tmp / "test.txt") << "\nparams=" << (tmp / "run/params.txt")
       << "\nbudget=1000000\nname=fromcfg\n";
  }
  auto c = run_cli({"eval", "--config", tmp / "eval.cfg"});
  CHECK(c.code == 0);
  CHECK(c.out.find("fromcfg: solved 10/10") != std::string::npos);

  // Empty test set.
  { std::ofstream ef(tmp / "empty.txt"); ef << "ltscm-stp v1 size=3\n"; }
  CHECK(run_cli({"eval", "--test", tmp / "empty.txt"}).code != 0);
  // Snapshot from another domain.
  REQUIRE(run_cli({"gen", "--domain", "cube", "--count", "3", "--out", tmp / "cube.txt"}).code == 0);
  auto mis = run_cli({"eval", "--domain", "cube", "--test", tmp / "cube.txt", "--params",
                      tmp / "run/params.txt"});
  CHECK(mis.code != 0);
  CHECK(!mis.err.empty());
  // Board size differing from --size.
  CHECK(run_cli({"eval", "--size", "4", "--test", tmp / "test.txt"}).code == 2);
}
