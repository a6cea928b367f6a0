#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "doctest.h"
#include "ltscm/param_io.hpp"
#include "ltscm/trajectory.hpp"

using namespace ltscm;

TEST_CASE("snapshot: exact round trip") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ParamStore store(5, 1e-4);
  for (int c = 0; c < 50; ++c) {
    std::vector<double> w(5);
    for (auto& x : w) x = store.lower_bound() * u(rng);
    w[c % 5] = store.lower_bound();
    w[(c + 1) % 5] = 0.0;
    store.set_block(ContextKey(c % 7, rng() % 100000), w);
  }
  std::stringstream ss;
  write_snapshot(ss, store);
  const std::string text = ss.str();
  CHECK(text.rfind("ltscm-params v1 A=5 eps_low=", 0) == 0);
  ParamStore back = read_snapshot(ss, 0.5);
  CHECK(back.eps_mix() == 0.5);
  CHECK(back.eps_low() == store.eps_low());
  REQUIRE(back.size() == store.size());
  for (std::size_t i = 0; i < store.size(); ++i) {
    auto a = store.block_at(i);
    auto b = back.find(store.key_at(i));
    REQUIRE(b.size() == a.size());
    for (std::size_t j = 0; j < a.size(); ++j) CHECK(a[j] == b[j]);
  }
  std::stringstream again;
  write_snapshot(again, back);
  CHECK(again.str() == text);
}

TEST_CASE("snapshot: loader rejects malformed input") {
  auto load = [](const std::string& s) {
    std::istringstream in(s);
    return read_snapshot(in);
  };
  CHECK_NOTHROW(load("ltscm-params v1 A=2 eps_low=0.0001\n0 1 0 -1\n"));
  CHECK_THROWS_AS(load(""), ParseError);
  CHECK_THROWS_AS(load("ltscm-params v2 A=2 eps_low=0.0001\n"), ParseError);
  CHECK_THROWS_AS(load("ltscm-params v1 A=2 eps_low=0.0001\n0 1 0.5 -1\n"), ParseError);
  CHECK_THROWS_AS(load("ltscm-params v1 A=2 eps_low=0.0001\n0 1 -20 -1\n"), ParseError);
  CHECK_THROWS_AS(load("ltscm-params v1 A=2 eps_low=0.0001\n0 1 -1\n"), ParseError);
  CHECK_THROWS_AS(load("ltscm-params v1 A=2 eps_low=0.0001\n0 1 -1 -1 -1\n"), ParseError);
  CHECK_THROWS_AS(load("ltscm-params v1 A=2 eps_low=0.0001\n0 1 -1 x\n"), ParseError);
  CHECK_THROWS_AS(load("ltscm-params v1 A=2 eps_low=0.0001\n0 1 -1 -1\n0 1 -1 -1\n"), ParseError);
}

TEST_CASE("format_double/parse_double") {
  for (double v : {0.0, -0.0, 1.0 / 3, -9.210340371976182, 1e-300, 123456789.125})
    CHECK(parse_double(format_double(v)) == v);
  CHECK_THROWS_AS(parse_double("1.0x"), ParseError);
  CHECK_THROWS_AS(parse_double(""), ParseError);
}

TEST_CASE("trajectory: construction and text round trip") {
  Trajectory t(42);
  const ContextKey a[] = {ContextKey(0, 7), ContextKey(1, 3)};
  t.add_step(a, ActionSet(0b1011), 3);
  t.add_step({}, ActionSet(0b1), 0);
  CHECK(t.depth() == 2);
  CHECK(t.step(0).active.size() == 2);
  CHECK(t.step(0).chosen == 3);
  CHECK(t.step(1).active.empty());
  CHECK_THROWS_AS(t.add_step(a, ActionSet(0b1), 2), ContractViolation);
  Trajectory empty(7);
  std::vector<Trajectory> v{t, empty};
  std::stringstream ss;
  write_trajectories(ss, v);
  auto back = read_trajectories(ss);
  REQUIRE(back.size() == 2);
  CHECK(back[0] == t);
  CHECK(back[1] == empty);
  std::istringstream bad("ltscm-trajectories v1 1\ntraj 1 1\n3 2 0:1\n");
  CHECK_THROWS_AS(read_trajectories(bad), ParseError);
}
