#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "collatz2/scan.hpp"

using namespace collatz2;

namespace {
const RuleSpec CL = parse_rule("CL");
const RuleSpec E6 = parse_rule("E6");

std::vector<long long> prefix(const std::vector<Int>& v, size_t n) {
  std::vector<long long> out;
  for (size_t i = 0; i < n && i < v.size(); ++i) out.push_back(v[i].get_si());
  return out;
}
}  // namespace

TEST_CASE("rule ids and the AGKL embedding") {
  CHECK(CL.id() == "++++-+-+");
  CHECK(RuleSpec::from_id("++++-+-+") == CL);
  CHECK(parse_rule("1,1,-1,1") == CL);
  CHECK(E6.id() == "-+-+-+-+");
  std::array<int, 4> t{};
  CHECK(CL.is_agkl(&t));
  CHECK(t == std::array<int, 4>{1, 1, -1, 1});
  CHECK(RuleSpec::from_index(CL.index()) == CL);
  int agkl_count = 0;
  for (int i = 0; i < 256; ++i)
    if (RuleSpec::from_index(i).is_agkl()) ++agkl_count;
  CHECK(agkl_count == 16);
}

TEST_CASE("step matches the published values") {
  CHECK(step(CL, 11, 16) == 5);
  CHECK(step(CL, 1, 1) == 1);
  // (-1,1,1,1): the published 10-cycle fixes the sign-position convention.
  RuleSpec open1 = parse_rule("-1,1,1,1");
  CHECK(step(open1, 2, 5) == 7);
  CHECK(step(open1, 5, 7) == 1);
  RuleSpec open2 = parse_rule("-1,1,-1,-1");
  CHECK(step(open2, 3, -1) == -2);
  CHECK(step_i64(CL, 11, 16) == 5);
}

TEST_CASE("published cycles verify around the loop") {
  RuleSpec open1 = parse_rule("-1,1,1,1");
  CHECK(verify_cycle(open1, {0, 1, 1}));
  CHECK(verify_cycle(open1, {0, -1, -1}));
  CHECK(verify_cycle(open1, {2, 5, 7, 1, -3, -2, -5, -7, -1, 3}));
  RuleSpec open2 = parse_rule("-1,1,-1,-1");
  CHECK(verify_cycle(open2, {-1, -2, 3}));
  CHECK(verify_cycle(open2, {1, 2, -3}));
  CHECK(verify_cycle(open2, {-1, 0, 1, -1}));
  CHECK(verify_cycle(open2, {79, -31, -55, -12, 67,  -55, -61, -3,  29,  16, -45,
                             29, 37,  4,   -41, 37,  39,  1,   -19, -10, 29, -19,
                             -24, 43, -19, -31, -6,  37,  -31, -34, 65,  -31, -48}));
  CHECK(verify_cycle(CL, {-2, 1, 3, 2, -1, -3}));
  CHECK_FALSE(verify_cycle(CL, {1, 2}));
}

TEST_CASE("first CL trajectory digit-for-digit") {
  std::vector<long long> want = {11, 16, 5,  -11, -3, -7, -5, -6, -1, 5,  2,  -3, -5, -4, 1,
                                 5,  3,  4,  1,   -3, -1, -2, -1, 1,  0,  -1, -1, -1, -1};
  auto got = prefix(iterate_values(CL, 11, 16, 40), want.size());
  CHECK(got == want);
}

TEST_CASE("third CL trajectory and its eventual six-cycle") {
  std::vector<long long> want = {11, 5, 8, 3, -5, -1, -3, -2, 1, 3, 2, -1, -3, -2, 1, 3, 2, -1, -3};
  auto got = prefix(iterate_values(CL, 11, 5, 30), want.size());
  CHECK(got == want);
  SimResult sim = simulate(CL, 11, 5);
  REQUIRE(sim.outcome == Outcome::CycleReached);
  CHECK(sim.cycle == canonical_cycle({-2, 1, 3, 2, -1, -3}));
}

TEST_CASE("simulate from (11,16) reaches the constant -1") {
  SimResult sim = simulate(CL, 11, 16);
  REQUIRE(sim.outcome == Outcome::CycleReached);
  CHECK(sim.cycle.values == std::vector<Int>{-1});
  CHECK(sim.trajectory[0] == 11);
  CHECK(sim.trajectory[1] == 16);
}

TEST_CASE("normalize divides by the largest odd common divisor only") {
  auto p = normalize(33, 15);
  CHECK(p == std::pair<Int, Int>(11, 5));
  CHECK(normalize(4, 6) == std::pair<Int, Int>(4, 6));
  CHECK(normalize(-9, 0) == std::pair<Int, Int>(-1, 0));
  CHECK_THROWS(normalize(0, 0));
}

TEST_CASE("canonical_cycle picks the least rotation and reduces odd factors") {
  CHECK(canonical_cycle({1, 3, 2, -1, -3, -2}).values == std::vector<Int>{-3, -2, 1, 3, 2, -1});
  CHECK(canonical_cycle({-1}).values == std::vector<Int>{-1});
  // Scaling a cycle by an odd factor and re-canonicalizing recovers it.
  Cycle six = canonical_cycle({-2, 1, 3, 2, -1, -3});
  std::vector<Int> scaled;
  for (const auto& v : six.values) scaled.push_back(v * 3);
  CHECK(verify_cycle(CL, scaled));  // odd homogeneity
  CHECK(canonical_cycle(scaled) == six);
}

TEST_CASE("successor graph is universal, by exhaustive parity arithmetic") {
  CHECK(successors(State::OE) == std::vector<State>{State::EO});
  CHECK(successors(State::EO) == std::vector<State>{State::OO});
  CHECK(successors(State::OO) == std::vector<State>{State::OO, State::OE});
  CHECK_THROWS_AS(successors(State::EE), std::invalid_argument);
  // Brute force over sign octuples and residues mod 4.
  for (int idx = 0; idx < 256; ++idx) {
    RuleSpec r = RuleSpec::from_index(idx);
    std::set<State> oo_next;
    for (int u = -4; u <= 4; ++u)
      for (int v = -4; v <= 4; ++v) {
        if ((u & 1) && (v & 1)) oo_next.insert(state_of((v & 1) != 0, int_odd(step(r, u, v))));
        if ((u & 1) && !(v & 1)) CHECK(int_odd(step(r, u, v)));
        if (!(u & 1) && (v & 1)) CHECK(int_odd(step(r, u, v)));
      }
    CHECK(oo_next == std::set<State>{State::OO, State::OE});
  }
}

TEST_CASE("odd-scaling homogeneity of trajectories") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> seed(-40, 40);
  for (int trial = 0; trial < 40; ++trial) {
    RuleSpec r = RuleSpec::from_index(std::uniform_int_distribution<int>(0, 255)(rng));
    long long a = seed(rng), b = seed(rng);
    if (a == 0 && b == 0) continue;
    for (long long t : {3LL, -5LL}) {
      auto base = iterate_values(r, a, b, 30);
      auto scaled = iterate_values(r, t * a, t * b, 30);
      for (size_t i = 0; i < base.size(); ++i) CHECK(scaled[i] == to_int(t) * base[i]);
    }
  }
}

TEST_CASE("normalized random simulations never occupy EE") {
  std::mt19937 rng(42);
  std::uniform_int_distribution<int> seed(-100, 100), ridx(0, 255);
  for (int trial = 0; trial < 50; ++trial) {
    RuleSpec r = RuleSpec::from_index(ridx(rng));
    long long a = seed(rng), b = seed(rng);
    if (std::gcd(a < 0 ? -a : a, b < 0 ? -b : b) != 1) continue;
    auto vals = iterate_values(r, a, b, 2000);
    for (size_t i = 0; i + 1 < vals.size(); ++i)
      CHECK(state_of(int_odd(vals[i]), int_odd(vals[i + 1])) != State::EE);
  }
}

TEST_CASE("scan finds the 33-cycle for the second open rule") {
  RuleSpec open2 = parse_rule("-1,1,-1,-1");
  ScanParams p;
  p.grid = 100;
  auto scan = run_scan(open2, p);
  bool found = false;
  for (const auto& c : scan.cycles)
    if (c.values.size() == 33)
      for (const auto& v : c.values)
        if (v == 79) found = true;
  CHECK(found);
}
