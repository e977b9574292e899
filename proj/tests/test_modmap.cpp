#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "collatz2/modmap.hpp"

using namespace collatz2;

TEST_CASE("validation enforces the closure conditions") {
  ModMapSpec good = classical_3x1();
  CHECK(good.validated);
  CHECK(good.A[0] == 1);
  CHECK(good.B[1] == 2);

  ModMapSpec bad;
  bad.m = 2;
  bad.rules = {{rat(1, 2), Rat(0)}, {rat(1, 2), Rat(0)}};  // 1*(1/2)+0 not integral
  CHECK_FALSE(mm_validate(bad));

  ModMapSpec ident;
  ident.m = 1;
  ident.rules = {{Rat(1), Rat(0)}};
  CHECK(mm_validate(ident));
}

TEST_CASE("step applies the residue rule exactly") {
  ModMapSpec spec = classical_3x1();
  CHECK(mm_step(spec, 6) == 3);
  CHECK(mm_step(spec, 7) == 11);
  CHECK(mm_step(spec, -5) == -7);
  long long out;
  REQUIRE(mm_step_i64(spec, 12345, 1000000000000000000LL, out));
  CHECK(out == mm_step(spec, 12345).get_si());
}

TEST_CASE("spec text format round trip") {
  std::istringstream in("# classical map\n2\n1/2 0\n3/2 1/2\n");
  ModMapSpec spec = mm_parse(in);
  REQUIRE(mm_validate(spec));
  CHECK(spec.m == 2);
  CHECK(spec.rules[1].first == rat(3, 2));
  std::istringstream bad("2\n1/2 0\n");
  CHECK_THROWS(mm_parse(bad));
}

TEST_CASE("classical map over small positive seeds reaches only (1,2)") {
  ModMapSpec spec = classical_3x1();
  auto out = conjecture_cycles(spec, 1, 50000);
  CHECK(out.diverged == 0);
  CHECK(out.undecided == 0);
  REQUIRE(out.cycles.size() == 1);
  CHECK(out.cycles[0] == Cycle{{Int(1), Int(2)}});
}

TEST_CASE("negative seeds expose the negative cycles") {
  ModMapSpec spec = classical_3x1();
  auto out = conjecture_cycles_range(spec, 200);
  std::set<Cycle> cs(out.cycles.begin(), out.cycles.end());
  CHECK(cs.count(Cycle{{Int(-1)}}));
  CHECK(cs.count(mm_canonical({Int(-5), Int(-7), Int(-10)})));
  CHECK(cs.count(Cycle{{Int(0)}}));
}

TEST_CASE("(5n+1)/2 variant contains the published loop through 1") {
  ModMapSpec spec;
  spec.m = 2;
  spec.rules = {{rat(1, 2), Rat(0)}, {rat(5, 2), rat(1, 2)}};
  REQUIRE(mm_validate(spec));
  auto out = conjecture_cycles(spec, 1, 100);
  bool found = false;
  for (const auto& c : out.cycles)
    if (c == mm_canonical({Int(1), Int(3), Int(8), Int(4), Int(2)})) found = true;
  CHECK(found);
}

TEST_CASE("identity map fixes every seed") {
  ModMapSpec spec;
  spec.m = 1;
  spec.rules = {{Rat(1), Rat(0)}};
  REQUIRE(mm_validate(spec));
  auto out = conjecture_cycles(spec, -5, 5);
  CHECK(out.cycles.size() == 11);
}

TEST_CASE("validated random specs always step to integers; cycles re-verify") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<long> num(-3, 3), den(1, 3), modulus(1, 5);
  for (int trial = 0; trial < 200; ++trial) {
    ModMapSpec spec;
    spec.m = modulus(rng);
    for (long i = 0; i < spec.m; ++i) {
      Rat a = rat(num(rng), den(rng));
      // force closure: pick b = j - i*a for a random integer j
      Rat b = Rat(num(rng)) - Rat(i) * a;
      // also force m*a integral by scaling a
      a = Rat(num(rng)) / Rat(static_cast<long>(spec.m));
      b = Rat(num(rng)) - Rat(i) * a;
      spec.rules.push_back({a, b});
    }
    if (!mm_validate(spec)) continue;
    std::uniform_int_distribution<long long> seed(-50, 50);
    for (int s = 0; s < 10; ++s) {
      Int n = to_int(seed(rng));
      for (int k = 0; k < 20; ++k) n = mm_step(spec, n);  // throws if non-integer
    }
    auto out = conjecture_cycles(spec, -20, 20, 2000, 1000000000LL);
    for (const auto& c : out.cycles) {
      size_t n = c.values.size();
      for (size_t i = 0; i < n; ++i) CHECK(mm_step(spec, c.values[i]) == c.values[(i + 1) % n]);
    }
  }
}
