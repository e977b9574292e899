#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "collatz2/detcond.hpp"

using namespace collatz2;

namespace {
const RuleSpec CL = parse_rule("CL");
const RuleSpec E6 = parse_rule("E6");

Family fam(const std::string& prefix01, const std::vector<std::pair<std::string, int>>& blocks,
           const std::string& suffix01, int eps = -1) {
  Family f;
  f.eps = eps;
  f.prefix = word_from01(prefix01);
  for (const auto& [b, lo] : blocks) f.blocks.push_back({word_from01(b), lo});
  f.suffix = word_from01(suffix01);
  return f;
}
}  // namespace

TEST_CASE("empty word gives the identity product") {
  CHECK(word_product(CL, {}) == Mat2::identity());
  CHECK(word_product(CL, {1}) == Mat2::identity());
}

TEST_CASE("E6 block product applied to (a,-b): second component is a(-1/2)^m") {
  Family f = fam("", {{"011", 1}}, "");
  for (long m = 1; m <= 8; ++m) {
    Mat2 M = transfer_product(E6, f, {m});
    auto img = M.apply({Rat(1), Rat(-1)});  // (a, -b) at a = b = 1
    CHECK(img[1] == rat_pow(rat(-1, 2), m));
  }
}

TEST_CASE("E6 determinant condition evaluates to 1 - (-1)^m + (1/2)^m") {
  Family f = fam("", {{"011", 1}}, "");
  DetAnalysis d = det_condition(E6, f);
  REQUIRE(d.valid);
  for (long m = 1; m <= 64; ++m) {
    Rat want = Rat(1) - rat_pow(Rat(-1), m) + rat_pow(rat(1, 2), m);
    CHECK(d.det.eval({m}) == want);
  }
  CHECK(d.det.eval({2}) == rat(1, 4));
  CHECK(d.det.eval({3}) == Rat(2) + rat(1, 8));
}

TEST_CASE("E6 (011)^m has no zeros and a rigorous tail") {
  Family f = fam("", {{"011", 1}}, "");
  DetAnalysis d = det_condition(E6, f);
  ZeroScan z = solve_zeros(E6, f, d, 64);
  CHECK(z.zeros.empty());
  CHECK(z.tail == Tail::RigorousNonzero);
}

TEST_CASE("definitional oracle: ExpPoly equals det(product - I) exhaustively") {
  std::vector<Family> fams = {
      fam("", {{"011", 1}}, ""),
      fam("", {{"011", 1}}, "1"),
      fam("", {{"011", 1}}, "01"),
      fam("", {{"011", 1}, {"1", 1}}, ""),
      fam("", {{"011", 1}, {"1", 1}}, "0"),
      fam("1011", {{"1", 1}}, ""),
  };
  int valid_count = 0;
  for (const RuleSpec& rule : {CL, E6})
    for (const auto& f : fams) {
      DetAnalysis d = det_condition(rule, f);
      if (!d.valid) continue;  // irrational loop spectrum: evaluable-only
      ++valid_count;
      std::vector<long> m(f.arity());
      std::function<void(int)> go = [&](int i) {
        if (i == f.arity()) {
          Mat2 direct = transfer_product(rule, f, m);
          CHECK(d.det.eval(m) == (direct - Mat2::identity()).det());
          CHECK(d.M.eval(m) == direct);
          return;
        }
        for (m[i] = 1; m[i] <= 8; ++m[i]) go(i + 1);
      };
      go(0);
    }
  // All CL templates and the E6 011-spine ones are rational-spectral.
  CHECK(valid_count >= 9);
}

TEST_CASE("irrational loop spectrum falls back to evaluable-only") {
  // E6's odd-run loop (OO matrix) has complex eigenvalues.
  Family f = fam("1011", {{"1", 1}}, "");
  DetAnalysis d = det_condition(E6, f);
  CHECK_FALSE(d.valid);
  ZeroScan z = solve_zeros(E6, f, d, 12);
  CHECK(z.tail == Tail::BoundedOnly);  // honest downgrade
}

TEST_CASE("transfer products match the step-by-step symbolic iteration") {
  Family f = fam("", {{"011", 1}}, "");
  for (long m = 1; m <= 6; ++m) {
    Word w = f.instantiate({m});
    SymTraj t = sym_traj_of_word(CL, w, -1);
    // After all edges, the product maps (a, eps b) to (f[L-1], next), where
    // next extends the trajectory one step past the listed word.
    Mat2 M = word_product(CL, w);
    SymTraj ext = sym_extend(t, CL, 1);  // appended parity irrelevant to forms
    LinForm flast = ext.forms[w.size() - 1], fnext = ext.forms[w.size()];
    std::array<Rat, 2> img = M.apply({Rat(1), Rat(-1)});  // a = b = 1
    std::map<std::string, Rat> pt = {{"a", Rat(1)}, {"b", Rat(1)}};
    CHECK(img[0] == flast.eval(pt));
    CHECK(img[1] == fnext.eval(pt));
  }
}

TEST_CASE("CL six-cycle family: zeros on the even line with constant null (2,-1)") {
  // (011)^{m1}(1)^{m2}0 at m2 = 0 degenerates to the cyclic spine product;
  // analyze the deleted-m2 variant (011)^{m1}0 directly.
  Family f = fam("", {{"011", 1}}, "0");
  DetAnalysis d = det_condition(CL, f);
  REQUIRE(d.valid);
  ZeroScan z = solve_zeros(CL, f, d, 16);
  std::vector<std::vector<long>> want;
  for (long m = 2; m <= 16; m += 2) want.push_back({m});
  CHECK(z.zeros == want);
  CHECK(z.tail == Tail::RigorousNonzero);
  bool fixed_null = false;
  for (const auto& c : z.classes)
    if (c.kind == "identically-zero-fixed-null") {
      REQUIRE(c.null_dir);
      Rat r = (*c.null_dir)[0] / (*c.null_dir)[1];
      CHECK(r == Rat(-2));
      fixed_null = true;
    }
  CHECK(fixed_null);
}

TEST_CASE("E6 spine phase (011)^m 0: zeros are axis-only") {
  Family f = fam("", {{"011", 1}}, "0");
  DetAnalysis d = det_condition(E6, f);
  REQUIRE(d.valid);
  ZeroScan z = solve_zeros(E6, f, d, 16);
  CHECK(!z.zeros.empty());
  CHECK(z.tail == Tail::RigorousNonzero);
  for (const auto& c : z.classes)
    if (c.kind.substr(0, 16) == "identically-zero") CHECK(c.kind == "identically-zero-axis-null");
}

TEST_CASE("tail verdicts agree at twice the bound") {
  for (const RuleSpec& rule : {CL, E6}) {
    Family f = fam("", {{"011", 1}}, "1");
    DetAnalysis d = det_condition(rule, f);
    ZeroScan z1 = solve_zeros(rule, f, d, 32), z2 = solve_zeros(rule, f, d, 64);
    CHECK((z1.tail == Tail::RigorousNonzero) == (z2.tail == Tail::RigorousNonzero));
    if (z1.tail == Tail::RigorousNonzero) {
      // no zeros appear past the smaller bound
      for (const auto& zz : z2.zeros) CHECK(zz[0] <= 32);
    }
  }
}

TEST_CASE("phase variants enumerate the pumped cut positions") {
  Family f = fam("", {{"011", 1}, {"1", 0}}, "01");
  auto vars = phase_variants(f);
  std::set<std::string> got;
  for (const auto& v : vars) got.insert(v.str());
  CHECK(got.count("(011)^{m1}"));
  CHECK(got.count("(011)^{m1}0"));
  CHECK(got.count("(011)^{m1}01"));
  CHECK(got.count("(011)^{m1}(1)^{m2}"));
  CHECK(got.count("(011)^{m1}(1)^{m2}0"));
  CHECK(got.count("(011)^{m1}01"));
}
