#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "collatz2/pipeline.hpp"

using namespace collatz2;

TEST_CASE("classify is deterministic: byte-identical certificates across runs") {
  auto a = classify(parse_rule("E6"));
  auto b = classify(parse_rule("E6"));
  CHECK(serialize(a) == serialize(b));
}

TEST_CASE("E6 certificate carries the three families and the pinned determinant") {
  auto cert = classify(parse_rule("E6"));
  CHECK(cert.status.kind == StatusInfo::Full);
  std::set<std::string> fams;
  for (const auto& f : cert.families) fams.insert(f.str());
  CHECK(fams == std::set<std::string>{"(011)^{m1}", "(011)^{m1}1", "(011)^{m1}01"});
  bool spine_checked = false;
  for (const auto& d : cert.det_records) {
    if (d.family.str() != "(011)^{m1}" || d.is_phase) continue;
    REQUIRE(d.det_valid);
    for (long m = 1; m <= 64; ++m)
      CHECK(d.det.eval({m}) == Rat(1) - rat_pow(Rat(-1), m) + rat_pow(rat(1, 2), m));
    CHECK(d.zeros.empty());
    CHECK(d.tail == Tail::RigorousNonzero);
    spine_checked = true;
  }
  CHECK(spine_checked);
  // No extracted cycle witness instantiates that family.
  Family spine;
  spine.eps = -1;
  spine.blocks = {{word_from01("011"), 1}};
  for (const auto& w : cert.witnesses) CHECK_FALSE(parse_instance(spine, w.word).has_value());
  // The one cycle comes from the small seeds (it passes through zero).
  REQUIRE(cert.cycles.size() == 1);
  CHECK(cert.cycles[0] == canonical_cycle({0, 1, 1, 0, -1, -1}));
}

TEST_CASE("open rules never reach FULL and keep their empirical cycles") {
  for (const char* name : {"-1,1,1,1", "-1,1,-1,-1"}) {
    auto cert = classify(parse_rule(name));
    CHECK(cert.status.kind == StatusInfo::Failed);
    CHECK(!cert.empirical_cycles.empty());
    auto rep = verify(parse_certificate(serialize(cert)));
    CHECK(rep.ok);
  }
}

TEST_CASE("timeout budget converts runaway rules into FAILED(timeout)") {
  auto cert = classify(parse_rule("CL"), {}, 0.0);
  CHECK(cert.status.kind == StatusInfo::Failed);
  CHECK(cert.status.stage == "timeout");
}

TEST_CASE("manifest entries and report") {
  Manifest m;
  for (int i = 0; i < 256; ++i) {
    ManifestEntry e;
    e.rule_id = RuleSpec::from_index(i).id();
    e.status = i < 112 ? "FULL" : i < 144 ? "BOUNDED_ONLY" : "FAILED";
    e.stage = e.status == "FAILED" ? "bound-conjecture" : "";
    m.entries.push_back(e);
  }
  std::string rep = report(m);
  CHECK(rep.find("solved (FULL or BOUNDED_ONLY): 144") != std::string::npos);
  Manifest empty;
  CHECK(report(empty).find("rules: 0") != std::string::npos);
  // round trip
  Manifest back = manifest_from_json(manifest_json(m));
  CHECK(manifest_json(back) == manifest_json(m));
}

TEST_CASE("certificate files land in the output directory") {
  std::string dir = "/tmp/collatz2_test_out";
  std::filesystem::remove_all(dir);
  auto cert = classify(parse_rule("CL"));
  std::filesystem::create_directories(dir);
  write_file(dir + "/" + cert.rule_id + ".cert.json", serialize(cert));
  auto reread = parse_certificate([&] {
    std::ifstream in(dir + "/" + cert.rule_id + ".cert.json");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }());
  CHECK(serialize(reread) == serialize(cert));
}
