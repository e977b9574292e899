#pragma once

#include <json.hpp>

#include "collatz2/completeness.hpp"
#include "collatz2/scheme.hpp"

namespace collatz2 {

using Json = nlohmann::json;  // std::map-backed: keys serialize sorted

// Per-family determinant record, including the pumped phase-prefix analyses
// that cover instance prefixes beyond the enumeration horizon.
struct DetRecord {
  Family family;
  bool det_valid = false;
  ExpPoly det;
  std::vector<std::vector<long>> zeros;
  Tail tail = Tail::BoundedOnly;
  std::vector<ZeroClassInfo> classes;
  bool is_phase = false;  // derived phase variant, not a mined family
};

struct CycleWitness {
  Word word;
  std::vector<long> exponents;
  Int seed_a, seed_b;
  Cycle cycle;
};

struct StatusInfo {
  enum Kind { Full, BoundedOnly, Failed } kind = Failed;
  long bound = 0;      // BoundedOnly: the exhaustive bound actually checked
  std::string stage;   // Failed: pipeline stage
};

struct Params {
  int grid = 100;
  int max_len = 24;
  long m_max = 64;
  int max_forms = 12;
  Rat cap = Rat(4);
  long long sim_steps = 100000;
  long long sim_mag = 1000000000000LL;
};

struct TheoremCertificate {
  std::string rule_id;
  StatusInfo status;
  Params params;
  bool has_scheme = false;
  BoundCoeffs coeffs{Rat(1), Rat(1)};
  Scheme scheme;
  std::vector<DerivationStep> transitions;
  bool base_ok = false;
  std::map<int, long> enum_counts;
  bool enum_truncated = false;
  std::vector<Family> families;
  std::vector<DetRecord> det_records;
  std::vector<ExtensionReport> completeness;
  bool cover_ok = false;
  long cover_dead_ends = 0;
  std::vector<Cycle> small_seed_cycles;
  bool small_seed_undecided = false;
  std::vector<Cycle> cycles;  // the certified list, canonical and sorted
  std::vector<CycleWitness> witnesses;
  // empirical oracle (informational; re-derived by tests, not by verify)
  std::vector<Cycle> empirical_cycles;
  long long empirical_diverged = 0, empirical_undecided = 0;
  bool has_witness_seed = false;
  long long witness_seed_a = 0, witness_seed_b = 0, witness_max = 0;
  std::string failure_note;
};

// --------------------------------------------------------------------------
// JSON serialization: canonical (sorted keys, fixed schema, numbers as exact
// decimal strings), documented in docs/certificate-format.md.

namespace cert_detail {

inline Json form_json(const LinForm& f) {
  Json arr = Json::array();
  for (const auto& [s, k] : f.coeffs()) arr.push_back(Json::array({s, rat_str(k)}));
  return arr;
}

inline LinForm form_from(const Json& j) {
  LinForm f;
  for (const auto& e : j) f.set(e.at(0).get<std::string>(), rat_parse(e.at(1).get<std::string>()));
  return f;
}

inline Json cycle_json(const Cycle& c) {
  Json arr = Json::array();
  for (const auto& v : c.values) arr.push_back(v.get_str());
  return arr;
}

inline Cycle cycle_from(const Json& j) {
  Cycle c;
  for (const auto& e : j) c.values.push_back(Int(e.get<std::string>()));
  return c;
}

inline Json family_json(const Family& f) {
  Json b = Json::array();
  for (const auto& [w, lo] : f.blocks) b.push_back(Json{{"low", lo}, {"word", word_str01(w)}});
  return Json{{"blocks", b}, {"display", f.str()}, {"eps", f.eps},
              {"prefix", word_str01(f.prefix)}, {"suffix", word_str01(f.suffix)}};
}

inline Family family_from(const Json& j) {
  Family f;
  f.eps = j.at("eps").get<int>();
  f.prefix = word_from01(j.at("prefix").get<std::string>());
  for (const auto& b : j.at("blocks"))
    f.blocks.push_back({word_from01(b.at("word").get<std::string>()), b.at("low").get<int>()});
  f.suffix = word_from01(j.at("suffix").get<std::string>());
  return f;
}

inline Json exppoly_json(const ExpPoly& p) {
  Json terms = Json::array();
  for (const auto& t : p.terms) {
    Json bases = Json::array();
    for (const auto& b : t.base) bases.push_back(rat_str(b));
    terms.push_back(Json{{"bases", bases}, {"gamma", rat_str(t.gamma)}});
  }
  return Json{{"arity", p.arity}, {"terms", terms}};
}

inline ExpPoly exppoly_from(const Json& j) {
  ExpPoly p;
  p.arity = j.at("arity").get<int>();
  for (const auto& t : j.at("terms")) {
    ExpTerm e;
    e.gamma = rat_parse(t.at("gamma").get<std::string>());
    for (const auto& b : t.at("bases")) e.base.push_back(rat_parse(b.get<std::string>()));
    p.terms.push_back(e);
  }
  p.canonicalize();
  return p;
}

inline const char* tail_str(Tail t) { return t == Tail::RigorousNonzero ? "RIGOROUS_NONZERO" : "BOUNDED_ONLY"; }

inline const char* verdict_str(ExtVerdict v) {
  switch (v) {
    case ExtVerdict::SymbolicRuledOut: return "SYMBOLIC_RULED_OUT";
    case ExtVerdict::Bounded: return "BOUNDED";
    case ExtVerdict::Failed: return "FAILED";
    case ExtVerdict::Skipped: return "SKIPPED";
  }
  return "?";
}

}  // namespace cert_detail

inline Json to_json(const TheoremCertificate& c) {
  using namespace cert_detail;
  Json j;
  j["format"] = "collatz2-certificate";
  j["version"] = 1;
  std::array<int, 4> agkl{};
  RuleSpec rule = RuleSpec::from_id(c.rule_id);
  j["rule"] = Json{{"agkl", rule.is_agkl(&agkl) ? Json(std::to_string(agkl[0]) + "," + std::to_string(agkl[1]) + "," +
                                                       std::to_string(agkl[2]) + "," + std::to_string(agkl[3]))
                                                : Json(nullptr)},
                   {"convention",
                    "signs a1..a8 in branch order EE,OO,OE,EO applied to (x(n-1),x(n)); halved on matching "
                    "parities; AGKL (alpha,beta,gamma,delta) embeds with alpha,beta on the halved branches, "
                    "fixed by the published cycle data"},
                   {"id", c.rule_id}};
  j["status"] = Json{{"bound", c.status.bound},
                     {"kind", c.status.kind == StatusInfo::Full         ? "FULL"
                              : c.status.kind == StatusInfo::BoundedOnly ? "BOUNDED_ONLY"
                                                                         : "FAILED"},
                     {"stage", c.status.stage}};
  j["params"] = Json{{"cap", rat_str(c.params.cap)},     {"grid", c.params.grid},
                     {"m_max", c.params.m_max},          {"max_forms", c.params.max_forms},
                     {"max_len", c.params.max_len},      {"sim_mag", c.params.sim_mag},
                     {"sim_steps", c.params.sim_steps}};
  j["bound"] = Json{{"c1", rat_str(c.coeffs.c1)},
                    {"c2", rat_str(c.coeffs.c2)},
                    {"minimization", "c1+c2 then c1"},
                    {"proved", c.has_scheme}};
  if (c.has_scheme) {
    Json states = Json::array();
    for (State s : scheme_states()) {
      Json forms = Json::array();
      for (const auto& f : c.scheme.at(s)) forms.push_back(form_json(f));
      states.push_back(Json{{"forms", forms}, {"state", state_name(s)}});
    }
    Json trans = Json::array();
    for (const auto& t : c.transitions) {
      Json combo = Json::array();
      for (const auto& [f, k] : t.combo) combo.push_back(Json{{"coeff", rat_str(k)}, {"form", form_json(f)}});
      trans.push_back(Json{{"combo", combo},
                           {"from", state_name(t.from)},
                           {"source", form_json(t.source)},
                           {"target", form_json(t.target)},
                           {"to", state_name(t.to)}});
    }
    j["scheme"] = Json{{"base_ok", c.base_ok}, {"states", states}, {"transitions", trans}};
  }
  Json counts;
  for (const auto& [len, n] : c.enum_counts) counts[std::to_string(len)] = n;
  j["enumeration"] = Json{{"counts", counts}, {"truncated", c.enum_truncated}};
  Json fams = Json::array();
  for (const auto& f : c.families) fams.push_back(family_json(f));
  j["families"] = fams;
  Json dets = Json::array();
  for (const auto& d : c.det_records) {
    Json zeros = Json::array();
    for (const auto& z : d.zeros) zeros.push_back(z);
    Json classes = Json::array();
    for (const auto& cl : d.classes) {
      Json e = Json{{"kind", cl.kind}, {"offsets", cl.offsets}};
      if (cl.null_dir) e["null"] = Json::array({rat_str((*cl.null_dir)[0]), rat_str((*cl.null_dir)[1])});
      classes.push_back(e);
    }
    dets.push_back(Json{{"classes", classes},
                        {"det", d.det_valid ? exppoly_json(d.det) : Json(nullptr)},
                        {"family", family_json(d.family)},
                        {"phase", d.is_phase},
                        {"tail", tail_str(d.tail)},
                        {"zeros", zeros}});
  }
  j["determinants"] = dets;
  Json compl_arr = Json::array();
  for (const auto& r : c.completeness)
    compl_arr.push_back(Json{{"bound", r.bound},
                             {"branches", r.branches},
                             {"extension", r.ext_char == 1 ? "1" : "0"},
                             {"family", r.family},
                             {"note", r.note},
                             {"verdict", verdict_str(r.verdict)}});
  j["completeness"] = compl_arr;
  j["cover"] = Json{{"dead_ends", c.cover_dead_ends}, {"ok", c.cover_ok}};
  Json small = Json::array();
  for (const auto& cyc : c.small_seed_cycles) small.push_back(cycle_json(cyc));
  j["small_seed_cycles"] = Json{{"cycles", small}, {"undecided", c.small_seed_undecided}};
  Json cycles = Json::array();
  for (const auto& cyc : c.cycles) cycles.push_back(cycle_json(cyc));
  j["cycles"] = cycles;
  Json wit = Json::array();
  for (const auto& w : c.witnesses)
    wit.push_back(Json{{"cycle", cycle_json(w.cycle)},
                       {"exponents", w.exponents},
                       {"seed", Json::array({w.seed_a.get_str(), w.seed_b.get_str()})},
                       {"word", word_str01(w.word)}});
  j["cycle_witnesses"] = wit;
  Json emp_cycles = Json::array();
  for (const auto& cyc : c.empirical_cycles) emp_cycles.push_back(cycle_json(cyc));
  j["empirical"] = Json{{"cycles", emp_cycles},
                        {"diverged", c.empirical_diverged},
                        {"undecided", c.empirical_undecided},
                        {"witness", c.has_witness_seed
                                        ? Json(Json::array({c.witness_seed_a, c.witness_seed_b, c.witness_max}))
                                        : Json(nullptr)}};
  j["failure_note"] = c.failure_note;
  return j;
}

inline TheoremCertificate from_json(const Json& j) {
  using namespace cert_detail;
  if (j.at("format").get<std::string>() != "collatz2-certificate" || j.at("version").get<int>() != 1)
    throw std::invalid_argument("not a collatz2 certificate");
  TheoremCertificate c;
  c.rule_id = j.at("rule").at("id").get<std::string>();
  std::string kind = j.at("status").at("kind").get<std::string>();
  c.status.kind = kind == "FULL" ? StatusInfo::Full : kind == "BOUNDED_ONLY" ? StatusInfo::BoundedOnly : StatusInfo::Failed;
  c.status.bound = j.at("status").at("bound").get<long>();
  c.status.stage = j.at("status").at("stage").get<std::string>();
  c.params.grid = j.at("params").at("grid").get<int>();
  c.params.max_len = j.at("params").at("max_len").get<int>();
  c.params.m_max = j.at("params").at("m_max").get<long>();
  c.params.max_forms = j.at("params").at("max_forms").get<int>();
  c.params.cap = rat_parse(j.at("params").at("cap").get<std::string>());
  c.params.sim_steps = j.at("params").at("sim_steps").get<long long>();
  c.params.sim_mag = j.at("params").at("sim_mag").get<long long>();
  c.coeffs = {rat_parse(j.at("bound").at("c1").get<std::string>()),
              rat_parse(j.at("bound").at("c2").get<std::string>())};
  c.has_scheme = j.at("bound").at("proved").get<bool>();
  if (c.has_scheme) {
    const Json& s = j.at("scheme");
    c.base_ok = s.at("base_ok").get<bool>();
    c.scheme.coeffs = c.coeffs;
    for (const auto& st : s.at("states")) {
      std::string name = st.at("state").get<std::string>();
      State state = name == "OO" ? State::OO : name == "OE" ? State::OE : State::EO;
      for (const auto& f : st.at("forms")) c.scheme.at(state).push_back(form_from(f));
    }
    for (const auto& t : s.at("transitions")) {
      DerivationStep step;
      auto parse_state = [](const std::string& n) { return n == "OO" ? State::OO : n == "OE" ? State::OE : State::EO; };
      step.from = parse_state(t.at("from").get<std::string>());
      step.to = parse_state(t.at("to").get<std::string>());
      step.source = form_from(t.at("source"));
      step.target = form_from(t.at("target"));
      for (const auto& e : t.at("combo"))
        step.combo.push_back({form_from(e.at("form")), rat_parse(e.at("coeff").get<std::string>())});
      c.transitions.push_back(step);
    }
  }
  for (const auto& [k, v] : j.at("enumeration").at("counts").items()) c.enum_counts[std::stoi(k)] = v.get<long>();
  c.enum_truncated = j.at("enumeration").at("truncated").get<bool>();
  for (const auto& f : j.at("families")) c.families.push_back(family_from(f));
  for (const auto& d : j.at("determinants")) {
    DetRecord r;
    r.family = family_from(d.at("family"));
    r.is_phase = d.at("phase").get<bool>();
    r.det_valid = !d.at("det").is_null();
    if (r.det_valid) r.det = exppoly_from(d.at("det"));
    for (const auto& z : d.at("zeros")) r.zeros.push_back(z.get<std::vector<long>>());
    r.tail = d.at("tail").get<std::string>() == "RIGOROUS_NONZERO" ? Tail::RigorousNonzero : Tail::BoundedOnly;
    for (const auto& cl : d.at("classes")) {
      ZeroClassInfo info;
      info.offsets = cl.at("offsets").get<std::vector<long>>();
      info.kind = cl.at("kind").get<std::string>();
      if (cl.contains("null"))
        info.null_dir = std::array<Rat, 2>{rat_parse(cl.at("null").at(0).get<std::string>()),
                                           rat_parse(cl.at("null").at(1).get<std::string>())};
      r.classes.push_back(info);
    }
    c.det_records.push_back(r);
  }
  for (const auto& r : j.at("completeness")) {
    ExtensionReport rep;
    rep.family = r.at("family").get<std::string>();
    rep.ext_char = r.at("extension").get<std::string>() == "1" ? 1 : 2;
    std::string v = r.at("verdict").get<std::string>();
    rep.verdict = v == "SYMBOLIC_RULED_OUT" ? ExtVerdict::SymbolicRuledOut
                  : v == "BOUNDED"          ? ExtVerdict::Bounded
                  : v == "SKIPPED"          ? ExtVerdict::Skipped
                                            : ExtVerdict::Failed;
    rep.bound = r.at("bound").get<long>();
    rep.note = r.at("note").get<std::string>();
    rep.branches = r.at("branches").get<std::vector<std::string>>();
    c.completeness.push_back(rep);
  }
  c.cover_ok = j.at("cover").at("ok").get<bool>();
  c.cover_dead_ends = j.at("cover").at("dead_ends").get<long>();
  for (const auto& cyc : j.at("small_seed_cycles").at("cycles")) c.small_seed_cycles.push_back(cycle_from(cyc));
  c.small_seed_undecided = j.at("small_seed_cycles").at("undecided").get<bool>();
  for (const auto& cyc : j.at("cycles")) c.cycles.push_back(cycle_from(cyc));
  for (const auto& w : j.at("cycle_witnesses")) {
    CycleWitness wit;
    wit.word = word_from01(w.at("word").get<std::string>());
    wit.exponents = w.at("exponents").get<std::vector<long>>();
    wit.seed_a = Int(w.at("seed").at(0).get<std::string>());
    wit.seed_b = Int(w.at("seed").at(1).get<std::string>());
    wit.cycle = cycle_from(w.at("cycle"));
    c.witnesses.push_back(wit);
  }
  for (const auto& cyc : j.at("empirical").at("cycles")) c.empirical_cycles.push_back(cycle_from(cyc));
  c.empirical_diverged = j.at("empirical").at("diverged").get<long long>();
  c.empirical_undecided = j.at("empirical").at("undecided").get<long long>();
  if (!j.at("empirical").at("witness").is_null()) {
    c.has_witness_seed = true;
    c.witness_seed_a = j.at("empirical").at("witness").at(0).get<long long>();
    c.witness_seed_b = j.at("empirical").at("witness").at(1).get<long long>();
    c.witness_max = j.at("empirical").at("witness").at(2).get<long long>();
  }
  c.failure_note = j.at("failure_note").get<std::string>();
  return c;
}

inline std::string serialize(const TheoremCertificate& c) { return to_json(c).dump(1) + "\n"; }

inline TheoremCertificate parse_certificate(const std::string& text) { return from_json(Json::parse(text)); }

// Field-wise structural diff for sweep regression tracking.
inline std::vector<std::string> diff(const TheoremCertificate& a, const TheoremCertificate& b) {
  if (a.rule_id != b.rule_id) throw std::invalid_argument("diff: rule mismatch");
  std::vector<std::string> out;
  Json ja = to_json(a), jb = to_json(b);
  for (const auto& key : {"status", "bound", "cycles", "families", "determinants", "completeness", "cover",
                          "scheme", "small_seed_cycles"}) {
    if (ja.value(key, Json()) != jb.value(key, Json())) out.push_back(std::string(key) + " differs");
  }
  return out;
}

// Human-readable theorem and proof in the case-by-case style.
inline std::string render_text(const TheoremCertificate& c) {
  std::string s;
  RuleSpec rule = RuleSpec::from_id(c.rule_id);
  auto branch_str = [&](State st) {
    auto b = rule.branch(st);
    std::string e = (b.cu > 0 ? std::string("x(n-1)") : std::string("-x(n-1)")) +
                    (b.cv > 0 ? " + x(n)" : " - x(n)");
    return b.halved ? "(" + e + ")/2" : e;
  };
  s += "Rule " + c.rule_id + ":\n";
  s += "  x(n+1) = " + branch_str(State::EE) + "   if x(n-1), x(n) both even\n";
  s += "  x(n+1) = " + branch_str(State::OO) + "   if x(n-1), x(n) both odd\n";
  s += "  x(n+1) = " + branch_str(State::OE) + "   if x(n-1) odd, x(n) even\n";
  s += "  x(n+1) = " + branch_str(State::EO) + "   if x(n-1) even, x(n) odd\n\n";
  if (c.status.kind == StatusInfo::Failed) {
    s += "No theorem: the pipeline failed at stage '" + c.status.stage + "'.\n";
    if (!c.failure_note.empty()) s += c.failure_note + "\n";
    if (c.has_witness_seed)
      s += "Witness: the trajectory from (" + std::to_string(c.witness_seed_a) + ", " +
           std::to_string(c.witness_seed_b) + ") exceeds " + std::to_string(c.witness_max) + " in magnitude.\n";
    if (!c.empirical_cycles.empty()) {
      s += "Empirically observed cycles (grid " + std::to_string(c.params.grid) + "):\n";
      for (const auto& cyc : c.empirical_cycles) s += "  " + cyc.str() + "\n";
    }
    return s;
  }
  s += "Theorem. Let x(-1), x(0) be integers with gcd(x(-1), x(0)) = 1. Then, with A = " + rat_str(c.coeffs.c1) +
       "|x(-1)| + " + rat_str(c.coeffs.c2) + "|x(0)|,\n  |x(n)| <= A for all n >= -1,\nand the trajectory is "
       "eventually periodic, ending in one of the cycles\n";
  for (const auto& cyc : c.cycles) s += "  " + cyc.str() + "\n";
  if (c.status.kind == StatusInfo::BoundedOnly)
    s += "(completeness of the cycle list is certified only for family exponents up to " +
         std::to_string(c.status.bound) + ")\n";
  s += "\nProof of the bound, by induction on n over the parity states.\n";
  const char* case_names[3] = {"I", "II", "III"};
  int ci = 0;
  for (State st : scheme_states()) {
    s += "Case " + std::string(case_names[ci++]) + "(n): (x(n-1), x(n)) is " + state_name(st) + ". Claims:";
    for (const auto& f : c.scheme.at(st)) s += "  |" + f.str() + "| <= A";
    s += "\n";
  }
  s += "Base case: every claimed form p*u + q*v has |p| <= " + rat_str(c.coeffs.c1) + " and |q| <= " +
       rat_str(c.coeffs.c2) + ", so the claims hold at n = 0 by the triangle inequality.\n";
  s += "Induction step, one derivation per (state, successor, claim):\n";
  for (const auto& t : c.transitions) {
    s += "  " + std::string(state_name(t.from)) + " -> " + state_name(t.to) + ": |" + t.source.str() +
         "| becomes |" + t.target.str() + "| <= A since " + t.target.str() + " =";
    for (size_t i = 0; i < t.combo.size(); ++i)
      s += (i ? " + " : " ") + ("(" + rat_str(t.combo[i].second) + ")*(" + t.combo[i].first.str() + ")");
    s += " and the coefficient magnitudes sum to at most 1.\n";
  }
  s += "\nCycle classification under the max-element convention (x(1) strictly dominates x(-1), x(0); a "
       "length-L parity word is a period-(L-1) candidate; the closure determinant is det(M - I) for the "
       "ordered product M of the word's transfer steps).\n";
  s += "Feasible parity words are exactly covered by the families:\n";
  for (const auto& f : c.families) s += "  " + f.str() + "  (eps " + (f.eps > 0 ? "+" : "-") + ")\n";
  s += "Determinant analysis:\n";
  for (const auto& d : c.det_records) {
    s += "  " + d.family.str() + std::string(d.is_phase ? " [phase]" : "") + ": det(M - I) = " +
         (d.det_valid ? d.det.str() : std::string("(evaluated per exponent)"));
    if (d.zeros.empty())
      s += "; no zeros";
    else {
      s += "; zeros at";
      for (const auto& z : d.zeros) {
        s += " (";
        for (size_t i = 0; i < z.size(); ++i) s += (i ? "," : "") + std::to_string(z[i]);
        s += ")";
      }
    }
    s += std::string("; tail ") + cert_detail::tail_str(d.tail) + "\n";
  }
  s += "Axis and unit seeds contribute:\n";
  for (const auto& cyc : c.small_seed_cycles) s += "  " + cyc.str() + "\n";
  s += "Completeness of the family list (one-symbol extensions):\n";
  for (const auto& r : c.completeness)
    s += "  " + r.family + " + " + (r.ext_char == 1 ? "1" : "0") + ": " + cert_detail::verdict_str(r.verdict) +
         (r.note.empty() ? "" : " (" + r.note + ")") + "\n";
  s += "QED (machine-generated; independently checkable from the structured certificate).\n";
  return s;
}

}  // namespace collatz2
