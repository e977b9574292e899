#pragma once

#include <chrono>

#include "collatz2/certificate.hpp"
#include "collatz2/verifier.hpp"

namespace collatz2 {

// Full per-rule pipeline: conjecture the bound, close a scheme (retrying the
// data-consistent candidates in minimal-first order), enumerate candidate
// parity words, mine and verify the family cover, analyze determinants with
// their pumped phase prefixes, check completeness of the family list, collect
// cycles from zeros, the exhaustive word scan and the small seeds, and stamp
// the status. Deterministic given the parameters; the wall-clock budget only
// converts runaway rules into FAILED(timeout).
inline TheoremCertificate classify(const RuleSpec& rule, const Params& params = {}, double budget_seconds = 60.0) {
  using clock = std::chrono::steady_clock;
  auto start = clock::now();
  auto over_budget = [&] {
    return std::chrono::duration<double>(clock::now() - start).count() > budget_seconds;
  };

  TheoremCertificate cert;
  cert.rule_id = rule.id();
  cert.params = params;
  cert.status.kind = StatusInfo::Failed;

  // Empirical scan: bound data plus the oracle section.
  ScanParams sp;
  sp.grid = params.grid;
  sp.max_mag = params.sim_mag;
  sp.max_steps = std::min<long long>(params.sim_steps, 4000);
  ScanResult scan = run_scan(rule, sp);
  cert.empirical_cycles = scan.cycles;
  cert.empirical_diverged = scan.diverged;
  cert.empirical_undecided = scan.undecided;
  if (scan.has_witness) {
    cert.has_witness_seed = true;
    cert.witness_seed_a = scan.witness_a;
    cert.witness_seed_b = scan.witness_b;
    for (const auto& s : scan.seed_maxima)
      if (s.a == scan.witness_a && s.b == scan.witness_b) cert.witness_max = s.maxabs;
  }

  auto survivors = surviving_candidates(scan, params.cap);
  if (survivors.empty()) {
    cert.status.stage = "bound-conjecture";
    cert.failure_note = "no candidate (c1,c2) with denominators <= 4 and values <= " + rat_str(params.cap) +
                        " bounds the observed trajectories";
    return cert;
  }
  cert.coeffs = survivors.front();

  const SchemeProof* adopted = nullptr;
  SchemeProof proof_storage;
  for (const auto& cand : survivors) {
    if (over_budget()) {
      cert.status.stage = "timeout";
      return cert;
    }
    auto res = close_scheme(rule, cand, params.max_forms);
    if (std::holds_alternative<SchemeProof>(res)) {
      const auto& proof = std::get<SchemeProof>(res);
      if (proof.base_ok) {
        proof_storage = proof;
        adopted = &proof_storage;
        cert.coeffs = cand;
        break;
      }
    }
  }
  if (!adopted) {
    cert.status.stage = "scheme-closure";
    cert.failure_note = "no data-consistent candidate closes an induction scheme within " +
                        std::to_string(params.max_forms) + " forms per state";
    return cert;
  }
  cert.has_scheme = true;
  cert.scheme = adopted->scheme;
  cert.transitions = adopted->transitions;
  cert.base_ok = adopted->base_ok;

  if (over_budget()) {
    cert.status.stage = "timeout";
    return cert;
  }
  EnumResult e = enumerate_words(rule, cert.coeffs, params.max_len);
  for (const auto& [len, entries] : e.sets) cert.enum_counts[len] = static_cast<long>(entries.size());
  cert.enum_truncated = e.truncated;
  if (e.truncated) {
    cert.status.stage = "enumeration";
    cert.failure_note = "enumeration frontier exceeded its cap";
    return cert;
  }

  auto mined = mine(e);
  if (std::holds_alternative<MiningFailed>(mined)) {
    cert.status.stage = "mining";
    cert.failure_note = std::get<MiningFailed>(mined).what;
    return cert;
  }
  cert.families = std::get<std::vector<Family>>(mined);
  CoverReport cover = verify_cover(cert.families, e);
  cert.cover_ok = cover.ok;
  cert.cover_dead_ends = cover.dead_ends;
  if (!cover.ok) {
    cert.status.stage = "mining";
    cert.failure_note = "cover failed: " + cover.counterexample;
    return cert;
  }

  if (over_budget()) {
    cert.status.stage = "timeout";
    return cert;
  }

  // Determinant analyses: the mined families plus their pumped phase
  // prefixes, deduplicated by shape.
  std::set<Cycle> cycles;
  std::vector<CycleWitness> witnesses;
  auto add_solution = [&](const CycleSolution& sol) {
    if (cycles.insert(sol.cycle).second) {
      CycleWitness w;
      w.word = sol.word;
      w.exponents = sol.exponents;
      w.seed_a = sol.seed_a;
      w.seed_b = sol.seed_b;
      w.cycle = sol.cycle;
      witnesses.push_back(w);
    }
  };

  std::vector<std::pair<Family, bool>> analysis_targets;  // (shape, is_phase)
  auto push_target = [&](const Family& f, bool phase) {
    Family g = analysis_form(f);
    if (g.arity() == 0) return;
    Word w0 = g.instantiate([&] {
      std::vector<long> v(g.arity());
      for (int i = 0; i < g.arity(); ++i) v[i] = g.blocks[i].second;
      return v;
    }());
    if (w0.size() < 3) return;
    for (const auto& [h, p] : analysis_targets)
      if (h.same_shape(g)) return;
    analysis_targets.push_back({g, phase});
  };
  for (const auto& f : cert.families) {
    push_target(f, false);
    for (const auto& v : phase_variants(f)) push_target(v, true);
  }

  bool all_tails_rigorous = true;
  for (const auto& [g, phase] : analysis_targets) {
    if (over_budget()) {
      cert.status.stage = "timeout";
      return cert;
    }
    DetRecord rec;
    rec.family = g;
    rec.is_phase = phase;
    DetAnalysis d = det_condition(rule, g);
    rec.det_valid = d.valid;
    if (d.valid) rec.det = d.det;
    ZeroScan z = solve_zeros(rule, g, d, params.m_max);
    rec.zeros = z.zeros;
    rec.tail = z.tail;
    rec.classes = z.classes;
    if (z.tail != Tail::RigorousNonzero) all_tails_rigorous = false;
    for (const auto& zero : z.zeros)
      for (const auto& sol : extract_cycles(rule, g, zero)) add_solution(sol);
    cert.det_records.push_back(rec);
  }

  // Exhaustive small-period complement: every enumerated word directly.
  for (const auto& sol : stage_a_cycles(rule, e)) add_solution(sol);

  // Completeness of the family list.
  cert.completeness = completeness_check(rule, cert.coeffs, cert.families, params.m_max, params.max_len);
  bool completeness_failed = false, completeness_bounded = false;
  for (const auto& r : cert.completeness) {
    if (r.verdict == ExtVerdict::Failed) completeness_failed = true;
    if (r.verdict == ExtVerdict::Bounded) completeness_bounded = true;
    for (const auto& sol : r.branch_cycles) add_solution(sol);
  }
  if (completeness_failed) {
    cert.status.stage = "completeness";
    cert.failure_note = "a one-symbol extension escapes the family list";
    cert.cycles.assign(cycles.begin(), cycles.end());
    cert.witnesses = witnesses;
    return cert;
  }

  auto small = small_seed_cycles(rule, params.sim_steps, params.sim_mag);
  cert.small_seed_cycles = small.cycles;
  cert.small_seed_undecided = small.undecided;
  for (const auto& cyc : small.cycles) cycles.insert(cyc);

  cert.cycles.assign(cycles.begin(), cycles.end());
  cert.witnesses = witnesses;

  if (all_tails_rigorous && !completeness_bounded && !small.undecided) {
    cert.status.kind = StatusInfo::Full;
  } else {
    cert.status.kind = StatusInfo::BoundedOnly;
    cert.status.bound = params.m_max;
  }
  cert.status.stage = "";
  return cert;
}

}  // namespace collatz2
