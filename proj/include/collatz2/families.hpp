#pragma once

#include <optional>

#include "collatz2/enumerate.hpp"

namespace collatz2 {

// Parametric word family: prefix . block1^{m1} . block2^{m2} . suffix with
// exponents m_i >= low_i. At most two blocks.
struct Family {
  int eps = -1;
  Word prefix;
  std::vector<std::pair<Word, int>> blocks;  // (block word, low)
  Word suffix;

  int arity() const { return static_cast<int>(blocks.size()); }

  Word instantiate(const std::vector<long>& m) const {
    if (m.size() != blocks.size()) throw std::invalid_argument("Family::instantiate: arity mismatch");
    Word w = prefix;
    for (size_t i = 0; i < blocks.size(); ++i) {
      if (m[i] < blocks[i].second) throw std::invalid_argument("Family::instantiate: exponent below domain");
      for (long r = 0; r < m[i]; ++r) w.insert(w.end(), blocks[i].first.begin(), blocks[i].first.end());
    }
    w.insert(w.end(), suffix.begin(), suffix.end());
    return w;
  }

  long length(const std::vector<long>& m) const {
    long L = static_cast<long>(prefix.size() + suffix.size());
    for (size_t i = 0; i < blocks.size(); ++i) L += m[i] * static_cast<long>(blocks[i].first.size());
    return L;
  }

  // Human form in the paper's 0/1 alphabet, e.g. "(011)^{m1}1^{m2}01".
  std::string str() const {
    std::string s = word_str01(prefix);
    for (size_t i = 0; i < blocks.size(); ++i)
      s += "(" + word_str01(blocks[i].first) + ")^{m" + std::to_string(i + 1) + "}";
    s += word_str01(suffix);
    return s;
  }

  bool same_shape(const Family& o) const { return eps == o.eps && prefix == o.prefix && blocks == o.blocks && suffix == o.suffix; }

  bool operator<(const Family& o) const {
    auto key = [](const Family& f) { return std::tuple(f.eps, f.prefix, f.blocks, f.suffix); };
    return key(*this) < key(o);
  }
};

// Greedy instance match in declaration order: exponents are maximal-munch per
// block, which makes generation/parsing inverse for the mined templates.
inline std::optional<std::vector<long>> parse_instance(const Family& f, const Word& w) {
  size_t pos = 0;
  if (w.size() < f.prefix.size()) return std::nullopt;
  for (size_t i = 0; i < f.prefix.size(); ++i)
    if (w[pos++] != f.prefix[i]) return std::nullopt;
  std::vector<long> m;
  for (size_t bi = 0; bi < f.blocks.size(); ++bi) {
    const Word& B = f.blocks[bi].first;
    // Remaining blocks + suffix must still fit; munch greedily but leave room.
    long count = 0;
    while (true) {
      size_t need = f.suffix.size();
      for (size_t bj = bi + 1; bj < f.blocks.size(); ++bj) need += B.size() * 0 + f.blocks[bj].first.size() * f.blocks[bj].second;
      if (pos + B.size() + need > w.size()) break;
      bool match = true;
      for (size_t i = 0; i < B.size(); ++i)
        if (w[pos + i] != B[i]) {
          match = false;
          break;
        }
      if (!match) break;
      pos += B.size();
      ++count;
    }
    if (count < f.blocks[bi].second) return std::nullopt;
    m.push_back(count);
  }
  if (pos + f.suffix.size() != w.size()) return std::nullopt;
  for (size_t i = 0; i < f.suffix.size(); ++i)
    if (w[pos + i] != f.suffix[i]) return std::nullopt;
  return m;
}

namespace detail {

// Leftmost maximal repeat scan: decomposes w into head . P1^r1 . P2^r2 . tail
// with r_i >= 2, preferring longer pumped spans and shorter periods.
struct PumpDecomp {
  Word head;
  std::vector<std::pair<Word, long>> pumps;  // (period word, repeat count)
  Word tail;
};

inline std::optional<std::pair<Word, long>> scan_repeat(const Word& w, size_t pos, size_t max_p = 6) {
  std::optional<std::pair<Word, long>> best;
  for (size_t p = 1; p <= max_p && pos + 2 * p <= w.size(); ++p) {
    long r = 1;
    while (pos + (r + 1) * p <= w.size()) {
      bool match = true;
      for (size_t i = 0; i < p; ++i)
        if (w[pos + r * p + i] != w[pos + i]) {
          match = false;
          break;
        }
      if (!match) break;
      ++r;
    }
    if (r >= 2) {
      long span = r * static_cast<long>(p);
      if (!best || span > static_cast<long>(best->first.size()) * best->second)
        best = {Word(w.begin() + pos, w.begin() + pos + p), r};
    }
  }
  return best;
}

inline PumpDecomp pump_scan(const Word& w) {
  PumpDecomp d;
  size_t pos = 0;
  while (pos < w.size() && d.pumps.size() < 2) {
    auto rep = scan_repeat(w, pos);
    if (rep && (d.pumps.empty() ? pos <= 6 : true)) {
      d.pumps.push_back({rep->first, rep->second});
      pos += rep->first.size() * rep->second;
      continue;
    }
    if (d.pumps.empty()) {
      if (pos >= 6) break;
      d.head.push_back(w[pos++]);
    } else
      break;
  }
  d.tail.assign(w.begin() + pos, w.end());
  if (d.pumps.empty()) d.head = w;
  return d;
}

}  // namespace detail

struct MiningFailed {
  std::string what;
};

struct CoverReport {
  bool ok = false;
  std::string counterexample;  // first uncovered or spurious word
  long covered_instances = 0;
  long dead_ends = 0;
};

// Instances of any family (at any exponents within domain) of length <= cap.
inline std::set<EnumEntry> all_instances(const std::vector<Family>& families, int cap) {
  std::set<EnumEntry> out;
  for (const auto& f : families) {
    if (f.arity() == 0) continue;
    std::vector<long> m(f.arity());
    if (f.arity() == 1) {
      for (long m1 = f.blocks[0].second; f.length({m1}) <= cap; ++m1)
        if (f.length({m1}) >= 3) out.insert({f.instantiate({m1}), f.eps});
    } else {
      for (long m1 = f.blocks[0].second; f.length({m1, f.blocks[1].second}) <= cap; ++m1)
        for (long m2 = f.blocks[1].second; f.length({m1, m2}) <= cap; ++m2)
          if (f.length({m1, m2}) >= 3) out.insert({f.instantiate({m1, m2}), f.eps});
    }
  }
  return out;
}

// Exact cover, both inclusions:
//   (i)  every family instance of enumerable length is in the sets;
//   (ii) every set word is an instance or a strict prefix of one, except
//        shallow dead ends (whole subtree dies before the horizon), which are
//        finitely many and get direct determinant treatment instead.
// Words within two levels of the horizon must be family-covered even when
// dead: an unbounded dead branch (one whose instances keep appearing at every
// depth) is a genuine candidate family and may not hide as a dead end.
inline CoverReport verify_cover(const std::vector<Family>& families, const EnumResult& e) {
  CoverReport rep;
  // Prefix coverage needs instances reaching past the horizon.
  auto inst = all_instances(families, e.max_len + 12);
  std::set<EnumEntry> inst_or_prefix;
  for (const auto& ent : inst) {
    inst_or_prefix.insert(ent);
    Word w = ent.word;
    while (w.size() > 3) {
      w.pop_back();
      inst_or_prefix.insert({w, ent.eps});
    }
  }
  for (const auto& ent : inst) {
    if (static_cast<int>(ent.word.size()) > e.max_len) continue;
    if (static_cast<int>(ent.word.size()) < 3) continue;
    if (!e.contains(ent.word, ent.eps)) {
      rep.counterexample = word_str01(ent.word) + " eps=" + (ent.eps > 0 ? "+" : "-") + " (instance not feasible)";
      return rep;
    }
  }
  auto live = live_words(e);
  for (const auto& [len, entries] : e.sets)
    for (const auto& ent : entries) {
      if (inst_or_prefix.count(ent)) {
        ++rep.covered_instances;
        continue;
      }
      if (!live.count(ent) && len < e.max_len - 2) {
        ++rep.dead_ends;
        continue;
      }
      rep.counterexample = word_str01(ent.word) + " eps=" + (ent.eps > 0 ? "+" : "-") + " (uncovered)";
      return rep;
    }
  rep.ok = true;
  return rep;
}

namespace detail {

// Discovers the exponent domains from the data and verifies contiguity:
// low_i is the smallest observed instantiation, and every instance within the
// horizon from the lows on must be feasible, else the template is wrong and
// the candidate is rejected.
inline std::optional<Family> fit_lows(Family f, const EnumResult& e) {
  if (f.arity() == 0) return std::nullopt;
  for (auto& [B, lo] : f.blocks) lo = 0;
  long best1 = -1, best2 = -1;
  if (f.arity() == 1) {
    for (long m1 = 0; f.length({m1}) <= e.max_len; ++m1)
      if (f.length({m1}) >= 3 && e.contains(f.instantiate({m1}), f.eps)) {
        best1 = m1;
        break;
      }
    if (best1 < 0) return std::nullopt;
    f.blocks[0].second = static_cast<int>(best1);
    for (long m1 = best1; f.length({m1}) <= e.max_len; ++m1)
      if (f.length({m1}) >= 3 && !e.contains(f.instantiate({m1}), f.eps)) return std::nullopt;
  } else {
    for (long m1 = 0; f.length({m1, 0}) <= e.max_len; ++m1)
      for (long m2 = 0; f.length({m1, m2}) <= e.max_len; ++m2)
        if (f.length({m1, m2}) >= 3 && e.contains(f.instantiate({m1, m2}), f.eps)) {
          if (best1 < 0 || m1 < best1) best1 = m1;
          if (best2 < 0 || m2 < best2) best2 = m2;
        }
    if (best1 < 0) return std::nullopt;
    f.blocks[0].second = static_cast<int>(best1);
    f.blocks[1].second = static_cast<int>(best2);
    for (long m1 = best1; f.length({m1, best2}) <= e.max_len; ++m1)
      for (long m2 = best2; f.length({m1, m2}) <= e.max_len; ++m2)
        if (f.length({m1, m2}) >= 3 && !e.contains(f.instantiate({m1, m2}), f.eps)) return std::nullopt;
  }
  return f;
}

// Candidate templates from one word: the full pump decomposition, and its
// one-pump weakening with the rest as a literal suffix (dead branches often
// end in a bounded copy of a different block).
inline std::vector<Family> families_from_word(const EnumEntry& ent, const EnumResult& e) {
  std::vector<Family> out;
  auto d = pump_scan(ent.word);
  if (d.pumps.empty()) return out;
  // A long literal tail means the word does not fit a <=2-block template
  // (three-exponent structure); candidates built from it would only describe
  // the horizon and poison the completeness stage.
  auto tail_cap = [](const Family& f) { return f.suffix.size() <= 8 && f.prefix.size() <= 6; };
  Family full;
  full.eps = ent.eps;
  full.prefix = d.head;
  for (auto& [B, r] : d.pumps) full.blocks.push_back({B, 0});
  full.suffix = d.tail;
  if (tail_cap(full))
    if (auto f = fit_lows(full, e)) out.push_back(*f);
  if (d.pumps.size() == 2) {
    Family one;
    one.eps = ent.eps;
    one.prefix = d.head;
    one.blocks.push_back({d.pumps[0].first, 0});
    for (long r = 0; r < d.pumps[1].second; ++r)
      one.suffix.insert(one.suffix.end(), d.pumps[1].first.begin(), d.pumps[1].first.end());
    one.suffix.insert(one.suffix.end(), d.tail.begin(), d.tail.end());
    if (tail_cap(one))
      if (auto f = fit_lows(one, e)) out.push_back(*f);
  }
  return out;
}

}  // namespace detail

// Heuristic family miner guarded by verify_cover. Families are inferred from
// the deepest-level words (and near-deepest phase variants), from maximal dead
// branches, and from cover-repair rounds. Among suffix variants of one pump,
// a family whose suffix is a strict prefix of a kept sibling's suffix at the
// same exponents is redundant (its instances are covered as prefixes) and is
// dropped; the suffix-free pump itself is always kept.
inline std::variant<std::vector<Family>, MiningFailed> mine(const EnumResult& e) {
  if (e.sets.empty()) return MiningFailed{"no enumerated data"};
  std::vector<Family> fams;
  auto add = [&fams](const Family& f) {
    for (const auto& g : fams)
      if (g.same_shape(f)) return;
    fams.push_back(f);
  };
  auto pump_key = [](const Family& f) {
    std::vector<Word> bs;
    for (const auto& [B, lo] : f.blocks) bs.push_back(B);
    return std::tuple(f.eps, f.prefix, bs);
  };

  // The deepest three levels carry every unbounded direction in all its
  // phases (live spines, their cut phases and unbounded dead branches).
  int deepest = e.sets.rbegin()->first;
  std::vector<EnumEntry> seeds;
  for (int len = deepest; len > deepest - 3 && len >= 3; --len)
    if (e.sets.count(len))
      for (const auto& ent : e.sets.at(len)) seeds.push_back(ent);

  for (const auto& ent : seeds)
    for (const auto& f : detail::families_from_word(ent, e)) add(f);

  auto live = live_words(e);
  std::set<EnumEntry> attempted;
  for (int round = 0; round < 32; ++round) {
    // Drop suffix variants subsumed by a longer sibling suffix at the same
    // exponents; their instances are covered as prefixes of the sibling.
    std::vector<Family> kept;
    std::stable_sort(fams.begin(), fams.end(),
                     [](const Family& a, const Family& b) { return a.suffix.size() > b.suffix.size(); });
    for (const auto& f : fams) {
      bool drop = false;
      if (!f.suffix.empty())
        for (const auto& g : kept)
          if (pump_key(g) == pump_key(f) && g.suffix.size() > f.suffix.size() &&
              std::equal(f.suffix.begin(), f.suffix.end(), g.suffix.begin()))
            drop = true;
      if (!drop) kept.push_back(f);
    }
    // Drop any family whose instances are all exact instances of one sibling
    // (e.g. a bare pump when the pump-with-run variant exists). Most specific
    // templates are examined first.
    std::stable_sort(kept.begin(), kept.end(), [](const Family& a, const Family& b) {
      return a.prefix.size() + a.suffix.size() > b.prefix.size() + b.suffix.size();
    });
    for (size_t i = 0; i < kept.size();) {
      bool drop = false;
      for (size_t j = 0; j < kept.size() && !drop; ++j) {
        if (i == j || kept[j].eps != kept[i].eps) continue;
        bool all = true;
        const Family& F = kept[i];
        auto sub = [&](const std::vector<long>& m) {
          if (!all) return;
          all = parse_instance(kept[j], F.instantiate(m)).has_value();
        };
        if (F.arity() == 1) {
          for (long m1 = F.blocks[0].second; all && F.length({m1}) <= e.max_len + 3; ++m1) sub({m1});
          sub({F.blocks[0].second + 10});
        } else {
          for (long m1 = F.blocks[0].second; all && F.length({m1, F.blocks[1].second}) <= e.max_len + 3; ++m1)
            for (long m2 = F.blocks[1].second; all && F.length({m1, m2}) <= e.max_len + 3; ++m2) sub({m1, m2});
          sub({F.blocks[0].second + 10, F.blocks[1].second + 10});
        }
        drop = all;
      }
      if (drop)
        kept.erase(kept.begin() + i);
      else
        ++i;
    }
    std::sort(kept.begin(), kept.end());
    fams = kept;
    CoverReport rep = verify_cover(fams, e);
    if (rep.ok) return fams;
    // Repair: grow a family from the first uncovered word.
    auto inst = all_instances(fams, e.max_len + 12);
    std::set<EnumEntry> closure;
    for (const auto& ie : inst) {
      closure.insert(ie);
      Word w = ie.word;
      while (w.size() > 3) {
        w.pop_back();
        closure.insert({w, ie.eps});
      }
    }
    bool grew = false;
    for (const auto& [len, entries] : e.sets) {
      for (const auto& ent : entries) {
        if (closure.count(ent)) continue;
        if (!live.count(ent) && len < e.max_len - 2) continue;
        if (attempted.count(ent)) continue;
        attempted.insert(ent);
        size_t before = fams.size();
        for (const auto& f : detail::families_from_word(ent, e)) add(f);
        grew = fams.size() > before;
        if (grew) break;
      }
      if (grew) break;
    }
    if (!grew) return MiningFailed{"cover failed: " + verify_cover(fams, e).counterexample};
  }
  return MiningFailed{"cover did not stabilize"};
}

}  // namespace collatz2
