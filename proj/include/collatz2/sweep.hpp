#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <thread>

#include "collatz2/pipeline.hpp"

namespace collatz2 {

struct ManifestEntry {
  std::string rule_id;
  std::string status;  // FULL | BOUNDED_ONLY | FAILED
  std::string stage;   // failure stage when FAILED
  long bound = 0;
  std::string c1, c2;
  long cycle_count = 0;
  bool witness_over_million = false;
};

struct Manifest {
  std::vector<ManifestEntry> entries;  // rule index order, all 256 exactly once

  long count(const std::string& status) const {
    long n = 0;
    for (const auto& e : entries) n += (e.status == status);
    return n;
  }
};

inline Json manifest_json(const Manifest& m) {
  Json rules = Json::array();
  for (const auto& e : m.entries)
    rules.push_back(Json{{"bound", e.bound},
                         {"c1", e.c1},
                         {"c2", e.c2},
                         {"cycles", e.cycle_count},
                         {"id", e.rule_id},
                         {"stage", e.stage},
                         {"status", e.status},
                         {"witness_over_1e6", e.witness_over_million}});
  return Json{{"format", "collatz2-manifest"},
              {"version", 1},
              {"counts",
               Json{{"FULL", m.count("FULL")},
                    {"BOUNDED_ONLY", m.count("BOUNDED_ONLY")},
                    {"FAILED", m.count("FAILED")},
                    {"solved", m.count("FULL") + m.count("BOUNDED_ONLY")}}},
              {"rules", rules}};
}

inline Manifest manifest_from_json(const Json& j) {
  Manifest m;
  for (const auto& r : j.at("rules")) {
    ManifestEntry e;
    e.rule_id = r.at("id").get<std::string>();
    e.status = r.at("status").get<std::string>();
    e.stage = r.at("stage").get<std::string>();
    e.bound = r.at("bound").get<long>();
    e.c1 = r.at("c1").get<std::string>();
    e.c2 = r.at("c2").get<std::string>();
    e.cycle_count = r.at("cycles").get<long>();
    e.witness_over_million = r.at("witness_over_1e6").get<bool>();
    m.entries.push_back(e);
  }
  return m;
}

inline ManifestEntry manifest_entry(const TheoremCertificate& cert) {
  ManifestEntry e;
  e.rule_id = cert.rule_id;
  e.status = cert.status.kind == StatusInfo::Full         ? "FULL"
             : cert.status.kind == StatusInfo::BoundedOnly ? "BOUNDED_ONLY"
                                                           : "FAILED";
  e.stage = cert.status.stage;
  e.bound = cert.status.bound;
  e.c1 = rat_str(cert.coeffs.c1);
  e.c2 = rat_str(cert.coeffs.c2);
  e.cycle_count = static_cast<long>(cert.cycles.size());
  e.witness_over_million = cert.has_witness_seed && cert.witness_max > 1000000;
  return e;
}

// Work-stealing sweep over all 256 rules. Each rule's pipeline runs
// single-threaded and deterministically; results merge in rule-index order,
// so certificates and the manifest are byte-identical across --jobs levels.
// Wall-clock timings go to a separate, explicitly non-deterministic file.
struct SweepResult {
  Manifest manifest;
  std::vector<double> seconds;  // per rule index
};

inline SweepResult sweep(const Params& params = {}, int jobs = 0, double budget_seconds = 60.0,
                         const std::function<void(int, const TheoremCertificate&)>& sink = nullptr) {
  if (jobs <= 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  SweepResult out;
  out.manifest.entries.resize(256);
  out.seconds.resize(256);
  std::vector<TheoremCertificate> certs(256);
  std::atomic<int> next{0};
  std::mutex sink_mu;
  auto worker = [&] {
    for (int i = next.fetch_add(1); i < 256; i = next.fetch_add(1)) {
      auto t0 = std::chrono::steady_clock::now();
      TheoremCertificate cert;
      try {
        cert = classify(RuleSpec::from_index(i), params, budget_seconds);
      } catch (const std::exception& ex) {
        cert.rule_id = RuleSpec::from_index(i).id();
        cert.params = params;
        cert.status.kind = StatusInfo::Failed;
        cert.status.stage = "exception";
        cert.failure_note = ex.what();
      }
      out.seconds[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      out.manifest.entries[i] = manifest_entry(cert);
      if (sink) {
        std::lock_guard<std::mutex> lock(sink_mu);
        sink(i, cert);
      }
      certs[i] = TheoremCertificate{};  // certificates stream through the sink
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return out;
}

// AGKL sixteen-rule sub-table: solved / unbounded / open per the published
// classification of the embedded four-tuples.
struct AgklTable {
  std::vector<std::string> solved, unbounded, open;
};

inline AgklTable agkl_table(const Manifest& m) {
  AgklTable t;
  for (const auto& e : m.entries) {
    RuleSpec r = RuleSpec::from_id(e.rule_id);
    std::array<int, 4> tup{};
    if (!r.is_agkl(&tup)) continue;
    std::string name = "(" + std::to_string(tup[0]) + "," + std::to_string(tup[1]) + "," + std::to_string(tup[2]) +
                       "," + std::to_string(tup[3]) + ")";
    if (e.status != "FAILED")
      t.solved.push_back(name);
    else if (e.stage == "bound-conjecture" && e.witness_over_million)
      t.unbounded.push_back(name);
    else
      t.open.push_back(name);
  }
  return t;
}

inline std::string report(const Manifest& m) {
  std::string s;
  long full = m.count("FULL"), bounded = m.count("BOUNDED_ONLY"), failed = m.count("FAILED");
  s += "rules: " + std::to_string(m.entries.size()) + "\n";
  s += "FULL: " + std::to_string(full) + "\n";
  s += "BOUNDED_ONLY: " + std::to_string(bounded) + "\n";
  s += "solved (FULL or BOUNDED_ONLY): " + std::to_string(full + bounded) + "  (published count: 144)\n";
  s += "FAILED: " + std::to_string(failed) + "\n";
  if (!m.entries.empty()) {
    std::map<std::string, long> stages;
    for (const auto& e : m.entries)
      if (e.status == "FAILED") ++stages[e.stage];
    for (const auto& [stage, n] : stages) s += "  failed at " + stage + ": " + std::to_string(n) + "\n";
    s += "rules with BOUNDED_ONLY certificates:\n";
    for (const auto& e : m.entries)
      if (e.status == "BOUNDED_ONLY") s += "  " + e.rule_id + " (bound " + std::to_string(e.bound) + ")\n";
    AgklTable t = agkl_table(m);
    s += "AGKL sixteen-rule sub-table: " + std::to_string(t.solved.size()) + " solved, " +
         std::to_string(t.unbounded.size()) + " unbounded, " + std::to_string(t.open.size()) + " open\n";
    s += "  open cases not proved:";
    for (const auto& n : t.open) s += " " + n;
    s += "\n";
  }
  return s;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

// Output layout: <dir>/<rule-id>.cert.json, <dir>/<rule-id>.theorem.txt,
// <dir>/manifest.json, <dir>/timings.json (the only non-deterministic file).
inline SweepResult sweep_to_dir(const std::string& dir, const Params& params = {}, int jobs = 0,
                                double budget_seconds = 60.0) {
  std::filesystem::create_directories(dir);
  auto sink = [&dir](int, const TheoremCertificate& cert) {
    write_file(dir + "/" + cert.rule_id + ".cert.json", serialize(cert));
    write_file(dir + "/" + cert.rule_id + ".theorem.txt", render_text(cert));
  };
  SweepResult res = sweep(params, jobs, budget_seconds, sink);
  write_file(dir + "/manifest.json", manifest_json(res.manifest).dump(1) + "\n");
  Json timings;
  for (int i = 0; i < 256; ++i) timings[res.manifest.entries[i].rule_id] = res.seconds[i];
  write_file(dir + "/timings.json", timings.dump(1) + "\n");
  return res;
}

}  // namespace collatz2
