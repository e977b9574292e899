// Command-line driver: per-rule pipeline, 256-rule sweep, simulation and
// exploration utilities, certificate verification.
//
// Exit codes: 0 success; 64 usage error; 10 no bound conjectured;
// 11 scheme closure failed; 12 family mining failed; 13 verification failed;
// 14 other pipeline failure.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "collatz2/modmap.hpp"
#include "collatz2/sweep.hpp"

using namespace collatz2;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::pair<long long, long long> parse_seed(const std::string& s) {
  auto comma = s.find(',');
  if (comma == std::string::npos) throw CLI::ValidationError("--seed expects a,b");
  return {std::stoll(s.substr(0, comma)), std::stoll(s.substr(comma + 1))};
}

int failure_code(const TheoremCertificate& cert) {
  if (cert.status.kind != StatusInfo::Failed) return 0;
  if (cert.status.stage == "bound-conjecture") return 10;
  if (cert.status.stage == "scheme-closure") return 11;
  if (cert.status.stage == "mining") return 12;
  return 14;
}

std::string default_out_dir() {
  const char* env = std::getenv("COLLATZ2_OUT");
  return env ? env : "out";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"discover-and-prove engine for parity-split second-order difference equations"};
  app.require_subcommand(1);

  std::string rule_text = "CL", seed_text = "1,1", out_dir = default_out_dir(), format = "text";
  Params params;
  long long steps = 100000, mag = 1000000000000LL;
  int jobs = 0;
  double budget = 60.0;

  auto add_rule_opt = [&](CLI::App* cmd) { cmd->add_option("--rule", rule_text, "8-sign rule id, AGKL 4-tuple, CL or E6"); };
  auto add_pipeline_opts = [&](CLI::App* cmd) {
    cmd->add_option("--grid", params.grid, "empirical seed box half-width (default 100)");
    cmd->add_option("--max-len", params.max_len, "parity word enumeration horizon (default 24)");
    cmd->add_option("--m-max", params.m_max, "exponent scan bound (default 64)");
    cmd->add_option("--max-forms", params.max_forms, "scheme form cap per state (default 12)");
    cmd->add_option("--budget", budget, "per-rule wall clock budget in seconds (default 60)");
  };

  auto* sim = app.add_subcommand("simulate", "print a trajectory and its eventual cycle");
  add_rule_opt(sim);
  sim->add_option("--seed", seed_text, "initial pair a,b")->required();
  sim->add_option("--steps", steps, "steps to print / detection cap");
  sim->add_option("--mag", mag, "divergence magnitude cap");

  auto* conj = app.add_subcommand("conjecture-bound", "smallest (c1,c2) consistent with the empirical scan");
  add_rule_opt(conj);
  conj->add_option("--grid", params.grid, "seed box half-width");

  auto* prove = app.add_subcommand("prove", "conjecture the bound and close the induction scheme");
  add_rule_opt(prove);
  add_pipeline_opts(prove);

  auto* classify_cmd = app.add_subcommand("classify", "full pipeline; writes certificate and theorem text");
  add_rule_opt(classify_cmd);
  add_pipeline_opts(classify_cmd);
  classify_cmd->add_option("--out", out_dir, "output directory (default $COLLATZ2_OUT or ./out)");
  classify_cmd->add_option("--format", format, "text|structured: what to print on stdout")
      ->check(CLI::IsMember({"text", "structured"}));

  auto* sweep_cmd = app.add_subcommand("sweep", "classify all 256 rules and write the manifest");
  add_pipeline_opts(sweep_cmd);
  sweep_cmd->add_option("--out", out_dir, "output directory");
  sweep_cmd->add_option("--jobs", jobs, "worker threads (default: hardware)");

  auto* verify_cmd = app.add_subcommand("verify", "independently re-check a certificate file");
  std::string cert_path;
  verify_cmd->add_option("file", cert_path, "certificate file")->required();

  auto* report_cmd = app.add_subcommand("report", "summarize a sweep manifest");
  std::string manifest_path = "out/manifest.json";
  report_cmd->add_option("file", manifest_path, "manifest file");

  auto* modmap_cmd = app.add_subcommand("modmap", "empirical first-order map explorer");
  std::string map_path;
  long long range = 1000, mm_lo = 0, mm_hi = 0;
  modmap_cmd->add_option("file", map_path, "map spec file (m, then one 'a_i b_i' per line)")->required();
  modmap_cmd->add_option("--range", range, "scan all |n| <= range");
  modmap_cmd->add_option("--from", mm_lo, "scan lower bound (with --to, overrides --range)");
  modmap_cmd->add_option("--to", mm_hi, "scan upper bound");
  modmap_cmd->add_option("--steps", steps, "per-seed step cap (default 10000)");
  modmap_cmd->add_option("--mag", mag, "divergence magnitude cap (default 10^18)");

  auto* diff_cmd = app.add_subcommand("diff", "structural diff of two certificates");
  std::string cert_a, cert_b;
  diff_cmd->add_option("a", cert_a)->required();
  diff_cmd->add_option("b", cert_b)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 64;
  }

  try {
    if (*sim) {
      RuleSpec rule = parse_rule(rule_text);
      auto [a, b] = parse_seed(seed_text);
      SimResult res = simulate(rule, a, b, steps, mag);
      // Print the pure iteration so the trajectory is verbatim regardless of
      // where cycle detection stopped.
      long print_count = std::min<long long>(steps + 2, 4096);
      if (res.outcome == Outcome::Diverged) print_count = static_cast<long>(res.trajectory.size());
      auto values = iterate_values(rule, to_int(a), to_int(b), static_cast<int>(print_count));
      for (size_t i = 0; i < values.size(); ++i) std::cout << (i ? ", " : "") << values[i].get_str();
      std::cout << "\n";
      switch (res.outcome) {
        case Outcome::CycleReached: std::cout << "cycle: " << res.cycle.str() << "\n"; break;
        case Outcome::Diverged: std::cout << "diverged beyond " << mag << "\n"; break;
        case Outcome::Undecided: std::cout << "undecided after " << steps << " steps\n"; break;
      }
      return 0;
    }
    if (*conj) {
      RuleSpec rule = parse_rule(rule_text);
      auto c = conjecture_bound(rule, params.grid, params.cap);
      if (!c) {
        std::cout << "no candidate bound (evidence of unbounded trajectories)\n";
        return 10;
      }
      std::cout << "|x(n)| <= " << rat_str(c->c1) << "*|x(-1)| + " << rat_str(c->c2) << "*|x(0)|\n";
      return 0;
    }
    if (*prove) {
      RuleSpec rule = parse_rule(rule_text);
      ScanParams sp;
      sp.grid = params.grid;
      auto scan = run_scan(rule, sp);
      auto survivors = surviving_candidates(scan, params.cap);
      if (survivors.empty()) {
        std::cout << "no bound candidate survives the scan\n";
        return 10;
      }
      for (const auto& cand : survivors) {
        auto res = close_scheme(rule, cand, params.max_forms);
        if (std::holds_alternative<SchemeProof>(res) && std::get<SchemeProof>(res).base_ok) {
          const auto& proof = std::get<SchemeProof>(res);
          std::cout << "scheme closed with (c1,c2) = (" << rat_str(cand.c1) << "," << rat_str(cand.c2) << ")\n";
          for (State s : scheme_states()) {
            std::cout << "  " << state_name(s) << ":";
            for (const auto& f : proof.scheme.at(s)) std::cout << "  |" << f.str() << "| <= A";
            std::cout << "\n";
          }
          std::cout << "  " << proof.transitions.size() << " derivation steps, base case checked\n";
          return 0;
        }
      }
      std::cout << "no data-consistent candidate closes a scheme\n";
      return 11;
    }
    if (*classify_cmd) {
      RuleSpec rule = parse_rule(rule_text);
      TheoremCertificate cert = classify(rule, params, budget);
      std::filesystem::create_directories(out_dir);
      write_file(out_dir + "/" + cert.rule_id + ".cert.json", serialize(cert));
      write_file(out_dir + "/" + cert.rule_id + ".theorem.txt", render_text(cert));
      if (format == "structured")
        std::cout << serialize(cert);
      else
        std::cout << render_text(cert);
      return failure_code(cert);
    }
    if (*sweep_cmd) {
      SweepResult res = sweep_to_dir(out_dir, params, jobs, budget);
      std::cout << report(res.manifest);
      return 0;
    }
    if (*verify_cmd) {
      VerifyReport rep = verify_text(slurp(cert_path));
      if (rep.ok) {
        std::cout << "certificate verifies\n";
        return 0;
      }
      std::cout << "certificate REJECTED:\n";
      for (const auto& f : rep.failures) std::cout << "  " << f << "\n";
      return 13;
    }
    if (*report_cmd) {
      Manifest m = manifest_from_json(Json::parse(slurp(manifest_path)));
      std::cout << report(m);
      return 0;
    }
    if (*modmap_cmd) {
      ModMapSpec spec = mm_parse_file(map_path);
      if (!mm_validate(spec)) {
        std::cout << "spec violates the closure conditions (m*a_i and i*a_i+b_i must be integers)\n";
        return 64;
      }
      MMOutcome out = (mm_lo != 0 || mm_hi != 0) ? conjecture_cycles(spec, mm_lo, mm_hi, steps, mag)
                                                 : conjecture_cycles_range(spec, range, steps, mag);
      std::cout << "cycles:";
      for (const auto& c : out.cycles) std::cout << " " << c.str();
      std::cout << "\n";
      if (out.diverged) std::cout << "diverged seeds: " << out.diverged << "\n";
      if (out.undecided) std::cout << "undecided seeds: " << out.undecided << "\n";
      return 0;
    }
    if (*diff_cmd) {
      auto da = parse_certificate(slurp(cert_a)), db = parse_certificate(slurp(cert_b));
      auto changes = diff(da, db);
      for (const auto& c : changes) std::cout << c << "\n";
      std::cout << (changes.empty() ? "identical\n" : "") << "";
      return 0;
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 64;
  }
  return 64;
}
