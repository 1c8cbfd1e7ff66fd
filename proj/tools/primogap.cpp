// primogap: differences between consecutive integers coprime to p_k#.
//
// Exit codes: 0 success, 1 verification/comparison failure, 2 usage error,
// 3 resource limit (oracle period cap, time budget).

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "primogap/agpa.hpp"
#include "primogap/analyzer.hpp"
#include "primogap/error.hpp"
#include "primogap/oracle.hpp"
#include "primogap/report_io.hpp"
#include "primogap/witness.hpp"

namespace {

using namespace primogap;

enum Exit : int { ok = 0, failed = 1, usage = 2, resource = 3 };

std::string describe(const Covering& cov) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < cov.classes.size(); ++i) {
    os << (i ? ", " : "") << cov.classes[i].residue << " mod " << cov.classes[i].prime;
  }
  os << "} on <" << cov.window.start << ">_" << cov.window.length;
  return os.str();
}

int exit_for(const Error& e) {
  switch (e.code()) {
    case Errc::period_too_large:
    case Errc::budget_exceeded:
      return resource;
    case Errc::invalid_argument:
    case Errc::odd_gap:
      return usage;
    default:
      return failed;
  }
}

struct Config {
  std::size_t k_cap = 64;
  std::size_t oracle_cap = 9;
  unsigned threads = 1;
  double time_budget = 0;  // seconds; 0 = unlimited
  bool exhaustive_only = false;
};

AnalyzeOptions analyze_options(const Config& cfg) {
  AnalyzeOptions opt;
  opt.threads = cfg.threads;
  opt.control.local_search = !cfg.exhaustive_only;
  if (cfg.time_budget > 0) {
    opt.control.deadline = std::chrono::steady_clock::now() +
                           std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                               std::chrono::duration<double>(cfg.time_budget));
  }
  return opt;
}

int cmd_table(const Config& cfg, std::size_t kmax, const std::string& format_name, const std::string& witness_out,
              bool audit) {
  auto format = parse_format(format_name);
  if (!format) {
    std::cerr << "unknown format '" << format_name << "'\n";
    return usage;
  }
  if (kmax < 1 || kmax > cfg.k_cap) {
    std::cerr << "--kmax must be in [1, " << cfg.k_cap << "]\n";
    return usage;
  }

  WitnessCache cache;
  WitnessFile witnesses;
  std::vector<DifferenceReport> rows;
  const bool stream = *format != OutputFormat::json;
  if (*format == OutputFormat::table) std::cout << render_table({});
  if (*format == OutputFormat::csv) std::cout << to_csv({});

  int status = ok;
  try {
    analyze_range(kmax, cache, analyze_options(cfg), [&](const DifferenceReport& r) {
      rows.push_back(r);
      if (!witness_out.empty()) {
        for (auto& rec : records_from_cache(cache)) witnesses.records.push_back(std::move(rec));
      }
      if (*format == OutputFormat::table) std::cout << render_table_row(r) << std::endl;
      if (*format == OutputFormat::csv) {
        std::string csv = to_csv({r});
        std::cout << csv.substr(csv.find('\n') + 1) << std::flush;
      }
    });
  } catch (const Error& e) {
    std::cerr << "stopped after row " << rows.size() << ": " << e.what() << "\n";
    status = exit_for(e);
  }
  if (!stream) std::cout << to_json(rows);

  if (audit && rows.size() > 1) {
    std::cerr << "k  conjecture  de_polignac  corollary  equivalence\n";
    for (const auto& f : check_conjectures(rows)) {
      std::cerr << f.k << "  " << f.conjecture_holds << "  " << f.de_polignac_holds << "  " << f.corollary_holds
                << "  " << f.equivalence_holds << "\n";
    }
  }

  if (!witness_out.empty()) {
    for (const auto& rec : witnesses.records) {
      if (auto why = verify_record(rec)) {
        std::cerr << "witness k=" << rec.k << " m=" << rec.m << " failed: " << *why << "\n";
        return failed;
      }
    }
    std::ofstream out(witness_out);
    out << write_witness_file(witnesses);
    if (!out) {
      std::cerr << "cannot write " << witness_out << "\n";
      return failed;
    }
  }
  return status;
}

int cmd_membership(const Config& cfg, std::size_t k, std::size_t m) {
  if (k < 1 || k > cfg.k_cap) {
    std::cerr << "--k must be in [1, " << cfg.k_cap << "]\n";
    return usage;
  }
  if (m % 2 != 0) {
    std::cout << "absent (odd gap: every coprime to p_k# is odd)\n";
    return ok;
  }
  if (m < 2) {
    std::cerr << "--m must be at least 2\n";
    return usage;
  }
  const PrimeSet primes = primes_upto_index(k);
  try {
    std::optional<CoprimePair> pair;
    if (m == 2) {
      pair = construct_two(k);
    } else if (k >= 2) {
      auto opt = analyze_options(cfg);
      if (auto cov = gap_membership(m, primes, opt.control)) {
        std::cout << "witness (odd primes): " << describe(*cov) << "\n";
        pair = pair_from_odd_covering(*cov, primes);
      }
    }
    if (!pair) {
      std::cout << "absent: " << m << " is not a difference of consecutive coprimes to p_" << k << "#\n";
      return ok;
    }
    std::cout << "covering: " << describe(coprime_pair_to_covering(*pair, primes)) << "\n";
    std::cout << "present: pair (" << pair->x << ", " << pair->y << "), gap " << pair->gap() << "\n";
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_for(e);
  }
  return ok;
}

int cmd_oracle(const Config& cfg, std::size_t k, bool compare) {
  OracleOptions opt;
  opt.max_k = cfg.oracle_cap;
  opt.threads = cfg.threads;
  try {
    GapSpectrum s = brute_force_spectrum(k, opt);
    std::cout << "k=" << s.k << " gaps={";
    for (std::size_t i = 0; i < s.gaps.size(); ++i) std::cout << (i ? "," : "") << s.gaps[i];
    std::cout << "} n_min=" << s.n_min << " n_max=" << s.n_max << "\n";
    if (!compare) return ok;

    WitnessCache cache;
    auto rows = analyze_range(k, cache, analyze_options(cfg));
    const DifferenceReport& r = rows.back();
    bool match = r.h == s.n_max && r.n_min == s.n_min;
    for (std::size_t m = 2; m <= std::max(r.h, s.n_max); m += 2) match = match && r.present(m) == s.contains(m);
    std::cout << (match ? "MATCH" : "MISMATCH") << "\n";
    return match ? ok : failed;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_for(e);
  }
}

int cmd_verify(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "cannot read " << path << "\n";
    return failed;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  WitnessFile file;
  try {
    file = parse_witness_file(buf.str());
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return failed;
  }
  if (file.records.empty()) {
    std::cerr << "warning: " << path << " contains no records\n";
    return ok;
  }
  std::size_t bad = 0;
  for (std::size_t i = 0; i < file.records.size(); ++i) {
    const auto& rec = file.records[i];
    if (auto why = verify_record(rec)) {
      ++bad;
      std::cout << "record " << i << " (k=" << rec.k << ", m=" << rec.m << "): " << *why << "\n";
    }
  }
  std::cout << file.records.size() - bad << "/" << file.records.size() << " records verified\n";
  return bad == 0 ? ok : failed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differences between consecutive integers coprime to primorials"};
  app.require_subcommand(1);

  Config cfg;
  app.add_option("--k-cap", cfg.k_cap, "Largest k accepted")->envname("PRIMOGAP_K_CAP");
  app.add_option("--oracle-cap", cfg.oracle_cap, "Largest k the brute-force oracle may sieve")
      ->envname("PRIMOGAP_ORACLE_CAP");
  app.add_option("--threads", cfg.threads, "Worker threads")->envname("PRIMOGAP_THREADS")->check(CLI::Range(1u, 1024u));
  app.add_option("--time-budget", cfg.time_budget, "Seconds before the run stops (0 = none)")
      ->envname("PRIMOGAP_TIME_BUDGET");
  app.add_flag("--exhaustive-only", cfg.exhaustive_only, "Find witnesses with the exhaustive search alone");

  std::size_t kmax = 0;
  std::string format = "table";
  std::string witness_out;
  bool audit = false;
  auto* table = app.add_subcommand("table", "Compute rows k = 1..kmax of the gap table");
  table->add_option("--kmax", kmax, "Last row")->required();
  table->add_option("--format", format, "table, csv or json");
  table->add_option("--witness-out", witness_out, "Write every witness covering to this JSON file");
  table->add_flag("--audit", audit, "Print the conjecture audit to stderr");

  std::size_t k = 0, m = 0;
  auto* membership = app.add_subcommand("membership", "Decide whether m is a difference of coprimes to p_k#");
  membership->add_option("--k", k, "Number of primes")->required();
  membership->add_option("--m", m, "Even difference to test")->required();

  std::size_t ok_k = 0;
  bool compare = false;
  auto* oracle = app.add_subcommand("oracle", "Brute-force gap spectrum over one period of p_k#");
  oracle->add_option("--k", ok_k, "Number of primes")->required();
  oracle->add_flag("--compare", compare, "Also run the search and compare");

  std::string witness_file;
  auto* verify = app.add_subcommand("verify", "Re-verify every record of a witness file");
  verify->add_option("file", witness_file, "Witness JSON written by table --witness-out")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : Exit::usage;
  }

  try {
    if (*table) return cmd_table(cfg, kmax, format, witness_out, audit);
    if (*membership) return cmd_membership(cfg, k, m);
    if (*oracle) return cmd_oracle(cfg, ok_k, compare);
    if (*verify) return cmd_verify(witness_file);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_for(e);
  }
  return Exit::usage;
}
