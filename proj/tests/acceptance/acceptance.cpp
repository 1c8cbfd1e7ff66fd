// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fails.
//
// Pinned limits (seconds, CPU wall clock on one core):
//   rows 1-20            900
//   rows 21-30           PRIMOGAP_STRETCH_BUDGET, default kStretchBudget
//   oracle equivalence   120
// Comparisons against the table are exact; there are no numeric tolerances.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "brute.hpp"
#include "primogap/analyzer.hpp"
#include "primogap/covering.hpp"
#include "primogap/error.hpp"
#include "primogap/oracle.hpp"
#include "primogap/report_io.hpp"
#include "primogap/witness.hpp"

namespace pg = primogap;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kTableBudget = 900;
constexpr double kStretchBudget = 1800;
constexpr double kOracleBudget = 120;
constexpr std::size_t kPropertyMaxK = 6;
constexpr std::size_t kPropertyMaxLength = 30;

int failures = 0;

void report(bool ok, const std::string& id, const std::string& detail) {
  if (!ok) ++failures;
  std::cout << (ok ? "PASS " : "FAIL ") << id << "  " << detail << std::endl;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt_seconds(double s) {
  std::ostringstream o;
  o.precision(3);
  o << std::fixed << s << "s";
  return o.str();
}

// First row index whose values differ from the golden rows, or rows.size().
std::size_t first_mismatch(const std::vector<pg::DifferenceReport>& rows, const std::vector<pg::DifferenceReport>& golden,
                           std::size_t offset) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].same_values(golden.at(offset + i))) return i;
  }
  return rows.size();
}

// Every cached witness at every level, re-verified as a record.
struct WitnessAudit {
  std::size_t records = 0;
  std::size_t bad = 0;
  std::string first_reason;

  void check(const pg::WitnessCache& cache) {
    for (const auto& rec : pg::records_from_cache(cache)) {
      ++records;
      if (auto why = pg::verify_record(rec)) {
        if (bad++ == 0) first_reason = "k=" + std::to_string(rec.k) + " m=" + std::to_string(rec.m) + ": " + *why;
      }
    }
  }
};

void criterion_oracle() {
  const auto t0 = Clock::now();
  std::size_t compared = 0;
  std::string bad;
  pg::WitnessCache cache;
  auto rows = pg::analyze_range(8, cache);
  for (std::size_t k = 2; k <= 8 && bad.empty(); ++k) {
    const pg::GapSpectrum s = pg::brute_force_spectrum(k);
    const auto& r = rows[k - 1];
    if (r.h != s.n_max || r.n_min != s.n_min) bad = "k=" + std::to_string(k) + " h/n_min differ";
    for (std::size_t m = 2; m <= std::max(r.h, s.n_max) && bad.empty(); m += 2, ++compared) {
      if (r.present(m) != s.contains(m)) bad = "k=" + std::to_string(k) + " m=" + std::to_string(m);
    }
  }
  const double t = seconds_since(t0);
  report(bad.empty() && t <= kOracleBudget, "oracle-equivalence",
         "k=2..8, " + std::to_string(compared) + " gaps compared in " + fmt_seconds(t) + (bad.empty() ? "" : ", " + bad));
}

void criterion_h_values(const std::vector<pg::DifferenceReport>& rows) {
  const std::vector<std::size_t> expected{2, 4, 6, 10, 14, 22, 26, 34, 40, 46, 58, 66, 74, 90, 100, 106, 118, 132, 152, 174};
  bool ok = rows.size() >= expected.size();
  std::string detail;
  for (std::size_t i = 0; ok && i < expected.size(); ++i) {
    if (rows[i].h != expected[i]) {
      ok = false;
      detail = ", k=" + std::to_string(i + 1) + " gave " + std::to_string(rows[i].h);
    }
  }
  report(ok, "h-values", "h(1..20)" + detail);
}

void criterion_conjectures(const std::vector<pg::DifferenceReport>& rows) {
  auto flags = pg::check_conjectures(rows);
  bool ok = true;
  std::string polignac_false;
  for (const auto& f : flags) {
    ok = ok && f.conjecture_holds && f.corollary_holds && f.equivalence_holds;
    if (!f.de_polignac_holds) polignac_false += (polignac_false.empty() ? "" : ",") + std::to_string(f.k);
  }
  ok = ok && polignac_false == "6,8";
  report(ok, "conjecture-audit", "k=2.." + std::to_string(rows.size()) + ", de Polignac bound fails at {" +
                                     polignac_false + "}");
}

void criterion_witnesses(const WitnessAudit& audit) {
  std::size_t constructions = 0;
  std::string bad = audit.first_reason;
  try {
    for (std::size_t k = 1; k <= 50; ++k, ++constructions) {
      pg::Covering c = pg::construct_even_2k(k);
      if (!pg::is_restricted(c) || c.window.length != 2 * k - 1) bad = "construct_even_2k(" + std::to_string(k) + ")";
      if (k <= 25) {
        auto pair = pg::covering_to_coprime_pair(c, pg::primes_upto_index(k));
        if (!pg::is_valid_pair(pair) || pair.gap() != 2 * k) bad = "even_2k pair k=" + std::to_string(k);
      }
    }
    const pg::PrimeSet ps = pg::primes_upto_index(25);
    for (std::size_t k = 2; k <= 25; ++k, ++constructions) {
      auto pair = pg::construct_double_prev_prime(k);
      if (!pg::is_valid_pair(pair) || pair.gap() != 2 * ps.p(k - 1)) bad = "double_prev_prime(" + std::to_string(k) + ")";
    }
    for (std::size_t k = 1; k <= 25; ++k, ++constructions) {
      if (!pg::is_valid_pair(pg::construct_two(k))) bad = "construct_two(" + std::to_string(k) + ")";
    }
  } catch (const pg::Error& e) {
    bad = e.what();
  }
  report(audit.bad == 0 && bad.empty(), "witness-soundness",
         std::to_string(audit.records) + " search witnesses and " + std::to_string(constructions) +
             " constructions verified" + (bad.empty() ? "" : ", first failure: " + bad));
}

// Random covering over a subset of p_1..p_k of a window of length <= max_len.
pg::Covering random_covering(std::mt19937& rng, bool odd_only) {
  auto primes = pg::testing::first_primes(1 + rng() % kPropertyMaxK);
  std::vector<pg::ResidueClass> cls;
  for (std::size_t i = odd_only ? 1 : 0; i < primes.size(); ++i) {
    cls.push_back({primes[i], static_cast<std::uint32_t>(rng() % primes[i])});
  }
  pg::BigInt start = static_cast<std::int64_t>(rng() % 2000) - 1000;
  std::size_t length = 0;
  while (length < kPropertyMaxLength && pg::hits(cls, start + length)) ++length;
  return {cls, pg::Window{start, length}};
}

void criterion_properties(const std::vector<pg::DifferenceReport>& rows) {
  std::mt19937 rng(0x5eed);
  constexpr int kTrials = 5000;
  std::size_t relocations = 0, lifts = 0, normals = 0;
  std::string bad;

  for (int t = 0; t < kTrials && bad.empty(); ++t) {
    pg::Covering c = random_covering(rng, false);
    pg::BigInt target = static_cast<std::int64_t>(rng() % 1000000) - 500000;
    pg::Covering moved = pg::relocate(c, target);
    if (!pg::covers(moved) || pg::relocate(moved, c.window.start) != c) bad = "relocate round trip";
    ++relocations;

    pg::BigInt product = 1;
    for (auto cls : c.classes) product *= cls.prime;
    if (c.window.length > 0 && c.window.length < product) {
      pg::Covering n = pg::normalize_nonzero(c);
      bool ok = n.window.start == 1 && n.window.length == c.window.length && pg::covers(n) && !pg::hits(n.classes, 0);
      for (auto cls : n.classes) ok = ok && cls.residue != 0;
      if (!ok) bad = "normalize_nonzero postconditions";
      ++normals;
    }

    pg::Covering odd = random_covering(rng, true);
    if (odd.classes.empty()) continue;
    pg::Covering full = pg::double_lift(odd);
    pg::Covering back = pg::halve_project(full);
    if (!pg::covers(full) || full.window.length != 2 * odd.window.length + 1 ||
        pg::relocate(back, odd.window.start) != odd) {
      bad = "double_lift / halve_project round trip";
    }
    ++lifts;
  }

  std::size_t closure_checks = 0;
  for (std::size_t k = 2; k <= kPropertyMaxK && bad.empty(); ++k) {
    const pg::PrimeSet ps = pg::primes_upto_index(k);
    const std::vector<pg::Prime> odd(ps.odd().begin(), ps.odd().end());
    bool prev = true;
    for (std::size_t len = 1; len <= kPropertyMaxLength; ++len, ++closure_checks) {
      pg::SearchProblem p{len, odd, std::vector<std::vector<std::uint32_t>>(odd.size(), {0})};
      const bool now = pg::testing::enumerate_covering_exists(p);
      if (now && !prev) bad = "coverable lengths not downward closed at k=" + std::to_string(k);
      if (pg::search(p).has_value() != now) bad = "search disagrees with enumeration at k=" + std::to_string(k);
      prev = now;
    }
  }

  std::size_t subset_checks = 0;
  for (std::size_t k = 1; k < kPropertyMaxK && bad.empty(); ++k) {
    auto lo = pg::testing::scan_gaps(k), hi = pg::testing::scan_gaps(k + 1);
    for (auto m : lo) {
      if (m < *lo.rbegin() && !hi.count(m)) bad = "D(" + std::to_string(k) + ") not inside D(k+1)";
      ++subset_checks;
    }
  }
  for (std::size_t k = 1; k < rows.size() && bad.empty(); ++k) {
    for (std::size_t m = 2; m < rows[k - 1].h; m += 2, ++subset_checks) {
      if (rows[k - 1].present(m) && !rows[k].present(m)) bad = "row " + std::to_string(k + 1) + " loses gap " + std::to_string(m);
    }
  }

  report(bad.empty(), "property-suites",
         std::to_string(relocations) + " relocations, " + std::to_string(lifts) + " lifts, " + std::to_string(normals) +
             " normalizations, " + std::to_string(closure_checks) + " closure and " + std::to_string(subset_checks) +
             " subset checks" + (bad.empty() ? "" : ", " + bad));
}

double stretch_budget() {
  if (const char* env = std::getenv("PRIMOGAP_STRETCH_BUDGET")) return std::atof(env);
  return kStretchBudget;
}

}  // namespace

int main() {
  const auto golden = pg::from_csv(pg::testing::read_file(pg::testing::data_path("table1.csv")));

  // Rows 1..20, keeping the cache for the stretch rows.
  pg::WitnessCache cache;
  WitnessAudit audit;
  const auto t0 = Clock::now();
  auto rows = pg::analyze_range(20, cache, {}, [&](const pg::DifferenceReport&) { audit.check(cache); });
  const double t_table = seconds_since(t0);
  const std::size_t bad_row = first_mismatch(rows, golden, 0);
  report(bad_row == rows.size() && t_table <= kTableBudget, "table-rows-1-20",
         "exact match " + std::string(bad_row == rows.size() ? "" : "FAILED at k=" + std::to_string(bad_row + 1) + ", ") +
             "in " + fmt_seconds(t_table) + " (limit " + fmt_seconds(kTableBudget) + ")");

  criterion_oracle();
  criterion_h_values(rows);
  criterion_conjectures(rows);
  criterion_witnesses(audit);
  criterion_properties(rows);

  // Rows 21..30 under the stretch budget.
  const double budget = stretch_budget();
  pg::AnalyzeOptions opts;
  opts.control.deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(budget));
  const auto t1 = Clock::now();
  std::vector<pg::DifferenceReport> stretch;
  std::string stopped;
  try {
    for (std::size_t k = 21; k <= 30; ++k) {
      stretch.push_back(pg::analyze(k, cache, opts));
      std::cerr << "  row " << k << " done after " << fmt_seconds(seconds_since(t1)) << std::endl;
    }
  } catch (const pg::Error& e) {
    stopped = e.what();
  }
  const double t_stretch = seconds_since(t1);
  const std::size_t bad_stretch = first_mismatch(stretch, golden, 20);
  std::string detail = std::to_string(stretch.size()) + "/10 rows completed in " + fmt_seconds(t_stretch) + " (limit " +
                       fmt_seconds(budget) + ")";
  if (bad_stretch != stretch.size()) detail += ", mismatch at k=" + std::to_string(21 + bad_stretch);
  if (!stopped.empty()) detail += ", stopped: " + stopped;
  report(stretch.size() == 10 && bad_stretch == stretch.size(), "table-rows-21-30", detail);

  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " criteria FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}
