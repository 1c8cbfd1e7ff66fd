#include "primogap/analyzer.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "primogap/error.hpp"
#include "primogap/witness.hpp"

namespace primogap {

bool DifferenceReport::same_values(const DifferenceReport& o) const {
  return k == o.k && p_k == o.p_k && h_prev == o.h_prev && n_min == o.n_min && missing == o.missing && h == o.h;
}

bool DifferenceReport::present(std::size_t m) const {
  return m >= 2 && m % 2 == 0 && m <= h && !std::binary_search(missing.begin(), missing.end(), m);
}

const Covering* WitnessCache::find(std::size_t m) const {
  auto it = witnesses_.find(m);
  return it == witnesses_.end() ? nullptr : &it->second;
}

void WitnessCache::reset(std::size_t level, std::size_t h) {
  level_ = level;
  h_ = h;
  witnesses_.clear();
}

void WitnessCache::insert(std::size_t m, Covering cov) {
  if (m < 2 || m % 2 != 0 || cov.window.start != 1 || cov.window.length != m / 2 - 1 ||
      cov.classes.size() + 1 != level_ || !is_restricted(cov)) {
    throw Error(Errc::not_restricted, "cache entry for gap " + std::to_string(m) + " is not a valid witness");
  }
  witnesses_.insert_or_assign(m, std::move(cov));
}

namespace {

// Runs fn(0..count-1) on up to `threads` workers; rethrows the first failure.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < std::min<std::size_t>(threads, count); ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = count;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

std::size_t previous_h(std::size_t k, const WitnessCache& cache, const SearchControl& control) {
  if (cache.level() == k - 1 && cache.h() != 0) return cache.h();
  if (k - 1 == 1) return 2;
  PrimeSet prev = primes_upto_index(k - 1);
  return 2 * (max_cover(prev, prev.p(k - 2) - 1, control).length + 1);
}

// Outcome of looking at one gap m above h(k-1).
struct UpperProbe {
  bool coverable = false;            // <1>_{m/2-1} has a nonzero-residue covering
  std::optional<Covering> witness;   // restricted covering for m, if any
};

// Probes coverability of <1>_{m/2-1} first: when that fails, m and every
// larger gap are absent and no restricted search is needed. A covering that
// happens to leave m/2 unhit already certifies m.
UpperProbe probe_upper_gap(std::size_t m, const PrimeSet& primes, const SearchControl& control) {
  const std::size_t length = m / 2 - 1;
  SearchProblem problem;
  problem.length = length;
  for (Prime p : primes.odd()) {
    problem.primes.push_back(p);
    problem.forbidden.push_back({0});
  }
  SearchOutcome out = solve(problem, control);
  if (out.status == SearchStatus::cancelled) {
    throw Error(Errc::budget_exceeded, "coverability probe at length " + std::to_string(length) + " cancelled");
  }
  UpperProbe probe;
  if (out.status == SearchStatus::exhausted) return probe;
  probe.coverable = true;

  Covering cov{{}, {1, length}};
  for (Prime p : problem.primes) {
    auto it = std::find_if(out.classes.begin(), out.classes.end(), [p](const ResidueClass& c) { return c.prime == p; });
    std::uint32_t r = 1;
    if (it != out.classes.end()) {
      r = it->residue;
    } else {
      while (r == (length + 1) % p) ++r;
    }
    cov.classes.push_back({p, r});
  }
  if (is_restricted(cov)) {
    probe.witness = std::move(cov);
  } else {
    probe.witness = gap_membership(m, primes, control);
  }
  return probe;
}

}  // namespace

DifferenceReport analyze(std::size_t k, WitnessCache& cache, const AnalyzeOptions& options) {
  if (k < 1) throw Error(Errc::invalid_argument, "analyze needs k >= 1");
  const auto started = std::chrono::steady_clock::now();
  DifferenceReport report;
  report.k = k;

  if (k == 1) {
    // D(1) = {2}; the gap-2 witness over no odd primes is the empty covering of <1>_0.
    report.p_k = 2;
    report.n_min = report.h = 2;
    cache.reset(1, 2);
    cache.insert(2, Covering{{}, {1, 0}});
    report.elapsed = std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - started);
    return report;
  }

  const PrimeSet primes = primes_upto_index(k);
  const Prime next_prime = primes.p(k);
  const std::size_t h_prev = previous_h(k, cache, options.control);
  const bool cache_usable = options.use_cache && cache.level() == k - 1;
  report.p_k = next_prime;
  report.h_prev = h_prev;

  std::map<std::size_t, std::optional<Covering>> found;

  // Gaps up to h(k-1): lift what k-1 already certified, search the rest.
  std::vector<std::size_t> fresh;
  for (std::size_t m = 2; m <= h_prev; m += 2) {
    const Covering* w = cache_usable ? cache.find(m) : nullptr;
    if (w) {
      found[m] = lift_to_next_prime(*w, next_prime);
    } else {
      fresh.push_back(m);
    }
  }
  std::vector<std::optional<Covering>> fresh_results(fresh.size());
  parallel_for(fresh.size(), options.threads, [&](std::size_t i) {
    fresh_results[i] = gap_membership(fresh[i], primes, options.control);
  });
  for (std::size_t i = 0; i < fresh.size(); ++i) found[fresh[i]] = std::move(fresh_results[i]);

  // Above h(k-1), walk upward until the first uncoverable length, which
  // fixes h(k) = m - 2. Batches of `threads` gaps are evaluated
  // speculatively and consumed in order.
  std::size_t h = 0;
  const unsigned batch = std::max(1u, options.threads);
  for (std::size_t base = h_prev + 2; h == 0; base += 2 * batch) {
    std::vector<UpperProbe> results(batch);
    parallel_for(batch, options.threads, [&](std::size_t i) {
      results[i] = probe_upper_gap(base + 2 * i, primes, options.control);
    });
    for (std::size_t i = 0; i < batch && h == 0; ++i) {
      const std::size_t m = base + 2 * i;
      if (!results[i].coverable) {
        h = m - 2;
        break;
      }
      found[m] = std::move(results[i].witness);
    }
  }
  if (!found.count(h) || !found[h]) {
    throw Error(Errc::construction_failed, "h(" + std::to_string(k) + ") = " + std::to_string(h) + " has no witness");
  }

  cache.reset(k, h);
  bool prefix = true;
  for (auto& [m, cov] : found) {
    if (m > h) break;
    if (cov) {
      if (prefix) report.n_min = m;
      cache.insert(m, std::move(*cov));
    } else {
      prefix = false;
      report.missing.push_back(m);
    }
  }
  report.h = h;
  report.elapsed = std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - started);
  return report;
}

std::vector<DifferenceReport> analyze_range(std::size_t kmax, WitnessCache& cache, const AnalyzeOptions& options,
                                            const std::function<void(const DifferenceReport&)>& on_row) {
  std::vector<DifferenceReport> rows;
  cache.reset(0, 0);
  for (std::size_t k = 1; k <= kmax; ++k) {
    rows.push_back(analyze(k, cache, options));
    if (on_row) on_row(rows.back());
  }
  return rows;
}

std::vector<ConjectureFlags> check_conjectures(const std::vector<DifferenceReport>& reports) {
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (reports[i].k != i + 1) {
      throw Error(Errc::gap_in_report_sequence,
                  "expected row " + std::to_string(i + 1) + ", got " + std::to_string(reports[i].k));
    }
  }
  std::vector<ConjectureFlags> flags;
  for (std::size_t i = 1; i < reports.size(); ++i) {
    const DifferenceReport& prev = reports[i - 1];
    const DifferenceReport& row = reports[i];
    ConjectureFlags f;
    f.k = row.k;
    f.conjecture_holds = prev.h <= row.n_min;
    f.de_polignac_holds = 2 * std::size_t{prev.p_k} <= row.n_min;
    f.corollary_holds = 2 * row.k <= row.n_min;
    const bool recovered = std::all_of(prev.missing.begin(), prev.missing.end(),
                                       [&](std::size_t m) { return row.present(m); });
    f.equivalence_holds = f.conjecture_holds == recovered;
    flags.push_back(f);
  }
  return flags;
}

}  // namespace primogap
