#pragma once

// Exhaustive restricted-covering search (Adapted Greedy Permutation Algorithm).
//
// Positions 1..length must each be hit by one residue class per odd prime,
// with every prime's forbidden residues excluded. The search is complete:
// "no covering" is only reported after the whole space has been refuted.

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stop_token>
#include <vector>

#include "primogap/covering.hpp"
#include "primogap/ntcore.hpp"

namespace primogap {

struct SearchProblem {
  std::size_t length = 0;
  std::vector<Prime> primes;                         // odd, distinct
  std::vector<std::vector<std::uint32_t>> forbidden;  // per prime, each < prime

  /// Throws invalid_argument unless the invariants hold.
  void validate() const;
};

/// Cooperative cancellation for long searches.
struct SearchControl {
  std::stop_token stop;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  std::uint64_t node_limit = 0;  // 0 = unlimited; reported as cancelled
  /// solve() may race a local search against the exhaustive one. Presence
  /// answers are unaffected; only which witness comes back may differ.
  bool local_search = true;

  bool expired() const;
};

enum class SearchStatus { found, exhausted, cancelled };

struct SearchOutcome {
  SearchStatus status = SearchStatus::exhausted;
  /// Classes chosen during descent (found only). Primes never selected are
  /// absent; any admissible residue may be assigned to them.
  std::vector<ResidueClass> classes;
  std::uint64_t nodes = 0;
};

SearchOutcome run_search(const SearchProblem& problem, const SearchControl& control = {});

/// Completes search with no cancellation: an assignment, or nullopt when none exists.
std::optional<std::vector<ResidueClass>> search(const SearchProblem& problem);

struct LocalSearchOptions {
  std::uint64_t seed = 1;
  std::uint64_t flips_per_restart = 1'000'000;
  std::uint64_t max_flips = 20'000'000;
};

/// Incomplete weighted tabu walk over full assignments. Returns a residue for every
/// prime (in problem order) when it reaches a covering, nullopt when it gives
/// up or `control` fires. Never proves absence.
std::optional<std::vector<ResidueClass>> local_search(const SearchProblem& problem, const LocalSearchOptions& options,
                                                      const SearchControl& control = {});

/// Pieces of a problem that is symmetric under the reflection x -> half - x
/// (length half - 1, every forbidden set closed under r -> half - r). Every
/// solution or its mirror image solves one of the pieces, so searching the
/// pieces in turn is still complete. The first `max_primes` primes are used
/// to break the symmetry. Throws invalid_argument if the problem is not
/// symmetric.
std::vector<SearchProblem> mirror_split(const SearchProblem& problem, std::size_t half, std::size_t max_primes = 6);

/// run_search, raced against local_search when control.local_search is set
/// and a short exhaustive warm-up did not settle the problem. "exhausted" only
/// ever comes from the complete search. With `pieces` (from mirror_split) the
/// complete search runs over the pieces instead of the whole problem.
SearchOutcome solve(const SearchProblem& problem, const SearchControl& control = {},
                    const std::vector<SearchProblem>& pieces = {});

/// L = m/2 - 1 over p_2..p_k with residues 0 and m/2 excluded for every prime.
SearchProblem gap_problem(std::size_t m, const PrimeSet& primes);

/// Smallest residue of p outside `forbidden`.
std::uint32_t smallest_admissible(Prime p, const std::vector<std::uint32_t>& forbidden);

/// Odd-prime restricted covering of <1>_{m/2-1} over all of p_2..p_k when
/// m is in D(k), nullopt otherwise. Requires even m >= 2 and k >= 2.
/// Throws odd_gap for odd m, budget_exceeded when `control` fires.
std::optional<Covering> gap_membership(std::size_t m, const PrimeSet& primes,
                                       const SearchControl& control = {});
std::optional<Covering> gap_membership(std::size_t m, std::size_t k);

struct MaxCover {
  std::size_t length = 0;  // L_max; h(k) = 2 (L_max + 1)
  Covering witness;        // odd-prime covering of <1>_{L_max}, residues nonzero
};

/// Largest L with an odd-prime covering of <1>_L by p_2..p_k using nonzero
/// residues. Probes upward from `probe_from` (any L known to be coverable,
/// e.g. h(k-1)/2 - 1) and stops at the first failure.
MaxCover max_cover(const PrimeSet& primes, std::size_t probe_from, const SearchControl& control = {});
std::size_t max_cover_length(std::size_t k);

}  // namespace primogap
