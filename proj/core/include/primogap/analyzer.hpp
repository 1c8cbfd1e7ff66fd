#pragma once

// Per-k analysis of the gap set D(k): h(k), N_min(k), the non-existent
// differences below h(k), and the conjecture audit over a run of rows.

#include <chrono>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "primogap/agpa.hpp"
#include "primogap/covering.hpp"
#include "primogap/ntcore.hpp"

namespace primogap {

struct DifferenceReport {
  std::size_t k = 0;
  Prime p_k = 0;
  std::optional<std::size_t> h_prev;  // h(k-1); empty for k = 1
  std::size_t n_min = 0;
  std::vector<std::size_t> missing;   // ascending
  std::size_t h = 0;
  std::chrono::microseconds elapsed{0};

  /// Equality on the computed values (elapsed is ignored).
  bool same_values(const DifferenceReport& other) const;
  bool present(std::size_t m) const;
};

/// Verified odd-prime restricted coverings (over p_2..p_level, window
/// <1>_{m/2-1}) keyed by gap m, all valid at one level.
class WitnessCache {
 public:
  std::size_t level() const noexcept { return level_; }
  std::size_t h() const noexcept { return h_; }
  const std::map<std::size_t, Covering>& witnesses() const noexcept { return witnesses_; }
  const Covering* find(std::size_t m) const;

  void reset(std::size_t level, std::size_t h);
  /// Throws not_restricted if the covering does not certify m at this level.
  void insert(std::size_t m, Covering cov);

 private:
  std::size_t level_ = 0;
  std::size_t h_ = 0;
  std::map<std::size_t, Covering> witnesses_;
};

struct AnalyzeOptions {
  unsigned threads = 1;
  bool use_cache = true;  // false: search every gap from scratch
  SearchControl control;
};

/// One row. `cache` should hold level k-1 witnesses; on return it holds level k.
DifferenceReport analyze(std::size_t k, WitnessCache& cache, const AnalyzeOptions& options = {});

/// Rows 1..kmax in order. `on_row` (optional) sees each row as it completes.
std::vector<DifferenceReport> analyze_range(std::size_t kmax, WitnessCache& cache, const AnalyzeOptions& options = {},
                                            const std::function<void(const DifferenceReport&)>& on_row = {});

struct ConjectureFlags {
  std::size_t k = 0;
  bool conjecture_holds = false;   // h(k-1) <= N_min(k)
  bool de_polignac_holds = false;  // 2 p_{k-1} <= N_min(k)
  bool corollary_holds = false;    // 2k <= N_min(k)
  /// conjecture_holds agrees with "every gap missing at k-1 occurs at k".
  bool equivalence_holds = false;
};

/// Flags for every k > 1. Reports must be rows 1, 2, 3, ... in order.
std::vector<ConjectureFlags> check_conjectures(const std::vector<DifferenceReport>& reports);

}  // namespace primogap
