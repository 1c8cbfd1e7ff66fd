#include "primogap/oracle.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <thread>

#include "primogap/error.hpp"
#include "primogap/ntcore.hpp"

namespace primogap {

bool GapSpectrum::contains(std::size_t m) const {
  return std::binary_search(gaps.begin(), gaps.end(), m);
}

GapSpectrum make_spectrum(std::size_t k, std::vector<std::size_t> gaps) {
  std::sort(gaps.begin(), gaps.end());
  gaps.erase(std::unique(gaps.begin(), gaps.end()), gaps.end());
  GapSpectrum s{k, std::move(gaps), 0, 0};
  if (s.gaps.empty()) return s;
  s.n_max = s.gaps.back();
  for (std::size_t m = 2; s.contains(m); m += 2) s.n_min = m;
  return s;
}

namespace {

constexpr std::size_t kMaxGap = std::size_t{1} << 16;

// What one segment contributes: its first and last unmarked positions and
// the differences strictly inside it. Neighbouring segments are stitched by
// the difference between one segment's last and the next one's first.
struct SegmentSummary {
  std::optional<std::uint64_t> first;
  std::optional<std::uint64_t> last;
  std::vector<bool> present = std::vector<bool>(kMaxGap / 2 + 1, false);
};

void record(std::vector<bool>& present, std::uint64_t gap) {
  if (gap > kMaxGap || gap % 2 != 0) {
    throw Error(Errc::construction_failed, "unexpected coprime difference " + std::to_string(gap));
  }
  present[gap / 2] = true;
}

// Sieves [lo, hi) marking multiples of every prime.
SegmentSummary sieve_segment(std::uint64_t lo, std::uint64_t hi, const std::vector<Prime>& primes) {
  SegmentSummary out;
  std::vector<char> marked(hi - lo, 0);
  for (Prime p : primes) {
    std::uint64_t first = (lo + p - 1) / p * p;
    for (std::uint64_t v = first; v < hi; v += p) marked[v - lo] = 1;
  }
  for (std::uint64_t i = 0; i < hi - lo; ++i) {
    if (marked[i]) continue;
    std::uint64_t v = lo + i;
    if (out.last) record(out.present, v - *out.last);
    if (!out.first) out.first = v;
    out.last = v;
  }
  return out;
}

}  // namespace

GapSpectrum brute_force_spectrum(std::size_t k, const OracleOptions& options) {
  if (k < 1) throw Error(Errc::invalid_argument, "brute_force_spectrum needs k >= 1");
  if (k > options.max_k) {
    throw Error(Errc::period_too_large,
                "p_" + std::to_string(k) + "# exceeds the oracle cap k <= " + std::to_string(options.max_k));
  }
  if (options.segment_size == 0 || options.periods == 0) {
    throw Error(Errc::invalid_argument, "segment size and period count must be positive");
  }
  const PrimeSet primes = primes_upto_index(k);
  const std::vector<Prime> plist(primes.all().begin(), primes.all().end());
  const auto period = static_cast<std::uint64_t>(primes.product());

  // [1, periods * p_k# + 1] includes the wrap-around pair p_k# - 1, p_k# + 1.
  const std::uint64_t lo = 1;
  const std::uint64_t hi = options.periods * period + 2;
  const std::uint64_t seg = options.segment_size;
  const std::uint64_t n_segments = (hi - lo + seg - 1) / seg;

  std::vector<bool> present(kMaxGap / 2 + 1, false);
  std::optional<std::uint64_t> carry;  // last unmarked position seen so far

  // Segments are sieved in batches of `threads` and merged in order, so the
  // hand-off across boundaries is identical to a sequential scan.
  const unsigned threads = std::max(1u, options.threads);
  std::vector<SegmentSummary> batch(threads);
  for (std::uint64_t base = 0; base < n_segments; base += threads) {
    const std::uint64_t count = std::min<std::uint64_t>(threads, n_segments - base);
    auto run = [&](std::uint64_t j) {
      std::uint64_t s = lo + (base + j) * seg;
      batch[j] = sieve_segment(s, std::min(s + seg, hi), plist);
    };
    if (count == 1) {
      run(0);
    } else {
      std::vector<std::jthread> pool;
      for (std::uint64_t j = 0; j < count; ++j) pool.emplace_back(run, j);
    }
    for (std::uint64_t j = 0; j < count; ++j) {
      SegmentSummary& s = batch[j];
      if (!s.first) continue;
      if (carry) record(present, *s.first - *carry);
      for (std::size_t g = 0; g < present.size(); ++g) {
        if (s.present[g]) present[g] = true;
      }
      carry = s.last;
    }
  }

  std::vector<std::size_t> gaps;
  for (std::size_t g = 0; g < present.size(); ++g) {
    if (present[g]) gaps.push_back(2 * g);
  }
  return make_spectrum(k, std::move(gaps));
}

}  // namespace primogap
