#pragma once

// Brute-force gap spectrum: sieve one full period of p_k# and record every
// difference between consecutive coprimes.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace primogap {

struct GapSpectrum {
  std::size_t k = 0;
  std::vector<std::size_t> gaps;  // ascending, all even
  std::size_t n_min = 0;
  std::size_t n_max = 0;

  bool contains(std::size_t m) const;
};

struct OracleOptions {
  std::size_t max_k = 9;                      // PeriodTooLarge above this
  std::size_t segment_size = std::size_t{1} << 22;
  std::size_t periods = 1;                    // >1 only for periodicity checks
  unsigned threads = 1;
};

GapSpectrum brute_force_spectrum(std::size_t k, const OracleOptions& options = {});

/// n_min / n_max from an arbitrary gap set (ascending even values).
GapSpectrum make_spectrum(std::size_t k, std::vector<std::size_t> gaps);

}  // namespace primogap
