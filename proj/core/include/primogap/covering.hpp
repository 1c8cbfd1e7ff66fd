#pragma once

// Coverings of windows of consecutive integers by residue classes modulo
// pairwise-distinct primes, and the transformations between them.

#include <cstddef>
#include <span>
#include <vector>

#include "primogap/ntcore.hpp"

namespace primogap {

/// The residue class `residue (mod prime)`, 0 <= residue < prime.
struct ResidueClass {
  Prime prime = 2;
  std::uint32_t residue = 0;

  friend bool operator==(const ResidueClass&, const ResidueClass&) = default;
};

/// <start>_length: the integers start, start+1, ..., start+length-1.
/// A zero-length window is the empty sequence.
struct Window {
  BigInt start = 1;
  std::size_t length = 0;

  BigInt end() const { return start + length; }  // one past the last member

  friend bool operator==(const Window&, const Window&) = default;
};

struct Covering {
  std::vector<ResidueClass> classes;
  Window window;

  friend bool operator==(const Covering&, const Covering&) = default;
};

/// x < y consecutive coprimes to `modulus`.
struct CoprimePair {
  BigInt x;
  BigInt y;
  BigInt modulus;

  BigInt gap() const { return y - x; }

  friend bool operator==(const CoprimePair&, const CoprimePair&) = default;
};

/// True iff some class contains `value`. Classes must have distinct moduli.
bool hits(std::span<const ResidueClass> classes, const BigInt& value);

/// Every member of `window` lies in some class. Throws duplicate_modulus.
bool covers(std::span<const ResidueClass> classes, const Window& window);
inline bool covers(const Covering& c) { return covers(c.classes, c.window); }

/// covers() plus: neither start-1 nor start+length is hit by any class.
bool is_restricted(std::span<const ResidueClass> classes, const Window& window);
inline bool is_restricted(const Covering& c) { return is_restricted(c.classes, c.window); }

/// Moves a covering to <new_start>_m by shifting every residue by new_start - start.
Covering relocate(const Covering& cov, const BigInt& new_start);

/// The start b in [0, prod p_i) such that the all-zero classes cover <b>_m.
BigInt zero_align(const Covering& cov);

/// Slides the window left while start-1 is still covered, then relocates to
/// <1>_m. The result never uses residue 0.
Covering normalize_nonzero(const Covering& cov);

/// Odd-prime covering of <a>_m  ->  covering of <b>_{2m+1} that adds 0 (mod 2).
Covering double_lift(const Covering& cov);

/// Inverse of double_lift: drops the class mod 2 and halves the residues.
Covering halve_project(const Covering& cov);

/// Restricted covering of <1>_L by exactly p_1..p_k  ->  coprime pair with gap L+1.
/// x is the least positive solution of x = -a_i (mod p_i).
CoprimePair covering_to_coprime_pair(const Covering& cov, const PrimeSet& primes);

/// Restricted odd-prime covering of <1>_L by exactly p_2..p_k  ->  coprime pair
/// with gap 2L+2 (double_lift, relocate to 1, then covering_to_coprime_pair).
CoprimePair pair_from_odd_covering(const Covering& odd_cov, const PrimeSet& primes);

/// Consecutive coprimes (x, y) to prod(primes)  ->  restricted covering of <1>_{y-x-1}.
Covering coprime_pair_to_covering(const CoprimePair& pair, const PrimeSet& primes);

/// gcd(x, M) = gcd(y, M) = 1, x < y, and every z strictly between shares a factor with M.
bool is_valid_pair(const CoprimePair& pair);

/// Throws duplicate_modulus if two classes share a prime, invalid_argument on a bad residue.
void check_classes(std::span<const ResidueClass> classes);

}  // namespace primogap
