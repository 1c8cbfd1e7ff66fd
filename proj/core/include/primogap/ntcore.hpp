#pragma once

// Arithmetic substrate: primes, primorials and the Chinese Remainder Theorem.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace primogap {

using BigInt = boost::multiprecision::cpp_int;
using Prime = std::uint32_t;

bool is_prime(std::uint64_t n) noexcept;

/// The first k primes p_1 = 2 < p_2 < ... < p_k. Indexing through p() is 1-based.
class PrimeSet {
 public:
  PrimeSet() = default;
  explicit PrimeSet(std::vector<Prime> primes);

  std::size_t size() const noexcept { return primes_.size(); }
  bool empty() const noexcept { return primes_.empty(); }

  /// p_i, 1 <= i <= size().
  Prime p(std::size_t i) const { return primes_.at(i - 1); }

  std::span<const Prime> all() const noexcept { return primes_; }
  /// p_2..p_k, i.e. every prime except 2.
  std::span<const Prime> odd() const noexcept;

  /// p_1..p_j for j <= size().
  PrimeSet prefix(std::size_t j) const;

  BigInt product() const;

  friend bool operator==(const PrimeSet&, const PrimeSet&) = default;

 private:
  std::vector<Prime> primes_;
};

PrimeSet primes_upto_index(std::size_t k);

struct Primorial {
  std::size_t k = 0;
  BigInt value;
};

Primorial primorial(std::size_t k);

struct Congruence {
  BigInt residue;
  BigInt modulus;
};

/// Simultaneous congruences x = residue_i (mod modulus_i). Residues are
/// reduced into [0, modulus_i) on construction of each entry.
class CongruenceSystem {
 public:
  CongruenceSystem() = default;
  CongruenceSystem(std::initializer_list<Congruence> entries);

  CongruenceSystem& add(const BigInt& residue, const BigInt& modulus);

  std::span<const Congruence> entries() const noexcept { return entries_; }
  bool pairwise_coprime() const;

 private:
  std::vector<Congruence> entries_;
};

struct CrtSolution {
  BigInt residue;  // in [0, modulus)
  BigInt modulus;

  friend bool operator==(const CrtSolution&, const CrtSolution&) = default;
};

/// Throws Error(non_coprime_moduli) when two moduli share a factor.
CrtSolution crt_solve(const CongruenceSystem& system);

/// Least non-negative representative of value mod modulus (modulus > 0).
BigInt mod_floor(const BigInt& value, const BigInt& modulus);
std::uint32_t mod_small(const BigInt& value, std::uint32_t modulus);

/// Inverse of a modulo m; requires gcd(a, m) = 1.
BigInt mod_inverse(const BigInt& a, const BigInt& m);

}  // namespace primogap
