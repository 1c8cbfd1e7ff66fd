#include "primogap/ntcore.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/integer/common_factor.hpp>

#include "primogap/error.hpp"

namespace primogap {

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

PrimeSet::PrimeSet(std::vector<Prime> primes) : primes_(std::move(primes)) {
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    if (!is_prime(primes_[i]) || (i > 0 && primes_[i] <= primes_[i - 1])) {
      throw Error(Errc::invalid_argument, "PrimeSet requires strictly increasing primes");
    }
  }
}

std::span<const Prime> PrimeSet::odd() const noexcept {
  std::span<const Prime> s = primes_;
  if (!s.empty() && s.front() == 2) s = s.subspan(1);
  return s;
}

PrimeSet PrimeSet::prefix(std::size_t j) const {
  if (j > primes_.size()) throw Error(Errc::invalid_argument, "prefix longer than prime set");
  return PrimeSet(std::vector<Prime>(primes_.begin(), primes_.begin() + static_cast<std::ptrdiff_t>(j)));
}

BigInt PrimeSet::product() const {
  BigInt v = 1;
  for (Prime p : primes_) v *= p;
  return v;
}

PrimeSet primes_upto_index(std::size_t k) {
  if (k == 0) throw Error(Errc::invalid_argument, "primes_upto_index needs k >= 1");
  // Sieve [0, limit) and double the limit until k primes have appeared.
  std::size_t limit = 64;
  if (k >= 6) {
    double kd = static_cast<double>(k);
    limit = static_cast<std::size_t>(kd * (std::log(kd) + std::log(std::log(kd)))) + 16;
  }
  for (;;) {
    std::vector<bool> composite(limit, false);
    std::vector<Prime> out;
    out.reserve(k);
    for (std::size_t n = 2; n < limit && out.size() < k; ++n) {
      if (composite[n]) continue;
      out.push_back(static_cast<Prime>(n));
      for (std::size_t m = n * n; m < limit; m += n) composite[m] = true;
    }
    if (out.size() == k) return PrimeSet(std::move(out));
    limit *= 2;
  }
}

Primorial primorial(std::size_t k) {
  return Primorial{k, primes_upto_index(k).product()};
}

BigInt mod_floor(const BigInt& value, const BigInt& modulus) {
  BigInt r = value % modulus;
  if (r < 0) r += modulus;
  return r;
}

std::uint32_t mod_small(const BigInt& value, std::uint32_t modulus) {
  return static_cast<std::uint32_t>(mod_floor(value, BigInt(modulus)));
}

namespace {

// Returns g = gcd(a, b) and x with a*x = g (mod b).
BigInt extended_gcd(const BigInt& a, const BigInt& b, BigInt& x) {
  BigInt old_r = a, r = b;
  BigInt old_s = 1, s = 0;
  while (r != 0) {
    BigInt q = old_r / r;
    BigInt t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  x = old_s;
  return old_r;
}

}  // namespace

BigInt mod_inverse(const BigInt& a, const BigInt& m) {
  if (m == 1) return 0;
  BigInt x;
  BigInt g = extended_gcd(mod_floor(a, m), m, x);
  if (g != 1) throw Error(Errc::invalid_argument, "value is not invertible");
  return mod_floor(x, m);
}

CongruenceSystem::CongruenceSystem(std::initializer_list<Congruence> entries) {
  for (const auto& e : entries) add(e.residue, e.modulus);
}

CongruenceSystem& CongruenceSystem::add(const BigInt& residue, const BigInt& modulus) {
  if (modulus < 1) throw Error(Errc::invalid_argument, "congruence modulus must be positive");
  entries_.push_back({mod_floor(residue, modulus), modulus});
  return *this;
}

bool CongruenceSystem::pairwise_coprime() const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    for (std::size_t j = i + 1; j < entries_.size(); ++j) {
      if (boost::integer::gcd(entries_[i].modulus, entries_[j].modulus) != 1) return false;
    }
  }
  return true;
}

CrtSolution crt_solve(const CongruenceSystem& system) {
  if (!system.pairwise_coprime()) {
    throw Error(Errc::non_coprime_moduli, "CRT moduli must be pairwise coprime");
  }
  BigInt r = 0;
  BigInt m = 1;
  for (const auto& e : system.entries()) {
    // x = r + m*t with m*t = e.residue - r (mod e.modulus).
    BigInt t = mod_floor((e.residue - r) * mod_inverse(m, e.modulus), e.modulus);
    r += m * t;
    m *= e.modulus;
  }
  return {r, m};
}

}  // namespace primogap
