#include "primogap/witness.hpp"

#include <algorithm>
#include <string>

#include "primogap/error.hpp"

namespace primogap {

namespace {

CoprimePair checked(CoprimePair pair, const char* op) {
  if (!is_valid_pair(pair)) throw Error(Errc::construction_failed, std::string(op) + " produced an invalid pair");
  return pair;
}

}  // namespace

CoprimePair construct_two(std::size_t k) {
  if (k < 1) throw Error(Errc::invalid_argument, "construct_two needs k >= 1");
  BigInt p = primorial(k).value;
  return checked({p - 1, p + 1, p}, "construct_two");
}

Covering construct_even_2k(std::size_t k) {
  if (k < 1) throw Error(Errc::invalid_argument, "construct_even_2k needs k >= 1");
  const PrimeSet primes = primes_upto_index(k);
  Covering cov{{{2, 1}}, {1, 2 * k - 1}};

  // Odd positions belong to 1 (mod 2). Of the even positions 2, 4, ..., 2x
  // exactly one (2*hole) is still unassigned after choosing x classes; the
  // next prime takes either the hole or the fresh position 2(x+1).
  std::size_t hole = 1;
  for (std::size_t x = 1; x < k; ++x) {
    const Prime p = primes.p(x + 1);
    auto admissible = [&](std::size_t half) { return half % p != k % p; };
    std::size_t half;
    if (x + 1 == k || admissible(hole)) {
      half = hole;
      hole = x + 1;
    } else {
      half = x + 1;
    }
    if (!admissible(half)) {
      throw Error(Errc::construction_failed, "no admissible residue for prime " + std::to_string(p));
    }
    cov.classes.push_back({p, static_cast<std::uint32_t>((2 * half) % p)});
  }

  if (!is_restricted(cov)) {
    throw Error(Errc::construction_failed, "gap " + std::to_string(2 * k) + " covering is not restricted");
  }
  return cov;
}

CoprimePair construct_double_prev_prime(std::size_t k) {
  if (k < 2) throw Error(Errc::invalid_argument, "construct_double_prev_prime needs k >= 2");
  const PrimeSet primes = primes_upto_index(k);
  const BigInt modulus = primes.product();
  if (k == 2) return checked({1, 5, modulus}, "construct_double_prev_prime");

  const Prime prev = primes.p(k - 1);
  CongruenceSystem sys;
  sys.add(0, primes.prefix(k - 2).product());
  sys.add(1, prev);
  sys.add(-1, primes.p(k));
  const BigInt a = crt_solve(sys).residue;

  BigInt x = mod_floor(a - prev, modulus);
  if (x == 0) x = modulus;
  return checked({x, x + 2 * prev, modulus}, "construct_double_prev_prime");
}

Covering lift_to_next_prime(const Covering& cov, Prime next_prime) {
  if (cov.window.start != 1 || !is_restricted(cov)) {
    throw Error(Errc::not_restricted, "lift_to_next_prime needs a restricted covering of <1>_L");
  }
  if (!is_prime(next_prime) || next_prime < 3) {
    throw Error(Errc::invalid_argument, "next prime must be an odd prime");
  }
  const auto boundary = static_cast<std::uint32_t>((cov.window.length + 1) % next_prime);
  std::uint32_t residue = 1;
  while (residue == boundary) ++residue;

  Covering out = cov;
  out.classes.push_back({next_prime, residue});
  if (!is_restricted(out)) throw Error(Errc::construction_failed, "lifted covering is not restricted");
  return out;
}

}  // namespace primogap
