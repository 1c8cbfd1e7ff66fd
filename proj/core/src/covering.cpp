#include "primogap/covering.hpp"

#include <algorithm>
#include <string>

#include "primogap/error.hpp"

namespace primogap {

namespace {

std::string describe(const ResidueClass& c) {
  return std::to_string(c.residue) + " mod " + std::to_string(c.prime);
}

void require_covering(const Covering& cov, const char* op) {
  if (!covers(cov)) throw Error(Errc::not_a_covering, std::string(op) + ": input does not cover its window");
}

}  // namespace

void check_classes(std::span<const ResidueClass> classes) {
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (classes[i].prime < 2 || classes[i].residue >= classes[i].prime) {
      throw Error(Errc::invalid_argument, "residue out of range: " + describe(classes[i]));
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (classes[i].prime == classes[j].prime) {
        throw Error(Errc::duplicate_modulus, "modulus " + std::to_string(classes[i].prime) + " repeated");
      }
    }
  }
}

bool hits(std::span<const ResidueClass> classes, const BigInt& value) {
  return std::any_of(classes.begin(), classes.end(), [&](const ResidueClass& c) {
    return mod_small(value, c.prime) == c.residue;
  });
}

bool covers(std::span<const ResidueClass> classes, const Window& window) {
  check_classes(classes);
  std::vector<bool> covered(window.length, false);
  for (const auto& c : classes) {
    std::uint32_t offset = mod_small(window.start, c.prime);
    std::size_t j = (c.residue + c.prime - offset) % c.prime;
    for (; j < window.length; j += c.prime) covered[j] = true;
  }
  return std::all_of(covered.begin(), covered.end(), [](bool b) { return b; });
}

bool is_restricted(std::span<const ResidueClass> classes, const Window& window) {
  return covers(classes, window) && !hits(classes, window.start - 1) && !hits(classes, window.end());
}

Covering relocate(const Covering& cov, const BigInt& new_start) {
  require_covering(cov, "relocate");
  Covering out{{}, {new_start, cov.window.length}};
  BigInt shift = new_start - cov.window.start;
  for (const auto& c : cov.classes) {
    out.classes.push_back({c.prime, mod_small(shift + c.residue, c.prime)});
  }
  return out;
}

BigInt zero_align(const Covering& cov) {
  require_covering(cov, "zero_align");
  CongruenceSystem sys;
  for (const auto& c : cov.classes) sys.add(cov.window.start - c.residue, c.prime);
  return crt_solve(sys).residue;
}

Covering normalize_nonzero(const Covering& cov) {
  require_covering(cov, "normalize_nonzero");
  BigInt start = cov.window.start;
  while (hits(cov.classes, start - 1)) --start;
  Covering slid{cov.classes, {start, cov.window.length}};
  return relocate(slid, 1);
}

Covering double_lift(const Covering& cov) {
  for (const auto& c : cov.classes) {
    if (c.prime % 2 == 0) throw Error(Errc::even_modulus_present, "double_lift expects odd moduli only");
  }
  require_covering(cov, "double_lift");

  CongruenceSystem sys;
  sys.add(0, 2);
  for (const auto& c : cov.classes) sys.add(2 * cov.window.start - 1, c.prime);

  Covering out{{{2, 0}}, {crt_solve(sys).residue, 2 * cov.window.length + 1}};
  for (const auto& c : cov.classes) out.classes.push_back({c.prime, (2 * c.residue) % c.prime});
  if (!covers(out)) throw Error(Errc::construction_failed, "double_lift produced a non-covering");
  return out;
}

Covering halve_project(const Covering& cov) {
  auto even = std::find_if(cov.classes.begin(), cov.classes.end(),
                           [](const ResidueClass& c) { return c.prime == 2; });
  if (even == cov.classes.end()) throw Error(Errc::no_even_class, "halve_project needs a class mod 2");
  if (cov.window.length % 2 == 0) throw Error(Errc::even_length, "halve_project needs an odd window length");
  require_covering(cov, "halve_project");

  // The members outside the mod-2 class form start+1, start+3, ... when start
  // lies in that class, otherwise start, start+2, ...; the first m of them
  // are covered by the odd classes.
  BigInt odd_start = cov.window.start;
  if (mod_small(odd_start, 2) == even->residue) ++odd_start;

  Covering out;
  out.window.length = (cov.window.length - 1) / 2;
  CongruenceSystem sys;
  for (const auto& c : cov.classes) {
    if (c.prime == 2) continue;
    std::uint32_t half = (c.prime + 1) / 2;  // inverse of 2 mod p
    out.classes.push_back({c.prime, static_cast<std::uint32_t>((std::uint64_t{c.residue} * half) % c.prime)});
    sys.add(odd_start * half, c.prime);
  }
  out.window.start = crt_solve(sys).residue;
  if (!covers(out)) throw Error(Errc::construction_failed, "halve_project produced a non-covering");
  return out;
}

bool is_valid_pair(const CoprimePair& pair) {
  using boost::multiprecision::gcd;
  if (pair.x >= pair.y || pair.modulus < 1) return false;
  if (gcd(pair.x, pair.modulus) != 1 || gcd(pair.y, pair.modulus) != 1) return false;
  for (BigInt z = pair.x + 1; z < pair.y; ++z) {
    if (gcd(z, pair.modulus) == 1) return false;
  }
  return true;
}

CoprimePair covering_to_coprime_pair(const Covering& cov, const PrimeSet& primes) {
  if (cov.window.start != 1) throw Error(Errc::invalid_argument, "covering must start at 1");
  if (!is_restricted(cov)) throw Error(Errc::not_restricted, "covering_to_coprime_pair needs a restricted covering");

  std::vector<Prime> moduli;
  for (const auto& c : cov.classes) moduli.push_back(c.prime);
  std::sort(moduli.begin(), moduli.end());
  if (!std::equal(moduli.begin(), moduli.end(), primes.all().begin(), primes.all().end())) {
    throw Error(Errc::invalid_argument, "covering moduli differ from the prime set");
  }

  CongruenceSystem sys;
  for (const auto& c : cov.classes) sys.add(-BigInt(c.residue), c.prime);
  CrtSolution sol = crt_solve(sys);
  BigInt x = sol.residue == 0 ? sol.modulus : sol.residue;
  CoprimePair pair{x, x + cov.window.length + 1, sol.modulus};
  if (!is_valid_pair(pair)) throw Error(Errc::construction_failed, "derived pair fails the coprimality checks");
  return pair;
}

CoprimePair pair_from_odd_covering(const Covering& odd_cov, const PrimeSet& primes) {
  if (odd_cov.window.start != 1) throw Error(Errc::invalid_argument, "odd covering must start at 1");
  if (!is_restricted(odd_cov)) throw Error(Errc::not_restricted, "odd covering is not restricted");
  return covering_to_coprime_pair(relocate(double_lift(odd_cov), 1), primes);
}

Covering coprime_pair_to_covering(const CoprimePair& pair, const PrimeSet& primes) {
  BigInt product = primes.product();
  if (pair.modulus != product || !is_valid_pair(pair)) {
    throw Error(Errc::invalid_pair, "pair is not a consecutive coprime pair for the prime set");
  }
  Covering out{{}, {1, static_cast<std::size_t>(pair.y - pair.x - 1)}};
  for (Prime p : primes.all()) out.classes.push_back({p, mod_small(-pair.x, p)});
  if (!is_restricted(out)) throw Error(Errc::construction_failed, "coprime_pair_to_covering produced a non-restricted covering");
  return out;
}

}  // namespace primogap
