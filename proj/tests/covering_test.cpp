#include "primogap/covering.hpp"

#include <random>

#include <gtest/gtest.h>

#include "brute.hpp"
#include "primogap/agpa.hpp"
#include "primogap/error.hpp"

namespace primogap {
namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no Error thrown";
  return Errc::invalid_argument;
}

TEST(Covers, SmallExamples) {
  std::vector<ResidueClass> cls{{3, 1}, {5, 3}};
  EXPECT_TRUE(covers(cls, Window{3, 2}));  // 3 = 3 mod 5, 4 = 1 mod 3
  EXPECT_FALSE(covers(cls, Window{3, 3}));
  EXPECT_TRUE(covers(cls, Window{5, 0}));  // empty window
}

TEST(Covers, DuplicateModulusRejected) {
  std::vector<ResidueClass> cls{{3, 1}, {3, 2}};
  EXPECT_EQ(code_of([&] { covers(cls, Window{1, 2}); }), Errc::duplicate_modulus);
  std::vector<ResidueClass> bad{{5, 5}};
  EXPECT_EQ(code_of([&] { covers(bad, Window{1, 1}); }), Errc::invalid_argument);
}

TEST(IsRestricted, BoundaryHitDisqualifies) {
  // 1..3 is covered by 1 mod 2, 2 mod 3, but 4 mod 7 hits the right boundary 4.
  std::vector<ResidueClass> cls{{2, 1}, {3, 2}, {7, 4}};
  EXPECT_TRUE(covers(cls, Window{1, 3}));
  EXPECT_FALSE(is_restricted(cls, Window{1, 3}));
  std::vector<ResidueClass> ok{{2, 1}, {3, 2}, {7, 5}};
  EXPECT_TRUE(is_restricted(ok, Window{1, 3}));
}

TEST(ZeroAlign, KnownValue) {
  Covering c{{{2, 1}, {3, 2}, {5, 4}}, Window{1, 5}};
  ASSERT_TRUE(covers(c));
  EXPECT_EQ(zero_align(c), 2);
  Covering z = relocate(c, zero_align(c));
  for (auto cls : z.classes) EXPECT_EQ(cls.residue, 0u);
  EXPECT_TRUE(covers(z));
}

TEST(Relocate, ShiftsResidues) {
  Covering c{{{3, 1}, {5, 3}}, Window{3, 2}};
  Covering r = relocate(c, 1);
  EXPECT_EQ(r.window, (Window{1, 2}));
  EXPECT_EQ(r.classes[0], (ResidueClass{3, 2}));
  EXPECT_EQ(r.classes[1], (ResidueClass{5, 1}));
  EXPECT_TRUE(covers(r));
}

// Random covering of a short window over a few small primes.
Covering random_covering(std::mt19937& rng, std::size_t max_k, std::size_t max_len) {
  auto primes = testing::first_primes(1 + rng() % max_k);
  std::vector<ResidueClass> cls;
  for (auto p : primes) cls.push_back({p, static_cast<std::uint32_t>(rng() % p)});
  BigInt start = static_cast<std::int64_t>(rng() % 1000) - 500;
  std::size_t length = 0;
  while (length < max_len && hits(cls, start + length)) ++length;
  return {cls, Window{start, length}};
}

TEST(Relocate, RoundTripProperty) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    Covering c = random_covering(rng, 6, 30);
    ASSERT_TRUE(covers(c));
    BigInt target = static_cast<std::int64_t>(rng() % 100000) - 50000;
    Covering moved = relocate(c, target);
    EXPECT_TRUE(covers(moved));
    EXPECT_EQ(moved.window.start, target);
    EXPECT_EQ(relocate(moved, c.window.start), c);
  }
}

TEST(NormalizeNonzero, Postconditions) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    Covering c = random_covering(rng, 6, 30);
    if (c.window.length == 0) continue;
    BigInt product = 1;
    for (auto cls : c.classes) product *= cls.prime;
    if (c.window.length >= product) continue;  // whole line covered: no left edge
    Covering n = normalize_nonzero(c);
    EXPECT_EQ(n.window.start, 1);
    EXPECT_EQ(n.window.length, c.window.length);
    EXPECT_TRUE(covers(n));
    for (auto cls : n.classes) EXPECT_NE(cls.residue, 0u);
    EXPECT_FALSE(hits(n.classes, 0));
  }
}

TEST(DoubleLift, KnownExample) {
  // 1 mod 3 covers <1>_1; lifting covers <b>_3 with b even.
  Covering odd{{{3, 1}}, Window{1, 1}};
  Covering full = double_lift(odd);
  EXPECT_EQ(full.window.length, 3u);
  EXPECT_TRUE(covers(full));
  EXPECT_EQ(full.window.start % 2, 0);
  EXPECT_EQ(full.classes.front(), (ResidueClass{2, 0}));
}

TEST(DoubleLift, RoundTripProperty) {
  std::mt19937 rng(13);
  int checked = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    auto all = testing::first_primes(2 + rng() % 5);
    std::vector<ResidueClass> cls;
    for (std::size_t i = 1; i < all.size(); ++i) cls.push_back({all[i], static_cast<std::uint32_t>(rng() % all[i])});
    BigInt start = rng() % 500;
    std::size_t length = 0;
    while (length < 30 && hits(cls, start + length)) ++length;
    Covering odd{cls, Window{start, length}};
    Covering full = double_lift(odd);
    ASSERT_TRUE(covers(full));
    EXPECT_EQ(full.window.length, 2 * length + 1);
    Covering back = halve_project(full);
    EXPECT_TRUE(covers(back));
    EXPECT_EQ(back.window.length, length);
    // Same covering up to a period shift of the start.
    BigInt period = 1;
    for (auto c : cls) period *= c.prime;
    EXPECT_EQ(relocate(back, start), odd);
    EXPECT_EQ(mod_floor(back.window.start - start, period), 0);
    ++checked;
  }
  EXPECT_GT(checked, 0);
}

TEST(HalveProject, RejectsMissingEvenClass) {
  Covering c{{{3, 1}}, Window{1, 1}};
  EXPECT_EQ(code_of([&] { halve_project(c); }), Errc::no_even_class);
}

TEST(HalveProject, RejectsEvenLength) {
  Covering c{{{2, 0}, {3, 1}}, Window{0, 2}};
  ASSERT_TRUE(covers(c));
  EXPECT_EQ(code_of([&] { halve_project(c); }), Errc::even_length);
}

TEST(DoubleLift, RejectsEvenModulus) {
  Covering c{{{2, 1}}, Window{1, 1}};
  EXPECT_EQ(code_of([&] { double_lift(c); }), Errc::even_modulus_present);
}

TEST(CoprimePair, FromCoveringKnownValue) {
  // {1 mod 2, 2 mod 3} covers <1>_3 restricted (0 and 4 unhit) -> gap 4.
  PrimeSet ps = primes_upto_index(2);
  Covering c{{{2, 1}, {3, 2}}, Window{1, 3}};
  CoprimePair pair = covering_to_coprime_pair(c, ps);
  EXPECT_EQ(pair.gap(), 4);
  EXPECT_EQ(pair.x, 1);  // x = -1 mod 2, -2 mod 3
  EXPECT_TRUE(is_valid_pair(pair));
}

TEST(CoprimePair, RequiresRestricted) {
  PrimeSet ps = primes_upto_index(2);
  Covering c{{{2, 1}, {3, 0}}, Window{1, 1}};
  EXPECT_EQ(code_of([&] { covering_to_coprime_pair(c, ps); }), Errc::not_restricted);
  Covering notcov{{{2, 1}, {3, 0}}, Window{1, 3}};
  EXPECT_EQ(code_of([&] { covering_to_coprime_pair(notcov, ps); }), Errc::not_restricted);
}

TEST(CoprimePair, RoundTripOverAllPairsForSmallK) {
  for (std::size_t k = 1; k <= 5; ++k) {
    PrimeSet ps = primes_upto_index(k);
    const std::uint64_t M = static_cast<std::uint64_t>(ps.product());
    std::uint64_t last = 1;
    for (std::uint64_t x = 2; x <= M + 1; ++x) {
      if (std::gcd(x, M) != 1) continue;
      CoprimePair pair{last, x, M};
      ASSERT_TRUE(is_valid_pair(pair));
      Covering c = coprime_pair_to_covering(pair, ps);
      EXPECT_TRUE(is_restricted(c));
      EXPECT_EQ(c.window.length + 1, x - last);
      CoprimePair again = covering_to_coprime_pair(c, ps);
      EXPECT_EQ(again.gap(), pair.gap());
      EXPECT_EQ(mod_floor(again.x - pair.x, ps.product()), 0);
      last = x;
    }
  }
}

TEST(CoprimePair, InvalidPairsRejected) {
  PrimeSet ps = primes_upto_index(3);
  EXPECT_FALSE(is_valid_pair({1, 11, 30}));  // 7 lies between
  EXPECT_FALSE(is_valid_pair({2, 7, 30}));
  EXPECT_TRUE(is_valid_pair({1, 7, 30}));
  EXPECT_EQ(code_of([&] { coprime_pair_to_covering({1, 11, 30}, ps); }), Errc::invalid_pair);
}

TEST(PairFromOddCovering, GapIsTwiceLengthPlusTwo) {
  PrimeSet ps = primes_upto_index(6);
  auto cov = gap_membership(22, ps);
  ASSERT_TRUE(cov.has_value());
  CoprimePair pair = pair_from_odd_covering(*cov, ps);
  EXPECT_EQ(pair.gap(), 22);
  EXPECT_TRUE(is_valid_pair(pair));
}

}  // namespace
}  // namespace primogap
