#include "primogap/oracle.hpp"

#include <gtest/gtest.h>

#include "brute.hpp"
#include "primogap/error.hpp"

namespace primogap {
namespace {

std::vector<std::size_t> as_vector(const std::set<std::size_t>& s) { return {s.begin(), s.end()}; }

TEST(BruteForceSpectrum, MatchesGcdScan) {
  for (std::size_t k = 1; k <= 6; ++k) {
    GapSpectrum s = brute_force_spectrum(k);
    EXPECT_EQ(s.gaps, as_vector(testing::scan_gaps(k))) << k;
  }
}

TEST(BruteForceSpectrum, KnownSpectrumAtSix) {
  GapSpectrum s = brute_force_spectrum(6);
  std::vector<std::size_t> expected{2, 4, 6, 8, 10, 12, 14, 16, 18, 22};
  EXPECT_EQ(s.gaps, expected);
  EXPECT_EQ(s.n_min, 18u);
  EXPECT_EQ(s.n_max, 22u);
  EXPECT_FALSE(s.contains(20));
}

TEST(BruteForceSpectrum, OnlyEvenGapsAboveFirstRow) {
  EXPECT_EQ(brute_force_spectrum(1).gaps, (std::vector<std::size_t>{2}));
  for (std::size_t k = 2; k <= 8; ++k) {
    for (auto g : brute_force_spectrum(k).gaps) EXPECT_EQ(g % 2, 0u);
  }
}

TEST(BruteForceSpectrum, SegmentationDoesNotMatter) {
  for (std::size_t k = 3; k <= 7; ++k) {
    GapSpectrum whole = brute_force_spectrum(k);
    for (std::size_t seg : {7u, 64u, 1000u}) {
      OracleOptions opt;
      opt.segment_size = seg;
      opt.threads = 2;
      EXPECT_EQ(brute_force_spectrum(k, opt).gaps, whole.gaps) << k << " " << seg;
    }
  }
}

TEST(BruteForceSpectrum, Periodicity) {
  for (std::size_t k = 1; k <= 5; ++k) {
    OracleOptions opt;
    opt.periods = 2;
    EXPECT_EQ(brute_force_spectrum(k, opt).gaps, brute_force_spectrum(k).gaps);
  }
}

TEST(BruteForceSpectrum, PeriodTooLarge) {
  try {
    brute_force_spectrum(10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::period_too_large);
  }
  EXPECT_THROW(brute_force_spectrum(0), Error);
}

TEST(MakeSpectrum, NMinIsLastUnbrokenEven) {
  GapSpectrum s = make_spectrum(14, {2, 4, 6, 8, 84, 90});
  EXPECT_EQ(s.n_min, 8u);
  EXPECT_EQ(s.n_max, 90u);
}

}  // namespace
}  // namespace primogap
