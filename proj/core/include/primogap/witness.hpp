#pragma once

// Explicit, self-verifying witnesses for gaps that always occur between
// consecutive coprimes to p_k#.

#include <cstddef>

#include "primogap/covering.hpp"
#include "primogap/ntcore.hpp"

namespace primogap {

/// (p_k# - 1, p_k# + 1): gap 2 for every k >= 1.
CoprimePair construct_two(std::size_t k);

/// Restricted covering of <1>_{2k-1} by p_1..p_k, i.e. gap 2k.
Covering construct_even_2k(std::size_t k);

/// Pair with gap 2 p_{k-1} for k >= 2, with x in [1, p_k#].
CoprimePair construct_double_prev_prime(std::size_t k);

/// Appends a class modulo `next_prime` to a restricted covering of <1>_L
/// without touching its boundary positions 0 and L+1. Works on both the full
/// form (p_1..p_k) and the odd-prime form (p_2..p_k).
Covering lift_to_next_prime(const Covering& cov, Prime next_prime);

}  // namespace primogap
