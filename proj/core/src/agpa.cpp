#include "primogap/agpa.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <functional>
#include <string>

#include "primogap/error.hpp"

namespace primogap {

void SearchProblem::validate() const {
  if (forbidden.size() != primes.size()) {
    throw Error(Errc::invalid_argument, "forbidden list must have one entry per prime");
  }
  if (primes.size() > 64) throw Error(Errc::invalid_argument, "at most 64 primes per search");
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (primes[i] % 2 == 0 || !is_prime(primes[i])) {
      throw Error(Errc::invalid_argument, "search primes must be odd primes");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (primes[i] == primes[j]) throw Error(Errc::invalid_argument, "search primes must be distinct");
    }
    for (std::uint32_t r : forbidden[i]) {
      if (r >= primes[i]) throw Error(Errc::invalid_argument, "forbidden residue out of range");
    }
  }
}

bool SearchControl::expired() const {
  if (stop.stop_requested()) return true;
  return deadline && std::chrono::steady_clock::now() >= *deadline;
}

namespace {

constexpr std::int16_t kExcluded = -16384;
constexpr std::uint64_t kPollInterval = 1u << 12;

template <std::size_t W>
struct Bits {
  std::array<std::uint64_t, W> w{};

  void set(std::size_t i) { w[i / 64] |= std::uint64_t{1} << (i % 64); }
  int count() const {
    int n = 0;
    for (auto x : w) n += std::popcount(x);
    return n;
  }
  bool none() const {
    for (auto x : w) {
      if (x) return false;
    }
    return true;
  }
  Bits operator&(const Bits& o) const {
    Bits r;
    for (std::size_t i = 0; i < W; ++i) r.w[i] = w[i] & o.w[i];
    return r;
  }
  Bits and_not(const Bits& o) const {
    Bits r;
    for (std::size_t i = 0; i < W; ++i) r.w[i] = w[i] & ~o.w[i];
    return r;
  }
  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t i = 0; i < W; ++i) {
      for (std::uint64_t x = w[i]; x; x &= x - 1) fn(i * 64 + static_cast<std::size_t>(std::countr_zero(x)));
    }
  }
};

struct Candidate {
  std::uint16_t prime_index;
  std::uint16_t residue;
};

// State at a node: the uncovered bitmap (bit j <=> position j+1), the set of
// unassigned primes, and a frequency table holding, for each unassigned
// prime and residue, how many uncovered positions that residue would hit.
// Excluded residues (forbidden, or discarded earlier at an ancestor level)
// hold a negative sentinel. Tables are copied on descent.
template <std::size_t W>
class Engine {
 public:
  Engine(const SearchProblem& problem, const SearchControl& control)
      : problem_(problem), control_(control), n_(problem.primes.size()), length_(problem.length) {
    offset_.resize(n_ + 1, 0);
    for (std::size_t i = 0; i < n_; ++i) offset_[i + 1] = offset_[i] + problem.primes[i];
    table_size_ = offset_[n_];
    max_prime_ = n_ ? *std::max_element(problem.primes.begin(), problem.primes.end()) : 0;

    masks_.resize(table_size_);
    // residue_of_[j * length + pos] = (pos + 1) mod p_j
    residue_of_.resize(n_ * length_);
    for (std::size_t i = 0; i < n_; ++i) {
      Prime p = problem.primes[i];
      for (std::size_t pos = 0; pos < length_; ++pos) {
        std::uint32_t r = static_cast<std::uint32_t>((pos + 1) % p);
        residue_of_[i * length_ + pos] = static_cast<std::uint16_t>(r);
        masks_[offset_[i] + r].set(pos);
      }
    }

    tables_.resize((n_ + 1) * table_size_);
    best_.resize((n_ + 1) * 64);
    hist_offset_.resize(n_ + 1, 0);
    for (std::size_t i = 0; i < n_; ++i) hist_offset_[i + 1] = hist_offset_[i] + length_ / problem.primes[i] + 2;
    hist_size_ = hist_offset_[n_];
    hists_.resize((n_ + 1) * hist_size_);
    selected_.reserve(n_);
  }

  SearchOutcome run() {
    SearchOutcome out;
    Bits<W> all;
    for (std::size_t pos = 0; pos < length_; ++pos) all.set(pos);

    std::int16_t* root = table(0);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::uint32_t r = 0; r < problem_.primes[i]; ++r) {
        root[offset_[i] + r] = static_cast<std::int16_t>(masks_[offset_[i] + r].count());
      }
      for (std::uint32_t r : problem_.forbidden[i]) root[offset_[i] + r] = kExcluded;
    }
    std::uint64_t remaining = n_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_) - 1;
    std::int16_t* root_hist = hist(0);
    std::fill(root_hist, root_hist + hist_size_, 0);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::uint32_t r = 0; r < problem_.primes[i]; ++r) {
        if (root[offset_[i] + r] >= 0) ++root_hist[hist_offset_[i] + static_cast<std::size_t>(root[offset_[i] + r])];
      }
      best_of(0)[i] = prime_max(root, i);
    }

    bool found = descend(all, remaining, 0);
    out.nodes = nodes_;
    if (cancelled_) {
      out.status = SearchStatus::cancelled;
    } else if (found) {
      out.status = SearchStatus::found;
      for (auto it = selected_.rbegin(); it != selected_.rend(); ++it) {
        out.classes.push_back({problem_.primes[it->prime_index], it->residue});
      }
    } else {
      out.status = SearchStatus::exhausted;
    }
    return out;
  }

 private:
  std::int16_t* table(std::size_t depth) { return tables_.data() + depth * table_size_; }

  int prime_max(const std::int16_t* t, std::size_t i) const {
    int best = 0;
    const std::int16_t* row = t + offset_[i];
    for (Prime r = 0; r < problem_.primes[i]; ++r) best = std::max<int>(best, row[r]);
    return best;
  }

  bool poll() {
    if (++nodes_ % kPollInterval == 0 && (control_.expired() || (control_.node_limit && nodes_ >= control_.node_limit))) {
      cancelled_ = true;
    }
    return cancelled_;
  }

  // Every position in `positions` still has some unassigned prime with a
  // non-excluded residue hitting it.
  bool reachable(const Bits<W>& positions, std::uint64_t remaining, const std::int16_t* freq) const {
    bool ok = true;
    positions.for_each([&](std::size_t pos) {
      if (!ok) return;
      for (std::uint64_t rem = remaining; rem; rem &= rem - 1) {
        auto j = static_cast<std::size_t>(std::countr_zero(rem));
        if (freq[offset_[j] + residue_of_[j * length_ + pos]] > 0) return;
      }
      ok = false;
    });
    return ok;
  }

  // Once no residue hits more than one uncovered position, the rest of the
  // search is exactly a bipartite matching of positions to primes.
  bool match_singletons(const Bits<W>& uncovered, std::uint64_t remaining, const std::int16_t* freq) {
    std::vector<std::size_t> positions;
    uncovered.for_each([&](std::size_t pos) { positions.push_back(pos); });
    std::array<int, 64> owner;
    owner.fill(-1);
    std::vector<bool> seen(n_);

    auto admissible = [&](std::size_t j, std::size_t pos) {
      return ((remaining >> j) & 1) && freq[offset_[j] + residue_of_[j * length_ + pos]] > 0;
    };
    std::function<bool(std::size_t)> augment = [&](std::size_t x) {
      for (std::size_t j = 0; j < n_; ++j) {
        if (seen[j] || !admissible(j, positions[x])) continue;
        seen[j] = true;
        if (owner[j] < 0 || augment(static_cast<std::size_t>(owner[j]))) {
          owner[j] = static_cast<int>(x);
          return true;
        }
      }
      return false;
    };
    for (std::size_t x = 0; x < positions.size(); ++x) {
      std::fill(seen.begin(), seen.end(), false);
      if (!augment(x)) return false;
    }
    for (std::size_t j = 0; j < n_; ++j) {
      if (owner[j] >= 0) {
        selected_.push_back({static_cast<std::uint16_t>(j),
                             residue_of_[j * length_ + positions[static_cast<std::size_t>(owner[j])]]});
      }
    }
    return true;
  }

  // best[i] is the largest live frequency of prime i in `freq`; the caller
  // keeps it current (see take()).
  bool descend(const Bits<W>& uncovered, std::uint64_t remaining, std::size_t depth) {
    if (poll()) return false;
    const int n_empty = uncovered.count();
    if (n_empty == 0) return true;
    if (remaining == 0) return false;

    std::int16_t* freq = table(depth);
    int* best = best_of(depth);
    int n_possible = 0;
    int top = 0;
    for (std::uint64_t rem = remaining; rem; rem &= rem - 1) {
      auto i = static_cast<std::size_t>(std::countr_zero(rem));
      n_possible += best[i];
      top = std::max(top, best[i]);
    }
    if (n_possible < n_empty) return false;
    if (!reachable(uncovered, remaining, freq)) return false;
    if (top <= 1) return match_singletons(uncovered, remaining, freq);

    // Candidates in order of frequency descending, then residue, then prime,
    // generated one frequency level at a time: almost every node is settled
    // within its first level.
    for (int level = top; level >= 1; --level) {
      std::uint64_t at_level = 0;
      Prime span = 0;
      for (std::uint64_t rem = remaining; rem; rem &= rem - 1) {
        auto i = static_cast<std::size_t>(std::countr_zero(rem));
        if (best[i] == level) {
          at_level |= std::uint64_t{1} << i;
          span = std::max(span, problem_.primes[i]);
        }
      }
      for (Prime r = 0; r < span && at_level; ++r) {
        for (std::uint64_t rem = at_level; rem; rem &= rem - 1) {
          auto i = static_cast<std::size_t>(std::countr_zero(rem));
          if (r >= problem_.primes[i] || freq[offset_[i] + r] != level) continue;
          if (n_possible < n_empty) return false;
          if (take(uncovered, remaining, depth, i, r)) return true;
          if (cancelled_) return false;

          // Discard: r is never used for p_i anywhere below this level.
          freq[offset_[i] + r] = kExcluded;
          --hist(depth)[hist_offset_[i] + static_cast<std::size_t>(level)];
          const int now = highest(hist(depth), i, best[i]);
          n_possible -= best[i] - now;
          best[i] = now;
          if (now < level) at_level &= ~(std::uint64_t{1} << i);
          if (!reachable(uncovered & masks_[offset_[i] + r], remaining, freq)) return false;
        }
      }
    }
    return false;
  }

  // Assigns r to p_i and searches the child node.
  bool take(const Bits<W>& uncovered, std::uint64_t remaining, std::size_t depth, std::size_t i, Prime r) {
    const std::size_t slot = offset_[i] + r;
    const std::int16_t* freq = table(depth);
    const int* best = best_of(depth);
    std::int16_t* child = table(depth + 1);
    int* child_best = best_of(depth + 1);
    std::copy(freq, freq + table_size_, child);
    std::int16_t* counts = hist(depth + 1);
    std::copy(hist(depth), hist(depth) + hist_size_, counts);

    const std::uint64_t child_remaining = remaining & ~(std::uint64_t{1} << i);
    std::uint64_t dirty = 0;
    const Bits<W> hit = uncovered & masks_[slot];
    hit.for_each([&](std::size_t pos) {
      for (std::uint64_t rem = child_remaining; rem; rem &= rem - 1) {
        auto j = static_cast<std::size_t>(std::countr_zero(rem));
        std::int16_t& c = child[offset_[j] + residue_of_[j * length_ + pos]];
        if (c > 0) {
          std::int16_t* h = counts + hist_offset_[j];
          --h[c];
          ++h[c - 1];
          if (c == best[j]) dirty |= std::uint64_t{1} << j;
        }
        --c;
      }
    });
    for (std::uint64_t rem = child_remaining; rem; rem &= rem - 1) {
      auto j = static_cast<std::size_t>(std::countr_zero(rem));
      child_best[j] = (dirty >> j) & 1 ? highest(counts, j, best[j]) : best[j];
    }
    if (descend(uncovered.and_not(masks_[slot]), child_remaining, depth + 1)) {
      selected_.push_back({static_cast<std::uint16_t>(i), static_cast<std::uint16_t>(r)});
      return true;
    }
    return false;
  }

  int* best_of(std::size_t depth) { return best_.data() + depth * 64; }
  std::int16_t* hist(std::size_t depth) { return hists_.data() + depth * hist_size_; }

  // Largest frequency <= from with a live residue of prime i, per histogram h.
  int highest(const std::int16_t* h, std::size_t i, int from) const {
    const std::int16_t* row = h + hist_offset_[i];
    while (from > 0 && row[from] == 0) --from;
    return from;
  }

  const SearchProblem& problem_;
  const SearchControl& control_;
  std::size_t n_;
  std::size_t length_;
  std::size_t table_size_ = 0;
  Prime max_prime_ = 0;
  std::vector<std::size_t> offset_;
  std::vector<Bits<W>> masks_;
  std::vector<std::uint16_t> residue_of_;
  std::vector<std::int16_t> tables_;
  std::vector<int> best_;
  // Per prime, how many live residues have each frequency 0..length/p+1.
  std::vector<std::size_t> hist_offset_;
  std::size_t hist_size_ = 0;
  std::vector<std::int16_t> hists_;
  std::vector<Candidate> selected_;
  std::uint64_t nodes_ = 0;
  bool cancelled_ = false;
};

template <std::size_t W>
SearchOutcome run_with(const SearchProblem& problem, const SearchControl& control) {
  Engine<W> engine(problem, control);
  return engine.run();
}

}  // namespace

SearchOutcome run_search(const SearchProblem& problem, const SearchControl& control) {
  problem.validate();
  if (problem.length == 0) return {SearchStatus::found, {}, 0};
  const std::size_t words = (problem.length + 63) / 64;
  switch (words) {
    case 1: return run_with<1>(problem, control);
    case 2: return run_with<2>(problem, control);
    case 3: return run_with<3>(problem, control);
    case 4: return run_with<4>(problem, control);
    case 5: return run_with<5>(problem, control);
    case 6: return run_with<6>(problem, control);
    case 7:
    case 8: return run_with<8>(problem, control);
    case 9:
    case 10:
    case 11:
    case 12: return run_with<12>(problem, control);
    case 13:
    case 14:
    case 15:
    case 16: return run_with<16>(problem, control);
    default:
      throw Error(Errc::invalid_argument, "search length above 1024 positions is not supported");
  }
}

std::optional<std::vector<ResidueClass>> search(const SearchProblem& problem) {
  SearchOutcome out = run_search(problem);
  if (out.status == SearchStatus::found) return std::move(out.classes);
  return std::nullopt;
}

std::uint32_t smallest_admissible(Prime p, const std::vector<std::uint32_t>& forbidden) {
  for (std::uint32_t r = 0; r < p; ++r) {
    if (std::find(forbidden.begin(), forbidden.end(), r) == forbidden.end()) return r;
  }
  throw Error(Errc::invalid_argument, "every residue of " + std::to_string(p) + " is forbidden");
}

SearchProblem gap_problem(std::size_t m, const PrimeSet& primes) {
  if (m % 2 != 0) throw Error(Errc::odd_gap, "gap " + std::to_string(m) + " is odd");
  if (m < 2) throw Error(Errc::invalid_argument, "gap must be at least 2");
  SearchProblem problem;
  problem.length = m / 2 - 1;
  for (Prime p : primes.odd()) {
    problem.primes.push_back(p);
    std::vector<std::uint32_t> excluded{0};
    auto boundary = static_cast<std::uint32_t>((m / 2) % p);
    if (boundary != 0) excluded.push_back(boundary);
    problem.forbidden.push_back(std::move(excluded));
  }
  return problem;
}

namespace {

// Gives every prime of the problem a class: selected ones keep theirs, the
// rest take their smallest admissible residue.
Covering complete_assignment(const SearchProblem& problem, const std::vector<ResidueClass>& selected) {
  Covering cov{{}, {1, problem.length}};
  for (std::size_t i = 0; i < problem.primes.size(); ++i) {
    Prime p = problem.primes[i];
    auto it = std::find_if(selected.begin(), selected.end(), [p](const ResidueClass& c) { return c.prime == p; });
    cov.classes.push_back({p, it != selected.end() ? it->residue : smallest_admissible(p, problem.forbidden[i])});
  }
  return cov;
}

}  // namespace

std::optional<Covering> gap_membership(std::size_t m, const PrimeSet& primes, const SearchControl& control) {
  if (primes.size() < 2) throw Error(Errc::invalid_argument, "gap_membership needs k >= 2");
  SearchProblem problem = gap_problem(m, primes);
  SearchOutcome out = solve(problem, control, mirror_split(problem, m / 2));
  switch (out.status) {
    case SearchStatus::cancelled:
      throw Error(Errc::budget_exceeded, "membership search for gap " + std::to_string(m) + " cancelled");
    case SearchStatus::exhausted:
      return std::nullopt;
    case SearchStatus::found:
      break;
  }
  Covering cov = complete_assignment(problem, out.classes);
  if (!is_restricted(cov)) {
    throw Error(Errc::construction_failed, "search result for gap " + std::to_string(m) + " is not restricted");
  }
  return cov;
}

std::optional<Covering> gap_membership(std::size_t m, std::size_t k) {
  return gap_membership(m, primes_upto_index(k));
}

MaxCover max_cover(const PrimeSet& primes, std::size_t probe_from, const SearchControl& control) {
  if (primes.size() < 2) throw Error(Errc::invalid_argument, "max_cover needs k >= 2");
  SearchProblem problem;
  for (Prime p : primes.odd()) {
    problem.primes.push_back(p);
    problem.forbidden.push_back({0});
  }

  MaxCover result;
  std::optional<Covering> last;
  for (std::size_t length = probe_from;; ++length) {
    problem.length = length;
    SearchOutcome out = solve(problem, control);
    if (out.status == SearchStatus::cancelled) {
      throw Error(Errc::budget_exceeded, "max_cover search cancelled at length " + std::to_string(length));
    }
    if (out.status == SearchStatus::exhausted) {
      if (!last) {
        throw Error(Errc::invalid_argument,
                    "probe start " + std::to_string(probe_from) + " is not coverable");
      }
      result.length = length - 1;
      result.witness = std::move(*last);
      return result;
    }
    Covering cov = complete_assignment(problem, out.classes);
    if (!covers(cov)) throw Error(Errc::construction_failed, "max_cover witness does not cover");
    last = std::move(cov);
  }
}

std::size_t max_cover_length(std::size_t k) {
  PrimeSet primes = primes_upto_index(k);
  if (k < 2) throw Error(Errc::invalid_argument, "max_cover_length needs k >= 2");
  // h(k) >= 2 p_{k-1}, so <1>_{p_{k-1} - 1} is always coverable.
  return max_cover(primes, primes.p(k - 1) - 1).length;
}

}  // namespace primogap
