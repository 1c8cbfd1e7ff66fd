// Weighted tabu walk for finding coverings quickly, and the portfolio that
// races it against the exhaustive search.

#include <algorithm>
#include <optional>
#include <random>
#include <thread>

#include "primogap/agpa.hpp"
#include "primogap/error.hpp"

namespace primogap {

namespace {

constexpr std::uint64_t kWarmupNodes = 1u << 15;
constexpr std::uint64_t kPollFlips = 1u << 10;
constexpr std::int64_t kTabuPenalty = std::int64_t{1} << 40;
constexpr unsigned kNoisePerMille = 5;

class Walker {
 public:
  Walker(const SearchProblem& problem, std::mt19937_64& rng) : problem_(problem), rng_(rng), n_(problem.primes.size()) {
    allowed_.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) {
      allowed_[j].assign(problem.primes[j], true);
      for (auto r : problem.forbidden[j]) allowed_[j][r] = false;
    }
    count_.assign(problem.length + 1, 0);
    weight_.assign(problem.length + 1, 1);
    residue_.assign(n_, 0);
    tabu_.assign(n_, 0);
  }

  void randomize() {
    std::fill(count_.begin(), count_.end(), 0);
    std::fill(weight_.begin(), weight_.end(), 1);
    uncovered_ = problem_.length;
    for (std::size_t j = 0; j < n_; ++j) {
      std::uint32_t r;
      do {
        r = static_cast<std::uint32_t>(rng_() % problem_.primes[j]);
      } while (!allowed_[j][r]);
      residue_[j] = r;
      apply(j, +1);
    }
    std::fill(tabu_.begin(), tabu_.end(), 0);
  }

  bool done() const { return uncovered_ == 0; }

  // Picks a random uncovered position and moves one prime onto it, choosing
  // the move with the least weighted loss. When no move improves, every
  // uncovered position gets heavier, so repeated trouble spots win out.
  // Tabu primes and rare random moves keep the walk from cycling.
  void flip(std::uint64_t step) {
    std::size_t target = 0;
    auto skip = rng_() % uncovered_;
    for (std::size_t x = 1; x <= problem_.length; ++x) {
      if (count_[x] == 0 && skip-- == 0) {
        target = x;
        break;
      }
    }

    const bool noisy = rng_() % 1000 < kNoisePerMille;
    std::size_t chosen = n_;
    std::int64_t best = 0;
    std::size_t ties = 0, options = 0;
    for (std::size_t j = 0; j < n_; ++j) {
      const Prime p = problem_.primes[j];
      const auto r = static_cast<std::uint32_t>(target % p);
      if (!allowed_[j][r] || r == residue_[j]) continue;
      ++options;
      if (noisy) {
        if (rng_() % options == 0) chosen = j;
        continue;
      }
      std::int64_t delta = 0;
      for (std::size_t y = first(residue_[j], p); y <= problem_.length; y += p) {
        if (count_[y] == 1) delta += weight_[y];
      }
      for (std::size_t y = first(r, p); y <= problem_.length; y += p) {
        if (count_[y] == 0) delta -= weight_[y];
      }
      if (tabu_[j] > step) delta += kTabuPenalty;
      if (chosen == n_ || delta < best) {
        best = delta;
        chosen = j;
        ties = 1;
      } else if (delta == best && rng_() % ++ties == 0) {
        chosen = j;
      }
    }
    if (chosen == n_) return;
    if (!noisy && best >= 0) {
      for (std::size_t x = 1; x <= problem_.length; ++x) {
        if (count_[x] == 0) ++weight_[x];
      }
    }
    apply(chosen, -1);
    residue_[chosen] = static_cast<std::uint32_t>(target % problem_.primes[chosen]);
    apply(chosen, +1);
    tabu_[chosen] = step + 1 + rng_() % 5;
  }

  std::vector<ResidueClass> assignment() const {
    std::vector<ResidueClass> out;
    for (std::size_t j = 0; j < n_; ++j) out.push_back({problem_.primes[j], residue_[j]});
    return out;
  }

 private:
  static std::size_t first(std::uint32_t r, Prime p) { return r == 0 ? p : r; }

  void apply(std::size_t j, int delta) {
    const Prime p = problem_.primes[j];
    for (std::size_t x = first(residue_[j], p); x <= problem_.length; x += p) {
      if (delta > 0 && count_[x]++ == 0) --uncovered_;
      if (delta < 0 && --count_[x] == 0) ++uncovered_;
    }
  }

  const SearchProblem& problem_;
  std::mt19937_64& rng_;
  std::size_t n_;
  std::vector<std::vector<bool>> allowed_;
  std::vector<int> count_;
  std::vector<std::int64_t> weight_;
  std::vector<std::uint32_t> residue_;
  std::vector<std::uint64_t> tabu_;
  std::size_t uncovered_ = 0;
};

// Checks a claimed assignment independently of how it was found.
bool admissible_covering(const SearchProblem& problem, const std::vector<ResidueClass>& classes) {
  if (classes.size() != problem.primes.size()) return false;
  for (std::size_t j = 0; j < classes.size(); ++j) {
    const auto& f = problem.forbidden[j];
    if (classes[j].prime != problem.primes[j] || std::find(f.begin(), f.end(), classes[j].residue) != f.end()) {
      return false;
    }
  }
  return covers(classes, Window{1, problem.length});
}

}  // namespace

std::optional<std::vector<ResidueClass>> local_search(const SearchProblem& problem, const LocalSearchOptions& options,
                                                      const SearchControl& control) {
  problem.validate();
  if (problem.length == 0 || problem.primes.empty()) return std::nullopt;
  std::mt19937_64 rng(options.seed);
  Walker walker(problem, rng);
  std::uint64_t step = 0;
  while (step < options.max_flips) {
    walker.randomize();
    for (std::uint64_t i = 0; i < options.flips_per_restart && step < options.max_flips; ++i, ++step) {
      if (walker.done()) return walker.assignment();
      if (step % kPollFlips == 0 && control.expired()) return std::nullopt;
      walker.flip(step);
    }
    if (walker.done()) return walker.assignment();
  }
  return std::nullopt;
}

std::vector<SearchProblem> mirror_split(const SearchProblem& problem, std::size_t half, std::size_t max_primes) {
  problem.validate();
  if (problem.length + 1 != half) throw Error(Errc::invalid_argument, "mirror_split needs length = half - 1");
  auto mirror = [half](std::uint32_t r, Prime p) { return static_cast<std::uint32_t>((half % p + p - r) % p); };
  for (std::size_t j = 0; j < problem.primes.size(); ++j) {
    const auto& f = problem.forbidden[j];
    for (auto r : f) {
      if (std::find(f.begin(), f.end(), mirror(r, problem.primes[j])) == f.end()) {
        throw Error(Errc::invalid_argument, "forbidden residues are not mirror-closed");
      }
    }
  }

  // A solution whose first non-self-mirrored residue (over the leading
  // primes) is the smaller of its pair lands in that prime's piece; if it is
  // the larger, its mirror image does. Solutions self-mirrored on every
  // leading prime are left for the final piece.
  std::vector<SearchProblem> pieces;
  SearchProblem rest = problem;
  for (std::size_t j = 0; j < std::min(max_primes, problem.primes.size()); ++j) {
    const Prime p = problem.primes[j];
    const auto& f = problem.forbidden[j];
    std::vector<std::uint32_t> others, not_fixed;
    std::optional<std::uint32_t> fixed;
    for (std::uint32_t r = 0; r < p; ++r) {
      const bool allowed = std::find(f.begin(), f.end(), r) == f.end();
      const std::uint32_t image = mirror(r, p);
      if (allowed && image == r) fixed = r;
      if (!allowed || image <= r) others.push_back(r);
      if (image != r) not_fixed.push_back(r);
    }
    if (others.size() < p) {
      SearchProblem piece = rest;
      piece.forbidden[j] = others;
      pieces.push_back(std::move(piece));
    }
    if (!fixed) return pieces;
    rest.forbidden[j] = not_fixed;
  }
  pieces.push_back(std::move(rest));
  return pieces;
}

SearchOutcome solve(const SearchProblem& problem, const SearchControl& control, const std::vector<SearchProblem>& pieces) {
  auto exhaust = [&](const SearchControl& c) {
    if (pieces.empty()) return run_search(problem, c);
    SearchOutcome total;
    for (const auto& piece : pieces) {
      SearchOutcome out = run_search(piece, c);
      total.nodes += out.nodes;
      if (out.status != SearchStatus::exhausted) {
        total.status = out.status;
        total.classes = std::move(out.classes);
        break;
      }
    }
    return total;
  };
  if (!control.local_search) return exhaust(control);

  SearchControl warmup = control;
  warmup.node_limit = control.node_limit ? std::min(control.node_limit, kWarmupNodes) : kWarmupNodes;
  SearchOutcome first = run_search(problem, warmup);
  if (first.status != SearchStatus::cancelled || control.expired() ||
      (control.node_limit && control.node_limit <= kWarmupNodes)) {
    return first;
  }

  std::stop_source race;
  std::stop_callback forward(control.stop, [&race] { race.request_stop(); });
  SearchControl exhaustive{race.get_token(), control.deadline, control.node_limit, false};

  std::optional<std::vector<ResidueClass>> found;
  SearchOutcome out;
  {
    LocalSearchOptions options;
    options.seed = problem.length * 1000003u + problem.primes.size();
    std::jthread walker([&] {
      found = local_search(problem, options, exhaustive);
      if (found) race.request_stop();
    });
    out = exhaust(exhaustive);
    race.request_stop();
  }
  out.nodes += first.nodes;

  if (found) {
    if (!admissible_covering(problem, *found)) {
      throw Error(Errc::construction_failed, "local search returned a non-covering assignment");
    }
    if (out.status == SearchStatus::exhausted) {
      throw Error(Errc::construction_failed, "exhaustive search refuted a verified covering");
    }
    if (out.status == SearchStatus::cancelled) {
      out.status = SearchStatus::found;
      out.classes = std::move(*found);
    }
  }
  return out;
}

}  // namespace primogap
