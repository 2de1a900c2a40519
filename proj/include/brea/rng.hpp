#pragma once

#include <cstdint>
#include <random>

namespace brea {

// Deterministic randomness source. Streams produced by derive() are
// independent of the parent stream and of each other, so per-user and
// per-round work can run in any order (or in parallel) without changing
// results. All conversions are done by hand; std::uniform_* distributions
// are not pinned down by the standard and would break bit reproducibility
// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  // uniform in [0, bound), bound >= 1
  std::uint64_t next_below(std::uint64_t bound);
  // [0, 1) with 53-bit resolution
  double next_unit();
  // standard normal via Box-Muller
  double next_gaussian();

  Rng derive(std::uint64_t a) const;
  Rng derive(std::uint64_t a, std::uint64_t b) const;
  Rng derive(std::uint64_t a, std::uint64_t b, std::uint64_t c) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

}  // namespace brea
