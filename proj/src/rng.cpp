#include "brea/rng.hpp"

#include <cmath>

#include "brea/errors.hpp"

namespace brea {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed), gen_(splitmix64(seed)) {}

std::uint64_t Rng::next_u64() { return gen_(); }

std::uint64_t Rng::next_below(std::uint64_t bound) {
  if (bound == 0) throw BadParams("next_below: bound must be positive");
  // rejection sampling over the largest multiple of bound
  const std::uint64_t limit = bound * (UINT64_MAX / bound);
  std::uint64_t r;
  do {
    r = next_u64();
  } while (r >= limit);
  return r % bound;
}

double Rng::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::next_gaussian() {
  // u1 in (0, 1] so the log is finite
  const double u1 =
      (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = next_unit();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

Rng Rng::derive(std::uint64_t a) const {
  return Rng(splitmix64(seed_ ^ splitmix64(a ^ 0x517cc1b727220a95ULL)));
}

Rng Rng::derive(std::uint64_t a, std::uint64_t b) const {
  return derive(a).derive(b ^ 0x6a09e667f3bcc909ULL);
}

Rng Rng::derive(std::uint64_t a, std::uint64_t b, std::uint64_t c) const {
  return derive(a, b).derive(c ^ 0xbb67ae8584caa73bULL);
}

}  // namespace brea
