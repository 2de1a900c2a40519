#include "brea/field.hpp"

#include <array>
#include <string>

namespace brea {

namespace {

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t acc = 1 % m;
  std::uint64_t base = a % m;
  while (e) {
    if (e & 1) acc = mulmod_u64(acc, base, m);
    base = mulmod_u64(base, base, m);
    e >>= 1;
  }
  return acc;
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL,
                          23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  // this witness set is exact below 3.3e24
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL,
                          23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 0; i < r - 1; ++i) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

PrimeField::PrimeField(std::uint64_t p) : p_(p) {
  if (p < 2) throw BadParams("field modulus must be >= 2");
  if (p >= (1ULL << 62))
    throw BadParams("field modulus must fit 62 bits: " + std::to_string(p));
  if (!is_prime_u64(p))
    throw BadParams("field modulus is not prime: " + std::to_string(p));
}

std::uint64_t PrimeField::pow(std::uint64_t a, std::uint64_t e) const {
  return powmod_u64(a, e, p_);
}

std::uint64_t PrimeField::inv(std::uint64_t a) const {
  if (a == 0) throw ZeroInverse();
  return pow(a, p_ - 2);
}

std::uint64_t sq_dist(const PrimeField& f, const FieldVector& u,
                      const FieldVector& v) {
  if (u.size() != v.size())
    throw LengthMismatch("sq_dist: " + std::to_string(u.size()) + " vs " +
                         std::to_string(v.size()));
  std::uint64_t acc = 0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const std::uint64_t diff = f.sub(u[k], v[k]);
    acc = f.add(acc, f.mul(diff, diff));
  }
  return acc;
}

std::uint64_t CommitGroup::pow(std::uint64_t a, std::uint64_t e) const {
  return powmod_u64(a, e, lambda);
}

CommitGroup find_commit_group(const PrimeField& field,
                              std::uint64_t max_cofactor) {
  const std::uint64_t p = field.modulus();
  for (std::uint64_t k = 2; k <= max_cofactor; ++k) {
    if (k > (UINT64_MAX - 1) / p) break;  // lambda would overflow 64 bits
    const std::uint64_t lambda = k * p + 1;
    if (!is_prime_u64(lambda)) continue;
    const std::uint64_t cofactor = (lambda - 1) / p;
    for (std::uint64_t h = 2; h < lambda; ++h) {
      const std::uint64_t psi = powmod_u64(h, cofactor, lambda);
      if (psi != 1) return CommitGroup{lambda, psi, p};
    }
  }
  throw NoGroupFound("no commitment group with lambda = k*p+1, k <= " +
                     std::to_string(max_cofactor) +
                     " for p = " + std::to_string(p));
}

}  // namespace brea
