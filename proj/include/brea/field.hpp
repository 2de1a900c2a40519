#pragma once

#include <cstdint>
#include <vector>

#include "brea/errors.hpp"

namespace brea {

// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime_u64(std::uint64_t n);

// Arithmetic in Z_p for a prime p. All values are canonical representatives
// in [0, p); there is no lazy reduction anywhere.
class PrimeField {
 public:
  // p must be prime, >= 2 and < 2^62 so products fit a 128-bit intermediate.
  explicit PrimeField(std::uint64_t p);

  std::uint64_t modulus() const { return p_; }
  // (p-1)/2, the boundary of the two's-complement embedding
  std::uint64_t half() const { return (p_ - 1) / 2; }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t s = a + b;  // a, b < p < 2^62: no wrap
    return s >= p_ ? s - p_ : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
    return a >= b ? a - b : a + p_ - b;
  }
  std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : p_ - a; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    return static_cast<std::uint64_t>(
        static_cast<unsigned __int128>(a) * b % p_);
  }
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const;
  // Fermat inverse; throws ZeroInverse on a == 0.
  std::uint64_t inv(std::uint64_t a) const;

  bool operator==(const PrimeField& o) const { return p_ == o.p_; }

 private:
  std::uint64_t p_;
};

using FieldVector = std::vector<std::uint64_t>;

// sum_k (u_k - v_k)^2 mod p; throws LengthMismatch.
std::uint64_t sq_dist(const PrimeField& f, const FieldVector& u,
                      const FieldVector& v);

// Multiplicative subgroup of order p inside Z_lambda^*, the commitment
// group: psi generates it, so psi^a * psi^b = psi^(a+b mod p) mod lambda.
struct CommitGroup {
  std::uint64_t lambda = 0;
  std::uint64_t psi = 0;
  std::uint64_t p = 0;

  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    return static_cast<std::uint64_t>(
        static_cast<unsigned __int128>(a) * b % lambda);
  }
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const;
};

// Scans lambda = k*p + 1 for k = 2, 3, ... and returns the first prime
// lambda together with psi = h^((lambda-1)/p) mod lambda for the smallest
// h >= 2 giving psi != 1. Throws NoGroupFound when k exceeds max_cofactor
// or lambda no longer fits 64 bits.
CommitGroup find_commit_group(const PrimeField& field,
                              std::uint64_t max_cofactor = 1u << 20);

}  // namespace brea
