#pragma once

#include <cstdint>
#include <vector>

#include "brea/field.hpp"
#include "brea/rng.hpp"

namespace brea {

using RealVector = std::vector<double>;

struct QuantConfig {
  std::uint64_t q;  // quantization levels, >= 1
  PrimeField field;
};

// q * Q_q(x) as an exact integer: floor(qx) with probability
// 1 - (qx - floor(qx)), floor(qx) + 1 otherwise. Deterministic when qx is
// integral. Rationals with denominator q stay integers internally; division
// by q happens only at output boundaries.
std::int64_t stochastic_round_scaled(double x, std::uint64_t q, Rng& rng);

// Q_q(x) itself, i.e. stochastic_round_scaled / q.
double stochastic_round(double x, std::uint64_t q, Rng& rng);

// Two's-complement embedding into the field: z for z >= 0, p + z for z < 0.
// Requires |z| < (p-1)/2, else OutOfRange.
std::uint64_t map_phi(std::int64_t z, const PrimeField& f);

// Inverse embedding: e for e < (p-1)/2, e - p otherwise.
std::int64_t unmap_phi(std::uint64_t e, const PrimeField& f);

// Elementwise q * Q_q(w); the field-free preimage used by plaintext checks.
std::vector<std::int64_t> quantize_model_scaled(const RealVector& w,
                                                std::uint64_t q, Rng& rng);

FieldVector map_phi(const std::vector<std::int64_t>& z, const PrimeField& f);

// phi(q * Q_q(w)) elementwise.
FieldVector quantize_model(const RealVector& w, const QuantConfig& cfg,
                           Rng& rng);

// phi^{-1}(e) / q^2, the real-domain squared distance.
double dequantize_distance(std::uint64_t e, const QuantConfig& cfg);

// phi^{-1}(.) / q elementwise, the real-domain aggregate sum_j Q_q(w_j).
RealVector dequantize_aggregate(const FieldVector& v, const QuantConfig& cfg);

enum class OverflowMode { distance, aggregate };

// Plaintext-side wrap-around check over the scaled preimages z_i = q*Q_q(w_i):
// distance mode requires sum_k (z_j[k]-z_l[k])^2 < (p-1)/2 for every pair,
// aggregate mode requires |sum_j z_j[k]| < (p-1)/2 for every coordinate.
// Throws OverflowViolation naming the offending pair or coordinate.
void check_overflow(const std::vector<std::vector<std::int64_t>>& scaled,
                    const QuantConfig& cfg, OverflowMode mode);

}  // namespace brea
