#include "brea/quantize.hpp"

#include <cmath>
#include <string>

namespace brea {

std::int64_t stochastic_round_scaled(double x, std::uint64_t q, Rng& rng) {
  if (!std::isfinite(x)) throw OutOfRange("stochastic rounding of non-finite value");
  if (q == 0) throw BadParams("quantization level q must be >= 1");
  const double qx = x * static_cast<double>(q);
  if (std::abs(qx) >= 0x1.0p62)
    throw OutOfRange("q*x too large to represent exactly");
  const double fl = std::floor(qx);
  const double frac = qx - fl;
  std::int64_t z = static_cast<std::int64_t>(fl);
  if (frac > 0.0 && rng.next_unit() < frac) ++z;
  return z;
}

double stochastic_round(double x, std::uint64_t q, Rng& rng) {
  return static_cast<double>(stochastic_round_scaled(x, q, rng)) /
         static_cast<double>(q);
}

std::uint64_t map_phi(std::int64_t z, const PrimeField& f) {
  const std::uint64_t mag =
      z >= 0 ? static_cast<std::uint64_t>(z)
             : static_cast<std::uint64_t>(-(z + 1)) + 1;  // |z| without UB
  if (mag >= f.half())
    throw OutOfRange("phi: |" + std::to_string(z) + "| >= (p-1)/2 for p = " +
                     std::to_string(f.modulus()));
  return z >= 0 ? static_cast<std::uint64_t>(z) : f.modulus() - mag;
}

std::int64_t unmap_phi(std::uint64_t e, const PrimeField& f) {
  if (e < f.half()) return static_cast<std::int64_t>(e);
  return static_cast<std::int64_t>(e) - static_cast<std::int64_t>(f.modulus());
}

std::vector<std::int64_t> quantize_model_scaled(const RealVector& w,
                                                std::uint64_t q, Rng& rng) {
  std::vector<std::int64_t> z(w.size());
  for (std::size_t k = 0; k < w.size(); ++k)
    z[k] = stochastic_round_scaled(w[k], q, rng);
  return z;
}

FieldVector map_phi(const std::vector<std::int64_t>& z, const PrimeField& f) {
  FieldVector out(z.size());
  for (std::size_t k = 0; k < z.size(); ++k) out[k] = map_phi(z[k], f);
  return out;
}

FieldVector quantize_model(const RealVector& w, const QuantConfig& cfg,
                           Rng& rng) {
  return map_phi(quantize_model_scaled(w, cfg.q, rng), cfg.field);
}

double dequantize_distance(std::uint64_t e, const QuantConfig& cfg) {
  const double q = static_cast<double>(cfg.q);
  return static_cast<double>(unmap_phi(e, cfg.field)) / (q * q);
}

RealVector dequantize_aggregate(const FieldVector& v, const QuantConfig& cfg) {
  RealVector out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k)
    out[k] = static_cast<double>(unmap_phi(v[k], cfg.field)) /
             static_cast<double>(cfg.q);
  return out;
}

void check_overflow(const std::vector<std::vector<std::int64_t>>& scaled,
                    const QuantConfig& cfg, OverflowMode mode) {
  const auto bound = static_cast<__int128>(cfg.field.half());
  if (mode == OverflowMode::distance) {
    for (std::size_t j = 0; j < scaled.size(); ++j) {
      for (std::size_t k = j + 1; k < scaled.size(); ++k) {
        if (scaled[j].size() != scaled[k].size())
          throw LengthMismatch("check_overflow: model length mismatch");
        __int128 acc = 0;
        for (std::size_t c = 0; c < scaled[j].size(); ++c) {
          const __int128 diff =
              static_cast<__int128>(scaled[j][c]) - scaled[k][c];
          acc += diff * diff;
          if (acc >= bound)
            throw OverflowViolation(
                "distance wrap-around between models " + std::to_string(j) +
                " and " + std::to_string(k) + ": q^2*dist >= (p-1)/2");
        }
      }
    }
  } else {
    if (scaled.empty()) return;
    const std::size_t d = scaled.front().size();
    for (std::size_t c = 0; c < d; ++c) {
      __int128 acc = 0;
      for (const auto& z : scaled) {
        if (z.size() != d)
          throw LengthMismatch("check_overflow: model length mismatch");
        acc += z[c];
      }
      if (acc >= bound || -acc >= bound)
        throw OverflowViolation("aggregate wrap-around at coordinate " +
                                std::to_string(c) +
                                ": |q*sum| >= (p-1)/2");
    }
  }
}

}  // namespace brea
