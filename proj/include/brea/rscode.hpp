#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "brea/field.hpp"
#include "brea/rng.hpp"

namespace brea {

// One evaluation of a codeword polynomial. Entries with present == false are
// erasures (dropped users) and are skipped by the decoder.
struct EvalEntry {
  std::uint64_t theta = 0;
  std::uint64_t value = 0;
  bool present = true;
};

struct EvalSet {
  std::vector<EvalEntry> entries;
};

struct DecodedPoly {
  std::vector<std::uint64_t> coeffs;        // degree <= degree_bound
  std::vector<std::uint64_t> error_thetas;  // present entries off the polynomial
  int agreements = 0;
};

// Horner evaluation; empty coefficient list is the zero polynomial.
std::uint64_t poly_eval(const std::vector<std::uint64_t>& coeffs,
                        std::uint64_t theta, const PrimeField& f);

// Coefficients of the unique polynomial of degree <= n-1 through n points.
// Throws DuplicateTheta on repeated abscissae.
std::vector<std::uint64_t> lagrange_interpolate(
    const std::vector<std::pair<std::uint64_t, std::uint64_t>>& points,
    const PrimeField& f);

// Berlekamp-Welch decoding with erasures removed up front. Finds the unique
// polynomial of degree <= degree_bound agreeing with all but at most
// max_errors of the present entries and reports where it disagrees.
// Requires present_count >= degree_bound + 1 + 2*max_errors (RadiusViolated
// otherwise); throws DecodeFailure when no such polynomial exists.
DecodedPoly rs_decode(const EvalSet& evals, int degree_bound, int max_errors,
                      const PrimeField& f);

// Evaluation of a d-dimensional codeword (one polynomial per coordinate,
// same error positions for all coordinates of a corrupted entry).
struct VectorEvalEntry {
  std::uint64_t theta = 0;
  FieldVector value;
  bool present = true;
};

struct VectorDecoded {
  std::vector<std::vector<std::uint64_t>> polys;  // [coordinate][power]
  std::vector<std::uint64_t> error_thetas;
  bool used_fallback = false;
};

// Vector decode: error positions are located once on a random linear
// combination of the coordinates, every coordinate is then interpolated with
// those positions removed and re-verified; any inconsistency falls back to
// d independent scalar decodes.
VectorDecoded rs_decode_vector(const std::vector<VectorEvalEntry>& entries,
                               int degree_bound, int max_errors,
                               const PrimeField& f, Rng& rng);

// Constant coefficient, i.e. the codeword evaluated at theta = 0.
std::uint64_t recover_secret(const DecodedPoly& poly);
FieldVector recover_secret(const VectorDecoded& dec);

}  // namespace brea
