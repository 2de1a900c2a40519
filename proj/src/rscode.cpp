#include "brea/rscode.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <unordered_set>

namespace brea {

namespace {

void trim(std::vector<std::uint64_t>& coeffs) {
  while (coeffs.size() > 1 && coeffs.back() == 0) coeffs.pop_back();
}

int degree_of(const std::vector<std::uint64_t>& coeffs) {
  for (std::size_t i = coeffs.size(); i > 0; --i)
    if (coeffs[i - 1] != 0) return static_cast<int>(i - 1);
  return 0;  // zero polynomial
}

// Gauss-Jordan over F_p. rows x cols coefficient matrix plus right-hand
// side; returns a solution with free variables set to zero, or nullopt when
// the system is inconsistent.
std::optional<std::vector<std::uint64_t>> solve_linear(
    std::vector<std::vector<std::uint64_t>>& m, std::vector<std::uint64_t>& rhs,
    const PrimeField& f) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows == 0 ? 0 : m.front().size();
  std::vector<std::size_t> pivot_col;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t piv = rank;
    while (piv < rows && m[piv][col] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[rank]);
    std::swap(rhs[piv], rhs[rank]);
    const std::uint64_t scale = f.inv(m[rank][col]);
    for (std::size_t c = col; c < cols; ++c) m[rank][c] = f.mul(m[rank][c], scale);
    rhs[rank] = f.mul(rhs[rank], scale);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || m[r][col] == 0) continue;
      const std::uint64_t factor = m[r][col];
      for (std::size_t c = col; c < cols; ++c)
        m[r][c] = f.sub(m[r][c], f.mul(factor, m[rank][c]));
      rhs[r] = f.sub(rhs[r], f.mul(factor, rhs[rank]));
    }
    pivot_col.push_back(col);
    ++rank;
  }
  for (std::size_t r = rank; r < rows; ++r)
    if (rhs[r] != 0) return std::nullopt;
  std::vector<std::uint64_t> x(cols, 0);
  for (std::size_t r = 0; r < rank; ++r) x[pivot_col[r]] = rhs[r];
  return x;
}

// Exact polynomial division; returns nullopt when the remainder is nonzero.
std::optional<std::vector<std::uint64_t>> poly_divide_exact(
    std::vector<std::uint64_t> num, const std::vector<std::uint64_t>& den,
    const PrimeField& f) {
  const int dden = degree_of(den);
  const std::uint64_t lead_inv = f.inv(den[dden]);
  int dnum = degree_of(num);
  if (dnum == 0 && num[0] == 0) return std::vector<std::uint64_t>{0};
  if (dnum < dden) return std::nullopt;
  std::vector<std::uint64_t> quot(dnum - dden + 1, 0);
  for (int k = dnum - dden; k >= 0; --k) {
    const std::uint64_t c = f.mul(num[k + dden], lead_inv);
    quot[k] = c;
    if (c == 0) continue;
    for (int j = 0; j <= dden; ++j)
      num[k + j] = f.sub(num[k + j], f.mul(c, den[j]));
  }
  for (const std::uint64_t r : num)
    if (r != 0) return std::nullopt;
  return quot;
}

void require_distinct(const std::vector<std::uint64_t>& xs) {
  std::unordered_set<std::uint64_t> seen;
  for (const std::uint64_t x : xs)
    if (!seen.insert(x).second)
      throw DuplicateTheta("repeated evaluation point " + std::to_string(x));
}

}  // namespace

std::uint64_t poly_eval(const std::vector<std::uint64_t>& coeffs,
                        std::uint64_t theta, const PrimeField& f) {
  std::uint64_t acc = 0;
  for (std::size_t i = coeffs.size(); i > 0; --i)
    acc = f.add(f.mul(acc, theta), coeffs[i - 1]);
  return acc;
}

std::vector<std::uint64_t> lagrange_interpolate(
    const std::vector<std::pair<std::uint64_t, std::uint64_t>>& points,
    const PrimeField& f) {
  const std::size_t n = points.size();
  if (n == 0) throw BadParams("interpolation needs at least one point");
  {
    std::vector<std::uint64_t> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = points[i].first;
    require_distinct(xs);
  }
  // master(x) = prod_i (x - theta_i)
  std::vector<std::uint64_t> master{1};
  for (const auto& [x, y] : points) {
    (void)y;
    std::vector<std::uint64_t> next(master.size() + 1, 0);
    const std::uint64_t nx = f.neg(x);
    for (std::size_t i = 0; i < master.size(); ++i) {
      next[i + 1] = f.add(next[i + 1], master[i]);
      next[i] = f.add(next[i], f.mul(master[i], nx));
    }
    master = std::move(next);
  }
  std::vector<std::uint64_t> coeffs(n, 0);
  std::vector<std::uint64_t> basis(n, 0);
  for (const auto& [x, y] : points) {
    // basis = master / (x_var - x) via synthetic division
    std::uint64_t carry = 0;
    for (std::size_t i = n; i > 0; --i) {
      basis[i - 1] = f.add(master[i], f.mul(carry, x));
      carry = basis[i - 1];
    }
    const std::uint64_t denom = poly_eval(basis, x, f);
    const std::uint64_t scale = f.mul(y, f.inv(denom));
    for (std::size_t i = 0; i < n; ++i)
      coeffs[i] = f.add(coeffs[i], f.mul(scale, basis[i]));
  }
  trim(coeffs);
  return coeffs;
}

DecodedPoly rs_decode(const EvalSet& evals, int degree_bound, int max_errors,
                      const PrimeField& f) {
  if (degree_bound < 0 || max_errors < 0)
    throw BadParams("rs_decode: negative degree bound or error budget");
  std::vector<std::uint64_t> xs, ys;
  for (const auto& e : evals.entries) {
    if (!e.present) continue;
    xs.push_back(e.theta);
    ys.push_back(e.value);
  }
  require_distinct(xs);
  const int n = static_cast<int>(xs.size());
  const int need = degree_bound + 1 + 2 * max_errors;
  if (n < need)
    throw RadiusViolated("rs_decode: " + std::to_string(n) +
                         " present entries, radius needs " +
                         std::to_string(need));

  // Berlekamp-Welch: find Q of degree <= degree_bound + a and monic E of
  // degree a with Q(x_i) = y_i * E(x_i) on every present entry; the codeword
  // is then Q / E.
  const int a = max_errors;
  const int nq = degree_bound + a + 1;  // unknown coefficients of Q
  std::vector<std::vector<std::uint64_t>> m(
      n, std::vector<std::uint64_t>(nq + a, 0));
  std::vector<std::uint64_t> rhs(n);
  for (int i = 0; i < n; ++i) {
    std::uint64_t xp = 1;
    for (int j = 0; j < nq; ++j) {
      m[i][j] = xp;
      xp = f.mul(xp, xs[i]);
    }
    xp = 1;
    for (int j = 0; j < a; ++j) {
      m[i][nq + j] = f.neg(f.mul(ys[i], xp));
      xp = f.mul(xp, xs[i]);
    }
    rhs[i] = f.mul(ys[i], f.pow(xs[i], static_cast<std::uint64_t>(a)));
  }
  auto sol = solve_linear(m, rhs, f);
  if (!sol)
    throw DecodeFailure("rs_decode: no codeword within " +
                            std::to_string(max_errors) + " errors of " +
                            std::to_string(n) + " entries",
                        -1, n - max_errors);
  std::vector<std::uint64_t> q_poly(sol->begin(), sol->begin() + nq);
  std::vector<std::uint64_t> e_poly(sol->begin() + nq, sol->end());
  e_poly.push_back(1);  // monic x^a
  trim(q_poly);
  auto p_poly = poly_divide_exact(std::move(q_poly), e_poly, f);
  if (!p_poly || degree_of(*p_poly) > degree_bound)
    throw DecodeFailure("rs_decode: locator does not divide evenly (more than " +
                            std::to_string(max_errors) + " errors)",
                        -1, n - max_errors);
  trim(*p_poly);
  DecodedPoly out;
  out.coeffs = std::move(*p_poly);
  for (int i = 0; i < n; ++i) {
    if (poly_eval(out.coeffs, xs[i], f) == ys[i])
      ++out.agreements;
    else
      out.error_thetas.push_back(xs[i]);
  }
  if (static_cast<int>(out.error_thetas.size()) > max_errors)
    throw DecodeFailure("rs_decode: best candidate agrees with only " +
                            std::to_string(out.agreements) + "/" +
                            std::to_string(n) + " entries",
                        out.agreements, n - max_errors);
  return out;
}

VectorDecoded rs_decode_vector(const std::vector<VectorEvalEntry>& entries,
                               int degree_bound, int max_errors,
                               const PrimeField& f, Rng& rng) {
  std::size_t d = 0;
  for (const auto& e : entries)
    if (e.present) d = e.value.size();
  for (const auto& e : entries)
    if (e.present && e.value.size() != d)
      throw LengthMismatch("rs_decode_vector: ragged entry dimensions");

  const auto scalar_set = [&](std::size_t coord) {
    EvalSet s;
    for (const auto& e : entries)
      s.entries.push_back({e.theta, e.present ? e.value[coord] : 0, e.present});
    return s;
  };

  const auto fallback = [&]() {
    VectorDecoded out;
    out.used_fallback = true;
    out.polys.resize(d);
    std::unordered_set<std::uint64_t> errs;
    for (std::size_t c = 0; c < d; ++c) {
      DecodedPoly dec = rs_decode(scalar_set(c), degree_bound, max_errors, f);
      errs.insert(dec.error_thetas.begin(), dec.error_thetas.end());
      out.polys[c] = std::move(dec.coeffs);
    }
    out.error_thetas.assign(errs.begin(), errs.end());
    std::sort(out.error_thetas.begin(), out.error_thetas.end());
    return out;
  };

  // locate errors once on a random linear combination of the coordinates
  FieldVector combo(d);
  for (auto& r : combo) r = rng.next_below(f.modulus());
  EvalSet combined;
  for (const auto& e : entries) {
    std::uint64_t v = 0;
    if (e.present)
      for (std::size_t c = 0; c < d; ++c)
        v = f.add(v, f.mul(combo[c], e.value[c]));
    combined.entries.push_back({e.theta, v, e.present});
  }
  DecodedPoly located;
  try {
    located = rs_decode(combined, degree_bound, max_errors, f);
  } catch (const DecodeFailure&) {
    return fallback();
  }
  std::unordered_set<std::uint64_t> bad(located.error_thetas.begin(),
                                        located.error_thetas.end());
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pts;
  std::vector<std::pair<std::uint64_t, const FieldVector*>> good;
  for (const auto& e : entries)
    if (e.present && !bad.count(e.theta)) good.emplace_back(e.theta, &e.value);
  if (static_cast<int>(good.size()) < degree_bound + 1) return fallback();

  VectorDecoded out;
  out.polys.resize(d);
  for (std::size_t c = 0; c < d; ++c) {
    pts.clear();
    for (int i = 0; i <= degree_bound; ++i)
      pts.emplace_back(good[i].first, (*good[i].second)[c]);
    auto poly = lagrange_interpolate(pts, f);
    // a cancellation in the combination can hide an error; re-verify
    for (std::size_t i = degree_bound + 1; i < good.size(); ++i)
      if (poly_eval(poly, good[i].first, f) != (*good[i].second)[c])
        return fallback();
    out.polys[c] = std::move(poly);
  }
  out.error_thetas = located.error_thetas;
  std::sort(out.error_thetas.begin(), out.error_thetas.end());
  return out;
}

std::uint64_t recover_secret(const DecodedPoly& poly) {
  return poly.coeffs.empty() ? 0 : poly.coeffs.front();
}

FieldVector recover_secret(const VectorDecoded& dec) {
  FieldVector out(dec.polys.size());
  for (std::size_t c = 0; c < dec.polys.size(); ++c)
    out[c] = dec.polys[c].empty() ? 0 : dec.polys[c].front();
  return out;
}

}  // namespace brea
