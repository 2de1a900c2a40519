#include "brea/vss.hpp"

#include <string>
#include <unordered_set>
#include <utility>

#include "brea/parallel.hpp"
#include "brea/rscode.hpp"

namespace brea {

EvalPoints EvalPoints::consecutive(int n, const PrimeField& f) {
  if (n <= 0) throw BadParams("need at least one evaluation point");
  if (static_cast<std::uint64_t>(n) >= f.modulus())
    throw BadParams("more evaluation points than field elements");
  EvalPoints pts;
  pts.thetas.resize(n);
  for (int i = 0; i < n; ++i) pts.thetas[i] = static_cast<std::uint64_t>(i) + 1;
  return pts;
}

void EvalPoints::validate(const PrimeField& f) const {
  std::unordered_set<std::uint64_t> seen;
  for (const std::uint64_t t : thetas) {
    if (t == 0) throw BadParams("theta = 0 is reserved for the secret");
    if (t >= f.modulus()) throw BadParams("theta outside field");
    if (!seen.insert(t).second)
      throw DuplicatePoints("repeated theta " + std::to_string(t));
  }
}

FieldVector SharePolynomial::eval(std::uint64_t theta,
                                  const PrimeField& f) const {
  const std::size_t d = coeffs.front().size();
  FieldVector out(d, 0);
  for (std::size_t k = coeffs.size(); k > 0; --k)
    for (std::size_t c = 0; c < d; ++c)
      out[c] = f.add(f.mul(out[c], theta), coeffs[k - 1][c]);
  return out;
}

SharePolynomial gen_poly(const FieldVector& secret, int degree_t,
                         const PrimeField& f, Rng& rng) {
  if (degree_t < 0) throw BadParams("negative sharing degree");
  SharePolynomial poly;
  poly.coeffs.reserve(degree_t + 1);
  poly.coeffs.push_back(secret);
  for (int k = 0; k < degree_t; ++k) {
    FieldVector r(secret.size());
    for (auto& v : r) v = rng.next_below(f.modulus());
    poly.coeffs.push_back(std::move(r));
  }
  return poly;
}

std::vector<Share> gen_shares(const SharePolynomial& poly,
                              const EvalPoints& points, int from_user,
                              const PrimeField& f) {
  if (poly.degree() >= static_cast<int>(points.thetas.size()))
    throw BadParams("sharing degree " + std::to_string(poly.degree()) +
                    " needs more than " +
                    std::to_string(points.thetas.size()) + " receivers");
  std::vector<Share> shares(points.thetas.size());
  for (std::size_t j = 0; j < points.thetas.size(); ++j)
    shares[j] = Share{from_user, static_cast<int>(j),
                      poly.eval(points.thetas[j], f)};
  return shares;
}

CommitmentVector gen_commitments(const SharePolynomial& poly,
                                 const CommitGroup& grp, int from_user) {
  CommitmentVector out;
  out.from_user = from_user;
  out.commits.reserve(poly.coeffs.size());
  for (const auto& coeff : poly.coeffs) {
    std::vector<std::uint64_t> row(coeff.size());
    for (std::size_t c = 0; c < coeff.size(); ++c)
      row[c] = grp.pow(grp.psi, coeff[c]);
    out.commits.push_back(std::move(row));
  }
  return out;
}

bool verify_share(const Share& share, const CommitmentVector& commits,
                  std::uint64_t theta_j, const CommitGroup& grp,
                  const PrimeField& f) {
  if (commits.commits.empty()) return false;
  const std::size_t d = share.value.size();
  for (const auto& row : commits.commits)
    if (row.size() != d) return false;
  for (std::size_t c = 0; c < d; ++c) {
    const std::uint64_t lhs = grp.pow(grp.psi, share.value[c]);
    std::uint64_t rhs = 1;
    std::uint64_t theta_pow = 1;  // theta_j^k mod p
    for (const auto& row : commits.commits) {
      rhs = grp.mul(rhs, grp.pow(row[c], theta_pow));
      theta_pow = f.mul(theta_pow, theta_j);
    }
    if (lhs != rhs) return false;
  }
  return true;
}

int privacy_consistency_count(const std::vector<Share>& observed,
                              const FieldVector& candidate_secret,
                              const EvalPoints& points, int degree_t,
                              const PrimeField& f) {
  if (static_cast<int>(observed.size()) < degree_t)
    throw BadParams("consistency count needs at least T observed shares");
  std::unordered_set<std::uint64_t> seen{0};  // the secret's point
  for (const auto& s : observed) {
    const std::uint64_t theta = points.thetas.at(s.to_user);
    if (!seen.insert(theta).second)
      throw DuplicatePoints("two shares at theta " + std::to_string(theta));
    if (s.value.size() != candidate_secret.size())
      throw LengthMismatch("share/candidate dimension mismatch");
  }
  // Through (0, candidate) plus the first T shares there is exactly one
  // polynomial of degree <= T; any further share either lies on it or rules
  // the candidate out.
  const std::size_t d = candidate_secret.size();
  for (std::size_t c = 0; c < d; ++c) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> pts;
    pts.emplace_back(0, candidate_secret[c]);
    for (int k = 0; k < degree_t; ++k)
      pts.emplace_back(points.thetas.at(observed[k].to_user),
                       observed[k].value[c]);
    const auto poly = lagrange_interpolate(pts, f);
    for (std::size_t k = degree_t; k < observed.size(); ++k)
      if (poly_eval(poly, points.thetas.at(observed[k].to_user), f) !=
          observed[k].value[c])
        return 0;
  }
  return 1;
}

std::vector<std::vector<std::uint8_t>> verify_all_shares(
    const std::vector<std::vector<Share>>& shares_by_sender,
    const std::vector<CommitmentVector>& commits_by_sender,
    const EvalPoints& points, const CommitGroup& grp, const PrimeField& f,
    bool parallel) {
  const std::size_t n = shares_by_sender.size();
  if (commits_by_sender.size() != n)
    throw LengthMismatch("share/commitment sender counts differ");
  std::vector<std::vector<std::uint8_t>> verdict(
      n, std::vector<std::uint8_t>(n, 0));
  parallel_for(static_cast<std::int64_t>(n * n), parallel, [&](std::int64_t t) {
    const std::size_t i = static_cast<std::size_t>(t) / n;  // sender
    const std::size_t j = static_cast<std::size_t>(t) % n;  // receiver
    verdict[i][j] = verify_share(shares_by_sender[i][j], commits_by_sender[i],
                                 points.thetas[j], grp, f)
                        ? 1
                        : 0;
  });
  return verdict;
}

}  // namespace brea
