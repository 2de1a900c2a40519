#pragma once

#include <cstdint>
#include <vector>

#include "brea/field.hpp"
#include "brea/rng.hpp"

namespace brea {

// The N agreed evaluation points; theta = 0 is reserved for the secret.
struct EvalPoints {
  std::vector<std::uint64_t> thetas;

  // theta_i = i + 1 for user i, the convention used throughout.
  static EvalPoints consecutive(int n, const PrimeField& f);
  void validate(const PrimeField& f) const;  // distinct, nonzero, < p
};

// f_i(theta) = secret + sum_k coeffs[k] * theta^k, one polynomial per
// coordinate; coeffs[0] is the secret vector.
struct SharePolynomial {
  std::vector<FieldVector> coeffs;  // size T+1, each of length d

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  FieldVector eval(std::uint64_t theta, const PrimeField& f) const;
};

struct Share {
  int from_user = -1;
  int to_user = -1;
  FieldVector value;
};

// Feldman commitments: commits[k][c] = psi^{coeffs[k][c]} mod lambda.
struct CommitmentVector {
  int from_user = -1;
  std::vector<std::vector<std::uint64_t>> commits;  // (T+1) x d
};

// Random polynomial of degree T with constant term `secret`.
SharePolynomial gen_poly(const FieldVector& secret, int degree_t,
                         const PrimeField& f, Rng& rng);

// Shares for every evaluation point; throws BadParams when T >= N.
std::vector<Share> gen_shares(const SharePolynomial& poly,
                              const EvalPoints& points, int from_user,
                              const PrimeField& f);

CommitmentVector gen_commitments(const SharePolynomial& poly,
                                 const CommitGroup& grp, int from_user);

// Checks psi^{s_ij} == prod_k commits[k]^{theta_j^k} coordinatewise; the
// exponents theta_j^k are reduced mod p, the products mod lambda.
bool verify_share(const Share& share, const CommitmentVector& commits,
                  std::uint64_t theta_j, const CommitGroup& grp,
                  const PrimeField& f);

// Number of degree <= T polynomials consistent with the observed shares and
// with candidate_secret at theta = 0. With exactly T shares this is 1 for
// every candidate (the information-theoretic hiding property); with more
// shares it is 1 or 0. Throws DuplicatePoints on repeated thetas and
// BadParams when fewer than T shares are supplied.
int privacy_consistency_count(const std::vector<Share>& observed,
                              const FieldVector& candidate_secret,
                              const EvalPoints& points, int degree_t,
                              const PrimeField& f);

// Batch verification of all (sender, receiver) pairs: verdict[i][j] says
// whether receiver j accepts sender i's share. Kernel of the verify phase;
// the parallel flag must not change the result.
std::vector<std::vector<std::uint8_t>> verify_all_shares(
    const std::vector<std::vector<Share>>& shares_by_sender,
    const std::vector<CommitmentVector>& commits_by_sender,
    const EvalPoints& points, const CommitGroup& grp, const PrimeField& f,
    bool parallel);

}  // namespace brea
