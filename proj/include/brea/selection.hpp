#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "brea/quantize.hpp"
#include "brea/vss.hpp"

namespace brea {

// Symmetric real-domain pairwise distance matrix over all n users; entries
// for pairs outside the decoded candidate set stay +inf.
struct DistanceMatrix {
  int n = 0;
  std::vector<double> d;

  explicit DistanceMatrix(int n_ = 0)
      : n(n_), d(static_cast<std::size_t>(n_) * n_,
                 std::numeric_limits<double>::infinity()) {
    for (int i = 0; i < n; ++i) set(i, i, 0.0);
  }
  double at(int j, int k) const { return d[static_cast<std::size_t>(j) * n + k]; }
  void set(int j, int k, double v) {
    d[static_cast<std::size_t>(j) * n + k] = v;
    d[static_cast<std::size_t>(k) * n + j] = v;
  }
};

struct SelectionResult {
  std::vector<int> selected;       // in selection order, size m
  std::vector<double> iter_scores; // winning score per iteration
  std::vector<int> iter_chosen;    // winner per iteration (== selected)
  bool lemma_condition_ok = true;  // 2A+2 < n_candidates - m
};

// Pair index helpers for the j < k enumeration over n users.
inline int pair_count(int n) { return n * (n - 1) / 2; }
inline int pair_index(int n, int j, int k) {
  return j * (2 * n - j - 1) / 2 + (k - j - 1);
}

// One user's secure distance report: a value per global pair index, with a
// presence flag (reporters omit pairs whose senders they rejected).
struct DistanceReport {
  int reporter = -1;
  std::vector<std::uint64_t> values;   // size pair_count(n)
  std::vector<std::uint8_t> present;   // size pair_count(n)
  std::vector<int> accusations;        // senders whose shares failed Eq. checks
};

// Decodes every candidate pair's distance polynomial (degree <= 2T) from the
// reports, then converts the recovered field values to the real domain.
// Reports from every reporter are treated uniformly; missing reports are
// erasures. Throws DecodeFailure tagged with the failing pair. The per-pair
// decodes are the hot loop of the round and run in parallel; pass
// parallel = false for the serial reference.
DistanceMatrix decode_all_distances(
    const std::vector<DistanceReport>& reports, int n_users,
    const std::vector<int>& candidates, int degree_bound, int max_errors,
    const QuantConfig& qcfg, const EvalPoints& points, bool parallel,
    std::vector<int>* error_users = nullptr);

// Multi-Krum score: sum over the closest-set of user j, the
// (|remaining| - A - 2) members of `remaining` nearest to j (j itself
// included at distance zero). Throws BadParams when that size is < 1.
double krum_score(int j, const DistanceMatrix& dist,
                  const std::vector<int>& remaining, int byzantine_a);

// m rounds of argmin-by-score over the candidate set, removing each winner.
// Ties break toward the lowest user index. Deterministic given the matrix.
SelectionResult multi_krum(const DistanceMatrix& dist,
                           const std::vector<int>& candidates, int byzantine_a,
                           int m);

}  // namespace brea
