#include "brea/selection.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <string>

#include "brea/parallel.hpp"
#include "brea/rscode.hpp"

namespace brea {

DistanceMatrix decode_all_distances(
    const std::vector<DistanceReport>& reports, int n_users,
    const std::vector<int>& candidates, int degree_bound, int max_errors,
    const QuantConfig& qcfg, const EvalPoints& points, bool parallel,
    std::vector<int>* error_users) {
  std::vector<const DistanceReport*> by_id(n_users, nullptr);
  for (const auto& r : reports) {
    if (r.reporter < 0 || r.reporter >= n_users)
      throw BadParams("report from unknown user " + std::to_string(r.reporter));
    by_id[r.reporter] = &r;
  }

  struct PairJob {
    int j, k;
  };
  std::vector<PairJob> jobs;
  for (std::size_t a = 0; a < candidates.size(); ++a)
    for (std::size_t b = a + 1; b < candidates.size(); ++b)
      jobs.push_back({candidates[a], candidates[b]});

  DistanceMatrix dist(n_users);
  std::vector<std::vector<std::uint64_t>> pair_errors(jobs.size());
  std::vector<std::optional<std::string>> failure(jobs.size());

  parallel_for(static_cast<std::int64_t>(jobs.size()), parallel,
               [&](std::int64_t t) {
                 const auto [j, k] = jobs[t];
                 const int pidx = pair_index(n_users, j, k);
                 EvalSet evals;
                 for (int i = 0; i < n_users; ++i) {
                   const DistanceReport* rep = by_id[i];
                   const bool present = rep && rep->present[pidx];
                   evals.entries.push_back({points.thetas[i],
                                            present ? rep->values[pidx] : 0,
                                            present});
                 }
                 try {
                   DecodedPoly dec =
                       rs_decode(evals, degree_bound, max_errors, qcfg.field);
                   dist.set(j, k, dequantize_distance(recover_secret(dec), qcfg));
                   pair_errors[t] = std::move(dec.error_thetas);
                 } catch (const Error& e) {
                   failure[t] = std::string(e.what());
                 }
               });

  for (std::size_t t = 0; t < jobs.size(); ++t)
    if (failure[t])
      throw DecodeFailure("distance pair (" + std::to_string(jobs[t].j) + "," +
                              std::to_string(jobs[t].k) + "): " + *failure[t],
                          -1, degree_bound + 1 + max_errors);

  if (error_users) {
    std::set<int> users;
    for (const auto& errs : pair_errors)
      for (const std::uint64_t theta : errs)
        for (int i = 0; i < n_users; ++i)
          if (points.thetas[i] == theta) users.insert(i);
    error_users->assign(users.begin(), users.end());
  }
  return dist;
}

double krum_score(int j, const DistanceMatrix& dist,
                  const std::vector<int>& remaining, int byzantine_a) {
  const int closest = static_cast<int>(remaining.size()) - byzantine_a - 2;
  if (closest < 1)
    throw BadParams("krum closest-set size " + std::to_string(closest) +
                    " with " + std::to_string(remaining.size()) +
                    " remaining users");
  std::vector<double> ds;
  ds.reserve(remaining.size());
  for (const int u : remaining) ds.push_back(dist.at(j, u));  // d_jj = 0
  std::sort(ds.begin(), ds.end());
  double score = 0.0;
  for (int i = 0; i < closest; ++i) score += ds[i];
  return score;
}

SelectionResult multi_krum(const DistanceMatrix& dist,
                           const std::vector<int>& candidates, int byzantine_a,
                           int m) {
  if (m < 1) throw BadParams("multi_krum: m must be >= 1");
  if (m > static_cast<int>(candidates.size()))
    throw BadParams("multi_krum: m = " + std::to_string(m) + " but only " +
                    std::to_string(candidates.size()) + " candidates");
  SelectionResult res;
  res.lemma_condition_ok =
      2 * byzantine_a + 2 < static_cast<int>(candidates.size()) - m;
  std::vector<int> remaining(candidates);
  std::sort(remaining.begin(), remaining.end());
  for (int it = 0; it < m; ++it) {
    int best = -1;
    double best_score = 0.0;
    for (const int j : remaining) {
      const double s = krum_score(j, dist, remaining, byzantine_a);
      if (best < 0 || s < best_score) {  // ties keep the lowest index
        best = j;
        best_score = s;
      }
    }
    res.selected.push_back(best);
    res.iter_chosen.push_back(best);
    res.iter_scores.push_back(best_score);
    remaining.erase(std::find(remaining.begin(), remaining.end(), best));
  }
  return res;
}

}  // namespace brea
