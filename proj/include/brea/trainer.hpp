#pragma once

#include <string>
#include <utility>
#include <vector>

#include "brea/protocol.hpp"

namespace brea {

// Feature vectors with integer labels. Per-user partitions are equal-size
// i.i.d. slices of a shuffled sample order.
struct Dataset {
  int feature_dim = 0;
  int classes = 0;
  std::vector<std::vector<double>> x;
  std::vector<int> y;

  std::size_t size() const { return y.size(); }

  // Gaussian class clusters: mean per class scaled by `spread`, unit noise.
  static Dataset synthetic_mixture(int classes, int feature_dim, int n,
                                   double spread, Rng& rng);
  // One sample per row, label in the last column.
  static Dataset load_csv(const std::string& path, int classes);
};

// Shuffled equal-size index slices, one per user (remainder dropped).
std::vector<std::vector<int>> partition_users(const Dataset& data, int n_users,
                                              Rng& rng);

// Multinomial logistic regression, weights laid out as
// w[c * (feature_dim + 1) + f] with the bias at f = feature_dim.
int model_dim(int classes, int feature_dim);

// Mean cross-entropy gradient over the given sample indices.
RealVector logistic_gradient(const RealVector& w, const Dataset& data,
                             const std::vector<int>& idx);

// Mini-batch gradient over a user partition, sampled uniformly with
// replacement. Throws EmptyPartition.
RealVector local_gradient(const RealVector& w, const Dataset& data,
                          const std::vector<int>& partition, int batch_size,
                          Rng& rng);

// (mean cross-entropy, accuracy)
std::pair<double, double> evaluate(const RealVector& w, const Dataset& data);

struct LrSchedule {
  enum class Kind { inv_pow, constant } kind = Kind::inv_pow;
  double gamma0 = 0.02;
  double power = 0.6;  // gamma0 / (1+t)^power: sum diverges, sum of squares converges

  double at(int t) const;
};

// w <- w - lr * sum of the m submitted models.
RealVector fedavg_round(const RealVector& w,
                        const std::vector<RealVector>& selected_models,
                        double lr);

struct BreaRoundResult {
  RealVector w;
  RoundOutcome outcome;
};

// One secure aggregation round: delegates to run_round, update is exactly
// w - lr * sum_{j in S} Q_q(w_j).
BreaRoundResult brea_round(const RealVector& w,
                           const std::vector<UserRoundInput>& inputs,
                           const RoundConfig& cfg, const DropSchedule& drops,
                           const Rng& round_rng, double lr);

}  // namespace brea
