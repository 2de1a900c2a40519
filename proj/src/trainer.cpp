#include "brea/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace brea {

namespace {

// log-sum-exp stable class scores; returns probabilities in `probs`
void softmax_scores(const RealVector& w, const std::vector<double>& x,
                    int classes, int feature_dim, std::vector<double>& probs) {
  probs.assign(classes, 0.0);
  const int stride = feature_dim + 1;
  double maxv = -1e300;
  for (int c = 0; c < classes; ++c) {
    double s = w[c * stride + feature_dim];  // bias
    for (int f = 0; f < feature_dim; ++f) s += w[c * stride + f] * x[f];
    probs[c] = s;
    maxv = std::max(maxv, s);
  }
  double norm = 0.0;
  for (int c = 0; c < classes; ++c) {
    probs[c] = std::exp(probs[c] - maxv);
    norm += probs[c];
  }
  for (int c = 0; c < classes; ++c) probs[c] /= norm;
}

}  // namespace

Dataset Dataset::synthetic_mixture(int classes, int feature_dim, int n,
                                   double spread, Rng& rng) {
  if (classes < 2 || feature_dim < 1 || n < classes)
    throw BadParams("mixture needs >= 2 classes, >= 1 feature, n >= classes");
  std::vector<std::vector<double>> means(classes,
                                         std::vector<double>(feature_dim));
  for (auto& m : means)
    for (auto& v : m) v = spread * rng.next_gaussian();
  Dataset d;
  d.feature_dim = feature_dim;
  d.classes = classes;
  d.x.resize(n);
  d.y.resize(n);
  for (int i = 0; i < n; ++i) {
    const int c = i % classes;
    d.y[i] = c;
    d.x[i].resize(feature_dim);
    for (int f = 0; f < feature_dim; ++f)
      d.x[i][f] = means[c][f] + rng.next_gaussian();
  }
  // shuffle so class labels are not periodic in the index
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.next_below(i + 1));
    std::swap(d.x[i], d.x[j]);
    std::swap(d.y[i], d.y[j]);
  }
  return d;
}

Dataset Dataset::load_csv(const std::string& path, int classes) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dataset: " + path);
  Dataset d;
  d.classes = classes;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::vector<double> row;
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() < 2) throw ConfigError("csv row needs features + label");
    const int label = static_cast<int>(row.back());
    if (label < 0 || label >= classes)
      throw ConfigError("label " + std::to_string(label) + " out of range");
    row.pop_back();
    if (d.feature_dim == 0) d.feature_dim = static_cast<int>(row.size());
    if (static_cast<int>(row.size()) != d.feature_dim)
      throw ConfigError("ragged csv rows");
    d.x.push_back(std::move(row));
    d.y.push_back(label);
  }
  if (d.size() == 0) throw ConfigError("empty dataset: " + path);
  return d;
}

std::vector<std::vector<int>> partition_users(const Dataset& data, int n_users,
                                              Rng& rng) {
  if (n_users < 1) throw BadParams("need at least one user");
  const int per_user = static_cast<int>(data.size()) / n_users;
  if (per_user < 1) throw BadParams("fewer samples than users");
  std::vector<int> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  for (int i = static_cast<int>(order.size()) - 1; i > 0; --i)
    std::swap(order[i], order[rng.next_below(i + 1)]);
  std::vector<std::vector<int>> parts(n_users);
  for (int u = 0; u < n_users; ++u)
    parts[u].assign(order.begin() + u * per_user,
                    order.begin() + (u + 1) * per_user);
  return parts;
}

int model_dim(int classes, int feature_dim) {
  return classes * (feature_dim + 1);
}

RealVector logistic_gradient(const RealVector& w, const Dataset& data,
                             const std::vector<int>& idx) {
  if (idx.empty()) throw EmptyPartition("gradient over no samples");
  const int stride = data.feature_dim + 1;
  RealVector g(w.size(), 0.0);
  std::vector<double> probs;
  for (const int i : idx) {
    softmax_scores(w, data.x[i], data.classes, data.feature_dim, probs);
    for (int c = 0; c < data.classes; ++c) {
      const double delta = probs[c] - (c == data.y[i] ? 1.0 : 0.0);
      for (int f = 0; f < data.feature_dim; ++f)
        g[c * stride + f] += delta * data.x[i][f];
      g[c * stride + data.feature_dim] += delta;
    }
  }
  const double inv = 1.0 / static_cast<double>(idx.size());
  for (auto& v : g) v *= inv;
  return g;
}

RealVector local_gradient(const RealVector& w, const Dataset& data,
                          const std::vector<int>& partition, int batch_size,
                          Rng& rng) {
  if (partition.empty()) throw EmptyPartition("user holds no samples");
  if (batch_size < 1 || batch_size > static_cast<int>(partition.size()))
    throw BadParams("batch size must be in [1, partition size]");
  std::vector<int> batch(batch_size);
  for (int b = 0; b < batch_size; ++b)
    batch[b] = partition[rng.next_below(partition.size())];
  return logistic_gradient(w, data, batch);
}

std::pair<double, double> evaluate(const RealVector& w, const Dataset& data) {
  double ce = 0.0;
  int correct = 0;
  std::vector<double> probs;
  for (std::size_t i = 0; i < data.size(); ++i) {
    softmax_scores(w, data.x[i], data.classes, data.feature_dim, probs);
    const double p = std::max(probs[data.y[i]], 1e-300);
    ce -= std::log(p);
    const int pred = static_cast<int>(
        std::max_element(probs.begin(), probs.end()) - probs.begin());
    if (pred == data.y[i]) ++correct;
  }
  return {ce / static_cast<double>(data.size()),
          static_cast<double>(correct) / static_cast<double>(data.size())};
}

double LrSchedule::at(int t) const {
  if (kind == Kind::constant) return gamma0;
  return gamma0 / std::pow(1.0 + static_cast<double>(t), power);
}

RealVector fedavg_round(const RealVector& w,
                        const std::vector<RealVector>& selected_models,
                        double lr) {
  RealVector next(w);
  for (const auto& g : selected_models) {
    if (g.size() != w.size())
      throw LengthMismatch("model dimension mismatch in fedavg");
    for (std::size_t c = 0; c < next.size(); ++c) next[c] -= lr * g[c];
  }
  return next;
}

BreaRoundResult brea_round(const RealVector& w,
                           const std::vector<UserRoundInput>& inputs,
                           const RoundConfig& cfg, const DropSchedule& drops,
                           const Rng& round_rng, double lr) {
  BreaRoundResult res;
  res.outcome = run_round(inputs, cfg, drops, round_rng, w, lr);
  res.w = res.outcome.new_model;
  return res;
}

}  // namespace brea
