#include "brea/protocol.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include "brea/parallel.hpp"
#include "brea/rscode.hpp"

namespace brea {

namespace {

// stream tags for per-round rng derivation
constexpr std::uint64_t kQuantTag = 0x71;
constexpr std::uint64_t kShareTag = 0x73;
constexpr std::uint64_t kByzTag = 0x62;
constexpr std::uint64_t kComboTag = 0x63;

Phase phase_of(MsgKind k) {
  switch (k) {
    case MsgKind::share:
    case MsgKind::commit_broadcast:
      return Phase::share;
    case MsgKind::distance_report:
      return Phase::distance;
    case MsgKind::selected_broadcast:
      return Phase::select;
    case MsgKind::aggregate_share:
      return Phase::aggregate;
    case MsgKind::global_model:
      return Phase::update;
  }
  return Phase::update;
}

bool corrupts_shares(ByzMode m) {
  return m == ByzMode::invalid_shares || m == ByzMode::all;
}
bool poisons_model(ByzMode m) {
  return m == ByzMode::poison_model || m == ByzMode::all;
}
bool corrupts_distances(ByzMode m) {
  return m == ByzMode::corrupt_distances || m == ByzMode::all;
}
bool corrupts_aggregates(ByzMode m) {
  return m == ByzMode::corrupt_aggregates || m == ByzMode::all;
}
// modes that also emit arbitrary accusations
bool lies_in_verify(ByzMode m) {
  return corrupts_shares(m) || corrupts_distances(m);
}

FieldVector uniform_vector(std::size_t d, const PrimeField& f, Rng& rng) {
  FieldVector v(d);
  for (auto& x : v) x = rng.next_below(f.modulus());
  return v;
}

}  // namespace

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::share: return "share";
    case Phase::verify: return "verify";
    case Phase::distance: return "distance";
    case Phase::select: return "select";
    case Phase::aggregate: return "aggregate";
    case Phase::update: return "update";
  }
  return "?";
}

ByzMode byz_mode_from_string(const std::string& s) {
  if (s == "none") return ByzMode::none;
  if (s == "poison" || s == "poison-model") return ByzMode::poison_model;
  if (s == "invalid-shares") return ByzMode::invalid_shares;
  if (s == "corrupt-distances") return ByzMode::corrupt_distances;
  if (s == "corrupt-aggregates") return ByzMode::corrupt_aggregates;
  if (s == "all") return ByzMode::all;
  throw ConfigError("unknown adversary mode: " + s);
}

const char* byz_mode_name(ByzMode m) {
  switch (m) {
    case ByzMode::none: return "none";
    case ByzMode::poison_model: return "poison-model";
    case ByzMode::invalid_shares: return "invalid-shares";
    case ByzMode::corrupt_distances: return "corrupt-distances";
    case ByzMode::corrupt_aggregates: return "corrupt-aggregates";
    case ByzMode::all: return "all";
  }
  return "?";
}

void RoundConfig::validate() const {
  if (n < 1) throw BadParams("need at least one user");
  if (a < 0 || d < 0) throw BadParams("negative adversary or dropout budget");
  if (t < 1) throw BadParams("collusion threshold T must be >= 1");
  if (m < 1) throw BadParams("selected-set size m must be >= 1");
  if (q < 1) throw BadParams("quantization level q must be >= 1");
  if (grp.p != field.modulus())
    throw BadParams("commitment group does not match the field");
  if (static_cast<int>(points.thetas.size()) != n)
    throw BadParams("need exactly one evaluation point per user");
  points.validate(field);
  const int bound = 2 * a + 1 + std::max(m + 2, d + 2 * t);
  if (n < bound)
    throw BadParams("infeasible: N = " + std::to_string(n) +
                    " < 2A+1+max{m+2, D+2T} = " + std::to_string(bound));
}

void MessageLog::advance(Phase p) {
  if (static_cast<int>(p) < static_cast<int>(current))
    throw PhaseOrderViolation("phase moved backwards");
  current = p;
}

void MessageLog::record(MsgKind k) {
  if (phase_of(k) != current)
    throw PhaseOrderViolation(std::string("message kind not accepted in phase ") +
                              phase_name(current));
  ++counts[static_cast<int>(k)];
}

std::uint64_t MessageLog::total() const {
  std::uint64_t t = 0;
  for (const auto c : counts) t += c;
  return t;
}

SharePhaseOut user_share_phase(UserState& u, const RoundConfig& cfg,
                               Rng& quant_rng, Rng& share_rng, Rng& byz_rng) {
  const std::size_t d = u.model.size();
  if (poisons_model(u.byz.mode)) {
    u.wbar = uniform_vector(d, cfg.field, byz_rng);
    u.scaled.resize(d);
    for (std::size_t c = 0; c < d; ++c)
      u.scaled[c] = unmap_phi(u.wbar[c], cfg.field);
  } else {
    u.scaled = quantize_model_scaled(u.model, cfg.q, quant_rng);
    u.wbar = map_phi(u.scaled, cfg.field);
  }
  u.poly = gen_poly(u.wbar, cfg.t, cfg.field, share_rng);
  SharePhaseOut out;
  auto shares = gen_shares(u.poly, cfg.points, u.id, cfg.field);
  if (corrupts_shares(u.byz.mode))
    for (auto& s : shares) s.value = uniform_vector(d, cfg.field, byz_rng);
  out.shares.reserve(shares.size());
  for (std::size_t j = 0; j < shares.size(); ++j)
    out.shares.push_back(ShareMsg{u.id, static_cast<int>(j), shares[j]});
  out.commits = CommitBroadcast{u.id, gen_commitments(u.poly, cfg.grp, u.id)};
  u.shared = true;
  return out;
}

void user_verify_phase(UserState& u, const RoundConfig& cfg) {
  const int n = cfg.n;
  u.accept.assign(n, 0);
  for (int s = 0; s < n; ++s) {
    if (!u.received[s] || !u.commits[s]) continue;
    u.accept[s] = verify_share(*u.received[s], *u.commits[s],
                               cfg.points.thetas[u.id], cfg.grp, cfg.field)
                      ? 1
                      : 0;
  }
}

DistanceReport user_distance_phase(const UserState& u, const RoundConfig& cfg,
                                   Rng& byz_rng) {
  const int n = cfg.n;
  DistanceReport rep;
  rep.reporter = u.id;
  rep.values.assign(pair_count(n), 0);
  rep.present.assign(pair_count(n), 0);
  const bool corrupt = corrupts_distances(u.byz.mode);
  for (int j = 0; j < n; ++j) {
    if (!u.accept[j]) continue;
    for (int k = j + 1; k < n; ++k) {
      if (!u.accept[k]) continue;
      const int idx = pair_index(n, j, k);
      rep.present[idx] = 1;
      rep.values[idx] =
          corrupt ? byz_rng.next_below(cfg.field.modulus())
                  : sq_dist(cfg.field, u.received[j]->value, u.received[k]->value);
    }
  }
  if (lies_in_verify(u.byz.mode)) {
    for (int s = 0; s < n; ++s)
      if (s != u.id && u.received[s] && byz_rng.next_unit() < 0.5)
        rep.accusations.push_back(s);
  } else {
    for (int s = 0; s < n; ++s)
      if (u.received[s] && u.commits[s] && !u.accept[s])
        rep.accusations.push_back(s);
  }
  return rep;
}

SelectedSetBroadcast server_select_phase(
    ServerState& server, const std::vector<DistanceReport>& reports,
    const RoundConfig& cfg) {
  const int n = cfg.n;
  server.acc_count.assign(n, 0);
  std::vector<std::uint8_t> reported(n, 0);
  for (const auto& rep : reports) {
    reported[rep.reporter] = 1;
    std::set<int> uniq(rep.accusations.begin(), rep.accusations.end());
    for (const int s : uniq)
      if (s >= 0 && s < n && s != rep.reporter) ++server.acc_count[s];
  }
  server.excluded.clear();
  server.candidates.clear();
  for (int i = 0; i < n; ++i) {
    if (server.acc_count[i] > cfg.a)
      server.excluded.push_back(i);
    else if (reported[i])
      server.candidates.push_back(i);
  }
  if (static_cast<int>(server.candidates.size()) < cfg.m)
    throw BadParams("only " + std::to_string(server.candidates.size()) +
                    " candidates for m = " + std::to_string(cfg.m));
  server.dist = decode_all_distances(reports, n, server.candidates, 2 * cfg.t,
                                     cfg.a, cfg.quant(), cfg.points,
                                     cfg.parallel, &server.dist_error_users);
  if (cfg.m == static_cast<int>(server.candidates.size())) {
    // degenerate select-all configuration; no scoring needed
    server.sel = SelectionResult{};
    server.sel.selected = server.candidates;
    server.sel.lemma_condition_ok = false;
  } else {
    server.sel = multi_krum(server.dist, server.candidates, cfg.a, cfg.m);
  }
  SelectedSetBroadcast bc;
  bc.selected = server.sel.selected;
  std::sort(bc.selected.begin(), bc.selected.end());
  return bc;
}

AggregateShareMsg user_aggregate_phase(const UserState& u,
                                       const SelectedSetBroadcast& sel,
                                       const RoundConfig& cfg, Rng& byz_rng) {
  if (corrupts_aggregates(u.byz.mode))
    return AggregateShareMsg{
        u.id, uniform_vector(u.model.size(), cfg.field, byz_rng)};
  if (static_cast<int>(sel.selected.size()) != cfg.m)
    throw RefusedSmallSet("honest user refuses selected set of size " +
                          std::to_string(sel.selected.size()) +
                          " (agreed m = " + std::to_string(cfg.m) + ")");
  FieldVector acc(u.model.size(), 0);
  for (const int j : sel.selected) {
    if (!u.received[j])
      throw Error("selected user " + std::to_string(j) + " never shared");
    const FieldVector& s = u.received[j]->value;
    for (std::size_t c = 0; c < acc.size(); ++c)
      acc[c] = cfg.field.add(acc[c], s[c]);
  }
  return AggregateShareMsg{u.id, std::move(acc)};
}

RealVector server_update_phase(ServerState& server,
                               const std::vector<AggregateShareMsg>& msgs,
                               const RoundConfig& cfg, Rng& combo_rng,
                               const RealVector& w, double lr) {
  std::vector<VectorEvalEntry> entries(cfg.n);
  for (int i = 0; i < cfg.n; ++i)
    entries[i] = VectorEvalEntry{cfg.points.thetas[i], {}, false};
  for (const auto& msg : msgs) {
    entries[msg.from].value = msg.value;
    entries[msg.from].present = true;
  }
  VectorDecoded dec =
      rs_decode_vector(entries, cfg.t, cfg.a, cfg.field, combo_rng);
  server.agg_error_users.clear();
  for (const std::uint64_t theta : dec.error_thetas)
    for (int i = 0; i < cfg.n; ++i)
      if (cfg.points.thetas[i] == theta) server.agg_error_users.push_back(i);
  server.agg_field = recover_secret(dec);
  server.agg_sum = dequantize_aggregate(server.agg_field, cfg.quant());
  if (server.agg_sum.size() != w.size())
    throw LengthMismatch("aggregate dimension does not match the model");
  RealVector next(w);
  for (std::size_t c = 0; c < next.size(); ++c)
    next[c] -= lr * server.agg_sum[c];
  return next;
}

RoundOutcome run_round(const std::vector<UserRoundInput>& inputs,
                       const RoundConfig& cfg, const DropSchedule& drops,
                       const Rng& round_rng, const RealVector& w, double lr) {
  cfg.validate();
  const int n = cfg.n;
  if (static_cast<int>(inputs.size()) != n)
    throw BadParams("expected one input per user");
  int byz_count = 0;
  for (const auto& in : inputs) {
    if (in.model.size() != inputs.front().model.size())
      throw LengthMismatch("user models of unequal dimension");
    if (in.byz.mode != ByzMode::none) ++byz_count;
  }
  if (byz_count > cfg.a)
    throw BadParams(std::to_string(byz_count) + " Byzantine users exceed A = " +
                    std::to_string(cfg.a));
  if (static_cast<int>(drops.size()) > cfg.d)
    throw BadParams(std::to_string(drops.size()) + " dropouts exceed D = " +
                    std::to_string(cfg.d));
  for (const auto& [user, ph] : drops.drop_at) {
    if (user < 0 || user >= n) throw BadParams("dropout of unknown user");
    if (ph != Phase::share && ph != Phase::distance && ph != Phase::aggregate)
      throw BadParams("dropouts happen at emitting phases only");
  }

  RoundOutcome out;
  std::vector<UserState> users(n);
  ServerState server;
  std::vector<Rng> quant_rng, share_rng, byz_rng;
  for (int i = 0; i < n; ++i) {
    users[i].id = i;
    users[i].model = inputs[i].model;
    users[i].byz = inputs[i].byz;
    users[i].received.resize(n);
    users[i].commits.resize(n);
    quant_rng.push_back(round_rng.derive(kQuantTag, i));
    share_rng.push_back(round_rng.derive(kShareTag, i));
    byz_rng.push_back(round_rng.derive(kByzTag, i));
  }
  Rng combo_rng = round_rng.derive(kComboTag, n);

  using clock = std::chrono::steady_clock;
  const auto timed = [&out](Phase ph, auto&& body) {
    const auto t0 = clock::now();
    body();
    out.phase_ms[static_cast<int>(ph)] =
        std::chrono::duration<double, std::milli>(clock::now() - t0).count();
  };
  const auto guarded = [&](Phase ph, auto&& body) {
    try {
      timed(ph, body);
    } catch (const RoundAbort&) {
      throw;
    } catch (const Error& e) {
      throw RoundAbort(phase_name(ph), e.what());
    }
  };

  SelectedSetBroadcast broadcast;
  guarded(Phase::share, [&] {
    out.log.advance(Phase::share);
    std::vector<std::optional<SharePhaseOut>> outs(n);
    parallel_for(n, cfg.parallel, [&](std::int64_t i) {
      if (!drops.active(static_cast<int>(i), Phase::share)) return;
      outs[i] = user_share_phase(users[i], cfg, quant_rng[i], share_rng[i],
                                 byz_rng[i]);
    });
    for (int i = 0; i < n; ++i) {
      if (!outs[i]) continue;
      for (const auto& msg : outs[i]->shares) {
        out.log.record(MsgKind::share);
        users[msg.to].received[i] = msg.share;
      }
      out.log.record(MsgKind::commit_broadcast);
      for (int j = 0; j < n; ++j)
        users[j].commits[i] = outs[i]->commits.commits;
    }
    // honest-model wrap-around diagnostic (Byzantine vectors wrap by design)
    std::vector<std::vector<std::int64_t>> honest_scaled;
    for (int i = 0; i < n; ++i)
      if (users[i].shared && users[i].byz.mode == ByzMode::none)
        honest_scaled.push_back(users[i].scaled);
    check_overflow(honest_scaled, cfg.quant(), OverflowMode::distance);
    if (cfg.keep_models) {
      out.quantized_models.resize(n);
      for (int i = 0; i < n; ++i)
        if (users[i].shared) out.quantized_models[i] = users[i].wbar;
    }
  });

  guarded(Phase::verify, [&] {
    out.log.advance(Phase::verify);
    parallel_for(n, cfg.parallel, [&](std::int64_t i) {
      if (!drops.active(static_cast<int>(i), Phase::verify)) return;
      user_verify_phase(users[i], cfg);
    });
  });

  std::vector<DistanceReport> reports;
  guarded(Phase::distance, [&] {
    out.log.advance(Phase::distance);
    std::vector<std::optional<DistanceReport>> reps(n);
    parallel_for(n, cfg.parallel, [&](std::int64_t i) {
      if (!drops.active(static_cast<int>(i), Phase::distance)) return;
      reps[i] = user_distance_phase(users[i], cfg, byz_rng[i]);
    });
    for (int i = 0; i < n; ++i) {
      if (!reps[i]) continue;
      out.log.record(MsgKind::distance_report);
      reports.push_back(std::move(*reps[i]));
    }
  });

  guarded(Phase::select, [&] {
    out.log.advance(Phase::select);
    broadcast = server_select_phase(server, reports, cfg);
    out.log.record(MsgKind::selected_broadcast);
    for (int i = 0; i < n; ++i)
      if (drops.active(i, Phase::select)) users[i].selected_set = broadcast.selected;
  });

  std::vector<AggregateShareMsg> agg_msgs;
  guarded(Phase::aggregate, [&] {
    out.log.advance(Phase::aggregate);
    std::vector<std::optional<AggregateShareMsg>> msgs(n);
    parallel_for(n, cfg.parallel, [&](std::int64_t i) {
      if (!drops.active(static_cast<int>(i), Phase::aggregate)) return;
      msgs[i] = user_aggregate_phase(users[i], broadcast, cfg, byz_rng[i]);
    });
    for (int i = 0; i < n; ++i) {
      if (!msgs[i]) continue;
      out.log.record(MsgKind::aggregate_share);
      agg_msgs.push_back(std::move(*msgs[i]));
    }
  });

  guarded(Phase::update, [&] {
    out.log.advance(Phase::update);
    out.new_model = server_update_phase(server, agg_msgs, cfg, combo_rng, w, lr);
    // aggregate wrap-around is only checkable when the selected set is honest
    bool all_honest = true;
    std::vector<std::vector<std::int64_t>> sel_scaled;
    for (const int j : broadcast.selected) {
      if (users[j].byz.mode != ByzMode::none) all_honest = false;
      sel_scaled.push_back(users[j].scaled);
    }
    if (all_honest) {
      check_overflow(sel_scaled, cfg.quant(), OverflowMode::aggregate);
      out.aggregate_overflow_checked = true;
    }
  });

  out.agg_field = server.agg_field;
  out.agg_sum = server.agg_sum;
  out.selected = broadcast.selected;
  out.excluded = server.excluded;
  out.acc_count = server.acc_count;
  out.dist_error_users = server.dist_error_users;
  out.agg_error_users = server.agg_error_users;
  out.lemma_condition_ok = server.sel.lemma_condition_ok;
  for (const int j : broadcast.selected)
    if (users[j].byz.mode != ByzMode::none) ++out.selected_byzantine;
  return out;
}

nlohmann::json RoundOutcome::to_json() const {
  nlohmann::json j;
  j["selected"] = selected;
  j["excluded"] = excluded;
  j["accusation_counts"] = acc_count;
  j["distance_error_users"] = dist_error_users;
  j["aggregate_error_users"] = agg_error_users;
  j["selected_byzantine"] = selected_byzantine;
  j["lemma_condition_ok"] = lemma_condition_ok;
  j["aggregate_overflow_checked"] = aggregate_overflow_checked;
  j["messages"] = {{"shares", log.counts[0]},
                   {"commit_broadcasts", log.counts[1]},
                   {"distance_reports", log.counts[2]},
                   {"selected_broadcasts", log.counts[3]},
                   {"aggregate_shares", log.counts[4]},
                   {"total", log.total()}};
  return j;
}

}  // namespace brea
