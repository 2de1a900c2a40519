#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "brea/selection.hpp"

namespace brea {

enum class Phase { share = 0, verify = 1, distance = 2, select = 3, aggregate = 4, update = 5 };

const char* phase_name(Phase p);

enum class ByzMode {
  none,
  poison_model,        // substitutes a uniform random vector from F_p^d
  invalid_shares,      // outgoing shares replaced by uniform field vectors
  corrupt_distances,   // distance reports replaced by uniform field values
  corrupt_aggregates,  // aggregate share replaced by a uniform field vector
  all,
};

ByzMode byz_mode_from_string(const std::string& s);
const char* byz_mode_name(ByzMode m);

struct ByzantineBehavior {
  ByzMode mode = ByzMode::none;
};

// A dropped user stops emitting from its drop phase onward; earlier
// messages stand. Only the emitting phases make sense as drop points.
struct DropSchedule {
  std::map<int, Phase> drop_at;

  bool active(int user, Phase ph) const {
    const auto it = drop_at.find(user);
    return it == drop_at.end() || static_cast<int>(ph) < static_cast<int>(it->second);
  }
  std::size_t size() const { return drop_at.size(); }
};

struct RoundConfig {
  int n = 0;  // users
  int a = 0;  // Byzantine budget
  int d = 0;  // dropout budget
  int t = 1;  // collusion threshold / sharing degree
  int m = 1;  // selected models
  std::uint64_t q = 1;
  PrimeField field;
  CommitGroup grp;
  EvalPoints points;
  bool parallel = true;
  bool keep_models = false;  // retain per-user quantized models in the outcome

  QuantConfig quant() const { return QuantConfig{q, field}; }
  // Feasibility: N >= 2A+1+max{m+2, D+2T}, 2A+2 < N-m, T >= 1, m >= 1.
  void validate() const;
};

// Message kinds, gated by phase: a kind delivered outside its phase is
// rejected with PhaseOrderViolation, never silently consumed.
enum class MsgKind {
  share = 0,
  commit_broadcast = 1,
  distance_report = 2,
  selected_broadcast = 3,
  aggregate_share = 4,
  global_model = 5,
};

struct MessageLog {
  Phase current = Phase::share;
  std::array<std::uint64_t, 6> counts{};

  void advance(Phase p);
  void record(MsgKind k);
  std::uint64_t total() const;
};

struct ShareMsg {
  int from = -1, to = -1;
  Share share;
};

struct CommitBroadcast {
  int from = -1;
  CommitmentVector commits;
};

struct SelectedSetBroadcast {
  std::vector<int> selected;  // sorted, size m
};

struct AggregateShareMsg {
  int from = -1;
  FieldVector value;
};

// Everything an honest user is allowed to hold: its own model and material
// received through the protocol. No plaintext of anyone else's model.
struct UserState {
  int id = -1;
  RealVector model;
  ByzantineBehavior byz;
  bool shared = false;

  std::vector<std::int64_t> scaled;  // own q*Q_q(model)
  FieldVector wbar;                  // own quantized model
  SharePolynomial poly;
  std::vector<std::optional<Share>> received;
  std::vector<std::optional<CommitmentVector>> commits;
  std::vector<std::uint8_t> accept;  // verification verdict per sender
  std::vector<int> selected_set;
};

struct ServerState {
  std::vector<int> excluded;    // accused by more than A reporters
  std::vector<int> candidates;  // reporters that are not excluded
  std::vector<int> acc_count;   // accusations per sender
  DistanceMatrix dist;
  SelectionResult sel;
  std::vector<int> dist_error_users;
  std::vector<int> agg_error_users;
  FieldVector agg_field;  // recovered sum_{j in S} wbar_j
  RealVector agg_sum;     // sum_{j in S} Q_q(w_j)
};

struct RoundOutcome {
  RealVector new_model;
  FieldVector agg_field;
  RealVector agg_sum;
  std::vector<int> selected;
  std::vector<int> excluded;
  std::vector<int> acc_count;
  std::vector<int> dist_error_users;
  std::vector<int> agg_error_users;
  int selected_byzantine = 0;
  bool lemma_condition_ok = true;
  bool aggregate_overflow_checked = false;
  MessageLog log;
  std::array<double, 6> phase_ms{};
  std::vector<FieldVector> quantized_models;  // only when cfg.keep_models

  nlohmann::json to_json() const;
};

struct UserRoundInput {
  RealVector model;
  ByzantineBehavior byz;
};

// --- The per-phase operations of a round (Algorithm steps). The rng
// arguments are derived streams; honest users only draw from quant/share,
// Byzantine behaviors only from byz.
struct SharePhaseOut {
  std::vector<ShareMsg> shares;  // one per receiver, self included
  CommitBroadcast commits;
};
SharePhaseOut user_share_phase(UserState& u, const RoundConfig& cfg,
                               Rng& quant_rng, Rng& share_rng, Rng& byz_rng);

void user_verify_phase(UserState& u, const RoundConfig& cfg);

DistanceReport user_distance_phase(const UserState& u, const RoundConfig& cfg,
                                   Rng& byz_rng);

SelectedSetBroadcast server_select_phase(
    ServerState& server, const std::vector<DistanceReport>& reports,
    const RoundConfig& cfg);

AggregateShareMsg user_aggregate_phase(const UserState& u,
                                       const SelectedSetBroadcast& sel,
                                       const RoundConfig& cfg, Rng& byz_rng);

// Recovers sum_{j in S} wbar_j, converts it to the real domain and applies
// w <- w - lr * sum_{j in S} Q_q(w_j). Returns the updated model.
RealVector server_update_phase(ServerState& server,
                               const std::vector<AggregateShareMsg>& msgs,
                               const RoundConfig& cfg, Rng& combo_rng,
                               const RealVector& w, double lr);

// One full round over the simulated network. Throws RoundAbort carrying the
// failing phase on any decode failure, overflow or parameter violation.
RoundOutcome run_round(const std::vector<UserRoundInput>& inputs,
                       const RoundConfig& cfg, const DropSchedule& drops,
                       const Rng& round_rng, const RealVector& w, double lr);

}  // namespace brea
