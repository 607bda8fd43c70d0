#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hash.hpp"
#include "network.hpp"

namespace synchro {

// ---------------------------------------------------------------------------
// Local states and payloads
// ---------------------------------------------------------------------------

struct LocalState;
using StatePtr = std::shared_ptr<const LocalState>;

// A message payload: either a small control value (tagged int, e.g. the
// snapshot protocol's Snap_msg(T)) or a full local-state snapshot (the
// full-information protocols). State snapshots are shared by pointer, so
// deeply nested histories cost one node each instead of exploding.
struct Payload {
  std::string tag;       // "state", "snap", ...
  long value = 0;        // meaning depends on tag
  StatePtr state;        // set when tag == "state"

  Hash128 content_hash() const;
};
using PayloadPtr = std::shared_ptr<const Payload>;

PayloadPtr make_value_payload(std::string tag, long value);
PayloadPtr make_state_payload(StatePtr state);

struct ReceivedMessage {
  AgentId from = -1;
  int send_time = -1;
  PayloadPtr payload;
};

// Everything an agent observes and does in one round.
struct RoundRecord {
  std::vector<std::string> inputs;        // external input ids, sorted
  std::vector<ReceivedMessage> receives;  // sorted by (from, send_time)
  std::vector<std::string> responses;     // action ids performed, sorted
};

// One agent's view of the world at an integer time. States form a chain
// through `parent`: the node for time t holds the round-t record and points
// at the node for time t-1. The node therefore represents the agent's full
// history over rounds 0..t (inputs and messages that arrived at each round,
// and the responses performed). The arrivals of round t are visible at
// time t; the agent's own round-t responses are appended after its protocol
// step.
//
// `hash` is the canonical identity: two states are the same local state
// (the indistinguishability relation r_i(t) = r'_i(t)) iff their hashes
// are equal.
struct LocalState {
  AgentId agent = -1;
  int time = 0;
  StatePtr parent;  // null iff time == 0
  RoundRecord round;
  Hash128 hash;
};

StatePtr make_state(AgentId agent, int time, StatePtr parent, RoundRecord round);

// Record for round `t` within a state whose time is >= t.
const RoundRecord& round_at(const LocalState& state, int t);
// The ancestor node at exactly time t (state.time >= t).
const LocalState& state_at(const LocalState& state, int t);

// Full recursive text rendering of a state; payload snapshots are expanded
// in place. Only sensible at small scale (reports, test oracles).
std::string canonical_serialization(const LocalState& state);

// ---------------------------------------------------------------------------
// Context, environment, events, runs
// ---------------------------------------------------------------------------

struct InputSlot {
  std::string id;   // event id, unique per scenario
  AgentId agent = 0;
  int time = 0;
};

struct ContextParams {
  Network net;
  int horizon = 0;
  std::vector<InputSlot> inputs;
  long ceiling = 200000;  // exhaustive-enumeration guard
};

struct DelayKey {
  AgentId from = -1;
  AgentId to = -1;
  int send_time = -1;
  friend auto operator<=>(const DelayKey&, const DelayKey&) = default;
};

// One resolved behavior of the environment: which input slots fired, and
// the delivery delay of every message the protocol actually sent under
// that behavior (keyed by channel and send time; protocols send at most
// one message per channel per round).
struct EnvironmentChoice {
  std::vector<bool> present;        // aligned with ContextParams::inputs
  std::map<DelayKey, int> delays;

  std::string encode() const;       // canonical text form
};

// The canonical delay options for a message sent at `send_time` on a
// channel with bound `bound` in a run truncated at `horizon`: every delay
// whose arrival lands within the horizon, plus a single representative
// (the bound itself) for the outcomes that stay in flight. Outcomes that
// cannot be told apart within the horizon are collapsed so that exhaustive
// bundles contain no observably-duplicate runs.
std::vector<int> delay_options(int bound, int send_time, int horizon);

// Where execute() gets the environment's decisions from. Implementations:
// exhaustive enumeration, seeded sampling, fixed replay, keyed completion.
class EnvironmentSource {
 public:
  virtual ~EnvironmentSource() = default;
  virtual bool input_present(int slot_index) = 0;
  // `options` is never empty; the returned value must be one of them.
  virtual int choose_delay(const DelayKey& key, const std::vector<int>& options) = 0;
};

enum class EventKind { ExtInput, Receive, Send, Response };

struct Event {
  EventKind kind;
  AgentId agent = -1;  // the node's agent
  int time = -1;       // the node's time
  AgentId peer = -1;   // Send: receiver; Receive: sender
  int link_time = -1;  // Send: scheduled receive time; Receive: send time
  std::string label;   // input id / action id / payload tag
};

struct MessageRecord {
  AgentId from = -1;
  AgentId to = -1;
  int send_time = -1;
  int receive_time = -1;  // may exceed the horizon: still in flight
  PayloadPtr payload;
};

struct Run {
  EnvironmentChoice env;
  int horizon = 0;
  std::vector<Event> events;                 // canonically ordered
  std::vector<std::vector<StatePtr>> states; // [agent][time]
  std::vector<MessageRecord> messages;       // ordered by (send_time, from, to)
  // Occurrence time per event id (external inputs that fired; responses).
  std::map<std::string, int> occurrences;

  const LocalState& state(AgentId agent, int time) const;
  std::optional<int> occurrence_time(const std::string& event_id) const;
};

// ---------------------------------------------------------------------------
// Protocols
// ---------------------------------------------------------------------------

struct StepResult {
  // At most one send per outgoing channel per round.
  std::vector<std::pair<AgentId, PayloadPtr>> sends;
  std::vector<std::string> responses;
};

// Deterministic agent protocols: the step is a pure function of the agent's
// current local state (the view includes this round's arrivals but not this
// round's responses). Sends depart this round; responses are performed this
// round.
struct Protocol {
  std::string id;
  std::function<StepResult(const Network&, const StatePtr& view)> step;
};

Protocol silent_protocol();
Protocol full_information_protocol();

// ---------------------------------------------------------------------------
// Execution and system construction
// ---------------------------------------------------------------------------

Run execute(const Protocol& protocol, const ContextParams& ctx,
            EnvironmentSource& env);

// Convenience: replay a fully materialized choice.
Run execute(const Protocol& protocol, const ContextParams& ctx,
            const EnvironmentChoice& choice);

struct SystemBundle {
  ContextParams ctx;
  std::string protocol_id;
  std::vector<Run> runs;   // exhaustive: depth-first canonical order
  bool exhaustive = false;
};

// Visit every EnvironmentChoice of the context exactly once (the product of
// input-presence assignments with the canonical delay options of every send
// the protocol performs). Runs are delivered in canonical (depth-first)
// order; the position of a run in this order is its environment index.
void enumerate_environments(const Protocol& protocol, const ContextParams& ctx,
                            const std::function<void(Run&&)>& sink);

SystemBundle build_system(const Protocol& protocol, const ContextParams& ctx);

SystemBundle sample_system(const Protocol& protocol, const ContextParams& ctx,
                           std::uint64_t seed, int count);

// The run at a given canonical environment index (cheap re-enumeration).
Run run_at_index(const Protocol& protocol, const ContextParams& ctx,
                 long env_index);

}  // namespace synchro
