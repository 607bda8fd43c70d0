#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "simulator.hpp"

namespace synchro {

// The distributed snapshot protocol: every agent keeps a recording time
// Snap_Time (initially infinity). When an external snap trigger or Snap_msg
// values arrive, the agent folds them with its own time+Rad candidate and,
// on strict improvement, adopts the smaller recording time and floods it to
// its neighbors. When the clock reaches Snap_Time the agent records its
// local state and resets. Every input slot of the scenario acts as a snap
// trigger; the recording action shows up in the run as a "record" response.
Protocol snapshot_protocol();

// What the protocol's state machine did in one round (used by the step
// function itself and by the invariant checks).
struct SnapRound {
  bool broadcast = false;
  long value = 0;          // Snap_Time flooded this round
  bool own_initiation = false;  // the winning candidate was time + Rad(i)
  bool record = false;
};

// Deterministic replay of the protocol over an agent's history. Index v of
// the result describes round v.
std::vector<SnapRound> replay_snapshot(const Network& net,
                                       const LocalState& state);

struct SnapshotResult {
  int snap_time = -1;
  std::vector<StatePtr> recorded;  // per agent, local state at snap_time
  // per channel (from, to): messages in transit at snap_time
  std::map<std::pair<AgentId, AgentId>, std::vector<MessageRecord>> channels;
};

// Messages cut by the snapshot at time S: sent at <= S, received after S.
// Requires S + max bound <= horizon so nothing relevant is still unresolved.
std::map<std::pair<AgentId, AgentId>, std::vector<MessageRecord>>
record_channels(const Run& run, int snap_time, const Network& net);

// Pulls the common recording time and the per-agent/per-channel content out
// of a completed run of the snapshot protocol. Throws NoTrigger when no
// snap trigger fired in this run; NonSimultaneous when the recordings
// disagree (which would be a protocol bug, not an input condition).
SnapshotResult extract_snapshot(const Run& run, const Network& net);

SnapshotResult run_snapshot_scenario(const ContextParams& ctx,
                                     const EnvironmentChoice& env);

// The optimality oracle: execute the full-information protocol under the
// corresponding environment (same input presences; delays matched by
// (channel, send time); sends absent from the snapshot run take their
// channel bound, i.e. the null-message timing) and return the earliest time
// at which a broom covering all agents exists for any fired trigger.
std::optional<int> oracle_earliest_broom(const ContextParams& ctx,
                                         const EnvironmentChoice& env);

std::string render_snapshot_report(const SnapshotResult& result,
                                   const Network& net);

}  // namespace synchro
