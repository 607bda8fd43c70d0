#include "snapshot.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "causality.hpp"
#include "structures.hpp"

namespace synchro {

namespace {
constexpr long kInfinity = std::numeric_limits<long>::max();
constexpr const char* kRecordAction = "record";
}  // namespace

std::vector<SnapRound> replay_snapshot(const Network& net,
                                       const LocalState& state) {
  const AgentId self = state.agent;
  OptTime rad = net.radius(self);
  if (!rad)
    throw ConnectivityError("snapshot protocol needs a finite radius for agent " +
                            std::to_string(self));

  std::vector<SnapRound> trace(state.time + 1);
  long snap_time = kInfinity;
  for (int v = 0; v <= state.time; ++v) {
    const RoundRecord& round = round_at(state, v);
    SnapRound& out = trace[v];

    bool triggered = !round.inputs.empty();
    long min_received = kInfinity;
    for (const auto& m : round.receives)
      if (m.payload->tag == "snap")
        min_received = std::min(min_received, m.payload->value);

    // arrivals first, then the recording check: a value equal to the
    // current round must still be recorded this round, and stale echoes
    // arriving at the recording round must not restart the episode
    if (triggered || min_received != kInfinity) {
      long candidate = min_received;
      candidate = std::min(candidate, static_cast<long>(v) + *rad);
      if (candidate < snap_time) {
        snap_time = candidate;
        out.broadcast = true;
        out.value = candidate;
        out.own_initiation = candidate == static_cast<long>(v) + *rad &&
                             candidate < min_received;
      }
    }
    if (static_cast<long>(v) == snap_time) {
      out.record = true;
      snap_time = kInfinity;
    }
  }
  return trace;
}

Protocol snapshot_protocol() {
  return Protocol{"snapshot", [](const Network& net, const StatePtr& view) {
                    StepResult res;
                    auto trace = replay_snapshot(net, *view);
                    const SnapRound& now = trace[view->time];
                    if (now.broadcast) {
                      auto msg = make_value_payload("snap", now.value);
                      for (AgentId j : net.neighbors_out(view->agent))
                        res.sends.emplace_back(j, msg);
                    }
                    if (now.record) res.responses.push_back(kRecordAction);
                    return res;
                  }};
}

std::map<std::pair<AgentId, AgentId>, std::vector<MessageRecord>>
record_channels(const Run& run, int snap_time, const Network& net) {
  if (snap_time + net.max_bound() > run.horizon)
    throw HorizonExceeded(
        "channel recording needs snap_time + max bound <= horizon");
  std::map<std::pair<AgentId, AgentId>, std::vector<MessageRecord>> out;
  for (const auto& c : net.channels()) out[{c.from, c.to}] = {};
  for (const auto& m : run.messages)
    if (m.send_time <= snap_time && m.receive_time > snap_time)
      out[{m.from, m.to}].push_back(m);
  return out;
}

SnapshotResult extract_snapshot(const Run& run, const Network& net) {
  bool any_trigger = false;
  for (const auto& e : run.events)
    if (e.kind == EventKind::ExtInput) any_trigger = true;
  if (!any_trigger)
    throw NoTrigger("no snap trigger fired in this run");

  const int n = static_cast<int>(run.states.size());
  std::vector<int> first_record(n, -1);
  for (const auto& e : run.events)
    if (e.kind == EventKind::Response && e.label == kRecordAction &&
        first_record[e.agent] < 0)
      first_record[e.agent] = e.time;

  SnapshotResult result;
  for (AgentId i = 0; i < n; ++i) {
    if (first_record[i] < 0)
      throw NonSimultaneous("agent " + std::to_string(i) +
                            " never recorded within the horizon");
    if (result.snap_time < 0) result.snap_time = first_record[i];
    if (first_record[i] != result.snap_time)
      throw NonSimultaneous("recordings disagree: agent 0 at " +
                            std::to_string(result.snap_time) + ", agent " +
                            std::to_string(i) + " at " +
                            std::to_string(first_record[i]));
  }

  for (AgentId i = 0; i < n; ++i)
    result.recorded.push_back(run.states[i][result.snap_time]);
  result.channels = record_channels(run, result.snap_time, net);
  return result;
}

SnapshotResult run_snapshot_scenario(const ContextParams& ctx,
                                     const EnvironmentChoice& env) {
  if (!ctx.net.strongly_connected())
    throw ConnectivityError("the snapshot protocol needs a strongly connected "
                            "network");
  Run run = execute(snapshot_protocol(), ctx, env);
  return extract_snapshot(run, ctx.net);
}

namespace {

// Delays for sends the snapshot run never performed take the channel bound,
// matching the timing of the null message those rounds carried.
class KeyedCompletionSource : public EnvironmentSource {
 public:
  KeyedCompletionSource(const EnvironmentChoice& base, const Network& net)
      : base_(base), net_(net) {}

  bool input_present(int slot) override { return base_.present[slot]; }
  int choose_delay(const DelayKey& key, const std::vector<int>&) override {
    auto it = base_.delays.find(key);
    if (it != base_.delays.end()) return it->second;
    return net_.bound(key.from, key.to);
  }

 private:
  const EnvironmentChoice& base_;
  const Network& net_;
};

}  // namespace

std::optional<int> oracle_earliest_broom(const ContextParams& ctx,
                                         const EnvironmentChoice& env) {
  KeyedCompletionSource src(env, ctx.net);
  Run fi = execute(full_information_protocol(), ctx, src);
  CausalGraph graph(fi, ctx.net);

  std::vector<AgentId> everyone;
  for (AgentId i = 0; i < ctx.net.agent_count(); ++i) everyone.push_back(i);

  std::optional<int> best;
  for (std::size_t s = 0; s < ctx.inputs.size(); ++s) {
    if (!env.present[s]) continue;
    const InputSlot& slot = ctx.inputs[s];
    for (int tp = slot.time; tp <= ctx.horizon; ++tp) {
      if (best && *best <= tp) break;
      if (find_broom(graph.reach(), ctx.net, slot.agent, everyone, slot.time, tp)) {
        best = tp;
        break;
      }
    }
  }
  return best;
}

std::string render_snapshot_report(const SnapshotResult& result,
                                   const Network& net) {
  std::ostringstream out;
  out << "snapshot at time " << result.snap_time << "\n";
  for (AgentId i = 0; i < static_cast<int>(result.recorded.size()); ++i)
    out << "  agent " << i << ": "
        << canonical_serialization(*result.recorded[i]) << "\n";
  for (const auto& c : net.channels()) {
    const auto& msgs = result.channels.at({c.from, c.to});
    out << "  channel (" << c.from << "," << c.to << "): " << msgs.size()
        << " in transit";
    for (const auto& m : msgs)
      out << " [sent " << m.send_time << ", due " << m.receive_time << "]";
    out << "\n";
  }
  return out.str();
}

}  // namespace synchro
