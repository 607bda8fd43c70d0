#include "simulator.hpp"

#include <algorithm>
#include <cassert>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

namespace synchro {

// ---------------------------------------------------------------------------
// States and payloads
// ---------------------------------------------------------------------------

Hash128 Payload::content_hash() const {
  Hasher h;
  h.str(tag);
  if (state) {
    h.u64(1);
    h.hash(state->hash);
  } else {
    h.u64(0);
    h.i64(value);
  }
  return h.digest();
}

PayloadPtr make_value_payload(std::string tag, long value) {
  auto p = std::make_shared<Payload>();
  p->tag = std::move(tag);
  p->value = value;
  return p;
}

PayloadPtr make_state_payload(StatePtr state) {
  auto p = std::make_shared<Payload>();
  p->tag = "state";
  p->state = std::move(state);
  return p;
}

StatePtr make_state(AgentId agent, int time, StatePtr parent, RoundRecord round) {
  auto s = std::make_shared<LocalState>();
  s->agent = agent;
  s->time = time;
  s->parent = std::move(parent);
  s->round = std::move(round);

  Hasher h;
  h.i64(agent);
  h.i64(time);
  if (s->parent) {
    h.u64(1);
    h.hash(s->parent->hash);
  } else {
    h.u64(0);
  }
  h.u64(s->round.inputs.size());
  for (const auto& id : s->round.inputs) h.str(id);
  h.u64(s->round.receives.size());
  for (const auto& m : s->round.receives) {
    h.i64(m.from);
    h.i64(m.send_time);
    h.hash(m.payload->content_hash());
  }
  h.u64(s->round.responses.size());
  for (const auto& a : s->round.responses) h.str(a);
  s->hash = h.digest();
  return s;
}

const RoundRecord& round_at(const LocalState& state, int t) {
  return state_at(state, t).round;
}

const LocalState& state_at(const LocalState& state, int t) {
  const LocalState* s = &state;
  while (s->time > t) {
    assert(s->parent);
    s = s->parent.get();
  }
  if (s->time != t)
    throw Error("state_at: round " + std::to_string(t) + " not in history");
  return *s;
}

namespace {

void serialize_state(const LocalState& s, std::string& out);

void serialize_payload(const Payload& p, std::string& out) {
  if (p.state) {
    serialize_state(*p.state, out);
  } else {
    out += "(" + p.tag + " " + std::to_string(p.value) + ")";
  }
}

void serialize_state(const LocalState& s, std::string& out) {
  if (s.parent) {
    serialize_state(*s.parent, out);
    out += "|";
  } else {
    out += "[a" + std::to_string(s.agent) + "]";
  }
  out += "t" + std::to_string(s.time) + "{in:";
  for (const auto& id : s.round.inputs) out += id + ",";
  out += " rx:";
  for (const auto& m : s.round.receives) {
    out += "<" + std::to_string(m.from) + "@" + std::to_string(m.send_time) + ":";
    serialize_payload(*m.payload, out);
    out += ">";
  }
  out += " do:";
  for (const auto& a : s.round.responses) out += a + ",";
  out += "}";
}

}  // namespace

std::string canonical_serialization(const LocalState& state) {
  std::string out;
  serialize_state(state, out);
  return out;
}

// ---------------------------------------------------------------------------
// Environment choices
// ---------------------------------------------------------------------------

std::string EnvironmentChoice::encode() const {
  std::string s = "p=";
  for (bool b : present) s += b ? '1' : '0';
  s += ";d=";
  for (const auto& [key, d] : delays) {
    s += "(" + std::to_string(key.from) + "," + std::to_string(key.to) + "," +
         std::to_string(key.send_time) + "):" + std::to_string(d) + ";";
  }
  return s;
}

std::vector<int> delay_options(int bound, int send_time, int horizon) {
  std::vector<int> opts;
  int max_arriving = horizon - send_time;
  for (int d = 1; d <= std::min(bound, max_arriving); ++d) opts.push_back(d);
  if (bound > max_arriving) opts.push_back(bound);
  return opts;
}

// ---------------------------------------------------------------------------
// Protocols
// ---------------------------------------------------------------------------

Protocol silent_protocol() {
  return Protocol{"silent",
                  [](const Network&, const StatePtr&) { return StepResult{}; }};
}

Protocol full_information_protocol() {
  return Protocol{"full-information",
                  [](const Network& net, const StatePtr& view) {
                    StepResult res;
                    auto payload = make_state_payload(view);
                    for (AgentId j : net.neighbors_out(view->agent))
                      res.sends.emplace_back(j, payload);
                    return res;
                  }};
}

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

const LocalState& Run::state(AgentId agent, int time) const {
  if (agent < 0 || agent >= static_cast<int>(states.size()))
    throw UnknownAgent("run has no agent " + std::to_string(agent));
  if (time < 0 || time > horizon)
    throw HorizonExceeded("time " + std::to_string(time) +
                          " outside run horizon " + std::to_string(horizon));
  return *states[agent][time];
}

std::optional<int> Run::occurrence_time(const std::string& event_id) const {
  auto it = occurrences.find(event_id);
  if (it == occurrences.end()) return std::nullopt;
  return it->second;
}

namespace {

int event_kind_rank(EventKind k) {
  switch (k) {
    case EventKind::ExtInput: return 0;
    case EventKind::Receive: return 1;
    case EventKind::Send: return 2;
    case EventKind::Response: return 3;
  }
  return 4;
}

bool event_less(const Event& a, const Event& b) {
  int ra = event_kind_rank(a.kind), rb = event_kind_rank(b.kind);
  return std::tie(a.time, ra, a.agent, a.peer, a.link_time, a.label) <
         std::tie(b.time, rb, b.agent, b.peer, b.link_time, b.label);
}

}  // namespace

Run execute(const Protocol& protocol, const ContextParams& ctx,
            EnvironmentSource& env) {
  const Network& net = ctx.net;
  const int n = net.agent_count();
  const int T = ctx.horizon;
  if (T < 0) throw Error("horizon must be >= 0");
  for (const auto& slot : ctx.inputs) {
    if (slot.agent < 0 || slot.agent >= n)
      throw UnknownAgent("input slot '" + slot.id + "' names unknown agent");
    if (slot.time < 0 || slot.time > T)
      throw Error("input slot '" + slot.id + "' outside horizon");
  }

  Run run;
  run.horizon = T;
  run.env.present.resize(ctx.inputs.size());
  for (std::size_t s = 0; s < ctx.inputs.size(); ++s)
    run.env.present[s] = env.input_present(static_cast<int>(s));

  std::map<int, std::vector<MessageRecord>> due;  // receive time -> messages
  run.states.assign(n, std::vector<StatePtr>(T + 1));
  std::vector<StatePtr> prev(n);

  for (int t = 0; t <= T; ++t) {
    std::vector<RoundRecord> rounds(n);
    for (std::size_t s = 0; s < ctx.inputs.size(); ++s) {
      const InputSlot& slot = ctx.inputs[s];
      if (run.env.present[s] && slot.time == t) {
        rounds[slot.agent].inputs.push_back(slot.id);
        run.events.push_back({EventKind::ExtInput, slot.agent, t, -1, -1, slot.id});
        run.occurrences.emplace(slot.id, t);
      }
    }
    if (auto it = due.find(t); it != due.end()) {
      for (const auto& m : it->second) {
        rounds[m.to].receives.push_back({m.from, m.send_time, m.payload});
        run.events.push_back({EventKind::Receive, m.to, t, m.from, m.send_time,
                              m.payload->tag});
      }
      due.erase(it);
    }
    for (auto& r : rounds) {
      std::sort(r.inputs.begin(), r.inputs.end());
      std::sort(r.receives.begin(), r.receives.end(),
                [](const ReceivedMessage& a, const ReceivedMessage& b) {
                  return std::tie(a.from, a.send_time) <
                         std::tie(b.from, b.send_time);
                });
    }

    for (AgentId i = 0; i < n; ++i) {
      RoundRecord pre_round = rounds[i];
      pre_round.responses.clear();
      StatePtr pre = make_state(i, t, prev[i], std::move(pre_round));
      StepResult res = protocol.step(net, pre);

      std::sort(res.sends.begin(), res.sends.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      std::set<AgentId> targets;
      for (auto& [to, payload] : res.sends) {
        if (!net.has_channel(i, to))
          throw UnknownChannel("protocol sent on nonexistent channel (" +
                               std::to_string(i) + "," + std::to_string(to) + ")");
        if (!targets.insert(to).second)
          throw ProtocolError("two sends on channel (" + std::to_string(i) + "," +
                              std::to_string(to) + ") in round " +
                              std::to_string(t));
        if (!payload) throw ProtocolError("null payload");
        const int b = net.bound(i, to);
        const DelayKey key{i, to, t};
        const int d = env.choose_delay(key, delay_options(b, t, T));
        if (d < 1 || d > b)
          throw InvalidDelay("delay " + std::to_string(d) + " outside [1," +
                             std::to_string(b) + "] on channel (" +
                             std::to_string(i) + "," + std::to_string(to) + ")");
        run.env.delays[key] = d;
        MessageRecord rec{i, to, t, t + d, payload};
        if (rec.receive_time <= T) due[rec.receive_time].push_back(rec);
        run.messages.push_back(std::move(rec));
        run.events.push_back({EventKind::Send, i, t, to, t + d, payload->tag});
      }

      std::sort(res.responses.begin(), res.responses.end());
      for (std::size_t k = 1; k < res.responses.size(); ++k)
        if (res.responses[k] == res.responses[k - 1])
          throw ProtocolError("response '" + res.responses[k] +
                              "' performed twice in one round");
      for (const auto& a : res.responses) {
        run.events.push_back({EventKind::Response, i, t, -1, -1, a});
        run.occurrences.emplace(a, t);
      }

      if (res.responses.empty()) {
        run.states[i][t] = pre;
      } else {
        RoundRecord full = rounds[i];
        full.responses = std::move(res.responses);
        run.states[i][t] = make_state(i, t, prev[i], std::move(full));
      }
    }
    for (AgentId i = 0; i < n; ++i) prev[i] = run.states[i][t];
  }

  std::stable_sort(run.events.begin(), run.events.end(), event_less);
  std::sort(run.messages.begin(), run.messages.end(),
            [](const MessageRecord& a, const MessageRecord& b) {
              return std::tie(a.send_time, a.from, a.to) <
                     std::tie(b.send_time, b.from, b.to);
            });
  return run;
}

// ---------------------------------------------------------------------------
// Enumeration, sampling
// ---------------------------------------------------------------------------

namespace {

struct TrailNode {
  std::vector<int> options;
  std::size_t idx = 0;
};

// Replays a recorded decision prefix, then extends it with the first option
// at every fresh choice point. Driving execute() repeatedly with an
// advancing trail walks the whole choice tree depth-first.
class TrailSource : public EnvironmentSource {
 public:
  explicit TrailSource(std::vector<TrailNode>* trail) : trail_(trail) {}

  bool input_present(int) override { return next({0, 1}) != 0; }
  int choose_delay(const DelayKey&, const std::vector<int>& options) override {
    return next(options);
  }

 private:
  int next(const std::vector<int>& options) {
    if (cursor_ < trail_->size()) {
      TrailNode& node = (*trail_)[cursor_];
      if (node.options != options)
        throw Error("nondeterministic protocol: choice points diverged on replay");
      ++cursor_;
      return node.options[node.idx];
    }
    trail_->push_back({options, 0});
    ++cursor_;
    return options[0];
  }

  std::vector<TrailNode>* trail_;
  std::size_t cursor_ = 0;
};

class FixedSource : public EnvironmentSource {
 public:
  FixedSource(const EnvironmentChoice& choice) : choice_(choice) {}

  bool input_present(int slot) override {
    if (slot < 0 || slot >= static_cast<int>(choice_.present.size()))
      throw Error("environment choice has no presence entry for slot " +
                  std::to_string(slot));
    return choice_.present[slot];
  }
  int choose_delay(const DelayKey& key, const std::vector<int>&) override {
    auto it = choice_.delays.find(key);
    if (it == choice_.delays.end())
      throw InvalidDelay("environment choice has no delay for send (" +
                         std::to_string(key.from) + "," + std::to_string(key.to) +
                         ") at time " + std::to_string(key.send_time));
    return it->second;
  }

 private:
  const EnvironmentChoice& choice_;
};

class RandomSource : public EnvironmentSource {
 public:
  explicit RandomSource(std::uint64_t seed) : rng_(seed) {}

  bool input_present(int) override { return (rng_() >> 33) & 1ULL; }
  int choose_delay(const DelayKey&, const std::vector<int>& options) override {
    return options[rng_() % options.size()];
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace

Run execute(const Protocol& protocol, const ContextParams& ctx,
            const EnvironmentChoice& choice) {
  FixedSource src(choice);
  return execute(protocol, ctx, src);
}

void enumerate_environments(const Protocol& protocol, const ContextParams& ctx,
                            const std::function<void(Run&&)>& sink) {
  if (ctx.inputs.size() < 63 &&
      (1LL << ctx.inputs.size()) > ctx.ceiling)
    throw ExplosionGuard("input-presence assignments alone exceed the ceiling of " +
                         std::to_string(ctx.ceiling) + " runs");
  std::vector<TrailNode> trail;
  long produced = 0;
  while (true) {
    TrailSource src(&trail);
    Run run = execute(protocol, ctx, src);
    if (++produced > ctx.ceiling)
      throw ExplosionGuard("environment enumeration exceeds the ceiling of " +
                           std::to_string(ctx.ceiling) + " runs");
    sink(std::move(run));
    while (!trail.empty() &&
           trail.back().idx + 1 >= trail.back().options.size())
      trail.pop_back();
    if (trail.empty()) break;
    ++trail.back().idx;
  }
}

SystemBundle build_system(const Protocol& protocol, const ContextParams& ctx) {
  SystemBundle bundle{ctx, protocol.id, {}, true};
  enumerate_environments(protocol, ctx,
                         [&](Run&& r) { bundle.runs.push_back(std::move(r)); });
  std::set<std::string> seen;
  for (const auto& r : bundle.runs)
    if (!seen.insert(r.env.encode()).second)
      throw Error("duplicate run in exhaustive bundle: " + r.env.encode());
  return bundle;
}

SystemBundle sample_system(const Protocol& protocol, const ContextParams& ctx,
                           std::uint64_t seed, int count) {
  if (count < 1) throw Error("sample_system: count must be >= 1");
  SystemBundle bundle{ctx, protocol.id, {}, false};
  RandomSource src(seed);
  for (int i = 0; i < count; ++i)
    bundle.runs.push_back(execute(protocol, ctx, src));
  return bundle;
}

Run run_at_index(const Protocol& protocol, const ContextParams& ctx,
                 long env_index) {
  std::optional<Run> out;
  long at = 0;
  enumerate_environments(protocol, ctx, [&](Run&& r) {
    if (at++ == env_index) out = std::move(r);
  });
  if (!out)
    throw Error("environment index " + std::to_string(env_index) +
                " out of range: context has " + std::to_string(at) + " runs");
  return std::move(*out);
}

}  // namespace synchro
