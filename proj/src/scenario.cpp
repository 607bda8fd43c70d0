#include "scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "snapshot.hpp"

namespace synchro {

using nlohmann::json;

namespace {

struct Collector {
  std::vector<std::string> issues;

  template <typename... Args>
  void add(Args&&... parts) {
    std::ostringstream s;
    (s << ... << parts);
    issues.push_back(s.str());
  }
  void require(bool ok, const std::string& msg) {
    if (!ok) issues.push_back(msg);
  }
};

std::vector<ChannelDecl> parse_channels(const json& net, Collector& problems) {
  std::vector<ChannelDecl> channels;
  for (const auto& c : net.value("channels", json::array())) {
    channels.push_back({c.value("from", -1), c.value("to", -1), c.value("bound", 0)});
  }
  // an undirected link is sugar for two directed channels with equal bounds
  for (const auto& l : net.value("links", json::array())) {
    const int a = l.value("a", -1), b = l.value("b", -1), bound = l.value("bound", 0);
    channels.push_back({a, b, bound});
    channels.push_back({b, a, bound});
  }
  for (const auto& c : channels) {
    if (c.bound < 1)
      problems.add("channel (", c.from, ",", c.to, ") has bound ", c.bound,
                   "; channel bounds must be >= 1");
  }
  return channels;
}

std::optional<ResponseOrdering> parse_ro(const json& proto, Collector& problems) {
  if (!proto.contains("response_ordering")) return std::nullopt;
  const json& ro = proto["response_ordering"];
  std::vector<std::string> triggers;
  for (const auto& t : ro.value("triggers", json::array()))
    triggers.push_back(t.get<std::string>());
  std::vector<ResponseDecl> responses;
  for (const auto& r : ro.value("responses", json::array()))
    responses.push_back({r.value("id", ""), r.value("agent", -1)});
  std::vector<std::pair<std::string, std::string>> edges;
  for (const auto& e : ro.value("edges", json::array()))
    edges.emplace_back(e.at(0).get<std::string>(), e.at(1).get<std::string>());
  try {
    return ResponseOrdering(std::move(triggers), std::move(responses),
                            std::move(edges));
  } catch (const Error& err) {
    problems.add(err.what());
    return std::nullopt;
  }
}

std::optional<OJRSpec> parse_ojr(const json& proto, Collector& problems) {
  if (!proto.contains("ojr")) return std::nullopt;
  const json& o = proto["ojr"];
  OJRSpec spec;
  spec.trigger = o.value("trigger", "");
  for (const auto& cluster : o.value("clusters", json::array())) {
    std::vector<ResponseDecl> members;
    for (const auto& r : cluster)
      members.push_back({r.value("id", ""), r.value("agent", -1)});
    spec.clusters.push_back(std::move(members));
  }
  if (spec.trigger.empty()) problems.add("ojr section needs a trigger id");
  if (spec.clusters.empty()) problems.add("ojr section needs at least one cluster");
  std::set<std::string> seen;
  for (const auto& cluster : spec.clusters)
    for (const auto& r : cluster)
      if (!seen.insert(r.action).second)
        problems.add("ojr clusters are not disjoint: '", r.action,
                     "' appears twice");
  return spec;
}

}  // namespace

Scenario parse_scenario_text(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(origin + ": " + e.what());
  }

  Collector problems;
  Scenario sc;
  sc.name = doc.value("name", origin);

  if (!doc.contains("network")) {
    problems.add("missing network section");
    throw ValidationError(std::move(problems.issues));
  }
  const json& net = doc["network"];
  const int agents = net.value("agents", 0);
  problems.require(agents >= 1, "network needs at least one agent");
  auto channels = parse_channels(net, problems);

  std::optional<Network> network;
  if (problems.issues.empty()) {
    try {
      network.emplace(agents, channels);
    } catch (const Error& e) {
      problems.add(e.what());
    }
  }

  const json& cx = doc.value("context", json::object());
  const int horizon = cx.value("horizon", -1);
  problems.require(horizon >= 0, "context needs a horizon >= 0");
  long ceiling = cx.value("ceiling", 200000L);
  problems.require(ceiling >= 1, "ceiling must be >= 1");

  std::vector<InputSlot> inputs;
  std::set<std::string> slot_ids;
  for (const auto& slot : cx.value("inputs", json::array())) {
    InputSlot s{slot.value("id", ""), slot.value("agent", -1), slot.value("time", -1)};
    if (s.id.empty()) problems.add("input slot without an id");
    if (!slot_ids.insert(s.id).second)
      problems.add("duplicate input slot id '", s.id, "'");
    if (s.agent < 0 || s.agent >= agents)
      problems.add("input slot '", s.id, "' names unknown agent ", s.agent);
    if (horizon >= 0 && (s.time < 0 || s.time > horizon))
      problems.add("input slot '", s.id, "' at time ", s.time,
                   " outside horizon ", horizon);
    inputs.push_back(std::move(s));
  }

  const json& proto = doc.value("protocol", json::object());
  sc.protocol_kind = proto.value("kind", "");
  const std::set<std::string> kinds{"silent", "full-information", "snapshot",
                                    "gor", "gor-broken"};
  if (!kinds.count(sc.protocol_kind))
    problems.add("unknown protocol kind '", sc.protocol_kind, "'");

  sc.ro = parse_ro(proto, problems);
  sc.ojr = parse_ojr(proto, problems);
  if (sc.ojr && !sc.ro) {
    try {
      sc.ro = encode_ojr(*sc.ojr);
    } catch (const Error& e) {
      problems.add(e.what());
    }
  }

  if (sc.protocol_kind == "gor" || sc.protocol_kind == "gor-broken") {
    if (!sc.ro)
      problems.add("protocol '", sc.protocol_kind,
                   "' needs a response_ordering or ojr section");
  }
  if (sc.ro) {
    for (const auto& t : sc.ro->triggers())
      if (!slot_ids.count(t))
        problems.add("trigger '", t, "' is not bound to any input slot");
    for (const auto& r : sc.ro->responses()) {
      if (slot_ids.count(r.action))
        problems.add("response id '", r.action, "' collides with an input slot id");
      if (r.agent < 0 || r.agent >= agents)
        problems.add("response '", r.action, "' names unknown agent ", r.agent);
    }
    for (const auto& r : sc.ro->responses())
      if (sc.ro->trigger_base(r.action).empty())
        sc.warnings.push_back(
            "response '" + r.action +
            "' has an empty trigger base: under the conjunctive reading it "
            "fires unconditionally at time 0");
  }

  if (sc.protocol_kind == "gor-broken") {
    for (const auto& b : proto.value("schedule", json::array())) {
      ScheduledResponse r{b.value("id", ""), b.value("agent", -1),
                          b.value("time", -1)};
      if (r.agent < 0 || r.agent >= agents)
        problems.add("scheduled response '", r.action, "' names unknown agent");
      if (r.time < 0 || r.time > horizon)
        problems.add("scheduled response '", r.action, "' outside horizon");
      sc.broken_schedule.push_back(std::move(r));
    }
    if (sc.broken_schedule.empty())
      problems.add("protocol 'gor-broken' needs a schedule");
  }

  // connectivity / horizon demands of the radius-based protocols
  if (network && (sc.protocol_kind == "snapshot" || sc.protocol_kind == "gor")) {
    if (!network->strongly_connected()) {
      problems.add("protocol '", sc.protocol_kind,
                   "' needs a strongly connected network");
    } else {
      int max_slot_time = 0;
      for (const auto& s : inputs) max_slot_time = std::max(max_slot_time, s.time);
      const int rad = network->max_radius();
      const int need =
          sc.protocol_kind == "snapshot"
              ? max_slot_time + 2 * rad + network->max_bound()
              : max_slot_time + rad + network->max_bound();
      if (horizon < need)
        problems.add("protocol '", sc.protocol_kind, "' needs horizon >= ",
                     need, " (max trigger time + ",
                     (sc.protocol_kind == "snapshot" ? "2*" : ""),
                     "max radius + max bound); scenario has ", horizon);
      if (inputs.empty() && sc.protocol_kind == "snapshot")
        sc.warnings.push_back("snapshot scenario has no trigger slots");
    }
  }

  const json& analysis = doc.value("analysis", json::object());
  for (const auto& f : analysis.value("formulas", json::array()))
    sc.formulas.push_back(f.get<std::string>());
  for (const auto& q : analysis.value("structures", json::array())) {
    StructureQuery sq;
    sq.kind = q.value("kind", "");
    sq.origin = q.value("origin", -1);
    sq.t = q.value("t", 0);
    sq.t_prime = q.value("t_prime", 0);
    for (const auto& a : q.value("agents", json::array()))
      sq.agents.push_back(a.get<int>());
    for (const auto& g : q.value("groups", json::array())) {
      std::vector<AgentId> grp;
      for (const auto& a : g) grp.push_back(a.get<int>());
      sq.groups.push_back(std::move(grp));
    }
    if (sq.kind != "centipede" && sq.kind != "broom" && sq.kind != "centibroom")
      problems.add("unknown structure query kind '", sq.kind, "'");
    sc.structure_queries.push_back(std::move(sq));
  }

  if (!problems.issues.empty()) throw ValidationError(std::move(problems.issues));

  sc.ctx = ContextParams{std::move(*network), horizon, std::move(inputs), ceiling};
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario_text(buffer.str(), path);
}

Protocol fixed_schedule_protocol(const std::vector<ScheduledResponse>& schedule) {
  auto copy = std::make_shared<std::vector<ScheduledResponse>>(schedule);
  return Protocol{"fixed-schedule",
                  [copy](const Network&, const StatePtr& view) {
                    StepResult res;
                    for (const auto& r : *copy)
                      if (r.agent == view->agent && r.time == view->time)
                        res.responses.push_back(r.action);
                    return res;
                  }};
}

Protocol Scenario::make_protocol() const {
  if (protocol_kind == "silent") return silent_protocol();
  if (protocol_kind == "full-information") return full_information_protocol();
  if (protocol_kind == "snapshot") return snapshot_protocol();
  if (protocol_kind == "gor") return gor_protocol(*ro, ctx.net, ctx.inputs);
  if (protocol_kind == "gor-broken")
    return fixed_schedule_protocol(broken_schedule);
  throw Error("unknown protocol kind '" + protocol_kind + "'");
}

}  // namespace synchro
