#include "coordination.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "structures.hpp"

namespace synchro {

// ---------------------------------------------------------------------------
// ResponseOrdering
// ---------------------------------------------------------------------------

ResponseOrdering::ResponseOrdering(
    std::vector<std::string> triggers, std::vector<ResponseDecl> responses,
    std::vector<std::pair<std::string, std::string>> edges)
    : triggers_(std::move(triggers)),
      responses_(std::move(responses)),
      edges_(std::move(edges)) {
  for (const auto& t : triggers_) {
    if (index_of_.count(t))
      throw Error("response ordering: duplicate node id '" + t + "'");
    index_of_[t] = static_cast<int>(node_ids_.size());
    node_ids_.push_back(t);
  }
  for (const auto& r : responses_) {
    if (index_of_.count(r.action))
      throw Error("response ordering: duplicate node id '" + r.action + "'");
    index_of_[r.action] = static_cast<int>(node_ids_.size());
    node_ids_.push_back(r.action);
  }

  const int n = static_cast<int>(node_ids_.size());
  closure_.assign(n, std::vector<char>(n, 0));
  for (int i = 0; i < n; ++i) closure_[i][i] = 1;
  const int trigger_count = static_cast<int>(triggers_.size());
  for (const auto& [from, to] : edges_) {
    const int a = node_index(from);
    const int b = node_index(to);
    if (b < trigger_count && a != b)
      throw TriggerNotInitial("edge '" + from + "' -> '" + to +
                              "' targets a trigger; triggers are initial");
    closure_[a][b] = 1;
  }
  // Warshall
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (closure_[i][k])
        for (int j = 0; j < n; ++j)
          if (closure_[k][j]) closure_[i][j] = 1;
}

int ResponseOrdering::node_index(const std::string& id) const {
  auto it = index_of_.find(id);
  if (it == index_of_.end())
    throw Error("response ordering: unknown node '" + id + "'");
  return it->second;
}

bool ResponseOrdering::is_trigger(const std::string& id) const {
  auto it = index_of_.find(id);
  return it != index_of_.end() &&
         it->second < static_cast<int>(triggers_.size());
}

bool ResponseOrdering::is_response(const std::string& id) const {
  auto it = index_of_.find(id);
  return it != index_of_.end() &&
         it->second >= static_cast<int>(triggers_.size());
}

AgentId ResponseOrdering::agent_of(const std::string& action) const {
  for (const auto& r : responses_)
    if (r.action == action) return r.agent;
  throw UnknownResponse("unknown response '" + action + "'");
}

bool ResponseOrdering::preceq(const std::string& a, const std::string& b) const {
  return closure_[node_index(a)][node_index(b)] != 0;
}

std::set<std::string> ResponseOrdering::trigger_base(
    const std::string& action) const {
  if (!is_response(action))
    throw UnknownResponse("'" + action + "' is not a response");
  std::set<std::string> base;
  for (const auto& t : triggers_)
    if (preceq(t, action)) base.insert(t);
  return base;
}

// ---------------------------------------------------------------------------
// DAG decomposition
// ---------------------------------------------------------------------------

namespace {

// Tarjan over the response subgraph; components come out in reverse
// topological order and are flipped at the end.
struct TarjanState {
  const std::vector<std::vector<int>>& graph;
  std::vector<int> index, low, stack_pos;
  std::vector<int> stack;
  int counter = 0;
  std::vector<std::vector<int>> components;

  explicit TarjanState(const std::vector<std::vector<int>>& g)
      : graph(g),
        index(g.size(), -1),
        low(g.size(), -1),
        stack_pos(g.size(), -1) {}

  void visit(int v) {
    index[v] = low[v] = counter++;
    stack_pos[v] = static_cast<int>(stack.size());
    stack.push_back(v);
    for (int w : graph[v]) {
      if (index[w] == -1) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (stack_pos[w] != -1) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      const int base = stack_pos[v];
      std::vector<int> comp(stack.begin() + base, stack.end());
      for (int w : comp) stack_pos[w] = -1;
      stack.resize(base);
      components.push_back(std::move(comp));
    }
  }
};

}  // namespace

CRO scc_decompose(const ResponseOrdering& ro) {
  const auto& responses = ro.responses();
  const int m = static_cast<int>(responses.size());
  std::map<std::string, int> ridx;
  for (int i = 0; i < m; ++i) ridx[responses[i].action] = i;

  std::vector<std::vector<int>> graph(m);
  for (const auto& [from, to] : ro.edges())
    if (ro.is_response(from) && ro.is_response(to) && from != to)
      graph[ridx[from]].push_back(ridx[to]);

  TarjanState tarjan(graph);
  for (int v = 0; v < m; ++v)
    if (tarjan.index[v] == -1) tarjan.visit(v);
  std::reverse(tarjan.components.begin(), tarjan.components.end());

  CRO cro;
  cro.triggers = ro.triggers();
  for (const auto& comp : tarjan.components) {
    CRO::Cluster cluster;
    for (int v : comp) cluster.actions.push_back(responses[v].action);
    std::sort(cluster.actions.begin(), cluster.actions.end());
    for (const auto& a : cluster.actions) cluster.agents.push_back(ro.agent_of(a));
    std::sort(cluster.agents.begin(), cluster.agents.end());
    cluster.agents.erase(std::unique(cluster.agents.begin(), cluster.agents.end()),
                         cluster.agents.end());
    const int id = static_cast<int>(cro.sccs.size());
    for (const auto& a : cluster.actions) cro.scc_of[a] = id;
    cro.sccs.push_back(std::move(cluster));
  }

  // condensation relation from the preorder
  const int s = static_cast<int>(cro.sccs.size());
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j)
      if (i != j && ro.preceq(cro.sccs[i].actions[0], cro.sccs[j].actions[0]))
        cro.scc_order.insert({i, j});
  for (const auto& t : cro.triggers)
    for (int j = 0; j < s; ++j)
      if (ro.preceq(t, cro.sccs[j].actions[0])) cro.trigger_order.insert({t, j});

  // transitive reduction: keep the covering edges only
  auto scc_reaches = [&](int a, int b) { return cro.scc_order.count({a, b}) > 0; };
  for (const auto& [a, b] : cro.scc_order) {
    bool covered = false;
    for (int w = 0; w < s && !covered; ++w)
      if (w != a && w != b && scc_reaches(a, w) && scc_reaches(w, b))
        covered = true;
    if (!covered) cro.scc_cover.insert({a, b});
  }
  for (const auto& [t, b] : cro.trigger_order) {
    bool covered = false;
    for (int w = 0; w < s && !covered; ++w)
      if (w != b && cro.trigger_order.count({t, w}) && scc_reaches(w, b))
        covered = true;
    if (!covered) cro.trigger_cover.insert({t, b});
  }
  return cro;
}

std::vector<Chain> required_chains(const CRO& cro, const std::string& action) {
  auto it = cro.scc_of.find(action);
  if (it == cro.scc_of.end())
    throw UnknownResponse("response '" + action + "' is in no component");
  const int target = it->second;

  // walk from each trigger's covering successors; collect every path that
  // ends at the target component
  std::vector<int> path;
  std::vector<Chain> out;
  for (const auto& t : cro.triggers) {
    std::vector<std::vector<int>> found;
    std::function<void(int)> walk = [&](int at) {
      path.push_back(at);
      if (at == target) found.push_back(path);
      for (const auto& [a, b] : cro.scc_cover)
        if (a == at) walk(b);
      path.pop_back();
    };
    for (const auto& [tt, first] : cro.trigger_cover)
      if (tt == t) walk(first);
    for (auto& p : found) out.push_back({t, std::move(p)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// OJR encoding
// ---------------------------------------------------------------------------

std::vector<std::vector<AgentId>> OJRSpec::agent_groups() const {
  std::vector<std::vector<AgentId>> groups;
  for (const auto& cluster : clusters) {
    std::vector<AgentId> g;
    for (const auto& r : cluster) g.push_back(r.agent);
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    groups.push_back(std::move(g));
  }
  return groups;
}

ResponseOrdering encode_ojr(const OJRSpec& spec) {
  if (spec.clusters.empty()) throw Error("OJR instance needs k >= 1 clusters");
  std::vector<ResponseDecl> responses;
  std::vector<std::pair<std::string, std::string>> edges;
  for (std::size_t g = 0; g < spec.clusters.size(); ++g) {
    const auto& cluster = spec.clusters[g];
    if (cluster.empty()) throw Error("OJR cluster must be nonempty");
    for (const auto& r : cluster) responses.push_back(r);
    // a cycle through the cluster makes it one component
    for (std::size_t i = 0; i + 1 < cluster.size(); ++i)
      edges.push_back({cluster[i].action, cluster[i + 1].action});
    if (cluster.size() > 1)
      edges.push_back({cluster.back().action, cluster.front().action});
    if (g == 0)
      edges.push_back({spec.trigger, cluster.front().action});
    else
      edges.push_back({spec.clusters[g - 1].front().action, cluster.front().action});
  }
  return ResponseOrdering({spec.trigger}, std::move(responses), std::move(edges));
}

// ---------------------------------------------------------------------------
// The coordination protocol
// ---------------------------------------------------------------------------

namespace {

struct PlannedResponse {
  std::string action;
  struct PlannedChain {
    InputSlot slot;                            // the chain's trigger slot
    std::vector<std::vector<AgentId>> groups;  // I(scc_1) .. I(scc_k)
  };
  std::vector<PlannedChain> chains;
};

// Deepest known state per agent, collected from the agent's own history and
// every state snapshot embedded (transitively) in received payloads.
std::map<AgentId, const LocalState*> known_states(const LocalState& view) {
  std::map<AgentId, const LocalState*> deepest;
  std::set<const LocalState*> visited;
  std::vector<const LocalState*> todo{&view};
  while (!todo.empty()) {
    const LocalState* s = todo.back();
    todo.pop_back();
    if (!visited.insert(s).second) continue;
    auto [it, fresh] = deepest.emplace(s->agent, s);
    if (!fresh && it->second->time < s->time) it->second = s;
    if (s->parent) todo.push_back(s->parent.get());
    for (const auto& m : s->round.receives)
      if (m.payload->state) todo.push_back(m.payload->state.get());
  }
  return deepest;
}

// The part of the run's causal graph this agent can see: locality plus
// every send-receive edge recorded in a known state. The protocols here
// broadcast every round, so there are no known non-sends to turn into
// null-message edges.
ReachGraph reconstruct_reach(const Network& net, const LocalState& view,
                             const std::map<AgentId, const LocalState*>& known) {
  std::vector<CausalEdge> edges;
  for (const auto& [agent, state] : known) {
    for (const LocalState* s = state; s; s = s->parent.get())
      for (const auto& m : s->round.receives)
        edges.push_back({{m.from, m.send_time},
                         {agent, s->time},
                         CausalEdgeKind::SendReceive});
  }
  return ReachGraph(net.agent_count(), view.time, edges);
}

bool trigger_known(const std::map<AgentId, const LocalState*>& known,
                   const InputSlot& slot) {
  auto it = known.find(slot.agent);
  if (it == known.end() || it->second->time < slot.time) return false;
  const RoundRecord& round = round_at(*it->second, slot.time);
  return std::find(round.inputs.begin(), round.inputs.end(), slot.id) !=
         round.inputs.end();
}

}  // namespace

Protocol gor_protocol(const ResponseOrdering& ro, const Network& net,
                      const std::vector<InputSlot>& slots) {
  if (!net.strongly_connected())
    throw ConnectivityError("the coordination protocol needs a strongly "
                            "connected network");

  std::map<std::string, InputSlot> slot_of;
  for (const auto& s : slots) slot_of[s.id] = s;
  for (const auto& t : ro.triggers())
    if (!slot_of.count(t))
      throw Error("trigger '" + t + "' has no input slot");

  const CRO cro = scc_decompose(ro);
  auto plans = std::make_shared<std::map<AgentId, std::vector<PlannedResponse>>>();
  for (const auto& r : ro.responses()) {
    PlannedResponse plan{r.action, {}};
    for (const auto& chain : required_chains(cro, r.action)) {
      PlannedResponse::PlannedChain pc;
      pc.slot = slot_of.at(chain.trigger);
      for (int scc : chain.sccs) pc.groups.push_back(cro.sccs[scc].agents);
      plan.chains.push_back(std::move(pc));
    }
    (*plans)[r.agent].push_back(std::move(plan));
  }

  return Protocol{
      "gor", [plans](const Network& net, const StatePtr& view) {
        StepResult res;
        auto payload = make_state_payload(view);
        for (AgentId j : net.neighbors_out(view->agent))
          res.sends.emplace_back(j, payload);

        auto it = plans->find(view->agent);
        if (it == plans->end()) return res;

        std::set<std::string> done;
        for (const LocalState* s = view.get(); s; s = s->parent.get())
          for (const auto& a : s->round.responses) done.insert(a);

        auto known = known_states(*view);
        std::optional<ReachGraph> reach;  // built on first use
        for (const auto& plan : it->second) {
          if (done.count(plan.action)) continue;
          bool ready = true;
          for (const auto& chain : plan.chains) {
            if (!trigger_known(known, chain.slot) ||
                chain.slot.time > view->time) {
              ready = false;
              break;
            }
            if (!reach) reach = reconstruct_reach(net, *view, known);
            if (!find_centibroom(*reach, net, chain.slot.agent, chain.groups,
                                 chain.slot.time, view->time)) {
              ready = false;
              break;
            }
          }
          if (ready) res.responses.push_back(plan.action);
        }
        return res;
      }};
}

// ---------------------------------------------------------------------------
// Conformance checks
// ---------------------------------------------------------------------------

std::vector<Violation> check_gor(const SystemBundle& bundle,
                                 const ResponseOrdering& ro) {
  std::vector<Violation> out;
  for (int r = 0; r < static_cast<int>(bundle.runs.size()); ++r) {
    const Run& run = bundle.runs[r];
    for (const auto& resp : ro.responses()) {
      bool base_occurred = true;
      for (const auto& t : ro.trigger_base(resp.action))
        if (!run.occurrence_time(t)) base_occurred = false;
      const auto when = run.occurrence_time(resp.action);
      if (when && !base_occurred)
        out.push_back({r, "Triggering",
                       "response '" + resp.action +
                           "' occurred without its full trigger base"});
      if (!when && base_occurred)
        out.push_back({r, "Triggering",
                       "trigger base of '" + resp.action +
                           "' occurred but the response did not"});
    }
    for (const auto& a : ro.responses())
      for (const auto& b : ro.responses()) {
        if (a.action == b.action) continue;
        if (!ro.preceq(a.action, b.action)) continue;
        const auto ta = run.occurrence_time(a.action);
        const auto tb = run.occurrence_time(b.action);
        if (ta && tb && *ta > *tb)
          out.push_back({r, "WeakOrdering",
                         "'" + a.action + "' at " + std::to_string(*ta) +
                             " precedes '" + b.action + "' at " +
                             std::to_string(*tb)});
      }
  }
  return out;
}

std::vector<Violation> check_ojr(const SystemBundle& bundle,
                                 const OJRSpec& spec) {
  std::vector<Violation> out;
  const int k = static_cast<int>(spec.clusters.size());
  for (int r = 0; r < static_cast<int>(bundle.runs.size()); ++r) {
    const Run& run = bundle.runs[r];
    const auto trigger_at = run.occurrence_time(spec.trigger);

    int top = 0;  // highest cluster with any occurrence
    for (int h = 1; h <= k; ++h)
      for (const auto& resp : spec.clusters[h - 1])
        if (run.occurrence_time(resp.action)) top = std::max(top, h);
    if (top == 0) continue;

    if (!trigger_at)
      out.push_back({r, "Triggering",
                     "responses occurred but trigger '" + spec.trigger +
                         "' did not"});
    for (int g = 1; g <= top; ++g)
      for (const auto& resp : spec.clusters[g - 1])
        if (!run.occurrence_time(resp.action))
          out.push_back({r, "Triggering",
                         "cluster " + std::to_string(top) +
                             " occurred but '" + resp.action +
                             "' (cluster " + std::to_string(g) +
                             ") did not"});

    for (int g = 1; g <= top; ++g) {
      std::optional<int> common;
      for (const auto& resp : spec.clusters[g - 1]) {
        const auto at = run.occurrence_time(resp.action);
        if (!at) continue;
        if (!common) common = at;
        if (*common != *at)
          out.push_back({r, "Simultaneity",
                         "cluster " + std::to_string(g) +
                             " acted at both " + std::to_string(*common) +
                             " and " + std::to_string(*at)});
      }
    }

    auto cluster_times = [&](int g) {
      std::vector<int> times;
      for (const auto& resp : spec.clusters[g - 1])
        if (auto at = run.occurrence_time(resp.action)) times.push_back(*at);
      return times;
    };
    for (int g = 1; g <= top; ++g)
      for (int t1 : cluster_times(g)) {
        if (trigger_at && *trigger_at > t1)
          out.push_back({r, "LinearOrdering",
                         "cluster " + std::to_string(g) + " at " +
                             std::to_string(t1) + " precedes the trigger at " +
                             std::to_string(*trigger_at)});
        for (int g2 = g + 1; g2 <= top; ++g2)
          for (int t2 : cluster_times(g2))
            if (t1 > t2)
              out.push_back({r, "LinearOrdering",
                             "cluster " + std::to_string(g) + " at " +
                                 std::to_string(t1) + " after cluster " +
                                 std::to_string(g2) + " at " +
                                 std::to_string(t2)});
      }
  }
  return out;
}

std::string render_violations(const std::vector<Violation>& violations) {
  std::ostringstream out;
  for (const auto& v : violations)
    out << "run " << v.run << " [" << v.clause << "] " << v.detail << "\n";
  return out.str();
}

}  // namespace synchro
