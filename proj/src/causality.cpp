#include "causality.hpp"

#include <string>

namespace synchro {

ReachGraph::ReachGraph(int agents, int horizon,
                       const std::vector<CausalEdge>& edges)
    : agents_(agents), horizon_(horizon), edges_(edges) {
  const int node_count = agents_ * (horizon_ + 1);
  closure_.assign(node_count, DynBitset(node_count));

  // successor lists from explicit edges
  std::vector<std::vector<int>> succ(node_count);
  for (const auto& e : edges_) {
    check(e.from);
    check(e.to);
    if (e.to.time <= e.from.time)
      throw Error("causal edge does not advance time");
    succ[index(e.from)].push_back(index(e.to));
  }

  // Every edge (locality included) strictly increases time, so a single
  // sweep from the last round backwards closes the relation.
  for (int t = horizon_; t >= 0; --t) {
    for (AgentId i = 0; i < agents_; ++i) {
      const NodeRef n{i, t};
      DynBitset& row = closure_[index(n)];
      row.set(index(n));
      if (t < horizon_) row |= closure_[index(NodeRef{i, t + 1})];
      for (int s : succ[index(n)]) row |= closure_[s];
    }
  }
}

void ReachGraph::check(NodeRef n) const {
  if (n.agent < 0 || n.agent >= agents_)
    throw UnknownAgent("node names unknown agent " + std::to_string(n.agent));
  if (n.time < 0 || n.time > horizon_)
    throw HorizonExceeded("node time " + std::to_string(n.time) +
                          " outside horizon " + std::to_string(horizon_));
}

bool ReachGraph::reachable(NodeRef from, NodeRef to) const {
  check(from);
  check(to);
  return closure_[index(from)].test(index(to));
}

namespace {

std::vector<CausalEdge> run_edges(const Run& run, const Network& net) {
  std::vector<CausalEdge> edges;
  const int T = run.horizon;

  // send-receive edges, for deliveries within the horizon
  std::vector<char> sent(static_cast<std::size_t>(net.agent_count()) *
                             net.agent_count() * (T + 1),
                         0);
  auto sent_at = [&](AgentId i, AgentId j, int t) -> char& {
    return sent[(static_cast<std::size_t>(i) * net.agent_count() + j) * (T + 1) + t];
  };
  for (const auto& m : run.messages) {
    sent_at(m.from, m.to, m.send_time) = 1;
    if (m.receive_time <= T)
      edges.push_back({{m.from, m.send_time},
                       {m.to, m.receive_time},
                       CausalEdgeKind::SendReceive});
  }

  // null-message edges where no send occurred and the landing time fits
  for (const auto& c : net.channels())
    for (int t = 0; t + c.bound <= T; ++t)
      if (!sent_at(c.from, c.to, t))
        edges.push_back({{c.from, t},
                         {c.to, t + c.bound},
                         CausalEdgeKind::NullMessage});

  return edges;
}

}  // namespace

CausalGraph::CausalGraph(const Run& run, const Network& net)
    : reach_(net.agent_count(), run.horizon, run_edges(run, net)) {}

bool CausalGraph::syncausal(NodeRef from, NodeRef to) const {
  return reach_.reachable(from, to);
}

std::vector<NodeRef> CausalGraph::causal_past(NodeRef node) const {
  std::vector<NodeRef> past;
  for (AgentId i = 0; i < reach_.agents(); ++i)
    for (int t = 0; t <= reach_.horizon(); ++t)
      if (reach_.reachable({i, t}, node)) past.push_back({i, t});
  return past;
}

bool bound_guarantee(const Network& net, NodeRef from, NodeRef to) {
  OptTime d = net.distance(from.agent, to.agent);
  if (!d) return false;
  return from.time + *d <= to.time;
}

}  // namespace synchro
