#include "structures.hpp"

#include <algorithm>
#include <string>

namespace synchro {

namespace {

void check_interval(const ReachGraph& g, int t, int t_prime) {
  if (t > t_prime)
    throw IntervalError("interval (" + std::to_string(t) + ".." +
                        std::to_string(t_prime) + ") is empty");
  if (t < 0 || t_prime > g.horizon())
    throw IntervalError("interval (" + std::to_string(t) + ".." +
                        std::to_string(t_prime) + ") outside run horizon");
}

bool covers_group(const Network& net, NodeRef node,
                  const std::vector<AgentId>& group, int t_prime) {
  for (AgentId m : group)
    if (!bound_guarantee(net, node, {m, t_prime})) return false;
  return true;
}

// Candidate nodes for one chain level, in (time, agent) order. Fact 1 keeps
// every witness node inside [t, t'] (apart from theta_0 = <i_0, t> itself),
// so the search never looks outside the interval.
std::vector<NodeRef> level_candidates(const ReachGraph& g, const Network& net,
                                      const std::vector<AgentId>& group, int t,
                                      int t_prime) {
  std::vector<NodeRef> out;
  for (int time = t; time <= t_prime; ++time)
    for (AgentId a = 0; a < g.agents(); ++a)
      if (covers_group(net, {a, time}, group, t_prime))
        out.push_back({a, time});
  return out;
}

bool node_less(NodeRef a, NodeRef b) {
  return std::tie(a.time, a.agent) < std::tie(b.time, b.agent);
}

// Core chain search shared by the centibroom and centipede entry points:
// find theta_1..theta_k with theta_0 ~> theta_1 ~> ... ~> theta_k where
// level h draws from levels[h-1]. Returns the lexicographically least
// chain, empty optional when none exists.
std::optional<std::vector<NodeRef>> find_chain(
    const ReachGraph& g, NodeRef theta0,
    const std::vector<std::vector<NodeRef>>& levels) {
  const int k = static_cast<int>(levels.size());

  // forward pass: keep only nodes reachable from some predecessor
  std::vector<std::vector<NodeRef>> feasible(k);
  for (int h = 0; h < k; ++h) {
    const auto& prev = (h == 0) ? std::vector<NodeRef>{theta0} : feasible[h - 1];
    for (NodeRef cand : levels[h])
      for (NodeRef p : prev)
        if (g.reachable(p, cand)) {
          feasible[h].push_back(cand);
          break;
        }
    if (feasible[h].empty()) return std::nullopt;
  }

  // backward pass: drop nodes that cannot reach the next level
  for (int h = k - 2; h >= 0; --h) {
    std::vector<NodeRef> kept;
    for (NodeRef cand : feasible[h])
      for (NodeRef nxt : feasible[h + 1])
        if (g.reachable(cand, nxt)) {
          kept.push_back(cand);
          break;
        }
    if (kept.empty()) return std::nullopt;
    feasible[h] = std::move(kept);
  }

  // greedy pick: least node per level among those reachable from the chosen
  // predecessor; every feasible node extends, so this is the lex-least chain
  std::vector<NodeRef> chain;
  NodeRef prev = theta0;
  for (int h = 0; h < k; ++h) {
    std::optional<NodeRef> best;
    for (NodeRef cand : feasible[h])
      if (g.reachable(prev, cand) && (!best || node_less(cand, *best)))
        best = cand;
    if (!best) return std::nullopt;
    chain.push_back(*best);
    prev = *best;
  }
  return chain;
}

}  // namespace

std::optional<StructureWitness> find_centibroom(
    const ReachGraph& g, const Network& net, AgentId origin,
    const std::vector<std::vector<AgentId>>& groups, int t, int t_prime) {
  check_interval(g, t, t_prime);
  if (groups.empty())
    throw EmptyGroup("centibroom query needs at least one agent group");
  for (const auto& grp : groups)
    if (grp.empty()) throw EmptyGroup("centibroom group must be nonempty");

  const NodeRef theta0{origin, t};
  std::vector<std::vector<NodeRef>> levels;
  for (const auto& grp : groups)
    levels.push_back(level_candidates(g, net, grp, t, t_prime));

  auto chain = find_chain(g, theta0, levels);
  if (!chain) return std::nullopt;

  StructureWitness w;
  w.kind = groups.size() == 1 ? StructureKind::Broom : StructureKind::Centibroom;
  w.nodes.push_back(theta0);
  w.nodes.insert(w.nodes.end(), chain->begin(), chain->end());
  w.t = t;
  w.t_prime = t_prime;
  w.groups = groups;
  return w;
}

std::optional<StructureWitness> find_centipede(const ReachGraph& g,
                                               const Network& net,
                                               const std::vector<AgentId>& agents,
                                               int t, int t_prime) {
  check_interval(g, t, t_prime);
  if (agents.size() < 2)
    throw EmptyGroup("centipede query needs i_0..i_k with k >= 1");

  const int k = static_cast<int>(agents.size()) - 1;
  const NodeRef theta0{agents[0], t};
  const NodeRef theta_k{agents[k], t_prime};

  // levels 1..k-1 carry singleton bound-guarantee legs; the last level is
  // pinned to <i_k, t'> exactly
  std::vector<std::vector<NodeRef>> levels;
  for (int h = 1; h < k; ++h)
    levels.push_back(level_candidates(g, net, {agents[h]}, t, t_prime));
  levels.push_back({theta_k});

  auto chain = find_chain(g, theta0, levels);
  if (!chain) return std::nullopt;

  StructureWitness w;
  w.kind = StructureKind::Centipede;
  w.nodes.push_back(theta0);
  w.nodes.insert(w.nodes.end(), chain->begin(), chain->end());
  w.t = t;
  w.t_prime = t_prime;
  for (int h = 1; h < k; ++h) w.groups.push_back({agents[h]});
  w.groups.push_back({agents[k]});
  return w;
}

std::optional<StructureWitness> find_broom(const ReachGraph& g,
                                           const Network& net, AgentId origin,
                                           const std::vector<AgentId>& group,
                                           int t, int t_prime) {
  auto w = find_centibroom(g, net, origin, {group}, t, t_prime);
  if (w) w->kind = StructureKind::Broom;
  return w;
}

std::optional<int> earliest_formation_time(
    const ReachGraph& g, const Network& net, AgentId origin,
    const std::vector<std::vector<AgentId>>& groups, int t) {
  for (int t_prime = t; t_prime <= g.horizon(); ++t_prime)
    if (find_centibroom(g, net, origin, groups, t, t_prime)) return t_prime;
  return std::nullopt;
}

bool validate_witness(const StructureWitness& w, const ReachGraph& g,
                      const Network& net, AgentId origin) {
  if (w.nodes.size() != w.groups.size() + 1) return false;
  if (w.nodes.front() != NodeRef{origin, w.t}) return false;
  for (std::size_t h = 0; h + 1 < w.nodes.size(); ++h)
    if (!g.reachable(w.nodes[h], w.nodes[h + 1])) return false;
  for (std::size_t h = 0; h < w.groups.size(); ++h) {
    const NodeRef node = w.nodes[h + 1];
    const bool last = h + 1 == w.groups.size();
    if (w.kind == StructureKind::Centipede && last) {
      if (node != NodeRef{w.groups[h][0], w.t_prime}) return false;
      continue;
    }
    for (AgentId m : w.groups[h])
      if (!bound_guarantee(net, node, {m, w.t_prime})) return false;
  }
  return true;
}

}  // namespace synchro
