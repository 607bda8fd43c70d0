#pragma once

#include <vector>

#include "bitset.hpp"
#include "network.hpp"
#include "simulator.hpp"

namespace synchro {

// An agent-time node <i, t>.
struct NodeRef {
  AgentId agent = -1;
  int time = -1;
  friend auto operator<=>(const NodeRef&, const NodeRef&) = default;
};

enum class CausalEdgeKind { SendReceive, NullMessage };

struct CausalEdge {
  NodeRef from;
  NodeRef to;
  CausalEdgeKind kind;
};

// Reachability over the (agent x time) node grid under locality edges
// <i,t> -> <i,t+1> plus an explicit edge list. All explicit edges move
// strictly forward in time, so the reflexive-transitive closure is computed
// in one backward sweep. Immutable after construction.
class ReachGraph {
 public:
  ReachGraph(int agents, int horizon, const std::vector<CausalEdge>& edges);

  int agents() const { return agents_; }
  int horizon() const { return horizon_; }

  bool reachable(NodeRef from, NodeRef to) const;
  const std::vector<CausalEdge>& edges() const { return edges_; }

 private:
  int index(NodeRef n) const { return n.agent * (horizon_ + 1) + n.time; }
  void check(NodeRef n) const;

  int agents_ = 0;
  int horizon_ = 0;
  std::vector<CausalEdge> edges_;
  std::vector<DynBitset> closure_;  // per node: the set of reachable nodes
};

// The syncausality relation of one run: locality, send-receive edges from
// the run's message records, and a null-message edge <i,t> -> <j,t+b_ij>
// for every channel-round on which nothing was sent (omitted when the
// landing time exceeds the horizon).
class CausalGraph {
 public:
  CausalGraph(const Run& run, const Network& net);

  bool syncausal(NodeRef from, NodeRef to) const;
  std::vector<NodeRef> causal_past(NodeRef node) const;

  const ReachGraph& reach() const { return reach_; }
  int horizon() const { return reach_.horizon(); }
  int agents() const { return reach_.agents(); }

 private:
  ReachGraph reach_;
};

// Bound guarantee: <i,t> reaches <j,t'> iff t + delta(i,j) <= t'. Run-independent;
// false when j is unreachable from i.
bool bound_guarantee(const Network& net, NodeRef from, NodeRef to);

}  // namespace synchro
