#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "causality.hpp"
#include "simulator.hpp"

namespace synchro {

struct ResponseDecl {
  std::string action;  // unique id
  AgentId agent = -1;  // who performs it
};

// A response ordering: triggers (bound to external input slots by id),
// responses, and a preorder over both obtained by closing the declared
// edges reflexively and transitively. Triggers are initial: an edge into a
// trigger is rejected.
class ResponseOrdering {
 public:
  ResponseOrdering(std::vector<std::string> triggers,
                   std::vector<ResponseDecl> responses,
                   std::vector<std::pair<std::string, std::string>> edges);

  const std::vector<std::string>& triggers() const { return triggers_; }
  const std::vector<ResponseDecl>& responses() const { return responses_; }
  const std::vector<std::pair<std::string, std::string>>& edges() const {
    return edges_;
  }

  bool is_trigger(const std::string& id) const;
  bool is_response(const std::string& id) const;
  AgentId agent_of(const std::string& action) const;

  // the preorder (reflexive-transitive)
  bool preceq(const std::string& a, const std::string& b) const;

  // base_alpha: the triggers below a response in the preorder
  std::set<std::string> trigger_base(const std::string& action) const;

 private:
  int node_index(const std::string& id) const;

  std::vector<std::string> triggers_;
  std::vector<ResponseDecl> responses_;
  std::vector<std::pair<std::string, std::string>> edges_;
  std::vector<std::string> node_ids_;         // triggers then actions
  std::map<std::string, int> index_of_;
  std::vector<std::vector<char>> closure_;    // preorder matrix
};

// The DAG decomposition: strongly connected components of the response
// subgraph (Tarjan, indexed in topological order), triggers kept as
// initial nodes, each component labelled with the agents performing its
// responses. `scc_order`/`trigger_order` carry the full condensation
// relation; `scc_cover`/`trigger_cover` its transitive reduction, which is
// what chain enumeration walks.
struct CRO {
  struct Cluster {
    std::vector<std::string> actions;
    std::vector<AgentId> agents;  // sorted, unique
  };

  std::vector<std::string> triggers;
  std::vector<Cluster> sccs;
  std::map<std::string, int> scc_of;  // action -> component

  std::set<std::pair<int, int>> scc_order;
  std::set<std::pair<std::string, int>> trigger_order;
  std::set<std::pair<int, int>> scc_cover;
  std::set<std::pair<std::string, int>> trigger_cover;
};

CRO scc_decompose(const ResponseOrdering& ro);

// One path trigger -> scc_1 -> ... -> scc_k = scc_alpha over covering edges.
struct Chain {
  std::string trigger;
  std::vector<int> sccs;
};

std::vector<Chain> required_chains(const CRO& cro, const std::string& action);

// An ordered-joint-response instance: one trigger, disjoint response
// clusters performed in order, each cluster simultaneously.
struct OJRSpec {
  std::string trigger;
  std::vector<std::vector<ResponseDecl>> clusters;

  std::vector<std::vector<AgentId>> agent_groups() const;
};

// The response ordering whose DAG decomposition has one component per
// cluster in a single chain below the trigger.
ResponseOrdering encode_ojr(const OJRSpec& spec);

// The full-information coordination protocol: every agent broadcasts its
// state every round and performs each of its responses at the first time
// the whole set of required structures for that response is visible in its
// reconstructed causal past (known states from received payloads; the
// structure legs themselves are network facts). Each response fires at most
// once per run.
Protocol gor_protocol(const ResponseOrdering& ro, const Network& net,
                      const std::vector<InputSlot>& slots);

struct Violation {
  int run = -1;
  std::string clause;
  std::string detail;
};

// Conformance of a bundle to the ordering: Triggering (a response occurs iff its whole trigger
// base does) and Weak Ordering (alpha_1 <= alpha_2 and both occur implies
// t_1 <= t_2, which forces simultaneity inside components).
std::vector<Violation> check_gor(const SystemBundle& bundle,
                                 const ResponseOrdering& ro);

// Cluster-sequence conformance with the weak triggering reading: if anything in A^h
// occurs then the trigger and all of A^1..A^h occur; clusters act
// simultaneously; cluster times are ordered after the trigger.
std::vector<Violation> check_ojr(const SystemBundle& bundle,
                                 const OJRSpec& spec);

std::string render_violations(const std::vector<Violation>& violations);

}  // namespace synchro
