#pragma once

#include <optional>
#include <vector>

#include "causality.hpp"

namespace synchro {

enum class StructureKind { Centipede, Broom, Centibroom };

// A concrete instance of one of the causal coordination structures:
// nodes[0] is the trigger node <i_0, t>, nodes[1..k] the chain. For
// centibrooms/brooms, level h carries bound-guarantee legs into <m, t'>
// for every member m of groups[h-1]; for centipedes the final node is
// <i_k, t'> itself and the intermediate levels carry singleton legs.
struct StructureWitness {
  StructureKind kind;
  std::vector<NodeRef> nodes;                 // theta_0 .. theta_k
  int t = 0;
  int t_prime = 0;
  std::vector<std::vector<AgentId>> groups;   // leg targets per chain level
};

// Search for a centibroom for <origin, groups[0], ..., groups[k-1]> in the
// interval (t..t'). Returns the lexicographically least witness, comparing
// chain nodes by (time, agent) level by level; std::nullopt when none
// exists.
std::optional<StructureWitness> find_centibroom(
    const ReachGraph& g, const Network& net, AgentId origin,
    const std::vector<std::vector<AgentId>>& groups, int t, int t_prime);

// Centipede: syncausal chain theta_0 .. theta_k with theta_k = <i_k, t'>
// and bound-guarantee legs for the intermediate agents. `agents` lists
// i_0 .. i_k (so it has length k+1, k >= 1).
std::optional<StructureWitness> find_centipede(const ReachGraph& g,
                                               const Network& net,
                                               const std::vector<AgentId>& agents,
                                               int t, int t_prime);

std::optional<StructureWitness> find_broom(const ReachGraph& g,
                                           const Network& net, AgentId origin,
                                           const std::vector<AgentId>& group,
                                           int t, int t_prime);

// Least t' in [t, horizon] at which the centibroom exists; nullopt = never
// within the horizon.
std::optional<int> earliest_formation_time(
    const ReachGraph& g, const Network& net, AgentId origin,
    const std::vector<std::vector<AgentId>>& groups, int t);

// Re-checks a witness against the literal defining clauses (consecutive
// syncausal links, legs, endpoints). Search results must always pass.
bool validate_witness(const StructureWitness& w, const ReachGraph& g,
                      const Network& net, AgentId origin);

}  // namespace synchro
