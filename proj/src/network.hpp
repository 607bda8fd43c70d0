#pragma once

#include <optional>
#include <vector>

#include "errors.hpp"

namespace synchro {

using AgentId = int;

// A time value that may be "unreachable". std::optional keeps the
// no-path case a distinct value instead of a magic number, so predicates
// built on distances are false (never accidentally true) for disconnected
// pairs.
using OptTime = std::optional<int>;

struct ChannelDecl {
  AgentId from = 0;
  AgentId to = 0;
  int bound = 1;  // upper bound on delivery time, >= 1
};

// The weighted channel graph. Distances delta(i,j) (all-pairs shortest
// paths over the bounds) and radii Rad(j) = max_h delta(j,h) are computed
// once at construction; the object is immutable afterwards and safe to
// share across threads.
class Network {
 public:
  Network() : Network(1, {}) {}  // single agent, no channels
  Network(int agent_count, const std::vector<ChannelDecl>& channels);

  int agent_count() const { return n_; }

  bool has_channel(AgentId from, AgentId to) const;
  int bound(AgentId from, AgentId to) const;  // throws UnknownChannel
  const std::vector<ChannelDecl>& channels() const { return channels_; }
  std::vector<AgentId> neighbors_out(AgentId from) const;

  OptTime distance(AgentId from, AgentId to) const;
  OptTime radius(AgentId agent) const;

  bool strongly_connected() const;
  // Largest channel bound; 0 when the network has no channels.
  int max_bound() const { return max_bound_; }
  // Largest finite radius; throws ConnectivityError when disconnected.
  int max_radius() const;

 private:
  void check_agent(AgentId a) const;

  int n_ = 0;
  std::vector<ChannelDecl> channels_;
  std::vector<int> bound_matrix_;          // 0 = no channel
  std::vector<OptTime> dist_;              // n x n
  std::vector<OptTime> rad_;
  int max_bound_ = 0;
};

}  // namespace synchro
