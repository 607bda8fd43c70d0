#include "network.hpp"

#include <algorithm>
#include <string>

namespace synchro {

namespace {
std::string chan_name(AgentId from, AgentId to) {
  return "(" + std::to_string(from) + "," + std::to_string(to) + ")";
}
}  // namespace

Network::Network(int agent_count, const std::vector<ChannelDecl>& channels)
    : n_(agent_count), channels_(channels) {
  if (n_ < 1) throw UnknownAgent("network needs at least one agent");

  bound_matrix_.assign(static_cast<std::size_t>(n_) * n_, 0);
  for (const auto& c : channels_) {
    if (c.from < 0 || c.from >= n_ || c.to < 0 || c.to >= n_)
      throw UnknownAgent("channel " + chan_name(c.from, c.to) +
                         " refers to an unknown agent");
    if (c.from == c.to)
      throw DuplicateChannel("self-channel " + chan_name(c.from, c.to) +
                             " is forbidden");
    if (c.bound < 1)
      throw BoundViolation("channel " + chan_name(c.from, c.to) +
                           " has bound " + std::to_string(c.bound) +
                           "; bounds must be >= 1");
    int& cell = bound_matrix_[static_cast<std::size_t>(c.from) * n_ + c.to];
    if (cell != 0)
      throw DuplicateChannel("channel " + chan_name(c.from, c.to) +
                             " listed twice");
    cell = c.bound;
    max_bound_ = std::max(max_bound_, c.bound);
  }

  // Floyd-Warshall over the bound weights.
  dist_.assign(static_cast<std::size_t>(n_) * n_, std::nullopt);
  auto at = [&](AgentId i, AgentId j) -> OptTime& {
    return dist_[static_cast<std::size_t>(i) * n_ + j];
  };
  for (AgentId i = 0; i < n_; ++i) at(i, i) = 0;
  for (const auto& c : channels_) {
    OptTime& cell = at(c.from, c.to);
    if (!cell || *cell > c.bound) cell = c.bound;
  }
  for (AgentId k = 0; k < n_; ++k)
    for (AgentId i = 0; i < n_; ++i) {
      if (!at(i, k)) continue;
      for (AgentId j = 0; j < n_; ++j) {
        if (!at(k, j)) continue;
        int via = *at(i, k) + *at(k, j);
        if (!at(i, j) || *at(i, j) > via) at(i, j) = via;
      }
    }

  rad_.assign(n_, 0);
  for (AgentId i = 0; i < n_; ++i) {
    OptTime r = 0;
    for (AgentId j = 0; j < n_; ++j) {
      OptTime d = at(i, j);
      if (!d) {
        r = std::nullopt;
        break;
      }
      r = std::max(*r, *d);
    }
    rad_[i] = r;
  }
}

void Network::check_agent(AgentId a) const {
  if (a < 0 || a >= n_)
    throw UnknownAgent("agent " + std::to_string(a) + " not in network");
}

bool Network::has_channel(AgentId from, AgentId to) const {
  check_agent(from);
  check_agent(to);
  return bound_matrix_[static_cast<std::size_t>(from) * n_ + to] != 0;
}

int Network::bound(AgentId from, AgentId to) const {
  check_agent(from);
  check_agent(to);
  int b = bound_matrix_[static_cast<std::size_t>(from) * n_ + to];
  if (b == 0)
    throw UnknownChannel("no channel " + chan_name(from, to));
  return b;
}

std::vector<AgentId> Network::neighbors_out(AgentId from) const {
  check_agent(from);
  std::vector<AgentId> out;
  for (AgentId j = 0; j < n_; ++j)
    if (bound_matrix_[static_cast<std::size_t>(from) * n_ + j] != 0)
      out.push_back(j);
  return out;
}

OptTime Network::distance(AgentId from, AgentId to) const {
  check_agent(from);
  check_agent(to);
  return dist_[static_cast<std::size_t>(from) * n_ + to];
}

OptTime Network::radius(AgentId agent) const {
  check_agent(agent);
  return rad_[agent];
}

bool Network::strongly_connected() const {
  for (const auto& d : dist_)
    if (!d) return false;
  return true;
}

int Network::max_radius() const {
  int m = 0;
  for (const auto& r : rad_) {
    if (!r)
      throw ConnectivityError("network is not strongly connected");
    m = std::max(m, *r);
  }
  return m;
}

}  // namespace synchro
