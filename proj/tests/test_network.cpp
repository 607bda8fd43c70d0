#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "network.hpp"
#include "oracles.hpp"

using namespace synchro;

TEST_CASE("channel bounds below one are rejected") {
  CHECK_THROWS_AS(Network(2, {{0, 1, 0}}), BoundViolation);
  CHECK_THROWS_AS(Network(2, {{0, 1, -3}}), BoundViolation);
}

TEST_CASE("single agent network") {
  Network net(1, {});
  CHECK(net.distance(0, 0) == 0);
  CHECK(net.radius(0) == 0);
  CHECK(net.strongly_connected());
  CHECK(net.max_bound() == 0);
}

TEST_CASE("duplicate and malformed channels") {
  CHECK_THROWS_AS(Network(2, {{0, 1, 2}, {0, 1, 3}}), DuplicateChannel);
  CHECK_THROWS_AS(Network(2, {{0, 0, 1}}), DuplicateChannel);
  CHECK_THROWS_AS(Network(2, {{0, 2, 1}}), UnknownAgent);
  CHECK_THROWS_AS(Network(0, {}), UnknownAgent);
}

TEST_CASE("line distances") {
  // A -> B (2), B -> C (3)
  Network net(3, {{0, 1, 2}, {1, 2, 3}});
  CHECK(oracles::brute_force_distance(3, {{0, 1, 2}, {1, 2, 3}}, 0, 2) == 5);
  CHECK(net.distance(0, 2) == 5);
  CHECK(net.distance(0, 0) == 0);
  CHECK(net.distance(2, 0) == std::nullopt);
  CHECK_FALSE(net.strongly_connected());
  CHECK_THROWS_AS(net.max_radius(), ConnectivityError);
  CHECK_THROWS_AS(net.distance(0, 5), UnknownAgent);
}

TEST_CASE("radii") {
  Network two(2, {{0, 1, 1}, {1, 0, 1}});
  CHECK(two.radius(0) == 1);
  CHECK(two.radius(1) == 1);

  // directed 3-ring, all bounds 1
  std::vector<ChannelDecl> ring{{0, 1, 1}, {1, 2, 1}, {2, 0, 1}};
  Network net(3, ring);
  for (AgentId i = 0; i < 3; ++i) {
    CHECK(net.radius(i) == 2);
    for (AgentId j = 0; j < 3; ++j)
      CHECK(net.distance(i, j) == oracles::brute_force_distance(3, ring, i, j));
  }
  CHECK(net.max_radius() == 2);
}

namespace {

std::vector<ChannelDecl> random_channels(std::mt19937_64& rng, int agents) {
  std::vector<ChannelDecl> channels;
  for (AgentId i = 0; i < agents; ++i)
    for (AgentId j = 0; j < agents; ++j) {
      if (i == j) continue;
      if (rng() % 2 == 0) continue;
      channels.push_back({i, j, static_cast<int>(rng() % 4 + 1)});
    }
  return channels;
}

}  // namespace

TEST_CASE("distances agree with path enumeration on random networks") {
  std::mt19937_64 rng(27);
  for (int round = 0; round < 60; ++round) {
    const int agents = 2 + static_cast<int>(rng() % 4);  // up to 5
    auto channels = random_channels(rng, agents);
    Network net(agents, channels);
    for (AgentId i = 0; i < agents; ++i)
      for (AgentId j = 0; j < agents; ++j)
        CHECK(net.distance(i, j) ==
              oracles::brute_force_distance(agents, channels, i, j));
  }
}

TEST_CASE("network invariants hold on random networks") {
  std::mt19937_64 rng(99);
  for (int round = 0; round < 40; ++round) {
    const int agents = 2 + static_cast<int>(rng() % 4);
    auto channels = random_channels(rng, agents);
    Network net(agents, channels);
    for (AgentId i = 0; i < agents; ++i) {
      CHECK(net.distance(i, i) == 0);
      for (AgentId j = 0; j < agents; ++j) {
        for (AgentId k = 0; k < agents; ++k) {
          const auto ik = net.distance(i, k), kj = net.distance(k, j);
          if (ik && kj) {
            REQUIRE(net.distance(i, j).has_value());
            CHECK(*net.distance(i, j) <= *ik + *kj);
          }
        }
      }
    }
    for (const auto& c : channels) {
      REQUIRE(net.distance(c.from, c.to).has_value());
      CHECK(*net.distance(c.from, c.to) <= c.bound);
    }
    // Rad(j) = max_h delta(j, h)
    for (AgentId j = 0; j < agents; ++j) {
      OptTime expected = 0;
      for (AgentId h = 0; h < agents; ++h) {
        const auto d = net.distance(j, h);
        if (!d) {
          expected = std::nullopt;
          break;
        }
        expected = std::max(*expected, *d);
      }
      CHECK(net.radius(j) == expected);
    }
  }
}

TEST_CASE("radius is monotone under bound decrease") {
  std::mt19937_64 rng(4242);
  for (int round = 0; round < 40; ++round) {
    const int agents = 2 + static_cast<int>(rng() % 4);
    auto channels = random_channels(rng, agents);
    if (channels.empty()) continue;
    Network before(agents, channels);

    auto lowered = channels;
    auto& pick = lowered[rng() % lowered.size()];
    if (pick.bound > 1) pick.bound -= 1;
    Network after(agents, lowered);

    for (AgentId j = 0; j < agents; ++j) {
      const auto rb = before.radius(j), ra = after.radius(j);
      if (rb) {
        REQUIRE(ra.has_value());
        CHECK(*ra <= *rb);
      }
    }
  }
}
