// Acceptance suite: one line per criterion, nonzero exit when any fails.
// Each criterion is exact (zero tolerance); the reference scenarios live in
// scenarios/ and every exhaustive bundle stays under the enumeration
// ceiling.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <set>

#include "checks.hpp"
#include "coordination.hpp"
#include "dot.hpp"
#include "oracles.hpp"
#include "scenario.hpp"
#include "snapshot.hpp"
#include "structures.hpp"

using namespace synchro;

namespace {

std::string path(const std::string& name) {
  return std::string(SCENARIO_DIR) + "/" + name;
}

struct Criterion {
  std::string name;
  std::function<std::vector<std::string>()> run;  // returns failures
};

SystemBundle bundle_of(const std::string& scenario_file) {
  auto sc = load_scenario(path(scenario_file));
  return build_system(sc.make_protocol(), sc.ctx);
}

// --- criterion 1 -----------------------------------------------------------

std::vector<std::string> facts_suite() {
  std::vector<std::string> failures;
  for (const char* name : {"r1.json", "r2_star.json", "r3_line.json"}) {
    auto sc = load_scenario(path(name));
    for (const auto& protocol : {sc.make_protocol(), silent_protocol()}) {
      auto report = check_facts(build_system(protocol, sc.ctx));
      for (const auto& f : report.failures)
        failures.push_back(std::string(name) + "/" + protocol.id + ": " + f);
    }
  }
  return failures;
}

// --- criteria 2 and 3 ------------------------------------------------------

std::vector<std::string> knowledge_gain_suite() {
  std::vector<std::string> failures;
  for (const char* name : {"r1.json", "r3_line.json"}) {
    auto sc = load_scenario(path(name));
    auto bundle = build_system(sc.make_protocol(), sc.ctx);
    for (const auto& slot : sc.ctx.inputs) {
      auto report = check_knowledge_gain(bundle, slot, 3);
      for (const auto& f : report.failures)
        failures.push_back(std::string(name) + ": " + f);
    }
  }
  return failures;
}

std::vector<std::string> common_knowledge_gain_suite() {
  std::vector<std::string> failures;
  for (const char* name : {"r2_star.json", "r3_line.json"}) {
    auto sc = load_scenario(path(name));
    auto bundle = build_system(sc.make_protocol(), sc.ctx);
    for (const auto& slot : sc.ctx.inputs) {
      auto report = check_common_knowledge_gain(bundle, slot, 2, 2);
      for (const auto& f : report.failures)
        failures.push_back(std::string(name) + ": " + f);
    }
  }
  return failures;
}

// --- criterion 4 -----------------------------------------------------------

std::vector<std::string> ojr_knowledge_suite() {
  std::vector<std::string> failures;
  for (const char* name : {"r2_ojr.json", "r3_ojr.json"}) {
    auto sc = load_scenario(path(name));
    auto bundle = build_system(sc.make_protocol(), sc.ctx);
    auto report = check_ojr_knowledge(bundle, *sc.ojr);
    if (report.cases == 0)
      failures.push_back(std::string(name) + ": no cluster responses observed");
    for (const auto& f : report.failures)
      failures.push_back(std::string(name) + ": " + f);
  }
  return failures;
}

// --- criterion 5 -----------------------------------------------------------

std::vector<std::string> snapshot_suite() {
  std::vector<std::string> failures;
  for (const char* name : {"r2_snapshot.json", "ring3_snapshot.json"}) {
    auto sc = load_scenario(path(name));
    auto report = check_snapshot_optimality(sc.ctx);
    for (const auto& f : report.failures)
      failures.push_back(std::string(name) + ": " + f);
  }
  return failures;
}

// --- criterion 6 -----------------------------------------------------------

std::vector<std::string> conformance_suite() {
  std::vector<std::string> failures;
  for (const char* name : {"r2_ojr.json", "r3_ojr.json", "r4_judea.json"}) {
    auto sc = load_scenario(path(name));
    auto bundle = build_system(sc.make_protocol(), sc.ctx);
    for (const auto& v : check_gor(bundle, *sc.ro))
      failures.push_back(std::string(name) + " gor run " +
                         std::to_string(v.run) + " [" + v.clause + "] " +
                         v.detail);
    if (sc.ojr)
      for (const auto& v : check_ojr(bundle, *sc.ojr))
        failures.push_back(std::string(name) + " ojr run " +
                           std::to_string(v.run) + " [" + v.clause + "] " +
                           v.detail);
  }

  // the broken fixture must trip every clause it breaks
  auto sc = load_scenario(path("broken_gor.json"));
  auto bundle = build_system(sc.make_protocol(), sc.ctx);
  std::set<std::string> gor_clauses, ojr_clauses;
  for (const auto& v : check_gor(bundle, *sc.ro)) gor_clauses.insert(v.clause);
  for (const auto& v : check_ojr(bundle, *sc.ojr)) ojr_clauses.insert(v.clause);
  for (const char* clause : {"Triggering", "WeakOrdering"})
    if (!gor_clauses.count(clause))
      failures.push_back("broken fixture missed the gor clause " +
                         std::string(clause));
  for (const char* clause : {"Triggering", "Simultaneity", "LinearOrdering"})
    if (!ojr_clauses.count(clause))
      failures.push_back("broken fixture missed the ojr clause " +
                         std::string(clause));
  return failures;
}

// --- criterion 7 -----------------------------------------------------------

std::vector<std::string> judea_suite() {
  std::vector<std::string> failures;
  auto sc = load_scenario(path("r4_judea.json"));
  const CRO cro = scc_decompose(*sc.ro);

  if (cro.sccs.size() != 4 || cro.triggers.size() != 3)
    failures.push_back("condensation shape is not 3 triggers + 4 components");

  const int pfj = cro.scc_of.at("pfj_first");
  const int jpf = cro.scc_of.at("jpf_revolt");
  const int masses = cro.scc_of.at("masses_revolt");
  const int old_regime = cro.scc_of.at("old_regime_revolt");
  if (cro.scc_of.at("pfj_second") != pfj)
    failures.push_back("the two faction members are not one component");
  if (cro.scc_cover != std::set<std::pair<int, int>>{
                           {pfj, masses}, {jpf, masses}, {masses, old_regime}})
    failures.push_back("covering edges differ from the expected condensation");

  std::set<std::pair<std::string, std::vector<int>>> expected{
      {"jedediah", {pfj, masses, old_regime}},
      {"jeremiah", {pfj, masses, old_regime}},
      {"brian", {jpf, masses, old_regime}}};
  std::set<std::pair<std::string, std::vector<int>>> got;
  for (const auto& c : required_chains(cro, "old_regime_revolt"))
    got.insert({c.trigger, c.sccs});
  if (got != expected)
    failures.push_back("required chains for the last response are wrong");

  auto bundle = build_system(sc.make_protocol(), sc.ctx);
  for (const auto& run : bundle.runs) {
    const bool jed = run.occurrence_time("jedediah").has_value();
    const bool jer = run.occurrence_time("jeremiah").has_value();
    const bool brian = run.occurrence_time("brian").has_value();
    if (!(jed && brian && !jer)) continue;
    if (!run.occurrence_time("jpf_revolt"))
      failures.push_back("jedediah+brian environment: the JPF did not revolt");
    for (const char* quiet :
         {"pfj_first", "pfj_second", "masses_revolt", "old_regime_revolt"})
      if (run.occurrence_time(quiet))
        failures.push_back("jedediah+brian environment: '" +
                           std::string(quiet) + "' revolted");
  }
  return failures;
}

// --- criterion 8 -----------------------------------------------------------

std::vector<std::string> oracle_equivalence_suite() {
  std::vector<std::string> failures;

  // structure search vs tuple enumeration: <= 4 agents, horizon <= 5, k <= 2.
  // The 4-agent config runs silent (null-message graphs); a 3-agent config
  // runs the full-information protocol (message graphs under every delay
  // assignment).
  {
    Network net(4, {{0, 1, 1}, {1, 0, 2}, {1, 2, 1}, {2, 1, 1}, {2, 3, 2},
                    {3, 2, 1}, {3, 0, 3}});
    ContextParams ctx{net, 5, {{"e", 0, 0}}, 200000};
    Network net3(3, {{0, 1, 1}, {1, 0, 1}, {1, 2, 2}, {2, 1, 1}});
    ContextParams ctx3{net3, 4, {{"e", 0, 0}}, 200000};
    std::vector<std::vector<std::vector<AgentId>>> queries = {
        {{1}}, {{2, 3}}, {{1}, {2}}, {{1, 2}, {3}}, {{0, 3}, {1, 2}}};
    std::vector<std::vector<std::vector<AgentId>>> queries3 = {
        {{1}}, {{2}}, {{1, 2}}, {{1}, {2}}, {{0, 1}, {2}}};

    struct Config {
      const Network& net;
      const ContextParams& ctx;
      const std::vector<std::vector<std::vector<AgentId>>>& queries;
      Protocol protocol;
    };
    const std::vector<Config> configs = {
        {net, ctx, queries, silent_protocol()},
        {net3, ctx3, queries3, full_information_protocol()}};

    for (const auto& config : configs) {
      auto bundle = build_system(config.protocol, config.ctx);
      const int T = config.ctx.horizon;
      for (std::size_t r = 0; r < bundle.runs.size();
           r += std::max<std::size_t>(1, bundle.runs.size() / 16)) {
        CausalGraph g(bundle.runs[r], config.net);
        for (const auto& groups : config.queries)
          for (int t = 0; t <= 1; ++t)
            for (int tp = t; tp <= T; ++tp) {
              const bool dp =
                  find_centibroom(g.reach(), config.net, 0, groups, t, tp)
                      .has_value();
              const bool brute = oracles::tuple_centibroom_exists(
                  g, config.net, 0, groups, t, tp);
              if (dp != brute)
                failures.push_back("structure search disagrees with tuple "
                                   "enumeration at t'=" + std::to_string(tp));
            }
        for (const auto& agents : std::vector<std::vector<AgentId>>{
                 {0, 1}, {0, 1, 2}, {0, 2, 1}})
          for (int tp = 0; tp <= T; ++tp) {
            const bool dp =
                find_centipede(g.reach(), config.net, agents, 0, tp).has_value();
            const bool brute =
                oracles::tuple_centipede_exists(g, config.net, agents, 0, tp);
            if (dp != brute)
              failures.push_back("centipede search disagrees with tuple "
                                 "enumeration at t'=" + std::to_string(tp));
          }
      }
    }
  }

  // distances vs path enumeration: <= 5 agents
  {
    std::mt19937_64 rng(2024);
    for (int round = 0; round < 30; ++round) {
      const int agents = 2 + static_cast<int>(rng() % 4);
      std::vector<ChannelDecl> channels;
      for (AgentId i = 0; i < agents; ++i)
        for (AgentId j = 0; j < agents; ++j)
          if (i != j && rng() % 2)
            channels.push_back({i, j, static_cast<int>(rng() % 4 + 1)});
      Network net(agents, channels);
      for (AgentId i = 0; i < agents; ++i)
        for (AgentId j = 0; j < agents; ++j)
          if (net.distance(i, j) !=
              oracles::brute_force_distance(agents, channels, i, j))
            failures.push_back("distance disagrees with path enumeration");
    }
  }

  // bundle sizes vs the recursive environment oracle: <= 3 agents, horizon <= 4
  {
    std::vector<ContextParams> contexts;
    contexts.push_back({Network(2, {{0, 1, 2}, {1, 0, 2}}), 3, {{"e", 0, 0}},
                        200000});
    contexts.push_back({Network(3, {{0, 1, 1}, {1, 0, 1}, {1, 2, 2}, {2, 1, 1}}),
                        4,
                        {{"e", 0, 0}, {"f", 2, 1}},
                        200000});
    contexts.push_back({Network(3, {{0, 1, 2}, {1, 2, 1}, {2, 0, 1}}), 4, {},
                        200000});
    for (const auto& ctx : contexts)
      for (const auto& protocol :
           {silent_protocol(), full_information_protocol()}) {
        const long expected =
            oracles::recursive_environment_count(protocol, ctx);
        const auto bundle = build_system(protocol, ctx);
        if (static_cast<long>(bundle.runs.size()) != expected)
          failures.push_back(
              "bundle size " + std::to_string(bundle.runs.size()) +
              " differs from the recursive oracle count " +
              std::to_string(expected));
      }
  }
  return failures;
}

// --- criterion 9 -----------------------------------------------------------

std::vector<std::string> epistemic_sanity_suite() {
  std::vector<std::string> failures;
  for (const char* name : {"r1.json", "r2_star.json", "r3_line.json"}) {
    auto report = check_epistemic_sanity(bundle_of(name));
    for (const auto& f : report.failures)
      failures.push_back(std::string(name) + ": " + f);
  }
  return failures;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"1 facts suite (R1-R3, zero violations)", facts_suite},
      {"2 knowledge gain theorem (R1, R3, depth <= 3)", knowledge_gain_suite},
      {"3 nested common knowledge gain (R2, R3, k <= 2)",
       common_knowledge_gain_suite},
      {"4 ordered-joint-response knowledge (R2, R3)", ojr_knowledge_suite},
      {"5 snapshot all-case optimality (star, ring)", snapshot_suite},
      {"6 coordination conformance + broken fixture", conformance_suite},
      {"7 judea semantics (condensation, chains, selective revolt)",
       judea_suite},
      {"8 oracle equivalences (structures, distances, counts)",
       oracle_equivalence_suite},
      {"9 epistemic sanity (R1-R3)", epistemic_sanity_suite},
  };

  int failed = 0;
  for (const auto& criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<std::string> failures;
    try {
      failures = criterion.run();
    } catch (const std::exception& e) {
      failures.push_back(std::string("unexpected error: ") + e.what());
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    std::cout << (failures.empty() ? "PASS" : "FAIL") << " criterion "
              << criterion.name << " [" << ms << " ms]\n";
    for (const auto& f : failures) std::cout << "       " << f << "\n";
    if (!failures.empty()) ++failed;
  }
  if (failed) std::cout << failed << " criteria failed\n";
  return failed == 0 ? 0 : 1;
}
