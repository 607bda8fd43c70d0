#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coordination.hpp"
#include "simulator.hpp"

namespace synchro {

struct StructureQuery {
  std::string kind;  // "centipede" | "broom" | "centibroom"
  AgentId origin = -1;
  std::vector<AgentId> agents;               // centipede: i_0..i_k
  std::vector<std::vector<AgentId>> groups;  // broom/centibroom
  int t = 0;
  int t_prime = 0;
};

// A fixed response schedule, used by the deliberately broken protocol
// fixture ("gor-broken"): each entry fires unconditionally.
struct ScheduledResponse {
  std::string action;
  AgentId agent = -1;
  int time = 0;
};

struct Scenario {
  std::string name;
  ContextParams ctx;
  std::string protocol_kind;  // silent | full-information | snapshot | gor | gor-broken
  std::optional<ResponseOrdering> ro;   // gor variants
  std::optional<OJRSpec> ojr;           // when declared as an OJR instance
  std::vector<ScheduledResponse> broken_schedule;
  std::vector<std::string> formulas;            // analysis section
  std::vector<StructureQuery> structure_queries;
  std::vector<std::string> warnings;

  Protocol make_protocol() const;
};

Scenario load_scenario(const std::string& path);
Scenario parse_scenario_text(const std::string& text, const std::string& origin);

// Unconditional fixed-schedule responder (broadcasts nothing).
Protocol fixed_schedule_protocol(const std::vector<ScheduledResponse>& schedule);

}  // namespace synchro
