#pragma once

#include <string>
#include <vector>

#include "coordination.hpp"
#include "epistemics.hpp"
#include "scenario.hpp"
#include "simulator.hpp"

namespace synchro {

// Result of one empirical check: how many instances were examined and what
// failed. An empty failure list means the property held everywhere.
struct CheckReport {
  std::string name;
  long cases = 0;
  std::vector<std::string> failures;

  explicit CheckReport(std::string check_name) : name(std::move(check_name)) {}

  bool passed() const { return failures.empty(); }
  void fail(const std::string& detail);
  std::string summary() const;
};

// Fact 1 (syncausality only moves forward in time) and the corrected
// Fact 2 (a bound guarantee implies syncausality in every run), quantified
// over all node pairs of all runs.
CheckReport check_facts(const SystemBundle& bundle);

// Knowledge gain: wherever nested knowledge K_{i_k}..K_{i_1} occ(e) holds,
// a centipede for <i_0, i_1..i_k> exists in (r, t..t'). Quantifies over all
// agent sequences up to max_depth, all runs and evaluation points.
CheckReport check_knowledge_gain(const SystemBundle& bundle,
                                 const InputSlot& trigger, int max_depth);

// Nested common knowledge gain: wherever C_{I^k}..C_{I^1} occ(e) holds, a
// centibroom for <i_0, I^1..I^k> exists. Group sequences up to length
// max_k, groups up to max_group agents.
CheckReport check_common_knowledge_gain(const SystemBundle& bundle,
                                        const InputSlot& trigger, int max_k,
                                        int max_group);

// At every cluster response time t_h of an ordered-joint-response run, the
// nested common knowledge formula over clusters 1..h holds at (r, t_h).
CheckReport check_ojr_knowledge(const SystemBundle& bundle, const OJRSpec& spec);

// Every response occurrence is backed by the centibrooms of all its
// required chains; for all-singleton chains the centipede form is required
// as well.
CheckReport check_required_structures(const SystemBundle& bundle,
                                      const ResponseOrdering& ro,
                                      const std::vector<InputSlot>& slots);

// All-case optimality of the snapshot protocol: in every environment the
// common recording time equals the earliest broom time of the
// corresponding full-information run (both absent when nothing triggers).
// Also asserts simultaneity and the per-agent initiation budget.
CheckReport check_snapshot_optimality(const ContextParams& ctx);

// Veridicality, the common-knowledge fixpoint property, C over a singleton
// coinciding with K, and finite-depth agreement of C with nested-K strings.
CheckReport check_epistemic_sanity(const SystemBundle& bundle);

// Everything applicable to one scenario, by protocol kind.
std::vector<CheckReport> run_theorem_checks(const Scenario& scenario);

}  // namespace synchro
