#pragma once

#include <optional>
#include <string>

#include "coordination.hpp"
#include "simulator.hpp"
#include "structures.hpp"

namespace synchro {

// Causal graph of a run: one node per agent-time pair, solid edges for
// delivered messages, dashed edges for null messages. `cut` highlights the
// nodes of a recording time.
std::string export_run_dot(const Run& run, const Network& net,
                           std::optional<int> cut = std::nullopt);

// A found structure: solid "sync" edges along the chain, dashed "bound"
// legs into the targets at t'.
std::string export_witness_dot(const StructureWitness& witness);

// The condensation DAG of a response ordering (covering edges only).
std::string export_cro_dot(const CRO& cro);

}  // namespace synchro
