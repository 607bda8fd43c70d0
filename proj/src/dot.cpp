#include "dot.hpp"

#include <set>
#include <sstream>

#include "causality.hpp"

namespace synchro {

namespace {

std::string node_id(AgentId agent, int time) {
  return "a" + std::to_string(agent) + "_t" + std::to_string(time);
}

std::string node_label(AgentId agent, int time) {
  return "(" + std::to_string(agent) + "," + std::to_string(time) + ")";
}

}  // namespace

std::string export_run_dot(const Run& run, const Network& net,
                           std::optional<int> cut) {
  std::ostringstream out;
  out << "digraph run {\n  rankdir=LR;\n  node [shape=circle, fontsize=10];\n";
  for (AgentId i = 0; i < net.agent_count(); ++i) {
    for (int t = 0; t <= run.horizon; ++t) {
      out << "  " << node_id(i, t) << " [label=\"" << node_label(i, t) << "\"";
      if (cut && *cut == t) out << ", style=filled, fillcolor=lightgrey";
      out << "];\n";
    }
    for (int t = 0; t < run.horizon; ++t)
      out << "  " << node_id(i, t) << " -> " << node_id(i, t + 1)
          << " [color=grey, arrowsize=0.4];\n";
  }
  CausalGraph g(run, net);
  for (const auto& e : g.reach().edges()) {
    out << "  " << node_id(e.from.agent, e.from.time) << " -> "
        << node_id(e.to.agent, e.to.time);
    if (e.kind == CausalEdgeKind::NullMessage)
      out << " [style=dashed]";
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

std::string export_witness_dot(const StructureWitness& witness) {
  std::ostringstream out;
  out << "digraph witness {\n  rankdir=LR;\n  node [shape=circle, fontsize=10];\n";

  std::set<std::pair<AgentId, int>> declared;
  auto declare = [&](NodeRef n) {
    if (declared.insert({n.agent, n.time}).second)
      out << "  " << node_id(n.agent, n.time) << " [label=\""
          << node_label(n.agent, n.time) << "\"];\n";
  };

  declare(witness.nodes.front());
  for (std::size_t h = 1; h < witness.nodes.size(); ++h) {
    declare(witness.nodes[h]);
    out << "  " << node_id(witness.nodes[h - 1].agent, witness.nodes[h - 1].time)
        << " -> " << node_id(witness.nodes[h].agent, witness.nodes[h].time)
        << " [label=\"sync\", penwidth=1.5];\n";
  }
  for (std::size_t h = 0; h < witness.groups.size(); ++h) {
    const NodeRef from = witness.nodes[h + 1];
    for (AgentId target : witness.groups[h]) {
      const NodeRef leg{target, witness.t_prime};
      declare(leg);
      if (witness.kind == StructureKind::Centipede &&
          h + 1 == witness.groups.size())
        continue;  // the final centipede node is the chain endpoint itself
      if (from == leg) continue;
      out << "  " << node_id(from.agent, from.time) << " -> "
          << node_id(leg.agent, leg.time) << " [label=\"bound\", style=dashed];\n";
    }
  }
  out << "}\n";
  return out.str();
}

std::string export_cro_dot(const CRO& cro) {
  std::ostringstream out;
  out << "digraph cro {\n  rankdir=TB;\n";
  for (std::size_t t = 0; t < cro.triggers.size(); ++t)
    out << "  trig" << t << " [shape=diamond, label=\"" << cro.triggers[t]
        << "\"];\n";
  for (std::size_t s = 0; s < cro.sccs.size(); ++s) {
    out << "  scc" << s << " [shape=ellipse, label=\"";
    for (std::size_t a = 0; a < cro.sccs[s].actions.size(); ++a) {
      if (a) out << "\\n";
      out << cro.sccs[s].actions[a];
    }
    out << "\"];\n";
  }
  for (const auto& [trigger, scc] : cro.trigger_cover) {
    std::size_t t = 0;
    while (cro.triggers[t] != trigger) ++t;
    out << "  trig" << t << " -> scc" << scc << ";\n";
  }
  for (const auto& [a, b] : cro.scc_cover)
    out << "  scc" << a << " -> scc" << b << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace synchro
