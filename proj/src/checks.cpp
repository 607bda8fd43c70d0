#include "checks.hpp"

#include <algorithm>
#include <sstream>

#include "snapshot.hpp"
#include "structures.hpp"

namespace synchro {

namespace {
constexpr std::size_t kMaxRecordedFailures = 25;

std::string node_str(NodeRef n) {
  return "<" + std::to_string(n.agent) + "," + std::to_string(n.time) + ">";
}
}  // namespace

void CheckReport::fail(const std::string& detail) {
  if (failures.size() < kMaxRecordedFailures) failures.push_back(detail);
  else if (failures.size() == kMaxRecordedFailures)
    failures.push_back("... further failures suppressed");
}

std::string CheckReport::summary() const {
  std::ostringstream out;
  out << (passed() ? "PASS" : "FAIL") << " " << name << " (" << cases
      << " cases";
  if (!passed()) out << ", " << failures.size() << " failures";
  out << ")";
  return out.str();
}

// ---------------------------------------------------------------------------
// Facts
// ---------------------------------------------------------------------------

CheckReport check_facts(const SystemBundle& bundle) {
  CheckReport report{"facts: syncausality is forward, bound guarantee implies "
                     "syncausality"};
  const Network& net = bundle.ctx.net;
  const int n = net.agent_count();
  for (int r = 0; r < static_cast<int>(bundle.runs.size()); ++r) {
    const CausalGraph g(bundle.runs[r], net);
    const int T = bundle.runs[r].horizon;
    for (AgentId i = 0; i < n; ++i)
      for (int t = 0; t <= T; ++t)
        for (AgentId j = 0; j < n; ++j)
          for (int tp = 0; tp <= T; ++tp) {
            const NodeRef a{i, t}, b{j, tp};
            ++report.cases;
            if (a != b && g.syncausal(a, b) && !(t < tp))
              report.fail("run " + std::to_string(r) + ": " + node_str(a) +
                          " ~> " + node_str(b) + " but time does not advance");
            if (bound_guarantee(net, a, b) && !g.syncausal(a, b))
              report.fail("run " + std::to_string(r) + ": " + node_str(a) +
                          " -→ " + node_str(b) +
                          " guaranteed but not syncausal");
          }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Knowledge gain theorems
// ---------------------------------------------------------------------------

namespace {

// all sequences of length 1..max_len over `alphabet` indices
template <typename T>
std::vector<std::vector<T>> sequences(const std::vector<T>& alphabet,
                                      int max_len) {
  std::vector<std::vector<T>> out;
  std::vector<std::vector<T>> frontier{{}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<std::vector<T>> next;
    for (const auto& seq : frontier)
      for (const auto& sym : alphabet) {
        auto grown = seq;
        grown.push_back(sym);
        out.push_back(grown);
        next.push_back(std::move(grown));
      }
    frontier = std::move(next);
  }
  return out;
}

std::vector<std::vector<AgentId>> small_groups(int agents, int max_group) {
  std::vector<std::vector<AgentId>> groups;
  for (int mask = 1; mask < (1 << agents); ++mask) {
    if (__builtin_popcount(static_cast<unsigned>(mask)) > max_group) continue;
    std::vector<AgentId> g;
    for (int i = 0; i < agents; ++i)
      if (mask & (1 << i)) g.push_back(i);
    groups.push_back(std::move(g));
  }
  return groups;
}

}  // namespace

CheckReport check_knowledge_gain(const SystemBundle& bundle,
                                 const InputSlot& trigger, int max_depth) {
  CheckReport report{"knowledge gain: nested knowledge implies a centipede"};
  Evaluator eval(bundle);
  const Network& net = bundle.ctx.net;

  std::vector<CausalGraph> graphs;
  graphs.reserve(bundle.runs.size());
  for (const auto& run : bundle.runs) graphs.emplace_back(run, net);

  std::vector<AgentId> agents;
  for (AgentId i = 0; i < net.agent_count(); ++i) agents.push_back(i);

  for (const auto& seq : sequences(agents, max_depth)) {
    FormulaPtr f = f_occ(trigger.id);
    for (AgentId i : seq) f = f_know(i, f);
    const PointSet& sat = eval.satisfying_points(f);

    std::vector<AgentId> centipede_agents{trigger.agent};
    centipede_agents.insert(centipede_agents.end(), seq.begin(), seq.end());

    for (int tp = trigger.time; tp <= eval.eval_horizon(); ++tp)
      for (int r = 0; r < eval.run_count(); ++r) {
        ++report.cases;
        if (!sat[tp].test(r)) continue;
        if (!find_centipede(graphs[r].reach(), net, centipede_agents,
                            trigger.time, tp)) {
          std::string chain;
          for (AgentId i : seq) chain = "K[" + std::to_string(i) + "]" + chain;
          report.fail("run " + std::to_string(r) + " t'=" + std::to_string(tp) +
                      ": " + chain + "occ(" + trigger.id +
                      ") holds but no centipede");
        }
      }
  }
  return report;
}

CheckReport check_common_knowledge_gain(const SystemBundle& bundle,
                                        const InputSlot& trigger, int max_k,
                                        int max_group) {
  CheckReport report{
      "nested common knowledge gain: nested C implies a centibroom"};
  Evaluator eval(bundle);
  const Network& net = bundle.ctx.net;

  std::vector<CausalGraph> graphs;
  graphs.reserve(bundle.runs.size());
  for (const auto& run : bundle.runs) graphs.emplace_back(run, net);

  const auto groups = small_groups(net.agent_count(), max_group);
  for (const auto& group_seq : sequences(groups, max_k)) {
    const FormulaPtr f = nested_ck(group_seq, trigger.id);
    const PointSet& sat = eval.satisfying_points(f);

    for (int tp = trigger.time; tp <= eval.eval_horizon(); ++tp)
      for (int r = 0; r < eval.run_count(); ++r) {
        ++report.cases;
        if (!sat[tp].test(r)) continue;
        if (!find_centibroom(graphs[r].reach(), net, trigger.agent, group_seq,
                             trigger.time, tp))
          report.fail("run " + std::to_string(r) + " t'=" + std::to_string(tp) +
                      ": " + f->key() + " holds but no centibroom");
      }
  }
  return report;
}

CheckReport check_ojr_knowledge(const SystemBundle& bundle, const OJRSpec& spec) {
  CheckReport report{
      "ordered joint response: cluster responses carry nested common knowledge"};
  Evaluator eval(bundle);
  const auto groups = spec.agent_groups();

  for (int r = 0; r < static_cast<int>(bundle.runs.size()); ++r) {
    const Run& run = bundle.runs[r];
    for (std::size_t h = 1; h <= spec.clusters.size(); ++h) {
      std::optional<int> t_h;
      bool uniform = true;
      for (const auto& resp : spec.clusters[h - 1]) {
        auto at = run.occurrence_time(resp.action);
        if (!at) {
          uniform = false;
          break;
        }
        if (!t_h) t_h = at;
        if (*t_h != *at) uniform = false;
      }
      if (!t_h) continue;  // cluster did not act in this run
      ++report.cases;
      if (!uniform) {
        report.fail("run " + std::to_string(r) + ": cluster " +
                    std::to_string(h) + " did not act simultaneously");
        continue;
      }
      if (*t_h > eval.eval_horizon()) {
        report.fail("run " + std::to_string(r) + ": response time " +
                    std::to_string(*t_h) + " beyond the evaluation horizon");
        continue;
      }
      std::vector<std::vector<AgentId>> prefix(groups.begin(),
                                               groups.begin() + h);
      if (!eval.eval({r, *t_h}, nested_ck(prefix, spec.trigger)))
        report.fail("run " + std::to_string(r) + ": cluster " +
                    std::to_string(h) + " acted at " + std::to_string(*t_h) +
                    " without nested common knowledge of '" + spec.trigger +
                    "'");
    }
  }
  return report;
}

CheckReport check_required_structures(const SystemBundle& bundle,
                                      const ResponseOrdering& ro,
                                      const std::vector<InputSlot>& slots) {
  CheckReport report{
      "required chains: every response occurrence is backed by its centibrooms"};
  const Network& net = bundle.ctx.net;
  const CRO cro = scc_decompose(ro);

  std::map<std::string, InputSlot> slot_of;
  for (const auto& s : slots) slot_of[s.id] = s;

  for (int r = 0; r < static_cast<int>(bundle.runs.size()); ++r) {
    const Run& run = bundle.runs[r];
    const CausalGraph g(run, net);
    for (const auto& resp : ro.responses()) {
      const auto when = run.occurrence_time(resp.action);
      if (!when) continue;
      for (const auto& chain : required_chains(cro, resp.action)) {
        ++report.cases;
        const InputSlot& slot = slot_of.at(chain.trigger);
        if (!run.occurrence_time(chain.trigger)) {
          report.fail("run " + std::to_string(r) + ": '" + resp.action +
                      "' occurred but chain trigger '" + chain.trigger +
                      "' did not");
          continue;
        }
        std::vector<std::vector<AgentId>> groups;
        bool all_singleton = true;
        for (int scc : chain.sccs) {
          groups.push_back(cro.sccs[scc].agents);
          if (cro.sccs[scc].agents.size() != 1) all_singleton = false;
        }
        if (!find_centibroom(g.reach(), net, slot.agent, groups, slot.time,
                             *when))
          report.fail("run " + std::to_string(r) + ": '" + resp.action +
                      "' at " + std::to_string(*when) +
                      " lacks the centibroom for trigger '" + chain.trigger +
                      "'");
        if (all_singleton) {
          std::vector<AgentId> path{slot.agent};
          for (const auto& grp : groups) path.push_back(grp[0]);
          if (!find_centipede(g.reach(), net, path, slot.time, *when))
            report.fail("run " + std::to_string(r) + ": '" + resp.action +
                        "' at " + std::to_string(*when) +
                        " lacks the centipede for trigger '" + chain.trigger +
                        "'");
        }
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Snapshot optimality
// ---------------------------------------------------------------------------

CheckReport check_snapshot_optimality(const ContextParams& ctx) {
  CheckReport report{
      "snapshot optimality: recording time equals the earliest broom"};
  const SystemBundle bundle = build_system(snapshot_protocol(), ctx);

  for (int r = 0; r < static_cast<int>(bundle.runs.size()); ++r) {
    const Run& run = bundle.runs[r];
    ++report.cases;

    bool triggered = false;
    for (std::size_t s = 0; s < ctx.inputs.size(); ++s)
      if (run.env.present[s]) triggered = true;

    const auto broom_at = oracle_earliest_broom(ctx, run.env);
    if (!triggered) {
      if (broom_at)
        report.fail("run " + std::to_string(r) +
                    ": broom without any trigger");
      continue;
    }

    int snap_time = -1;
    try {
      snap_time = extract_snapshot(run, ctx.net).snap_time;
    } catch (const Error& e) {
      report.fail("run " + std::to_string(r) + ": " + e.what());
      continue;
    }
    if (!broom_at)
      report.fail("run " + std::to_string(r) + ": recorded at " +
                  std::to_string(snap_time) +
                  " but the oracle found no broom");
    else if (*broom_at != snap_time)
      report.fail("run " + std::to_string(r) + ": recorded at " +
                  std::to_string(snap_time) + " but the earliest broom is " +
                  std::to_string(*broom_at));

    // at most one own-value flood initiation per agent per episode
    for (AgentId i = 0; i < ctx.net.agent_count(); ++i) {
      int initiations = 0;
      for (const auto& round :
           replay_snapshot(ctx.net, run.state(i, run.horizon)))
        if (round.own_initiation) ++initiations;
      if (initiations > 1)
        report.fail("run " + std::to_string(r) + ": agent " +
                    std::to_string(i) + " initiated " +
                    std::to_string(initiations) + " floods");
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Epistemic sanity
// ---------------------------------------------------------------------------

CheckReport check_epistemic_sanity(const SystemBundle& bundle) {
  CheckReport report{"epistemic sanity: veridicality, fixpoint, C/K laws"};
  Evaluator eval(bundle);
  const int n = bundle.ctx.net.agent_count();

  std::vector<FormulaPtr> family;
  for (const auto& slot : bundle.ctx.inputs) {
    family.push_back(f_occ(slot.id));
    family.push_back(f_not(f_occ(slot.id)));
    for (AgentId i = 0; i < n; ++i)
      family.push_back(f_know(i, f_occ(slot.id)));
  }

  auto subset_of = [](const PointSet& a, const PointSet& b) {
    for (std::size_t t = 0; t < a.size(); ++t)
      if (!b[t].contains(a[t])) return false;
    return true;
  };

  const auto groups = small_groups(n, 2);
  for (const auto& phi : family) {
    // veridicality: K_i(phi) implies phi
    for (AgentId i = 0; i < n; ++i) {
      ++report.cases;
      if (!subset_of(eval.satisfying_points(f_know(i, phi)),
                     eval.satisfying_points(phi)))
        report.fail("K[" + std::to_string(i) + "] " + phi->key() +
                    " fails veridicality");
    }
    for (const auto& g : groups) {
      const FormulaPtr c = f_common(g, phi);
      const PointSet& sat_c = eval.satisfying_points(c);
      // fixpoint: C_G(phi) implies K_i(C_G(phi)) for every member
      for (AgentId i : g) {
        ++report.cases;
        if (!subset_of(sat_c, eval.satisfying_points(f_know(i, c))))
          report.fail(c->key() + " is not a fixpoint under K[" +
                      std::to_string(i) + "]");
      }
      // singleton C coincides with K
      if (g.size() == 1) {
        ++report.cases;
        if (sat_c != eval.satisfying_points(f_know(g[0], phi)))
          report.fail(c->key() + " differs from K[" + std::to_string(g[0]) +
                      "]");
      }
      // finite-depth conjunction: C implies every nested-K string, depth <= 3
      for (const auto& str : sequences(g, 3)) {
        FormulaPtr nested = phi;
        for (AgentId i : str) nested = f_know(i, nested);
        ++report.cases;
        if (!subset_of(sat_c, eval.satisfying_points(nested)))
          report.fail(c->key() + " does not imply " + nested->key());
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Per-scenario dispatch
// ---------------------------------------------------------------------------

std::vector<CheckReport> run_theorem_checks(const Scenario& scenario) {
  std::vector<CheckReport> reports;
  const auto& ctx = scenario.ctx;

  if (scenario.protocol_kind == "snapshot") {
    reports.push_back(check_snapshot_optimality(ctx));
    return reports;
  }

  const SystemBundle bundle = build_system(scenario.make_protocol(), ctx);
  reports.push_back(check_facts(bundle));

  if (scenario.protocol_kind == "full-information") {
    reports.push_back(check_epistemic_sanity(bundle));
    for (const auto& slot : ctx.inputs) {
      reports.push_back(check_knowledge_gain(bundle, slot, 3));
      reports.push_back(check_common_knowledge_gain(bundle, slot, 2, 2));
    }
  }

  if (scenario.ro) {
    auto gor = check_gor(bundle, *scenario.ro);
    CheckReport gor_report{"general ordered response conformance"};
    gor_report.cases = static_cast<long>(bundle.runs.size());
    for (const auto& v : gor)
      gor_report.fail("run " + std::to_string(v.run) + " [" + v.clause + "] " +
                      v.detail);
    reports.push_back(std::move(gor_report));
    reports.push_back(check_required_structures(bundle, *scenario.ro, ctx.inputs));
  }
  if (scenario.ojr) {
    auto ojr = check_ojr(bundle, *scenario.ojr);
    CheckReport ojr_report{"ordered joint response conformance"};
    ojr_report.cases = static_cast<long>(bundle.runs.size());
    for (const auto& v : ojr)
      ojr_report.fail("run " + std::to_string(v.run) + " [" + v.clause + "] " +
                      v.detail);
    reports.push_back(std::move(ojr_report));
    if (scenario.protocol_kind == "gor")
      reports.push_back(check_ojr_knowledge(bundle, *scenario.ojr));
  }
  return reports;
}

}  // namespace synchro
