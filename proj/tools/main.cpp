// Command-line front end: load a scenario, run one of the analyses, emit
// text or DOT. Exit codes: 0 success, 1 reported violations, 2 errors.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "causality.hpp"
#include "checks.hpp"
#include "dot.hpp"
#include "epistemics.hpp"
#include "scenario.hpp"
#include "snapshot.hpp"
#include "structures.hpp"

using namespace synchro;

namespace {

struct Options {
  std::string scenario_path;
  long env_index = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int count = 1;
  long ceiling = 0;
  std::string out_dir;
  std::string format = "text";
  std::string formula;
};

std::string event_to_string(const Event& e) {
  std::ostringstream s;
  s << "t=" << e.time << " agent " << e.agent << " ";
  switch (e.kind) {
    case EventKind::ExtInput:
      s << "input '" << e.label << "'";
      break;
    case EventKind::Receive:
      s << "receive from " << e.peer << " (sent at " << e.link_time << ")";
      break;
    case EventKind::Send:
      s << "send to " << e.peer << " (due at " << e.link_time << ")";
      break;
    case EventKind::Response:
      s << "respond '" << e.label << "'";
      break;
  }
  return s.str();
}

void emit(const Options& opt, const std::string& name, const std::string& text) {
  if (opt.out_dir.empty()) {
    std::cout << text;
    return;
  }
  std::filesystem::create_directories(opt.out_dir);
  const auto path = std::filesystem::path(opt.out_dir) / name;
  std::ofstream out(path);
  out << text;
  std::cout << "wrote " << path.string() << "\n";
}

Run pick_run(const Scenario& sc, const Options& opt) {
  if (opt.seed_set) {
    auto bundle = sample_system(sc.make_protocol(), sc.ctx, opt.seed, 1);
    return std::move(bundle.runs.front());
  }
  return run_at_index(sc.make_protocol(), sc.ctx, opt.env_index);
}

int cmd_simulate(const Scenario& sc, const Options& opt) {
  std::vector<Run> runs;
  if (opt.seed_set && opt.count > 1) {
    auto bundle = sample_system(sc.make_protocol(), sc.ctx, opt.seed, opt.count);
    runs = std::move(bundle.runs);
  } else {
    runs.push_back(pick_run(sc, opt));
  }
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (opt.format == "dot") {
      emit(opt, sc.name + "_run" + std::to_string(i) + ".dot",
           export_run_dot(runs[i], sc.ctx.net));
      continue;
    }
    std::cout << "environment: " << runs[i].env.encode() << "\n";
    for (const auto& e : runs[i].events)
      std::cout << event_to_string(e) << "\n";
  }
  return 0;
}

int cmd_enumerate(const Scenario& sc) {
  const SystemBundle bundle = build_system(sc.make_protocol(), sc.ctx);
  std::cout << bundle.runs.size() << "\n";
  return 0;
}

int cmd_eval(const Scenario& sc, const Options& opt) {
  std::vector<std::string> formulas = sc.formulas;
  if (!opt.formula.empty()) formulas = {opt.formula};
  if (formulas.empty()) {
    std::cerr << "no formulas: pass --formula or add an analysis section\n";
    return 2;
  }
  const SystemBundle bundle = build_system(sc.make_protocol(), sc.ctx);
  Evaluator eval(bundle);
  for (const auto& text : formulas) {
    const FormulaPtr f = parse_formula(text);
    const PointSet& sat = eval.satisfying_points(f);
    std::cout << f->key() << "\n";
    for (int t = 0; t <= eval.eval_horizon(); ++t) {
      std::cout << "  t=" << t << ": " << sat[t].count() << "/"
                << bundle.runs.size() << " runs";
      if (bundle.runs.size() <= 64) {
        std::cout << " [";
        for (std::size_t r = 0; r < bundle.runs.size(); ++r)
          std::cout << (sat[t].test(r) ? '1' : '0');
        std::cout << "]";
      }
      std::cout << "\n";
    }
  }
  return 0;
}

int run_structure_query(const Scenario& sc, const StructureQuery& q,
                        const Run& run, const Options& opt, int index) {
  const CausalGraph g(run, sc.ctx.net);
  std::optional<StructureWitness> w;
  if (q.kind == "centipede")
    w = find_centipede(g.reach(), sc.ctx.net, q.agents, q.t, q.t_prime);
  else if (q.kind == "broom")
    w = find_broom(g.reach(), sc.ctx.net, q.origin, q.groups.at(0), q.t, q.t_prime);
  else
    w = find_centibroom(g.reach(), sc.ctx.net, q.origin, q.groups, q.t, q.t_prime);

  std::cout << q.kind << " #" << index << " in (" << q.t << ".." << q.t_prime
            << "): ";
  if (!w) {
    std::cout << "absent\n";
    return 0;
  }
  std::cout << "present:";
  for (const auto& n : w->nodes)
    std::cout << " <" << n.agent << "," << n.time << ">";
  std::cout << "\n";
  if (opt.format == "dot")
    emit(opt, sc.name + "_witness" + std::to_string(index) + ".dot",
         export_witness_dot(*w));
  return 0;
}

int cmd_structures(const Scenario& sc, const Options& opt) {
  if (sc.structure_queries.empty()) {
    std::cerr << "scenario has no structure queries in its analysis section\n";
    return 2;
  }
  Run run = pick_run(sc, opt);
  int index = 0;
  for (const auto& q : sc.structure_queries)
    run_structure_query(sc, q, run, opt, index++);
  return 0;
}

int cmd_snapshot(const Scenario& sc, const Options& opt) {
  if (sc.protocol_kind != "snapshot") {
    std::cerr << "scenario protocol is not 'snapshot'\n";
    return 2;
  }
  const CheckReport report = check_snapshot_optimality(sc.ctx);
  const SystemBundle bundle = build_system(snapshot_protocol(), sc.ctx);
  int episodes = 0;
  for (const auto& run : bundle.runs) {
    bool triggered = false;
    for (std::size_t s = 0; s < sc.ctx.inputs.size(); ++s)
      if (run.env.present[s]) triggered = true;
    if (!triggered) continue;
    ++episodes;
    const SnapshotResult result = extract_snapshot(run, sc.ctx.net);
    if (opt.format == "text" && episodes == 1)
      std::cout << render_snapshot_report(result, sc.ctx.net);
    if (opt.format == "dot" && episodes == 1)
      emit(opt, sc.name + "_snapshot.dot",
           export_run_dot(run, sc.ctx.net, result.snap_time));
  }
  std::cout << report.summary() << "\n";
  for (const auto& f : report.failures) std::cout << "  " << f << "\n";
  return report.passed() ? 0 : 1;
}

int cmd_gor(const Scenario& sc) {
  if (!sc.ro) {
    std::cerr << "scenario has no response ordering\n";
    return 2;
  }
  const SystemBundle bundle = build_system(sc.make_protocol(), sc.ctx);
  auto violations = check_gor(bundle, *sc.ro);
  std::cout << "general ordered response: " << violations.size()
            << " violations over " << bundle.runs.size() << " runs\n";
  std::cout << render_violations(violations);
  std::size_t total = violations.size();
  if (sc.ojr) {
    auto ojr = check_ojr(bundle, *sc.ojr);
    std::cout << "ordered joint response: " << ojr.size() << " violations\n";
    std::cout << render_violations(ojr);
    total += ojr.size();
  }
  return total == 0 ? 0 : 1;
}

int cmd_check_theorems(const Scenario& sc) {
  const auto reports = run_theorem_checks(sc);
  bool all_passed = true;
  for (const auto& r : reports) {
    std::cout << r.summary() << "\n";
    for (const auto& f : r.failures) std::cout << "  " << f << "\n";
    all_passed = all_passed && r.passed();
  }
  return all_passed ? 0 : 1;
}

int cmd_dot(const Scenario& sc, const Options& opt, const std::string& what) {
  if (what == "run") {
    Run run = pick_run(sc, opt);
    emit(opt, sc.name + "_run.dot", export_run_dot(run, sc.ctx.net));
    return 0;
  }
  if (what == "cro") {
    if (!sc.ro) {
      std::cerr << "scenario has no response ordering\n";
      return 2;
    }
    emit(opt, sc.name + "_cro.dot", export_cro_dot(scc_decompose(*sc.ro)));
    return 0;
  }
  if (what == "witness") {
    Options dot_opt = opt;
    dot_opt.format = "dot";
    if (sc.structure_queries.empty()) {
      std::cerr << "scenario has no structure queries\n";
      return 2;
    }
    Run run = pick_run(sc, opt);
    int index = 0;
    for (const auto& q : sc.structure_queries)
      run_structure_query(sc, q, run, dot_opt, index++);
    return 0;
  }
  std::cerr << "unknown dot target '" << what << "'\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"analysis toolkit for synchronous message-passing networks "
               "with bounded transmission times"};
  app.require_subcommand(1);

  Options opt;
  app.add_option("--scenario", opt.scenario_path, "scenario file (JSON)")
      ->required();
  app.add_option("--ceiling", opt.ceiling, "override the enumeration ceiling");
  app.add_option("--out", opt.out_dir, "output directory for artifacts");
  app.add_option("--format", opt.format, "text|dot")
      ->check(CLI::IsMember({"text", "dot"}));

  auto* simulate = app.add_subcommand("simulate", "execute one run");
  simulate->add_option("--env-index", opt.env_index,
                       "canonical environment index");
  simulate->add_option("--seed", opt.seed, "sample environments by seed")
      ->each([&](const std::string&) { opt.seed_set = true; });
  simulate->add_option("--count", opt.count,
                       "with --seed: number of sampled runs");

  auto* enumerate =
      app.add_subcommand("enumerate", "build the exhaustive bundle, print its size");
  auto* eval = app.add_subcommand("eval", "evaluate formulas over all points");
  eval->add_option("--formula", opt.formula, "formula text (overrides scenario)");

  auto* structures =
      app.add_subcommand("structures", "run the scenario's structure queries");
  structures->add_option("--env-index", opt.env_index, "environment index");

  auto* snapshot =
      app.add_subcommand("snapshot", "snapshot episode plus optimality check");
  auto* gor = app.add_subcommand("gor", "run coordination conformance checks");
  auto* check =
      app.add_subcommand("check-theorems", "run every applicable theorem check");

  std::string dot_what = "run";
  auto* dot = app.add_subcommand("dot", "export DOT graphs");
  dot->add_option("--what", dot_what, "run|witness|cro")
      ->check(CLI::IsMember({"run", "witness", "cro"}));
  dot->add_option("--env-index", opt.env_index, "environment index");

  CLI11_PARSE(app, argc, argv);

  try {
    Scenario sc = load_scenario(opt.scenario_path);
    for (const auto& w : sc.warnings) std::cerr << "warning: " << w << "\n";
    if (opt.ceiling > 0) sc.ctx.ceiling = opt.ceiling;

    if (simulate->parsed()) return cmd_simulate(sc, opt);
    if (enumerate->parsed()) return cmd_enumerate(sc);
    if (eval->parsed()) return cmd_eval(sc, opt);
    if (structures->parsed()) return cmd_structures(sc, opt);
    if (snapshot->parsed()) return cmd_snapshot(sc, opt);
    if (gor->parsed()) return cmd_gor(sc);
    if (check->parsed()) return cmd_check_theorems(sc);
    if (dot->parsed()) return cmd_dot(sc, opt, dot_what);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
