#include "epistemics.hpp"

#include <algorithm>
#include <cctype>

namespace synchro {

// ---------------------------------------------------------------------------
// Formula construction
// ---------------------------------------------------------------------------

std::string Formula::key() const {
  switch (kind) {
    case Kind::Occ:
      return "occ(" + event + ")";
    case Kind::Not:
      return "!(" + lhs->key() + ")";
    case Kind::And:
      return "(" + lhs->key() + " & " + rhs->key() + ")";
    case Kind::Know:
      return "K[" + std::to_string(agent) + "](" + lhs->key() + ")";
    case Kind::Common: {
      std::string s = "C{";
      for (std::size_t i = 0; i < group.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(group[i]);
      }
      return s + "}(" + lhs->key() + ")";
    }
  }
  return "?";
}

FormulaPtr f_occ(std::string event) {
  auto f = std::make_shared<Formula>();
  f->kind = Formula::Kind::Occ;
  f->event = std::move(event);
  return f;
}

FormulaPtr f_not(FormulaPtr inner) {
  auto f = std::make_shared<Formula>();
  f->kind = Formula::Kind::Not;
  f->lhs = std::move(inner);
  return f;
}

FormulaPtr f_and(FormulaPtr a, FormulaPtr b) {
  auto f = std::make_shared<Formula>();
  f->kind = Formula::Kind::And;
  f->lhs = std::move(a);
  f->rhs = std::move(b);
  return f;
}

FormulaPtr f_know(AgentId agent, FormulaPtr inner) {
  auto f = std::make_shared<Formula>();
  f->kind = Formula::Kind::Know;
  f->agent = agent;
  f->lhs = std::move(inner);
  return f;
}

FormulaPtr f_common(std::vector<AgentId> group, FormulaPtr inner) {
  if (group.empty()) throw EmptyGroup("common knowledge needs a nonempty group");
  std::sort(group.begin(), group.end());
  group.erase(std::unique(group.begin(), group.end()), group.end());
  auto f = std::make_shared<Formula>();
  f->kind = Formula::Kind::Common;
  f->group = std::move(group);
  f->lhs = std::move(inner);
  return f;
}

FormulaPtr nested_ck(const std::vector<std::vector<AgentId>>& groups,
                     const std::string& event) {
  if (groups.empty()) throw EmptyGroup("nested_ck needs at least one group");
  FormulaPtr f = f_occ(event);
  for (const auto& g : groups) f = f_common(g, f);
  return f;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

struct Parser {
  const std::string& s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c))
      throw ParseError("formula: expected '" + std::string(1, c) + "' at offset " +
                       std::to_string(pos) + " in '" + s + "'");
  }
  int number() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
      ++pos;
    if (start == pos)
      throw ParseError("formula: expected agent id at offset " +
                       std::to_string(pos) + " in '" + s + "'");
    return std::stoi(s.substr(start, pos - start));
  }
  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_' ||
            s[pos] == '-'))
      ++pos;
    if (start == pos)
      throw ParseError("formula: expected identifier at offset " +
                       std::to_string(pos) + " in '" + s + "'");
    return s.substr(start, pos - start);
  }

  FormulaPtr conj() {
    FormulaPtr left = unary();
    while (true) {
      skip_ws();
      if (!eat('&')) return left;
      left = f_and(left, unary());
    }
  }

  FormulaPtr unary() {
    skip_ws();
    if (eat('!')) return f_not(unary());
    if (pos < s.size() && s[pos] == 'K') {
      ++pos;
      expect('[');
      int agent = number();
      expect(']');
      return f_know(agent, unary());
    }
    if (pos < s.size() && s[pos] == 'C') {
      ++pos;
      expect('{');
      std::vector<AgentId> group{number()};
      while (eat(',')) group.push_back(number());
      expect('}');
      return f_common(std::move(group), unary());
    }
    return atom();
  }

  FormulaPtr atom() {
    skip_ws();
    if (eat('(')) {
      FormulaPtr inner = conj();
      expect(')');
      return inner;
    }
    std::string name = ident();
    if (name != "occ")
      throw ParseError("formula: unknown atom '" + name + "' in '" + s + "'");
    expect('(');
    std::string event = ident();
    expect(')');
    return f_occ(event);
  }
};

}  // namespace

FormulaPtr parse_formula(const std::string& text) {
  Parser p{text};
  FormulaPtr f = p.conj();
  p.skip_ws();
  if (p.pos != text.size())
    throw ParseError("formula: trailing input at offset " +
                     std::to_string(p.pos) + " in '" + text + "'");
  return f;
}

// ---------------------------------------------------------------------------
// Evaluator
// ---------------------------------------------------------------------------

Evaluator::Evaluator(const SystemBundle& bundle, bool allow_non_exhaustive)
    : bundle_(bundle), runs_(static_cast<int>(bundle.runs.size())) {
  if (!bundle.exhaustive && !allow_non_exhaustive)
    throw NonExhaustiveBundle(
        "knowledge over a sampled bundle is unsound; pass the override to "
        "evaluate anyway");
  if (runs_ == 0) throw Error("bundle has no runs");

  eval_horizon_ = bundle.ctx.horizon - bundle.ctx.net.max_bound();

  const int n = bundle.ctx.net.agent_count();
  classes_.assign(n, {});
  class_of_.assign(n, {});
  for (AgentId i = 0; i < n; ++i) {
    classes_[i].assign(std::max(eval_horizon_ + 1, 0), {});
    class_of_[i].assign(std::max(eval_horizon_ + 1, 0),
                        std::vector<int>(runs_, -1));
    for (int t = 0; t <= eval_horizon_; ++t) {
      std::map<Hash128, int> by_state;
      for (int r = 0; r < runs_; ++r) {
        const Hash128 h = bundle.runs[r].state(i, t).hash;
        auto [it, fresh] = by_state.emplace(h, static_cast<int>(classes_[i][t].size()));
        if (fresh) classes_[i][t].push_back({});
        classes_[i][t][it->second].push_back(r);
        class_of_[i][t][r] = it->second;
      }
    }
  }
}

const std::vector<int>& Evaluator::indistinguishability_class(AgentId agent,
                                                              int time,
                                                              int run) const {
  return classes_[agent][time][class_of_[agent][time][run]];
}

DynBitset Evaluator::knows(AgentId agent, int time, const DynBitset& sat) const {
  DynBitset out(runs_);
  for (const auto& cls : classes_[agent][time]) {
    bool all = true;
    for (int r : cls)
      if (!sat.test(r)) {
        all = false;
        break;
      }
    if (all)
      for (int r : cls) out.set(r);
  }
  return out;
}

const PointSet& Evaluator::solve(const FormulaPtr& formula) {
  const std::string key = formula->key();
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;

  PointSet result(std::max(eval_horizon_ + 1, 0), DynBitset(runs_));
  switch (formula->kind) {
    case Formula::Kind::Occ: {
      for (int r = 0; r < runs_; ++r) {
        auto occ = bundle_.runs[r].occurrence_time(formula->event);
        if (!occ) continue;
        for (int t = std::max(*occ, 0); t <= eval_horizon_; ++t)
          result[t].set(r);
      }
      break;
    }
    case Formula::Kind::Not: {
      const PointSet& sub = solve(formula->lhs);
      for (int t = 0; t <= eval_horizon_; ++t) {
        result[t].set_all();
        for (int r = 0; r < runs_; ++r)
          if (sub[t].test(r)) result[t].reset(r);
      }
      break;
    }
    case Formula::Kind::And: {
      const PointSet& a = solve(formula->lhs);
      const PointSet& b = solve(formula->rhs);
      for (int t = 0; t <= eval_horizon_; ++t) {
        result[t] = a[t];
        result[t] &= b[t];
      }
      break;
    }
    case Formula::Kind::Know: {
      if (formula->agent < 0 || formula->agent >= bundle_.ctx.net.agent_count())
        throw UnknownAgent("K names unknown agent " +
                           std::to_string(formula->agent));
      const PointSet& sub = solve(formula->lhs);
      for (int t = 0; t <= eval_horizon_; ++t)
        result[t] = knows(formula->agent, t, sub[t]);
      break;
    }
    case Formula::Kind::Common: {
      for (AgentId a : formula->group)
        if (a < 0 || a >= bundle_.ctx.net.agent_count())
          throw UnknownAgent("C names unknown agent " + std::to_string(a));
      const PointSet& sub = solve(formula->lhs);
      // greatest fixpoint of S = sat(phi) /\ /\_{i in G} K_i(S), per time;
      // K only relates points at equal times, so slices are independent
      for (int t = 0; t <= eval_horizon_; ++t) {
        DynBitset s = sub[t];
        while (true) {
          DynBitset next = sub[t];
          for (AgentId a : formula->group) next &= knows(a, t, s);
          if (next == s) break;
          s = std::move(next);
        }
        result[t] = std::move(s);
      }
      break;
    }
  }
  return memo_.emplace(key, std::move(result)).first->second;
}

const PointSet& Evaluator::satisfying_points(const FormulaPtr& formula) {
  return solve(formula);
}

bool Evaluator::eval(Point p, const FormulaPtr& formula) {
  if (p.run < 0 || p.run >= runs_) throw Error("point names unknown run");
  if (p.time < 0 || p.time > eval_horizon_)
    throw HorizonExceeded("point time " + std::to_string(p.time) +
                          " outside evaluation horizon " +
                          std::to_string(eval_horizon_));
  return solve(formula)[p.time].test(p.run);
}

}  // namespace synchro
