#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "bitset.hpp"
#include "simulator.hpp"

namespace synchro {

// ---------------------------------------------------------------------------
// Formulas
// ---------------------------------------------------------------------------

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Formula tree over occurrence propositions, negation, conjunction,
// individual knowledge K_i and group common knowledge C_G.
struct Formula {
  enum class Kind { Occ, Not, And, Know, Common };

  Kind kind = Kind::Occ;
  std::string event;            // Occ: the event id
  AgentId agent = -1;           // Know
  std::vector<AgentId> group;   // Common: sorted, unique, nonempty
  FormulaPtr lhs;               // Not/Know/Common child; And left
  FormulaPtr rhs;               // And right

  std::string key() const;      // canonical text form, also the memo key
};

FormulaPtr f_occ(std::string event);
FormulaPtr f_not(FormulaPtr f);
FormulaPtr f_and(FormulaPtr a, FormulaPtr b);
FormulaPtr f_know(AgentId agent, FormulaPtr f);
FormulaPtr f_common(std::vector<AgentId> group, FormulaPtr f);

// C(I^k, C(I^{k-1}, ... C(I^1, occ(e)))): groups are given innermost-first,
// matching the reading order of nested common knowledge over a cluster
// sequence.
FormulaPtr nested_ck(const std::vector<std::vector<AgentId>>& groups,
                     const std::string& event);

// Text syntax: occ(e1), !phi, phi & psi, K[2] phi, C{1,2} phi, parentheses.
// '&' binds loosest; the unary operators bind tighter and associate to the
// right.
FormulaPtr parse_formula(const std::string& text);

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

struct Point {
  int run = 0;  // index into the bundle
  int time = 0;
  friend auto operator<=>(const Point&, const Point&) = default;
};

// Satisfaction sets, one run-bitset per time 0..eval_horizon.
using PointSet = std::vector<DynBitset>;

// Evaluates formulas over the points of one system bundle. Knowledge is
// only sound relative to exhaustively enumerated systems, so sampled
// bundles are refused unless explicitly overridden. Points are restricted
// to t <= horizon - max channel bound so that every null-message edge
// relevant to a queried point lands inside the simulated horizon.
//
// K_i is evaluated through the indistinguishability partition of local
// states; C_G as the greatest fixpoint of S = sat(phi) /\ all-of-G-know(S),
// which on finite systems coincides with the infinite conjunction of nested
// knowledge formulas.
class Evaluator {
 public:
  explicit Evaluator(const SystemBundle& bundle,
                     bool allow_non_exhaustive = false);

  int eval_horizon() const { return eval_horizon_; }
  int run_count() const { return runs_; }

  bool eval(Point p, const FormulaPtr& formula);
  const PointSet& satisfying_points(const FormulaPtr& formula);

  // the runs i cannot tell apart from `run` at `time`
  const std::vector<int>& indistinguishability_class(AgentId agent, int time,
                                                     int run) const;

 private:
  const PointSet& solve(const FormulaPtr& formula);
  DynBitset knows(AgentId agent, int time, const DynBitset& sat) const;

  const SystemBundle& bundle_;
  int runs_ = 0;
  int eval_horizon_ = -1;
  // classes_[agent][time]: list of run-index groups with identical local
  // state; class_of_[agent][time][run]: index into that list
  std::vector<std::vector<std::vector<std::vector<int>>>> classes_;
  std::vector<std::vector<std::vector<int>>> class_of_;
  std::map<std::string, PointSet> memo_;
};

}  // namespace synchro
