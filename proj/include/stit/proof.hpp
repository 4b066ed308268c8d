#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stit/syntax.hpp"

namespace stit::proof {

// A modality of the system: historical necessity or one agent's stit.
struct Modality {
  bool is_box = true;
  Agent agent = 0;
  static Modality box() { return {true, 0}; }
  static Modality stit(Agent j) { return {false, j}; }
  Formula apply(const Formula& f) const {
    return is_box ? Formula::box(f) : Formula::stit(agent, f);
  }
  std::string text() const {
    return is_box ? "[]" : "[" + std::to_string(agent) + "]";
  }
  bool operator==(const Modality& o) const = default;
};

// Axiom schemes:
//   taut          any propositional tautology over maximal modal subformulas
//   k(m)          m(A -> B) -> (mA -> mB)
//   t(m)          mA -> A
//   five(m)       ~mA -> m~mA            (the 5 axiom; instances of the
//                                         diamond form <>A -> []<>A match it)
//   box_to_stit   []A -> [j]A
//   independence  (<>[j1]A1 & ... & <>[jn]An) -> <>([j1]A1 & ... & [jn]An)
//                 with pairwise different agents, n >= 1
struct SchemeId {
  enum class Kind { taut, k, t, five, box_to_stit, independence };
  Kind kind;
  Modality modality;  // k / t / five
  Agent agent = 0;    // box_to_stit

  static SchemeId taut() { return {Kind::taut, Modality::box(), 0}; }
  static SchemeId k(Modality m) { return {Kind::k, m, 0}; }
  static SchemeId t(Modality m) { return {Kind::t, m, 0}; }
  static SchemeId five(Modality m) { return {Kind::five, m, 0}; }
  static SchemeId box_to_stit(Agent j) {
    return {Kind::box_to_stit, Modality::box(), j};
  }
  static SchemeId independence() {
    return {Kind::independence, Modality::box(), 0};
  }
  std::string text() const;
};

struct Instantiation {
  std::map<std::string, Formula> metavars;               // "A", "B"
  std::vector<std::pair<Agent, Formula>> independents;   // independence only
};

/// Matches f (modulo sugar expansion) against the scheme; returns the
/// substitution or nothing. Conjunctions are matched under any bracketing.
std::optional<Instantiation> match_axiom(const Formula& f, const SchemeId& s);

/// Truth-table oracle over maximal non-Boolean subformulas. Throws
/// std::invalid_argument past 18 distinct atoms.
bool tautology(const Formula& f);

struct Justification {
  enum class Kind { axiom, mp, nec };
  Kind kind;
  SchemeId scheme = SchemeId::taut();
  int premise = 0;      // mp: the line proving X; nec: the boxed line
  int implication = 0;  // mp: the line proving X -> Y
  static Justification axiom(SchemeId s) { return {Kind::axiom, s, 0, 0}; }
  static Justification mp(int i, int j) {
    return {Kind::mp, SchemeId::taut(), i, j};
  }
  static Justification nec(int i) { return {Kind::nec, SchemeId::taut(), i, 0}; }
};

struct ProofLine {
  int index = 0;  // 1-based
  Formula formula;
  Justification just;
};

struct ProofScript {
  std::vector<ProofLine> lines;
  Formula conclusion;
};

struct ProofViolation {
  int line;  // 0 when the script as a whole is malformed
  std::string reason;
};

/// Line-by-line verification; formulas are compared after sugar expansion.
std::optional<ProofViolation> check_proof(const ProofScript& script);

// Text format, one line each:
//   <idx>. <formula> ; taut | ax:K([]) | ax:T([2]) | ax:5([]) | ax:A2([3])
//                     | ax:A3 | mp <i> <j> | nec <i>
// The conclusion is the last line. '#' starts a comment line.
ProofScript parse_script(std::string_view text);
std::string format_script(const ProofScript& script);

// Derivation builders. Each returns a script that check_proof accepts;
// preconditions (distinct agents, a checked premise with the exact expected
// conclusion) are enforced with std::invalid_argument.

/// From a premise proving ([]A & [i1]B1 & ... & [in]Bn) -> ~C, with
/// i1..in, j pairwise different, derives
/// ([]A & <>[i1]B1 & ... & <>[in]Bn) -> ~<>[j]C.
ProofScript derive_technical2(const Formula& a, const std::vector<Formula>& bs,
                              const Formula& c, const std::vector<Agent>& is,
                              Agent j, const ProofScript& premise);

/// From a premise proving ([]A & [j]B) -> C derives ([]A & <>[j]B) -> <>[j]C.
ProofScript derive_technical3(const Formula& a, const Formula& b,
                              const Formula& c, Agent j,
                              const ProofScript& premise);

/// The reusable fragment []A -> [j][]A.
ProofScript derive_box_to_stit_box(const Formula& a, Agent j);

/// <>([j1]p & [j2](p -> q)) -> ~<>([j3]r & [j4](r -> ~q)), all arguments
/// pairwise different.
ProofScript derive_counterexample(Agent j1, Agent j2, Agent j3, Agent j4,
                                  const std::string& p, const std::string& q,
                                  const std::string& r);

/// <>[j1]p -> ~<>[j2]~p with j1 != j2.
ProofScript derive_s_counterexample(Agent j1, Agent j2, const std::string& p);

}  // namespace stit::proof
