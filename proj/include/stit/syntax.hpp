#pragma once

#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace stit {

/// Agents are positive integers.
using Agent = unsigned int;

enum class Op {
  // core
  var,
  bottom,
  implies,
  box,
  stit,
  // sugar
  top,
  neg,
  conj,
  disj,
  diamond,
  stit_dual,
  delib_stit,
};

// Immutable formula handle with value semantics. Subtrees are shared, so
// copies are cheap and formulas are safe to use across threads.
class Formula {
 public:
  static Formula var(std::string name);
  static Formula bottom();
  static Formula top();
  static Formula implies(Formula a, Formula b);
  static Formula neg(Formula a);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula box(Formula a);
  static Formula diamond(Formula a);
  static Formula stit(Agent j, Formula a);
  static Formula stit_dual(Agent j, Formula a);
  static Formula delib_stit(Agent j, Formula a);

  Op op() const { return node_->op; }
  const std::string& var_name() const;
  Agent agent() const;
  Formula lhs() const;  // left operand of a binary node, or the unary body
  Formula rhs() const;
  Formula body() const { return lhs(); }

  bool is_core() const;

  /// Expands all sugar: ~A = A->false, <>A = ~[]~A, <j>A = ~[j]~A,
  /// [d:j]A = [j]A & ~[]A, true = false->false, A&B = ~(A->~B), A|B = ~A->B.
  Formula desugared() const;

  bool operator==(const Formula& other) const;
  bool operator!=(const Formula& other) const { return !(*this == other); }
  bool operator<(const Formula& other) const;

  std::size_t node_count() const;

 private:
  struct Node {
    Op op;
    std::string name;  // var
    Agent ag = 0;      // stit / stit_dual / delib_stit
    std::shared_ptr<const Node> a, b;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula unary(Op op, Agent ag, Formula a);
  static Formula binary(Op op, Formula a, Formula b);
  std::shared_ptr<const Node> node_;

  friend int compare(const Formula& a, const Formula& b);
};

/// Total order used for canonical containers and enumeration.
int compare(const Formula& a, const Formula& b);

/// Left-folded conjunction; the empty conjunction is `true`.
Formula conj_all(const std::vector<Formula>& xs);

struct Vocabulary {
  std::set<std::string> vars;
  std::set<Agent> agents;
};

Vocabulary vocabulary(const Formula& f);

/// True when the formula contains no action modalities.
bool action_free(const Formula& f);

/// Maximal nesting of [] / [j] after sugar expansion.
unsigned modal_depth(const Formula& f);

/// Subset of formulas whose (desugared) head is [] resp. [j].
std::vector<Formula> project_boxed(const std::vector<Formula>& fs);
std::vector<Formula> project_stit(const std::vector<Formula>& fs, Agent j);

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t position, const std::string& expected,
             const std::string& found);
  std::size_t position;
  std::string expected;
};

// Grammar:
//   formula := impl
//   impl    := or [ "->" impl ]
//   or      := and { "|" and }
//   and     := unary { "&" unary }
//   unary   := "~" unary | "[]" unary | "<>" unary | "[" nat "]" unary
//            | "<" nat ">" unary | "[d:" nat "]" unary | atom
//   atom    := "false" | "true" | ident | "(" impl ")"
//   ident   := [a-z][a-z0-9_]*      nat := [1-9][0-9]*
// "&" and "|" chains are folded to the left; "->" associates to the right.
Formula parse_formula(std::string_view text);

/// Minimal-parenthesis rendering; parse_formula(print_formula(f)) == f.
std::string print_formula(const Formula& f);

}  // namespace stit
