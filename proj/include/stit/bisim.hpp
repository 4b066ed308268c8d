#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "stit/semantics.hpp"
#include "stit/syntax.hpp"

namespace stit::bisim {

struct Pointed {
  const semantics::Model* model;
  std::string moment;
};

// History relation between two pointed models, by canonical history names.
struct Relation {
  std::vector<std::pair<std::string, std::string>> pairs;
};

struct BisimViolation {
  std::string condition;  // membership | domain | counterdomain | atoms
                          // | forth | back
  std::string detail;
  nlohmann::ordered_json witness;
};

/// Checks that rel is a bisimulation for the given atoms: total in both
/// directions, related pairs agree on every var, and the forth/back
/// conditions hold for every agent. Both models must be validated and carry
/// the same agent set; vars must be meaningful on both sides.
std::optional<BisimViolation> is_bisimulation(const Pointed& left,
                                              const Pointed& right,
                                              const Relation& rel,
                                              const std::set<std::string>& vars);

/// Greatest relation satisfying atoms/forth/back, by refinement from the
/// atom-agreement pairs. Totality is not enforced; callers check it.
Relation max_bisimulation(const Pointed& left, const Pointed& right,
                          const std::set<std::string>& vars);

struct Disagreement {
  bool left_value;
  bool right_value;
};

/// Evaluates f at a related pair on both sides. Preconditions (the pair is in
/// rel, rel is a bisimulation, vocabulary within vars and agents) raise
/// std::invalid_argument. Returns nothing on agreement.
std::optional<Disagreement> transfer_check(const Pointed& left,
                                           const Pointed& right,
                                           const Relation& rel,
                                           const std::set<std::string>& vars,
                                           const std::string& h,
                                           const std::string& h2,
                                           const Formula& f);

struct AtomsCounterexample {
  Formula formula;
  std::string left_history, right_history;
  bool left_value, right_value;
};

/// Checks agreement on every action-modality-free formula over vars up to the
/// given node-count bound, across all pairs of rel. rel must be total in both
/// directions and satisfy the atoms condition (std::invalid_argument
/// otherwise).
std::optional<AtomsCounterexample> atoms_only_agreement(
    const Pointed& left, const Pointed& right, const Relation& rel,
    const std::set<std::string>& vars, std::size_t size_bound);

/// Same check over an explicit formula list; a formula containing an action
/// modality is rejected with std::invalid_argument.
std::optional<AtomsCounterexample> atoms_only_agreement(
    const Pointed& left, const Pointed& right, const Relation& rel,
    const std::set<std::string>& vars, const std::vector<Formula>& formulas);

/// All core formulas (false, ->, []) over vars with at most size_bound nodes,
/// in a fixed enumeration order.
std::vector<Formula> box_fragment(const std::set<std::string>& vars,
                                  std::size_t size_bound);

Relation relation_from_json(const nlohmann::json& j);
nlohmann::ordered_json relation_to_json(const Relation& rel);

}  // namespace stit::bisim
