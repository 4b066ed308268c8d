#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "stit/semantics.hpp"
#include "stit/syntax.hpp"

namespace stit::frames {

// Single-moment reduction of a model: a history set, one partition per agent,
// and a valuation per history.
struct ChoiceFrame {
  std::vector<std::string> histories;
  std::map<Agent, std::vector<std::vector<int>>> partitions;  // cells of history indices
  std::vector<std::set<std::string>> valuation;               // vars per history
};

/// Structural problems (empty/overlapping/non-covering cells, bad labels).
/// Independence is checked separately.
std::vector<std::string> frame_problems(const ChoiceFrame& frame);

struct Selector {
  std::map<Agent, std::vector<int>> cells;  // one chosen cell per agent
};

/// Exhaustive check of the independence condition: every choice of one cell
/// per agent must intersect. Returns a violating selector if one exists.
std::optional<Selector> independence_violation(const ChoiceFrame& frame);

/// Plain recursive evaluation of f at history h of the frame. Kept separate
/// from the model checker so the two routes can be compared.
bool frame_eval(const ChoiceFrame& frame, int h, const Formula& f);

/// Root-plus-leaves model: a fresh root under one leaf per history, vacuous
/// leaf choices, valuation lifted to the root pairs. Throws
/// std::invalid_argument when the frame invariants fail.
semantics::Model to_model(const ChoiceFrame& frame);

struct SearchOptions {
  int workers = 1;  // > 1 runs the OpenMP kernel with that many threads
  bool prune_isomorphic = true;
};

struct SatResult {
  std::optional<ChoiceFrame> frame;  // engaged iff satisfiable within bound
  int history = -1;
  int bound = 0;
  bool satisfiable() const { return frame.has_value(); }
};

struct ValidityResult {
  std::optional<ChoiceFrame> countermodel;
  int history = -1;
  int bound = 0;
  bool valid_up_to() const { return !countermodel.has_value(); }
};

// Enumerates independence-respecting frames over vocabulary(f) with at most
// max_histories histories, in a fixed order: ascending history count, then
// lexicographic partition tuples (agents ascending, restricted-growth-string
// order per agent), then valuations, then histories. With pruning enabled only
// the lexicographically least frame of each isomorphism class (under history
// relabeling) is visited. The reported witness is the globally least one in
// this order, for any worker count. A found witness is re-checked through
// to_model and the model checker before it is returned.
SatResult sat_search(const Formula& f, int max_histories,
                     const SearchOptions& opts = {});

/// Straightforward serial implementation of the same enumeration, evaluating
/// with frame_eval. Reference for testing the search kernel; bit-identical
/// verdicts to sat_search.
SatResult sat_search_reference(const Formula& f, int max_histories,
                               bool prune_isomorphic = true);

/// Bounded validity as satisfiability of the negation; a countermodel is
/// re-checked against the model checker before it is returned.
ValidityResult validity_up_to(const Formula& f, int bound,
                              const SearchOptions& opts = {});

ChoiceFrame frame_from_json(const nlohmann::json& j);
nlohmann::ordered_json frame_to_json(const ChoiceFrame& frame);

}  // namespace stit::frames
