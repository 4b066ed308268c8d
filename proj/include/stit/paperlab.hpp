#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "stit/bisim.hpp"
#include "stit/frames.hpp"
#include "stit/proof.hpp"
#include "stit/semantics.hpp"
#include "stit/syntax.hpp"

namespace stit::paperlab {

// Signed binary 4-tuple; the 32 of them are the leaf moments of the two
// counterexample models S and S'.
struct FourTuple {
  std::array<int, 4> bits;
  bool plus;
  int pr(int j) const { return bits[static_cast<std::size_t>(j - 1)]; }
  char sign() const { return plus ? '+' : '-'; }
  std::string name() const;  // t<abcd><p|m>
};

/// All 32 tuples in a fixed order: cores ascending, '+' before '-'.
std::vector<FourTuple> four_tuples();

// The ({1,2,3,4},{p,q}) model S: root "dag" under the 32 tuple moments,
// choices at the root split by each projection, p true where pr1 = 0, q true
// where pr1 = pr2 = 0, or pr3 = pr4 = 0, or the sign is '+'.
semantics::Model build_S();

// The ({1,2,3,4},{q,r}) companion S': root "ddag", r true where pr3 = 1,
// q true where pr3 = pr4 = 0, or the sign is '+' and (pr3, pr4) != (1, 0).
semantics::Model build_S_prime();

/// Valuation restricted to vars; everything else unchanged. vars must occur
/// in the model's valuation.
semantics::Model reduct(const semantics::Model& model,
                        const std::set<std::string>& vars);

/// The 512-pair relation linking histories of S and S' that agree on q;
/// a total bisimulation between the q-reducts.
bisim::Relation build_B();

/// The two-choice single-agent model used for the agent-free interpolation
/// failure: moments {m, m0, m1}, histories h0/h1 split into singleton cells
/// for agent j, p true exactly at (m, h0).
semantics::Model build_M(Agent j, const std::string& p);

struct Fact {
  std::string kind;       // model-validation | satisfaction | proof-check
                          // | bisimulation | atoms-transfer
  std::string statement;
  bool pass;
  nlohmann::ordered_json witness;  // failure details, empty when passing
};

struct Certificate {
  std::string claim;
  nlohmann::ordered_json bounds;
  std::vector<Fact> facts;
  bool certified() const;
  std::string verdict() const;  // "certified" or "failed(step N: kind)"
};

nlohmann::ordered_json certificate_to_json(const Certificate& c);

// The ingredients of each certificate, exposed so tests can perturb one part
// and watch the corresponding step fail. The certify_* entry points run the
// canonical inputs.
struct NegativeInputs {
  semantics::ModelData s, s_prime;
  bisim::Relation relation;
  proof::ProofScript script;
  Formula antecedent, consequent;
};
NegativeInputs negative_inputs();
Certificate run_negative(const NegativeInputs& in);
/// Re-derives and checks every ingredient of the claim that no interpolant
/// over agents {1,2,3,4} and shared variable q exists for the derivable
/// implication of derive_counterexample.
Certificate certify_negative();

struct StrongInputs {
  semantics::ModelData m1, m2;
  bisim::Relation diagonal;
  proof::ProofScript script;
  Formula antecedent, consequent;
  std::size_t fragment_size_bound = 7;
};
StrongInputs strong_inputs();
Certificate run_strong(const StrongInputs& in);
/// The companion claim for agent-free interpolants of <>[1]p -> ~<>[2]~p.
Certificate certify_strong_negative();

/// Core formulas over the given vocabulary with at most size_bound nodes, in
/// a fixed order: by size, then box, stits by agent, implications by split.
std::vector<Formula> enumerate_candidates(const std::set<std::string>& vars,
                                          const std::vector<Agent>& agents,
                                          std::size_t size_bound);

enum class InterpolantMode { rcip, srcip };

struct InterpolantResult {
  std::optional<Formula> interpolant;
  std::size_t size_bound;
  int frame_bound;
  bool found() const { return interpolant.has_value(); }
};

// Searches for C over the shared variables of A and B with both A -> C and
// C -> B valid up to frame_bound. In rcip mode C may use agents of A and B;
// in srcip mode C must be action-free. Requires disjoint agent sets and
// A -> B valid up to the bound (std::invalid_argument otherwise). Verdicts
// are relative to the bounds; a negative result is NotFoundUpTo, never a
// non-existence claim.
InterpolantResult interpolant_search(const Formula& a, const Formula& b,
                                     std::size_t size_bound, int frame_bound,
                                     InterpolantMode mode,
                                     const frames::SearchOptions& opts = {});

struct SeparationResult {
  std::optional<Formula> separator;
  std::size_t size_bound;
  int frame_bound;
  bool found() const { return separator.has_value(); }
};

/// Searches for a shared-vocabulary A with gamma |- A and delta |- ~A, both
/// entailments approximated by bounded validity of the conjunction
/// implications. Agent sets of the two sides must be disjoint.
SeparationResult is_separable_bounded(const std::vector<Formula>& gamma,
                                      const std::vector<Formula>& delta,
                                      std::size_t size_bound, int frame_bound,
                                      const frames::SearchOptions& opts = {});

}  // namespace stit::paperlab
