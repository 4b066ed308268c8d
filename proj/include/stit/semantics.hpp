#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "stit/syntax.hpp"

namespace stit::semantics {

// Mirrors the model file schema. `order` holds generating pairs; the
// reflexive-transitive closure is applied when the model is built.
struct ModelData {
  std::vector<std::string> moments;
  std::vector<std::pair<std::string, std::string>> order;
  std::vector<Agent> agents;
  // moment -> agent -> cells of history names
  std::map<std::string, std::map<Agent, std::vector<std::vector<std::string>>>>
      choice;
  // (var, moment, history name)
  std::vector<std::array<std::string, 3>> valuation;
};

struct Violation {
  std::string constraint;  // HC | NBB | NCUH | IA | partial-order | partition
                           // | valuation | well-formedness
  std::string detail;
  nlohmann::ordered_json witness;
};

struct History {
  std::vector<int> chain;  // moment indices, in <= order
  std::string name;        // moment names joined by '>'
};

// A finite stit model. Histories are always computed from the order, never
// taken from input. Immutable once built; all queries are const.
class Model {
 public:
  static Model build(ModelData data);

  const ModelData& data() const { return data_; }
  const std::vector<std::string>& moments() const { return data_.moments; }
  const std::vector<Agent>& agents() const { return data_.agents; }
  int moment_index(const std::string& name) const;  // -1 when unknown
  bool leq(int a, int b) const { return leq_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]; }

  const std::vector<History>& histories() const { return histories_; }
  int history_index(const std::string& name) const;  // -1 when unknown
  const std::vector<int>& histories_at(int m) const;

  /// h and g undivided at m: equal, or sharing a moment strictly above m.
  bool undivided(int m, int h, int g) const;
  /// The full relation over histories_at(m), reflexively closed.
  std::vector<std::vector<bool>> undivided_relation(const std::string& m) const;

  /// All constraint and well-formedness checks; empty result means the
  /// structure is a stit model.
  std::vector<Violation> validate() const;

  // Resolved choice partition at (m, j): cells of history indices. Null when
  // the input gave none or it failed to resolve.
  const std::vector<std::vector<int>>* choice(int m, Agent j) const;
  /// Cell of h in choice(m, j), as history indices.
  const std::vector<int>& cell_of(int m, Agent j, int h) const;

  bool holds_var(const std::string& var, int m, int h) const;

  /// Satisfaction at a moment-history pair. Requires a validated model and
  /// m in h; throws std::invalid_argument otherwise.
  bool satisfies(int m, int h, const Formula& f) const;
  bool satisfies(const std::string& m, const std::string& h,
                 const Formula& f) const;
  /// True at every moment-history pair.
  bool valid_in_model(const Formula& f) const;

 private:
  ModelData data_;
  std::vector<std::vector<bool>> leq_;
  bool antisymmetric_ = true;
  std::vector<History> histories_;
  std::map<std::string, int> moment_idx_;
  std::map<std::string, int> history_idx_;
  std::vector<std::vector<int>> hist_at_;
  // (moment, agent) -> cells of history indices; only well-formed entries
  std::map<std::pair<int, Agent>, std::vector<std::vector<int>>> choice_;
  // var -> sorted (moment, history) pairs
  std::map<std::string, std::vector<std::pair<int, int>>> val_;

  std::vector<char> eval_at_moment(int m, const Formula& f) const;
};

ModelData model_from_json(const nlohmann::json& j);
nlohmann::ordered_json model_to_json(const ModelData& d);
Model load_model(const std::string& path);

nlohmann::ordered_json violations_to_json(const std::vector<Violation>& vs);

}  // namespace stit::semantics
