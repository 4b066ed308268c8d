#include "stit/bisim.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace stit::bisim {

namespace {

struct Side {
  const semantics::Model* model;
  int moment;
  std::vector<int> hists;              // history ids at the moment
  std::map<int, int> pos;              // history id -> position
  const std::string& name(int h) const {
    return model->histories()[static_cast<std::size_t>(h)].name;
  }
};

Side resolve(const Pointed& p) {
  int m = p.model->moment_index(p.moment);
  if (m < 0) throw std::invalid_argument("unknown moment: " + p.moment);
  Side s{p.model, m, p.model->histories_at(m), {}};
  for (std::size_t i = 0; i < s.hists.size(); ++i)
    s.pos[s.hists[i]] = static_cast<int>(i);
  return s;
}

// Relation as a boolean matrix over history positions at the two moments.
struct Matrix {
  std::size_t rows, cols;
  std::vector<bool> bits;
  bool at(std::size_t r, std::size_t c) const { return bits[r * cols + c]; }
  void set(std::size_t r, std::size_t c, bool v) { bits[r * cols + c] = v; }
};

std::optional<BisimViolation> to_matrix(const Side& l, const Side& r,
                                        const Relation& rel, Matrix& out) {
  out = {l.hists.size(), r.hists.size(),
         std::vector<bool>(l.hists.size() * r.hists.size(), false)};
  for (const auto& [a, b] : rel.pairs) {
    int ha = l.model->history_index(a);
    int hb = r.model->history_index(b);
    if (ha < 0 || !l.pos.count(ha))
      return BisimViolation{"membership",
                            "left history " + a + " is not at the moment",
                            {{"pair", {a, b}}}};
    if (hb < 0 || !r.pos.count(hb))
      return BisimViolation{"membership",
                            "right history " + b + " is not at the moment",
                            {{"pair", {a, b}}}};
    out.set(static_cast<std::size_t>(l.pos.at(ha)),
            static_cast<std::size_t>(r.pos.at(hb)), true);
  }
  return std::nullopt;
}

// forth: for (h1, h1') related and h2 in the j-cell of h1, some h3' in the
// j-cell of h1' must be related to h2. back is the mirror image.
std::optional<std::pair<int, int>> clause_failure(const Side& l, const Side& r,
                                                  const Matrix& m, Agent j,
                                                  bool forth) {
  for (std::size_t a = 0; a < l.hists.size(); ++a)
    for (std::size_t b = 0; b < r.hists.size(); ++b) {
      if (!m.at(a, b)) continue;
      if (forth) {
        const auto& cell = l.model->cell_of(l.moment, j, l.hists[a]);
        const auto& cell2 = r.model->cell_of(r.moment, j, r.hists[b]);
        for (int h2 : cell) {
          bool ok = false;
          for (int h3 : cell2)
            if (m.at(static_cast<std::size_t>(l.pos.at(h2)),
                     static_cast<std::size_t>(r.pos.at(h3)))) {
              ok = true;
              break;
            }
          if (!ok) return std::make_pair(l.hists[a], r.hists[b]);
        }
      } else {
        const auto& cell = r.model->cell_of(r.moment, j, r.hists[b]);
        const auto& cell2 = l.model->cell_of(l.moment, j, l.hists[a]);
        for (int h2 : cell) {
          bool ok = false;
          for (int h3 : cell2)
            if (m.at(static_cast<std::size_t>(l.pos.at(h3)),
                     static_cast<std::size_t>(r.pos.at(h2)))) {
              ok = true;
              break;
            }
          if (!ok) return std::make_pair(l.hists[a], r.hists[b]);
        }
      }
    }
  return std::nullopt;
}

}  // namespace

std::optional<BisimViolation> is_bisimulation(
    const Pointed& left, const Pointed& right, const Relation& rel,
    const std::set<std::string>& vars) {
  Side l = resolve(left), r = resolve(right);
  if (l.model->agents() != r.model->agents())
    throw std::invalid_argument("the two models must share their agent set");
  Matrix m{0, 0, {}};
  if (auto v = to_matrix(l, r, rel, m)) return v;

  for (std::size_t a = 0; a < l.hists.size(); ++a) {
    bool hit = false;
    for (std::size_t b = 0; b < r.hists.size() && !hit; ++b)
      if (m.at(a, b)) hit = true;
    if (!hit)
      return BisimViolation{"domain",
                            "left history " + l.name(l.hists[a]) +
                                " is related to nothing",
                            {{"history", l.name(l.hists[a])}}};
  }
  for (std::size_t b = 0; b < r.hists.size(); ++b) {
    bool hit = false;
    for (std::size_t a = 0; a < l.hists.size() && !hit; ++a)
      if (m.at(a, b)) hit = true;
    if (!hit)
      return BisimViolation{"counterdomain",
                            "right history " + r.name(r.hists[b]) +
                                " is related to nothing",
                            {{"history", r.name(r.hists[b])}}};
  }

  for (std::size_t a = 0; a < l.hists.size(); ++a)
    for (std::size_t b = 0; b < r.hists.size(); ++b) {
      if (!m.at(a, b)) continue;
      for (const auto& var : vars) {
        bool lv = l.model->holds_var(var, l.moment, l.hists[a]);
        bool rv = r.model->holds_var(var, r.moment, r.hists[b]);
        if (lv != rv)
          return BisimViolation{
              "atoms",
              "related pair disagrees on " + var,
              {{"pair", {l.name(l.hists[a]), r.name(r.hists[b])}},
               {"var", var}}};
      }
    }

  for (Agent j : l.model->agents()) {
    if (auto fail = clause_failure(l, r, m, j, true))
      return BisimViolation{
          "forth",
          "no matching successor for agent " + std::to_string(j),
          {{"pair", {l.name(fail->first), r.name(fail->second)}},
           {"agent", j}}};
    if (auto fail = clause_failure(l, r, m, j, false))
      return BisimViolation{
          "back",
          "no matching successor for agent " + std::to_string(j),
          {{"pair", {l.name(fail->first), r.name(fail->second)}},
           {"agent", j}}};
  }
  return std::nullopt;
}

Relation max_bisimulation(const Pointed& left, const Pointed& right,
                          const std::set<std::string>& vars) {
  Side l = resolve(left), r = resolve(right);
  if (l.model->agents() != r.model->agents())
    throw std::invalid_argument("the two models must share their agent set");

  Matrix m{l.hists.size(), r.hists.size(),
           std::vector<bool>(l.hists.size() * r.hists.size(), false)};
  for (std::size_t a = 0; a < l.hists.size(); ++a)
    for (std::size_t b = 0; b < r.hists.size(); ++b) {
      bool agree = true;
      for (const auto& var : vars)
        if (l.model->holds_var(var, l.moment, l.hists[a]) !=
            r.model->holds_var(var, r.moment, r.hists[b])) {
          agree = false;
          break;
        }
      m.set(a, b, agree);
    }

  // Refine: drop a pair as soon as one of its forth/back obligations cannot
  // be met inside the current relation.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t a = 0; a < l.hists.size(); ++a)
      for (std::size_t b = 0; b < r.hists.size(); ++b) {
        if (!m.at(a, b)) continue;
        bool ok = true;
        for (Agent j : l.model->agents()) {
          const auto& cl = l.model->cell_of(l.moment, j, l.hists[a]);
          const auto& cr = r.model->cell_of(r.moment, j, r.hists[b]);
          for (int h2 : cl) {
            bool hit = false;
            for (int h3 : cr)
              if (m.at(static_cast<std::size_t>(l.pos.at(h2)),
                       static_cast<std::size_t>(r.pos.at(h3)))) {
                hit = true;
                break;
              }
            if (!hit) { ok = false; break; }
          }
          if (!ok) break;
          for (int h2 : cr) {
            bool hit = false;
            for (int h3 : cl)
              if (m.at(static_cast<std::size_t>(l.pos.at(h3)),
                       static_cast<std::size_t>(r.pos.at(h2)))) {
                hit = true;
                break;
              }
            if (!hit) { ok = false; break; }
          }
          if (!ok) break;
        }
        if (!ok) {
          m.set(a, b, false);
          changed = true;
        }
      }
  }

  Relation rel;
  for (std::size_t a = 0; a < l.hists.size(); ++a)
    for (std::size_t b = 0; b < r.hists.size(); ++b)
      if (m.at(a, b))
        rel.pairs.emplace_back(l.name(l.hists[a]), r.name(r.hists[b]));
  return rel;
}

std::optional<Disagreement> transfer_check(const Pointed& left,
                                           const Pointed& right,
                                           const Relation& rel,
                                           const std::set<std::string>& vars,
                                           const std::string& h,
                                           const std::string& h2,
                                           const Formula& f) {
  if (std::find(rel.pairs.begin(), rel.pairs.end(), std::make_pair(h, h2)) ==
      rel.pairs.end())
    throw std::invalid_argument("the pair is not in the relation");
  if (auto v = is_bisimulation(left, right, rel, vars))
    throw std::invalid_argument("the relation is not a bisimulation: " +
                                v->condition + ", " + v->detail);
  Vocabulary voc = vocabulary(f);
  for (const auto& var : voc.vars)
    if (!vars.count(var))
      throw std::invalid_argument("formula variable outside the checked set: " +
                                  var);
  for (Agent j : voc.agents) {
    const auto& ags = left.model->agents();
    if (std::find(ags.begin(), ags.end(), j) == ags.end())
      throw std::invalid_argument("formula agent outside the models: " +
                                  std::to_string(j));
  }
  bool lv = left.model->satisfies(left.moment, h, f);
  bool rv = right.model->satisfies(right.moment, h2, f);
  if (lv == rv) return std::nullopt;
  return Disagreement{lv, rv};
}

std::vector<Formula> box_fragment(const std::set<std::string>& vars,
                                  std::size_t size_bound) {
  std::vector<std::vector<Formula>> by_size(size_bound + 1);
  if (size_bound >= 1) {
    by_size[1].push_back(Formula::bottom());
    for (const auto& v : vars) by_size[1].push_back(Formula::var(v));
  }
  for (std::size_t s = 2; s <= size_bound; ++s) {
    for (const auto& f : by_size[s - 1]) by_size[s].push_back(Formula::box(f));
    for (std::size_t i = 1; i + 1 < s; ++i)
      for (const auto& a : by_size[i])
        for (const auto& b : by_size[s - 1 - i])
          by_size[s].push_back(Formula::implies(a, b));
  }
  std::vector<Formula> out;
  for (const auto& bucket : by_size)
    out.insert(out.end(), bucket.begin(), bucket.end());
  return out;
}

namespace {

std::optional<AtomsCounterexample> agreement_over(
    const Pointed& left, const Pointed& right, const Relation& rel,
    const std::set<std::string>& vars, const std::vector<Formula>& formulas) {
  Side l = resolve(left), r = resolve(right);
  Matrix m{0, 0, {}};
  if (auto v = to_matrix(l, r, rel, m))
    throw std::invalid_argument(v->detail);
  // preconditions: totality both ways and the atoms condition
  for (std::size_t a = 0; a < l.hists.size(); ++a) {
    bool hit = false;
    for (std::size_t b = 0; b < r.hists.size(); ++b)
      if (m.at(a, b)) hit = true;
    if (!hit) throw std::invalid_argument("relation is not total on the left");
  }
  for (std::size_t b = 0; b < r.hists.size(); ++b) {
    bool hit = false;
    for (std::size_t a = 0; a < l.hists.size(); ++a)
      if (m.at(a, b)) hit = true;
    if (!hit) throw std::invalid_argument("relation is not total on the right");
  }
  for (const auto& [a, b] : rel.pairs)
    for (const auto& var : vars)
      if (left.model->satisfies(left.moment, a, Formula::var(var)) !=
          right.model->satisfies(right.moment, b, Formula::var(var)))
        throw std::invalid_argument("relation violates the atoms condition");

  for (const auto& f : formulas) {
    Vocabulary voc = vocabulary(f);
    if (!voc.agents.empty())
      throw std::invalid_argument("formula outside the action-free fragment: " +
                                  print_formula(f));
    for (const auto& var : voc.vars)
      if (!vars.count(var))
        throw std::invalid_argument(
            "formula variable outside the checked set: " + var);
    for (const auto& [a, b] : rel.pairs) {
      bool lv = left.model->satisfies(left.moment, a, f);
      bool rv = right.model->satisfies(right.moment, b, f);
      if (lv != rv) return AtomsCounterexample{f, a, b, lv, rv};
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<AtomsCounterexample> atoms_only_agreement(
    const Pointed& left, const Pointed& right, const Relation& rel,
    const std::set<std::string>& vars, std::size_t size_bound) {
  return agreement_over(left, right, rel, vars,
                        box_fragment(vars, size_bound));
}

std::optional<AtomsCounterexample> atoms_only_agreement(
    const Pointed& left, const Pointed& right, const Relation& rel,
    const std::set<std::string>& vars, const std::vector<Formula>& formulas) {
  return agreement_over(left, right, rel, vars, formulas);
}

Relation relation_from_json(const nlohmann::json& j) {
  Relation rel;
  for (const auto& pr : j.at("pairs"))
    rel.pairs.emplace_back(pr.at(0).get<std::string>(),
                           pr.at(1).get<std::string>());
  return rel;
}

nlohmann::ordered_json relation_to_json(const Relation& rel) {
  nlohmann::ordered_json j;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& [a, b] : rel.pairs) arr.push_back({a, b});
  j["pairs"] = arr;
  return j;
}

}  // namespace stit::bisim
