#include "stit/paperlab.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace stit::paperlab {

std::string FourTuple::name() const {
  std::string s = "t";
  for (int b : bits) s += static_cast<char>('0' + b);
  s += plus ? 'p' : 'm';
  return s;
}

std::vector<FourTuple> four_tuples() {
  std::vector<FourTuple> out;
  for (int a = 0; a <= 1; ++a)
    for (int b = 0; b <= 1; ++b)
      for (int c = 0; c <= 1; ++c)
        for (int d = 0; d <= 1; ++d)
          for (bool plus : {true, false})
            out.push_back({{a, b, c, d}, plus});
  return out;
}

namespace {

semantics::Model build_counterexample_model(
    const std::string& root,
    const std::function<bool(const FourTuple&)>& var1_true,
    const std::string& var1, const std::function<bool(const FourTuple&)>& var2_true,
    const std::string& var2) {
  semantics::ModelData d;
  auto tuples = four_tuples();
  d.moments.push_back(root);
  for (const auto& t : tuples) d.moments.push_back(t.name());
  for (const auto& t : tuples) d.order.emplace_back(root, t.name());
  d.agents = {1, 2, 3, 4};
  auto hist = [&](const FourTuple& t) { return root + ">" + t.name(); };
  for (Agent j = 1; j <= 4; ++j) {
    std::vector<std::string> zero, one;
    for (const auto& t : tuples)
      (t.pr(static_cast<int>(j)) == 0 ? zero : one).push_back(hist(t));
    d.choice[root][j] = {zero, one};
    for (const auto& t : tuples) d.choice[t.name()][j] = {{hist(t)}};
  }
  for (const auto& t : tuples) {
    if (var1_true(t)) d.valuation.push_back({var1, root, hist(t)});
    if (var2_true(t)) d.valuation.push_back({var2, root, hist(t)});
  }
  return semantics::Model::build(std::move(d));
}

}  // namespace

semantics::Model build_S() {
  return build_counterexample_model(
      "dag", [](const FourTuple& t) { return t.pr(1) == 0; }, "p",
      [](const FourTuple& t) {
        return (t.pr(1) == 0 && t.pr(2) == 0) ||
               (t.pr(3) == 0 && t.pr(4) == 0) || t.plus;
      },
      "q");
}

semantics::Model build_S_prime() {
  return build_counterexample_model(
      "ddag",
      [](const FourTuple& t) {
        return (t.pr(3) == 0 && t.pr(4) == 0) ||
               (t.plus && (t.pr(3) != 1 || t.pr(4) != 0));
      },
      "q", [](const FourTuple& t) { return t.pr(3) == 1; }, "r");
}

semantics::Model reduct(const semantics::Model& model,
                        const std::set<std::string>& vars) {
  std::set<std::string> present;
  for (const auto& t : model.data().valuation) present.insert(t[0]);
  for (const auto& v : vars)
    if (!present.count(v))
      throw std::invalid_argument("variable " + v +
                                  " does not occur in the model");
  semantics::ModelData d = model.data();
  std::vector<std::array<std::string, 3>> kept;
  for (const auto& t : d.valuation)
    if (vars.count(t[0])) kept.push_back(t);
  d.valuation = std::move(kept);
  return semantics::Model::build(std::move(d));
}

bisim::Relation build_B() {
  semantics::Model s = build_S();
  semantics::Model sp = build_S_prime();
  auto tuples = four_tuples();
  bisim::Relation rel;
  for (const auto& left : tuples) {
    std::string lh = "dag>" + left.name();
    bool lq = s.satisfies("dag", lh, Formula::var("q"));
    for (const auto& right : tuples) {
      std::string rh = "ddag>" + right.name();
      bool rq = sp.satisfies("ddag", rh, Formula::var("q"));
      if (lq == rq) rel.pairs.emplace_back(lh, rh);
    }
  }
  return rel;
}

semantics::Model build_M(Agent j, const std::string& p) {
  if (j == 0) throw std::invalid_argument("agent ids start at 1");
  semantics::ModelData d;
  d.moments = {"m", "m0", "m1"};
  d.order = {{"m", "m0"}, {"m", "m1"}};
  d.agents = {j};
  d.choice["m"][j] = {{"m>m0"}, {"m>m1"}};
  d.choice["m0"][j] = {{"m>m0"}};
  d.choice["m1"][j] = {{"m>m1"}};
  d.valuation.push_back({p, "m", "m>m0"});
  return semantics::Model::build(std::move(d));
}

bool Certificate::certified() const {
  return std::all_of(facts.begin(), facts.end(),
                     [](const Fact& f) { return f.pass; });
}

std::string Certificate::verdict() const {
  for (std::size_t i = 0; i < facts.size(); ++i)
    if (!facts[i].pass)
      return "failed(step " + std::to_string(i + 1) + ": " + facts[i].kind +
             ")";
  return "certified";
}

nlohmann::ordered_json certificate_to_json(const Certificate& c) {
  nlohmann::ordered_json j;
  j["claim"] = c.claim;
  j["bounds"] = c.bounds;
  auto facts = nlohmann::ordered_json::array();
  for (const auto& f : c.facts) {
    nlohmann::ordered_json o;
    o["kind"] = f.kind;
    o["statement"] = f.statement;
    o["verdict"] = f.pass ? "pass" : "fail";
    if (!f.witness.is_null() && !f.witness.empty()) o["witness"] = f.witness;
    facts.push_back(o);
  }
  j["facts"] = facts;
  j["verdict"] = c.verdict();
  return j;
}

namespace {

Fact validation_fact(const std::string& label, const semantics::Model& m) {
  auto violations = m.validate();
  return {"model-validation", label + " satisfies all frame constraints",
          violations.empty(), semantics::violations_to_json(violations)};
}

Fact satisfaction_fact(const std::string& statement, bool pass,
                       nlohmann::ordered_json witness = {}) {
  return {"satisfaction", statement, pass, std::move(witness)};
}

Fact proof_fact(const std::string& statement, const proof::ProofScript& script,
                const Formula& expected_conclusion) {
  auto violation = proof::check_proof(script);
  bool pass = !violation && script.conclusion.desugared() ==
                                expected_conclusion.desugared();
  nlohmann::ordered_json witness;
  if (violation) {
    witness["line"] = violation->line;
    witness["reason"] = violation->reason;
  } else if (!pass) {
    witness["reason"] = "conclusion differs from the expected implication";
    witness["conclusion"] = print_formula(script.conclusion);
  }
  return {"proof-check", statement, pass, witness};
}

}  // namespace

NegativeInputs negative_inputs() {
  Formula a = parse_formula("<>([1]p & [2](p -> q))");
  Formula b = parse_formula("~<>([3]r & [4](r -> ~q))");
  return {build_S().data(), build_S_prime().data(), build_B(),
          proof::derive_counterexample(1, 2, 3, 4, "p", "q", "r"), a, b};
}

Certificate run_negative(const NegativeInputs& in) {
  Certificate cert{
      "the derivable implication A -> B with A = <>([1]p & [2](p -> q)) and "
      "B = ~<>([3]r & [4](r -> ~q)) has no interpolant over agents "
      "{1,2,3,4} and the shared variable q: any such formula would transfer "
      "from S to S' across the bisimulation between the q-reducts, yet A "
      "holds in S and B fails in S' at the linked histories",
      nlohmann::ordered_json::object(),
      {}};
  cert.bounds["models"] = {{"histories", 32}, {"agents", 4}};

  semantics::Model s = semantics::Model::build(in.s);
  semantics::Model sp = semantics::Model::build(in.s_prime);
  cert.facts.push_back(validation_fact("S", s));
  cert.facts.push_back(validation_fact("S'", sp));
  if (!cert.facts[0].pass || !cert.facts[1].pass) return cert;

  Formula right_pattern = Formula::neg(in.consequent);
  {
    bool all = true;
    nlohmann::ordered_json witness;
    for (const auto& h : s.histories())
      if (!s.satisfies("dag", h.name, in.antecedent)) {
        all = false;
        witness["history"] = h.name;
        break;
      }
    cert.facts.push_back(satisfaction_fact(
        "A holds at (dag, h) for every history h of S", all, witness));
  }
  {
    bool all = true;
    nlohmann::ordered_json witness;
    for (const auto& h : sp.histories())
      if (!sp.satisfies("ddag", h.name, right_pattern)) {
        all = false;
        witness["history"] = h.name;
        break;
      }
    cert.facts.push_back(satisfaction_fact(
        "<>([3]r & [4](r -> ~q)) holds at (ddag, g) for every history g of "
        "S'",
        all, witness));
  }
  cert.facts.push_back(satisfaction_fact(
      "B is false at (ddag, ddag>t0000p)",
      !sp.satisfies("ddag", "ddag>t0000p", in.consequent)));

  cert.facts.push_back(proof_fact(
      "the derivation of A -> B is accepted by the proof checker", in.script,
      Formula::implies(in.antecedent, in.consequent)));

  {
    semantics::Model sq = reduct(s, {"q"});
    semantics::Model spq = reduct(sp, {"q"});
    auto violation =
        bisim::is_bisimulation({&sq, "dag"}, {&spq, "ddag"}, in.relation, {"q"});
    nlohmann::ordered_json witness;
    if (violation) {
      witness["condition"] = violation->condition;
      witness["detail"] = violation->detail;
      witness["witness"] = violation->witness;
    }
    cert.facts.push_back({"bisimulation",
                          "the q-agreement relation is a total bisimulation "
                          "between the q-reducts of S and S'",
                          !violation, witness});
  }
  return cert;
}

Certificate certify_negative() { return run_negative(negative_inputs()); }

StrongInputs strong_inputs() {
  Formula a = parse_formula("<>[1]p");
  Formula b = parse_formula("~<>[2]~p");
  bisim::Relation diag;
  diag.pairs = {{"m>m0", "m>m0"}, {"m>m1", "m>m1"}};
  return {build_M(1, "p").data(), build_M(2, "p").data(), diag,
          proof::derive_s_counterexample(1, 2, "p"), a, b, 7};
}

Certificate run_strong(const StrongInputs& in) {
  Certificate cert{
      "the derivable implication <>[1]p -> ~<>[2]~p has no action-free "
      "interpolant over {p}: the two single-agent models share their "
      "history structure and valuation, so every action-free formula "
      "transfers across the diagonal, yet the antecedent holds in the first "
      "model and the consequent fails in the second at the same history",
      nlohmann::ordered_json::object(),
      {}};
  cert.bounds["fragment"] = {{"vars", {"p"}},
                             {"max_nodes", in.fragment_size_bound}};

  semantics::Model m1 = semantics::Model::build(in.m1);
  semantics::Model m2 = semantics::Model::build(in.m2);
  cert.facts.push_back(validation_fact("M1", m1));
  cert.facts.push_back(validation_fact("M2", m2));
  if (!cert.facts[0].pass || !cert.facts[1].pass) return cert;

  cert.facts.push_back(satisfaction_fact(
      "<>[1]p holds at (m, m>m0) in M1",
      m1.satisfies("m", "m>m0", in.antecedent)));
  cert.facts.push_back(satisfaction_fact(
      "<>[2]~p holds at (m, m>m0) in M2, so the consequent fails there",
      m2.satisfies("m", "m>m0", Formula::neg(in.consequent))));

  cert.facts.push_back(proof_fact(
      "the derivation of the implication is accepted by the proof checker",
      in.script, Formula::implies(in.antecedent, in.consequent)));

  {
    nlohmann::ordered_json witness;
    bool pass = true;
    try {
      auto cx = bisim::atoms_only_agreement({&m1, "m"}, {&m2, "m"},
                                            in.diagonal, {"p"},
                                            in.fragment_size_bound);
      if (cx) {
        pass = false;
        witness["formula"] = print_formula(cx->formula);
        witness["pair"] = {cx->left_history, cx->right_history};
      }
    } catch (const std::invalid_argument& e) {
      pass = false;
      witness["error"] = e.what();
    }
    cert.facts.push_back({"atoms-transfer",
                          "every action-free formula over {p} up to the "
                          "documented size agrees across the diagonal",
                          pass, witness});
  }
  return cert;
}

Certificate certify_strong_negative() { return run_strong(strong_inputs()); }

std::vector<Formula> enumerate_candidates(const std::set<std::string>& vars,
                                          const std::vector<Agent>& agents,
                                          std::size_t size_bound) {
  std::vector<Agent> ags = agents;
  std::sort(ags.begin(), ags.end());
  std::vector<std::vector<Formula>> by_size(size_bound + 1);
  if (size_bound >= 1) {
    by_size[1].push_back(Formula::bottom());
    for (const auto& v : vars) by_size[1].push_back(Formula::var(v));
  }
  for (std::size_t s = 2; s <= size_bound; ++s) {
    for (const auto& f : by_size[s - 1]) by_size[s].push_back(Formula::box(f));
    for (Agent j : ags)
      for (const auto& f : by_size[s - 1])
        by_size[s].push_back(Formula::stit(j, f));
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

std::vector<Agent> agent_union(const Vocabulary& a, const Vocabulary& b) {
  std::set<Agent> u = a.agents;
  u.insert(b.agents.begin(), b.agents.end());
  return {u.begin(), u.end()};
}

void require_agent_disjoint(const Vocabulary& a, const Vocabulary& b,
                            const std::string& what) {
  for (Agent j : a.agents)
    if (b.agents.count(j))
      throw std::invalid_argument(what + " must have disjoint agent sets");
}

}  // namespace

InterpolantResult interpolant_search(const Formula& a, const Formula& b,
                                     std::size_t size_bound, int frame_bound,
                                     InterpolantMode mode,
                                     const frames::SearchOptions& opts) {
  Vocabulary va = vocabulary(a), vb = vocabulary(b);
  require_agent_disjoint(va, vb, "antecedent and consequent");
  if (!frames::validity_up_to(Formula::implies(a, b), frame_bound, opts)
           .valid_up_to())
    throw std::invalid_argument(
        "A -> B has a countermodel within the frame bound");

  std::set<std::string> shared;
  for (const auto& v : va.vars)
    if (vb.vars.count(v)) shared.insert(v);
  std::vector<Agent> pool =
      mode == InterpolantMode::rcip ? agent_union(va, vb) : std::vector<Agent>{};

  for (const auto& c : enumerate_candidates(shared, pool, size_bound)) {
    if (!frames::validity_up_to(Formula::implies(a, c), frame_bound, opts)
             .valid_up_to())
      continue;
    if (frames::validity_up_to(Formula::implies(c, b), frame_bound, opts)
            .valid_up_to())
      return {c, size_bound, frame_bound};
  }
  return {std::nullopt, size_bound, frame_bound};
}

SeparationResult is_separable_bounded(const std::vector<Formula>& gamma,
                                      const std::vector<Formula>& delta,
                                      std::size_t size_bound, int frame_bound,
                                      const frames::SearchOptions& opts) {
  Formula cg = conj_all(gamma), cd = conj_all(delta);
  Vocabulary vg = vocabulary(cg), vd = vocabulary(cd);
  require_agent_disjoint(vg, vd, "the two formula sets");

  std::set<std::string> shared;
  for (const auto& v : vg.vars)
    if (vd.vars.count(v)) shared.insert(v);

  for (const auto& c :
       enumerate_candidates(shared, agent_union(vg, vd), size_bound)) {
    if (!frames::validity_up_to(Formula::implies(cg, c), frame_bound, opts)
             .valid_up_to())
      continue;
    if (frames::validity_up_to(Formula::implies(cd, Formula::neg(c)),
                               frame_bound, opts)
            .valid_up_to())
      return {c, size_bound, frame_bound};
  }
  return {std::nullopt, size_bound, frame_bound};
}

}  // namespace stit::paperlab
