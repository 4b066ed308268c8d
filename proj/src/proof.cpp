#include "stit/proof.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace stit::proof {

namespace {

constexpr int kTautAtomLimit = 18;

// --- shape helpers over desugared formulas ---------------------------------

bool is_bottom(const Formula& f) { return f.op() == Op::bottom; }

// X -> false
std::optional<Formula> as_neg(const Formula& f) {
  if (f.op() == Op::implies && is_bottom(f.rhs())) return f.lhs();
  return std::nullopt;
}

// ~m~X ... here only the box dual ~[]~X and stit dual are needed in the
// shape (m X) -> false wrapped twice: (mY -> false) -> false with Y = X->false
std::optional<Formula> as_diamond_of_stit(const Formula& f, Agent& j) {
  auto outer = as_neg(f);
  if (!outer || outer->op() != Op::box) return std::nullopt;
  auto inner = as_neg(outer->body());
  if (!inner || inner->op() != Op::stit) return std::nullopt;
  j = inner->agent();
  return inner->body();
}

// Desugared A & B has the shape ((A -> (B -> false)) -> false); this shape is
// disjoint from negated boxes/stits, so maximal flattening is unambiguous.
bool split_and(const Formula& f, Formula& a, Formula& b) {
  auto outer = as_neg(f);
  if (!outer || outer->op() != Op::implies) return false;
  auto inner = as_neg(outer->rhs());
  if (!inner) return false;
  a = outer->lhs();
  b = *inner;
  return true;
}

void flatten_and(const Formula& f, std::vector<Formula>& out) {
  Formula a = f, b = f;
  if (split_and(f, a, b)) {
    flatten_and(a, out);
    flatten_and(b, out);
  } else {
    out.push_back(f);
  }
}

bool mod_applies(const Modality& m, const Formula& f) {
  if (m.is_box) return f.op() == Op::box;
  return f.op() == Op::stit && f.agent() == m.agent;
}

}  // namespace

std::string SchemeId::text() const {
  switch (kind) {
    case Kind::taut: return "taut";
    case Kind::k: return "K(" + modality.text() + ")";
    case Kind::t: return "T(" + modality.text() + ")";
    case Kind::five: return "5(" + modality.text() + ")";
    case Kind::box_to_stit: return "A2([" + std::to_string(agent) + "])";
    case Kind::independence: return "A3";
  }
  return "?";
}

// --- tautology oracle -------------------------------------------------------

namespace {

// Boolean skeleton of a desugared formula: boxes, stits and variables are
// atoms, only -> and false are interpreted.
struct Skeleton {
  struct N {
    int atom = -1;       // >= 0: atom id
    bool bottom = false;
    int a = -1, b = -1;  // implication
  };
  std::vector<N> nodes;
  int n_atoms = 0;
};

int skeleton_rec(const Formula& f, Skeleton& sk,
                 std::map<Formula, int>& atom_ids) {
  Skeleton::N n;
  switch (f.op()) {
    case Op::bottom:
      n.bottom = true;
      break;
    case Op::implies:
      n.a = skeleton_rec(f.lhs(), sk, atom_ids);
      n.b = skeleton_rec(f.rhs(), sk, atom_ids);
      break;
    default: {  // var / box / stit
      auto [it, fresh] = atom_ids.emplace(f, sk.n_atoms);
      if (fresh) ++sk.n_atoms;
      n.atom = it->second;
      break;
    }
  }
  sk.nodes.push_back(n);
  return static_cast<int>(sk.nodes.size()) - 1;
}

bool eval_skeleton(const Skeleton& sk, int at, std::uint32_t assignment) {
  const auto& n = sk.nodes[static_cast<std::size_t>(at)];
  if (n.bottom) return false;
  if (n.atom >= 0) return (assignment >> n.atom) & 1;
  return !eval_skeleton(sk, n.a, assignment) ||
         eval_skeleton(sk, n.b, assignment);
}

}  // namespace

bool tautology(const Formula& f) {
  Skeleton sk;
  std::map<Formula, int> atom_ids;
  int root = skeleton_rec(f.desugared(), sk, atom_ids);
  if (sk.n_atoms > kTautAtomLimit)
    throw std::invalid_argument("tautology check over " +
                                std::to_string(sk.n_atoms) +
                                " atoms exceeds the limit");
  const std::uint64_t total = std::uint64_t{1} << sk.n_atoms;
  for (std::uint64_t a = 0; a < total; ++a)
    if (!eval_skeleton(sk, root, static_cast<std::uint32_t>(a))) return false;
  return true;
}

// --- axiom matching ---------------------------------------------------------

std::optional<Instantiation> match_axiom(const Formula& raw, const SchemeId& s) {
  Formula f = raw.desugared();
  Instantiation inst;
  switch (s.kind) {
    case SchemeId::Kind::taut:
      if (tautology(f)) return inst;
      return std::nullopt;
    case SchemeId::Kind::k: {
      // m(A -> B) -> (mA -> mB)
      if (f.op() != Op::implies) return std::nullopt;
      Formula l = f.lhs(), r = f.rhs();
      if (!mod_applies(s.modality, l) || l.body().op() != Op::implies)
        return std::nullopt;
      if (r.op() != Op::implies) return std::nullopt;
      Formula ra = r.lhs(), rb = r.rhs();
      if (!mod_applies(s.modality, ra) || !mod_applies(s.modality, rb))
        return std::nullopt;
      if (l.body().lhs() != ra.body() || l.body().rhs() != rb.body())
        return std::nullopt;
      inst.metavars.emplace("A", ra.body());
      inst.metavars.emplace("B", rb.body());
      return inst;
    }
    case SchemeId::Kind::t: {
      if (f.op() != Op::implies) return std::nullopt;
      Formula l = f.lhs();
      if (!mod_applies(s.modality, l) || l.body() != f.rhs())
        return std::nullopt;
      inst.metavars.emplace("A", f.rhs());
      return inst;
    }
    case SchemeId::Kind::five: {
      // ~mA -> m~mA
      if (f.op() != Op::implies) return std::nullopt;
      auto l = as_neg(f.lhs());
      if (!l || !mod_applies(s.modality, *l)) return std::nullopt;
      Formula r = f.rhs();
      if (!mod_applies(s.modality, r) || r.body() != f.lhs())
        return std::nullopt;
      inst.metavars.emplace("A", l->body());
      return inst;
    }
    case SchemeId::Kind::box_to_stit: {
      if (f.op() != Op::implies) return std::nullopt;
      Formula l = f.lhs(), r = f.rhs();
      if (l.op() != Op::box || r.op() != Op::stit || r.agent() != s.agent)
        return std::nullopt;
      if (l.body() != r.body()) return std::nullopt;
      inst.metavars.emplace("A", l.body());
      return inst;
    }
    case SchemeId::Kind::independence: {
      // (<>[j1]A1 & ... & <>[jn]An) -> <>([j1]A1 & ... & [jn]An)
      if (f.op() != Op::implies) return std::nullopt;
      auto cons = as_neg(f.rhs());
      if (!cons || cons->op() != Op::box) return std::nullopt;
      auto body = as_neg(cons->body());
      if (!body) return std::nullopt;
      std::vector<Formula> dias, stits;
      flatten_and(f.lhs(), dias);
      flatten_and(*body, stits);
      if (dias.size() != stits.size() || dias.empty()) return std::nullopt;
      for (std::size_t i = 0; i < dias.size(); ++i) {
        Agent j = 0;
        auto inner = as_diamond_of_stit(dias[i], j);
        if (!inner) return std::nullopt;
        if (stits[i].op() != Op::stit || stits[i].agent() != j ||
            stits[i].body() != *inner)
          return std::nullopt;
        inst.independents.emplace_back(j, *inner);
      }
      for (std::size_t i = 0; i < inst.independents.size(); ++i)
        for (std::size_t k = i + 1; k < inst.independents.size(); ++k)
          if (inst.independents[i].first == inst.independents[k].first)
            return std::nullopt;  // agents must be pairwise different
      return inst;
    }
  }
  return std::nullopt;
}

// --- proof checking ---------------------------------------------------------

std::optional<ProofViolation> check_proof(const ProofScript& script) {
  if (script.lines.empty()) return ProofViolation{0, "empty script"};
  std::vector<Formula> cores;
  cores.reserve(script.lines.size());
  for (const auto& line : script.lines) cores.push_back(line.formula.desugared());

  for (std::size_t i = 0; i < script.lines.size(); ++i) {
    const auto& line = script.lines[i];
    const int idx = static_cast<int>(i) + 1;
    if (line.index != idx)
      return ProofViolation{idx, "lines must be numbered consecutively from 1"};
    switch (line.just.kind) {
      case Justification::Kind::axiom: {
        std::optional<Instantiation> m;
        try {
          m = match_axiom(line.formula, line.just.scheme);
        } catch (const std::invalid_argument& e) {
          return ProofViolation{idx, e.what()};
        }
        if (!m)
          return ProofViolation{
              idx, "not an instance of " + line.just.scheme.text()};
        break;
      }
      case Justification::Kind::mp: {
        int a = line.just.premise, b = line.just.implication;
        if (a < 1 || a >= idx || b < 1 || b >= idx)
          return ProofViolation{idx, "mp references must point backward"};
        const Formula& imp = cores[static_cast<std::size_t>(b - 1)];
        if (imp.op() != Op::implies ||
            imp.lhs() != cores[static_cast<std::size_t>(a - 1)] ||
            imp.rhs() != cores[i])
          return ProofViolation{
              idx, "line " + std::to_string(b) +
                       " is not (line " + std::to_string(a) +
                       ") -> (this line)"};
        break;
      }
      case Justification::Kind::nec: {
        int a = line.just.premise;
        if (a < 1 || a >= idx)
          return ProofViolation{idx, "nec reference must point backward"};
        if (cores[i].op() != Op::box ||
            cores[i].body() != cores[static_cast<std::size_t>(a - 1)])
          return ProofViolation{
              idx, "this line is not [](line " + std::to_string(a) + ")"};
        break;
      }
    }
  }
  if (script.conclusion.desugared() != cores.back())
    return ProofViolation{static_cast<int>(script.lines.size()),
                          "conclusion differs from the last line"};
  return std::nullopt;
}

// --- script text format -----------------------------------------------------

namespace {

std::string just_text(const Justification& j) {
  switch (j.kind) {
    case Justification::Kind::axiom:
      if (j.scheme.kind == SchemeId::Kind::taut) return "taut";
      return "ax:" + j.scheme.text();
    case Justification::Kind::mp:
      return "mp " + std::to_string(j.premise) + " " +
             std::to_string(j.implication);
    case Justification::Kind::nec:
      return "nec " + std::to_string(j.premise);
  }
  return "?";
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

Modality parse_modality(const std::string& inner, int line_no) {
  if (inner == "[]") return Modality::box();
  if (inner.size() >= 3 && inner.front() == '[' && inner.back() == ']') {
    unsigned long v = std::stoul(inner.substr(1, inner.size() - 2));
    if (v >= 1) return Modality::stit(static_cast<Agent>(v));
  }
  throw std::runtime_error("script line " + std::to_string(line_no) +
                           ": bad modality " + inner);
}

Justification parse_just(const std::string& text, int line_no) {
  if (text == "taut") return Justification::axiom(SchemeId::taut());
  if (text.rfind("mp ", 0) == 0) {
    std::istringstream ss(text.substr(3));
    int a = 0, b = 0;
    if (!(ss >> a >> b))
      throw std::runtime_error("script line " + std::to_string(line_no) +
                               ": bad mp justification");
    return Justification::mp(a, b);
  }
  if (text.rfind("nec ", 0) == 0) {
    int a = std::stoi(text.substr(4));
    return Justification::nec(a);
  }
  if (text.rfind("ax:", 0) == 0) {
    std::string ax = text.substr(3);
    if (ax == "A3") return Justification::axiom(SchemeId::independence());
    auto open = ax.find('(');
    if (open != std::string::npos && ax.back() == ')') {
      std::string head = ax.substr(0, open);
      std::string inner = ax.substr(open + 1, ax.size() - open - 2);
      if (head == "K")
        return Justification::axiom(SchemeId::k(parse_modality(inner, line_no)));
      if (head == "T")
        return Justification::axiom(SchemeId::t(parse_modality(inner, line_no)));
      if (head == "5")
        return Justification::axiom(
            SchemeId::five(parse_modality(inner, line_no)));
      if (head == "A2") {
        Modality m = parse_modality(inner, line_no);
        if (!m.is_box) return Justification::axiom(SchemeId::box_to_stit(m.agent));
      }
    }
  }
  throw std::runtime_error("script line " + std::to_string(line_no) +
                           ": unknown justification '" + text + "'");
}

}  // namespace

ProofScript parse_script(std::string_view text) {
  ProofScript script{{}, Formula::bottom()};
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto dot = line.find('.');
    auto semi = line.find(';');
    if (dot == std::string::npos || semi == std::string::npos || semi < dot)
      throw std::runtime_error("script line " + std::to_string(line_no) +
                               ": expected '<idx>. <formula> ; <just>'");
    int idx = std::stoi(line.substr(0, dot));
    Formula f = parse_formula(line.substr(dot + 1, semi - dot - 1));
    Justification j = parse_just(trim(line.substr(semi + 1)), line_no);
    script.lines.push_back({idx, f, j});
  }
  if (script.lines.empty())
    throw std::runtime_error("script has no proof lines");
  script.conclusion = script.lines.back().formula;
  return script;
}

std::string format_script(const ProofScript& script) {
  std::ostringstream os;
  for (const auto& line : script.lines)
    os << line.index << ". " << print_formula(line.formula) << " ; "
       << just_text(line.just) << "\n";
  return os.str();
}

// --- derivation builders ----------------------------------------------------

namespace {

// Grows a script line by line. Every added line is justified on the spot, so
// a finished script passes check_proof by construction; a failure here is a
// builder bug and raises logic_error.
class Builder {
 public:
  int add_taut(const Formula& f) {
    if (!tautology(f))
      throw std::logic_error("builder emitted a non-tautology: " +
                             print_formula(f));
    return push(f, Justification::axiom(SchemeId::taut()));
  }

  int add_axiom(const Formula& f, const SchemeId& s) {
    if (!match_axiom(f, s))
      throw std::logic_error("builder emitted a bad " + s.text() +
                             " instance: " + print_formula(f));
    return push(f, Justification::axiom(s));
  }

  int add_mp(int premise, int implication) {
    const Formula& imp = formula(implication);
    if (imp.op() != Op::implies ||
        imp.lhs().desugared() != formula(premise).desugared())
      throw std::logic_error("builder mp mismatch");
    return push(imp.rhs(), Justification::mp(premise, implication));
  }

  int add_nec(int premise) {
    return push(Formula::box(formula(premise)), Justification::nec(premise));
  }

  /// Appends a checked script, shifting its internal references.
  int absorb(const ProofScript& s) {
    const int offset = static_cast<int>(lines_.size());
    for (const auto& line : s.lines) {
      Justification j = line.just;
      if (j.kind == Justification::Kind::mp) {
        j.premise += offset;
        j.implication += offset;
      } else if (j.kind == Justification::Kind::nec) {
        j.premise += offset;
      }
      push(line.formula, j);
    }
    return static_cast<int>(lines_.size());
  }

  /// goal as a tautological consequence of earlier lines: one taut line for
  /// deps[0] -> (deps[1] -> ... -> goal) followed by detachments.
  int taut_mp(const Formula& goal, const std::vector<int>& deps) {
    Formula imp = goal;
    for (auto it = deps.rbegin(); it != deps.rend(); ++it)
      imp = Formula::implies(formula(*it), imp);
    int cur = add_taut(imp);
    for (int d : deps) cur = add_mp(d, cur);
    return cur;
  }

  /// From |- X infer |- mX. For a stit modality this is Nec plus A2.
  int mu_nec(const Modality& m, int premise) {
    int boxed = add_nec(premise);
    if (m.is_box) return boxed;
    Formula x = formula(premise);
    int a2 = add_axiom(
        Formula::implies(Formula::box(x), Formula::stit(m.agent, x)),
        SchemeId::box_to_stit(m.agent));
    return add_mp(boxed, a2);
  }

  /// From |- X -> Y infer |- mX -> mY.
  int mu_mono(const Modality& m, int premise) {
    Formula imp = formula(premise);
    if (imp.op() != Op::implies) throw std::logic_error("mu_mono needs X -> Y");
    Formula x = imp.lhs(), y = imp.rhs();
    int necd = mu_nec(m, premise);
    int k = add_axiom(
        Formula::implies(m.apply(imp),
                         Formula::implies(m.apply(x), m.apply(y))),
        SchemeId::k(m));
    return add_mp(necd, k);
  }

  /// |- mX -> mmX, from T and 5.
  int four(const Modality& m, const Formula& x) {
    Formula mx = m.apply(x);
    Formula nmx = Formula::neg(mx);
    int five1 = add_axiom(Formula::implies(nmx, m.apply(nmx)),
                          SchemeId::five(m));
    // contrapose: ~m~mX -> mX
    Formula nmnmx = Formula::neg(m.apply(nmx));
    int iii = taut_mp(Formula::implies(nmnmx, mx), {five1});
    int iv = mu_mono(m, iii);  // m~m~mX -> mmX
    int t1 = add_axiom(Formula::implies(m.apply(nmx), nmx), SchemeId::t(m));
    int vi = taut_mp(Formula::implies(mx, nmnmx), {t1});
    int five2 = add_axiom(Formula::implies(nmnmx, m.apply(nmnmx)),
                          SchemeId::five(m));
    return taut_mp(Formula::implies(mx, m.apply(mx)), {vi, five2, iv});
  }

  /// |- (mX1 & ... & mXk) -> m(X1 & ... & Xk), k >= 2.
  int conj_in(const Modality& m, const std::vector<Formula>& xs) {
    auto pair_step = [&](const Formula& x, const Formula& y) {
      Formula xy = Formula::conj(x, y);
      int t = add_taut(Formula::implies(x, Formula::implies(y, xy)));
      int mo = mu_mono(m, t);  // mX -> m(Y -> X&Y)
      int k = add_axiom(
          Formula::implies(m.apply(Formula::implies(y, xy)),
                           Formula::implies(m.apply(y), m.apply(xy))),
          SchemeId::k(m));
      return taut_mp(Formula::implies(Formula::conj(m.apply(x), m.apply(y)),
                                      m.apply(xy)),
                     {mo, k});
    };
    if (xs.size() < 2) throw std::logic_error("conj_in needs two conjuncts");
    Formula acc = Formula::conj(xs[0], xs[1]);
    int line = pair_step(xs[0], xs[1]);
    std::vector<Formula> mapped = {m.apply(xs[0]), m.apply(xs[1])};
    for (std::size_t i = 2; i < xs.size(); ++i) {
      int step = pair_step(acc, xs[i]);
      acc = Formula::conj(acc, xs[i]);
      mapped.push_back(m.apply(xs[i]));
      line = taut_mp(Formula::implies(conj_all(mapped), m.apply(acc)),
                     {line, step});
    }
    return line;
  }

  /// From |- X -> Y infer |- <>X -> <>Y.
  int dia_mono(int premise) {
    Formula imp = formula(premise);
    if (imp.op() != Op::implies) throw std::logic_error("dia_mono needs X -> Y");
    Formula x = imp.lhs(), y = imp.rhs();
    int contra = taut_mp(
        Formula::implies(Formula::neg(y), Formula::neg(x)), {premise});
    int mono = mu_mono(Modality::box(), contra);  // []~Y -> []~X
    return taut_mp(
        Formula::implies(Formula::diamond(x), Formula::diamond(y)), {mono});
  }

  /// |- ([]A & <>Z) -> <>([]A & Z).
  int box_dia_exchange(const Formula& a, const Formula& z) {
    Formula boxa = Formula::box(a);
    Formula az = Formula::conj(boxa, z);
    int t1 = add_taut(Formula::implies(
        Formula::neg(az), Formula::implies(boxa, Formula::neg(z))));
    int m1 = mu_mono(Modality::box(), t1);
    int k1 = add_axiom(
        Formula::implies(
            Formula::box(Formula::implies(boxa, Formula::neg(z))),
            Formula::implies(Formula::box(boxa), Formula::box(Formula::neg(z)))),
        SchemeId::k(Modality::box()));
    int f4 = four(Modality::box(), a);
    return taut_mp(Formula::implies(Formula::conj(boxa, Formula::diamond(z)),
                                    Formula::diamond(az)),
                   {m1, k1, f4});
  }

  const Formula& formula(int idx) const {
    return lines_.at(static_cast<std::size_t>(idx - 1)).formula;
  }

  ProofScript finish() {
    ProofScript s{lines_, lines_.back().formula};
    return s;
  }

 private:
  int push(Formula f, Justification j) {
    lines_.push_back({static_cast<int>(lines_.size()) + 1, std::move(f), j});
    return static_cast<int>(lines_.size());
  }
  std::vector<ProofLine> lines_;
};

void require_distinct(const std::vector<Agent>& agents) {
  for (std::size_t i = 0; i < agents.size(); ++i) {
    if (agents[i] == 0) throw std::invalid_argument("agent ids start at 1");
    for (std::size_t k = i + 1; k < agents.size(); ++k)
      if (agents[i] == agents[k])
        throw std::invalid_argument("agents must be pairwise different");
  }
}

void require_premise(const ProofScript& premise, const Formula& expected) {
  if (auto v = check_proof(premise))
    throw std::invalid_argument("premise script fails check at line " +
                                std::to_string(v->line) + ": " + v->reason);
  if (premise.conclusion.desugared() != expected.desugared())
    throw std::invalid_argument("premise must conclude " +
                                print_formula(expected));
}

}  // namespace

ProofScript derive_box_to_stit_box(const Formula& a, Agent j) {
  require_distinct({j});
  Builder b;
  int f4 = b.four(Modality::box(), a);  // []A -> [][]A
  Formula boxa = Formula::box(a);
  int a2 = b.add_axiom(
      Formula::implies(Formula::box(boxa), Formula::stit(j, boxa)),
      SchemeId::box_to_stit(j));
  b.taut_mp(Formula::implies(boxa, Formula::stit(j, boxa)), {f4, a2});
  return b.finish();
}

ProofScript derive_technical2(const Formula& a, const std::vector<Formula>& bs,
                              const Formula& c, const std::vector<Agent>& is,
                              Agent j, const ProofScript& premise) {
  if (bs.empty() || bs.size() != is.size())
    throw std::invalid_argument("need one agent per conjunct");
  std::vector<Agent> all = is;
  all.push_back(j);
  require_distinct(all);

  std::vector<Formula> stits;
  for (std::size_t i = 0; i < bs.size(); ++i)
    stits.push_back(Formula::stit(is[i], bs[i]));
  std::vector<Formula> ant = {Formula::box(a)};
  ant.insert(ant.end(), stits.begin(), stits.end());
  Formula expected = Formula::implies(conj_all(ant), Formula::neg(c));
  require_premise(premise, expected);

  Builder b;
  int prem = b.absorb(premise);
  int e6 = b.add_nec(prem);

  std::vector<Formula> y2_parts = stits;
  y2_parts.push_back(c);
  Formula y2 = conj_all(y2_parts);
  Formula x7 = Formula::conj(Formula::box(a), y2);
  int t1 = b.add_taut(Formula::implies(expected, Formula::neg(x7)));
  int m1 = b.mu_mono(Modality::box(), t1);
  int d1 = b.add_mp(e6, m1);  // []~([]A & B1..Bn & C)
  int e7 = b.taut_mp(Formula::neg(Formula::diamond(x7)), {d1});

  std::vector<Formula> y1_parts = stits;
  y1_parts.push_back(Formula::stit(j, c));
  Formula y1 = conj_all(y1_parts);
  std::vector<Formula> dias;
  for (const auto& s : stits) dias.push_back(Formula::diamond(s));
  std::vector<Formula> dias_j = dias;
  dias_j.push_back(Formula::diamond(Formula::stit(j, c)));
  int a3 = b.add_axiom(
      Formula::implies(conj_all(dias_j), Formula::diamond(y1)),
      SchemeId::independence());

  Formula big_ant = Formula::conj(Formula::box(a), conj_all(dias_j));
  int e2 = b.taut_mp(
      Formula::implies(big_ant,
                       Formula::conj(Formula::box(a), Formula::diamond(y1))),
      {a3});
  int tj = b.add_axiom(Formula::implies(Formula::stit(j, c), c),
                       SchemeId::t(Modality::stit(j)));
  int y12 = b.taut_mp(Formula::implies(y1, y2), {tj});
  int d3 = b.dia_mono(y12);
  int bde = b.box_dia_exchange(a, y2);
  int e5 = b.taut_mp(Formula::implies(big_ant, Formula::diamond(x7)),
                     {e2, d3, bde});
  int e8 = b.taut_mp(Formula::neg(big_ant), {e5, e7});
  b.taut_mp(
      Formula::implies(Formula::conj(Formula::box(a), conj_all(dias)),
                       Formula::neg(Formula::diamond(Formula::stit(j, c)))),
      {e8});
  return b.finish();
}

ProofScript derive_technical3(const Formula& a, const Formula& bf,
                              const Formula& c, Agent j,
                              const ProofScript& premise) {
  require_distinct({j});
  Formula boxa = Formula::box(a);
  Formula sb = Formula::stit(j, bf);
  Formula expected = Formula::implies(Formula::conj(boxa, sb), c);
  require_premise(premise, expected);

  Builder b;
  int prem = b.absorb(premise);
  Modality mj = Modality::stit(j);
  int kdist = b.mu_mono(mj, prem);  // [j]([]A & [j]B) -> [j]C
  int f4j = b.four(mj, bf);         // [j]B -> [j][j]B
  int ci = b.conj_in(mj, {boxa, sb});
  int p3 = b.taut_mp(
      Formula::implies(Formula::conj(Formula::stit(j, boxa), sb),
                       Formula::stit(j, c)),
      {f4j, ci, kdist});
  int f4 = b.four(Modality::box(), a);  // []A -> [][]A
  int a2 = b.add_axiom(
      Formula::implies(Formula::box(boxa), Formula::stit(j, boxa)),
      SchemeId::box_to_stit(j));
  int p6 = b.taut_mp(Formula::implies(boxa, Formula::stit(j, boxa)), {f4, a2});
  int p7 = b.taut_mp(
      Formula::implies(Formula::conj(boxa, sb), Formula::stit(j, c)),
      {p3, p6});
  int bde = b.box_dia_exchange(a, sb);
  int dm = b.dia_mono(p7);
  b.taut_mp(Formula::implies(Formula::conj(boxa, Formula::diamond(sb)),
                             Formula::diamond(Formula::stit(j, c))),
            {bde, dm});
  return b.finish();
}

ProofScript derive_counterexample(Agent j1, Agent j2, Agent j3, Agent j4,
                                  const std::string& p, const std::string& q,
                                  const std::string& r) {
  require_distinct({j1, j2, j3, j4});
  if (p == q || p == r || q == r)
    throw std::invalid_argument("variables must be pairwise different");
  Formula vp = Formula::var(p), vq = Formula::var(q), vr = Formula::var(r);
  Formula s1 = Formula::stit(j1, vp);
  Formula s2 = Formula::stit(j2, Formula::implies(vp, vq));
  Formula s3 = Formula::stit(j3, vr);
  Formula s4 = Formula::stit(j4, Formula::implies(vr, Formula::neg(vq)));
  Formula left = Formula::conj(s1, s2);
  Formula right = Formula::conj(s3, s4);

  Builder b;
  int l1 = b.dia_mono(b.add_taut(Formula::implies(left, s1)));
  int l2 = b.dia_mono(b.add_taut(Formula::implies(left, s2)));
  int ce2 = b.taut_mp(
      Formula::implies(Formula::diamond(left),
                       Formula::conj(Formula::diamond(s1), Formula::diamond(s2))),
      {l1, l2});
  int r1 = b.dia_mono(b.add_taut(Formula::implies(right, s3)));
  int r2 = b.dia_mono(b.add_taut(Formula::implies(right, s4)));
  int ce3 = b.taut_mp(
      Formula::implies(Formula::diamond(right),
                       Formula::conj(Formula::diamond(s3), Formula::diamond(s4))),
      {r1, r2});

  Formula conj4 = conj_all({s1, s2, s3, s4});
  int a3 = b.add_axiom(
      Formula::implies(conj_all({Formula::diamond(s1), Formula::diamond(s2),
                                 Formula::diamond(s3), Formula::diamond(s4)}),
                       Formula::diamond(conj4)),
      SchemeId::independence());

  int t1 = b.add_axiom(Formula::implies(s1, vp), SchemeId::t(Modality::stit(j1)));
  int t2 = b.add_axiom(Formula::implies(s2, Formula::implies(vp, vq)),
                       SchemeId::t(Modality::stit(j2)));
  int t3 = b.add_axiom(Formula::implies(s3, vr), SchemeId::t(Modality::stit(j3)));
  int t4 = b.add_axiom(
      Formula::implies(s4, Formula::implies(vr, Formula::neg(vq))),
      SchemeId::t(Modality::stit(j4)));
  int ce7 = b.taut_mp(Formula::implies(conj4, Formula::bottom()),
                      {t1, t2, t3, t4});
  int n8 = b.add_nec(ce7);
  int ce8 = b.taut_mp(
      Formula::implies(Formula::diamond(conj4), Formula::bottom()), {n8});
  b.taut_mp(Formula::implies(Formula::diamond(left),
                             Formula::neg(Formula::diamond(right))),
            {ce2, ce3, a3, ce8});
  return b.finish();
}

ProofScript derive_s_counterexample(Agent j1, Agent j2, const std::string& p) {
  require_distinct({j1, j2});
  Formula vp = Formula::var(p);
  Formula s1 = Formula::stit(j1, vp);
  Formula s2 = Formula::stit(j2, Formula::neg(vp));

  Builder b;
  int a3 = b.add_axiom(
      Formula::implies(Formula::conj(Formula::diamond(s1), Formula::diamond(s2)),
                       Formula::diamond(Formula::conj(s1, s2))),
      SchemeId::independence());
  int t1 = b.add_axiom(Formula::implies(s1, vp), SchemeId::t(Modality::stit(j1)));
  int t2 = b.add_axiom(Formula::implies(s2, Formula::neg(vp)),
                       SchemeId::t(Modality::stit(j2)));
  int sce2 = b.taut_mp(
      Formula::implies(Formula::conj(s1, s2), Formula::bottom()), {t1, t2});
  int n = b.add_nec(sce2);
  int sce3 = b.taut_mp(
      Formula::implies(Formula::diamond(Formula::conj(s1, s2)),
                       Formula::bottom()),
      {n});
  b.taut_mp(Formula::implies(Formula::diamond(s1),
                             Formula::neg(Formula::diamond(s2))),
            {a3, sce3});
  return b.finish();
}

}  // namespace stit::proof
