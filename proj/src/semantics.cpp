#include "stit/semantics.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <stdexcept>

namespace stit::semantics {

namespace {

std::string join_names(const std::vector<int>& chain,
                       const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (i) out += '>';
    out += names[static_cast<std::size_t>(chain[i])];
  }
  return out;
}

}  // namespace

Model Model::build(ModelData data) {
  Model m;
  m.data_ = std::move(data);
  const std::size_t n = m.data_.moments.size();
  for (std::size_t i = 0; i < n; ++i)
    m.moment_idx_.emplace(m.data_.moments[i], static_cast<int>(i));

  m.leq_.assign(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) m.leq_[i][i] = true;
  for (const auto& [a, b] : m.data_.order) {
    auto ia = m.moment_idx_.find(a);
    auto ib = m.moment_idx_.find(b);
    if (ia == m.moment_idx_.end() || ib == m.moment_idx_.end())
      continue;  // reported by validate()
    m.leq_[static_cast<std::size_t>(ia->second)][static_cast<std::size_t>(ib->second)] = true;
  }
  // transitive closure
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (m.leq_[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (m.leq_[k][j]) m.leq_[i][j] = true;

  for (std::size_t i = 0; i < n && m.antisymmetric_; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && m.leq_[i][j] && m.leq_[j][i]) {
        m.antisymmetric_ = false;
        break;
      }

  if (m.antisymmetric_ && n > 0) {
    // A maximal chain is a covering path from a minimal to a maximal moment.
    auto lt = [&](int a, int b) {
      return a != b && m.leq_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    };
    std::vector<std::vector<int>> covers(n);
    for (int a = 0; a < static_cast<int>(n); ++a)
      for (int b = 0; b < static_cast<int>(n); ++b) {
        if (!lt(a, b)) continue;
        bool covering = true;
        for (int c = 0; c < static_cast<int>(n) && covering; ++c)
          if (lt(a, c) && lt(c, b)) covering = false;
        if (covering) covers[static_cast<std::size_t>(a)].push_back(b);
      }
    std::vector<int> chain;
    auto dfs = [&](auto&& self, int at) -> void {
      chain.push_back(at);
      if (covers[static_cast<std::size_t>(at)].empty()) {
        m.histories_.push_back({chain, join_names(chain, m.data_.moments)});
      } else {
        for (int nx : covers[static_cast<std::size_t>(at)]) self(self, nx);
      }
      chain.pop_back();
    };
    for (int a = 0; a < static_cast<int>(n); ++a) {
      bool minimal = true;
      for (int b = 0; b < static_cast<int>(n); ++b)
        if (lt(b, a)) minimal = false;
      if (minimal) dfs(dfs, a);
    }
    for (std::size_t h = 0; h < m.histories_.size(); ++h)
      m.history_idx_.emplace(m.histories_[h].name, static_cast<int>(h));
    m.hist_at_.assign(n, {});
    for (std::size_t h = 0; h < m.histories_.size(); ++h)
      for (int mi : m.histories_[h].chain)
        m.hist_at_[static_cast<std::size_t>(mi)].push_back(static_cast<int>(h));
  } else {
    m.hist_at_.assign(n, {});
  }

  // Resolve choice partitions where the names check out; validate() reports
  // anything left unresolved.
  for (const auto& [mname, per_agent] : m.data_.choice) {
    auto mi = m.moment_idx_.find(mname);
    if (mi == m.moment_idx_.end()) continue;
    for (const auto& [ag, cells] : per_agent) {
      std::vector<std::vector<int>> resolved;
      bool ok = true;
      for (const auto& cell : cells) {
        std::vector<int> rc;
        for (const auto& hname : cell) {
          auto hi = m.history_idx_.find(hname);
          if (hi == m.history_idx_.end()) {
            ok = false;
            break;
          }
          rc.push_back(hi->second);
        }
        if (!ok) break;
        std::sort(rc.begin(), rc.end());
        resolved.push_back(std::move(rc));
      }
      if (ok) m.choice_[{mi->second, ag}] = std::move(resolved);
    }
  }

  for (const auto& [var, mo, hi] : m.data_.valuation) {
    auto mi = m.moment_idx_.find(mo);
    auto h = m.history_idx_.find(hi);
    if (mi == m.moment_idx_.end() || h == m.history_idx_.end()) continue;
    m.val_[var].emplace_back(mi->second, h->second);
  }
  for (auto& [var, pairs] : m.val_) {
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  }
  return m;
}

int Model::moment_index(const std::string& name) const {
  auto it = moment_idx_.find(name);
  return it == moment_idx_.end() ? -1 : it->second;
}

int Model::history_index(const std::string& name) const {
  auto it = history_idx_.find(name);
  return it == history_idx_.end() ? -1 : it->second;
}

const std::vector<int>& Model::histories_at(int m) const {
  return hist_at_.at(static_cast<std::size_t>(m));
}

bool Model::undivided(int m, int h, int g) const {
  if (h == g) return true;
  for (int m2 : histories_[static_cast<std::size_t>(h)].chain) {
    if (m2 == m || !leq(m, m2)) continue;
    const auto& other = histories_[static_cast<std::size_t>(g)].chain;
    if (std::find(other.begin(), other.end(), m2) != other.end()) return true;
  }
  return false;
}

std::vector<std::vector<bool>> Model::undivided_relation(
    const std::string& mname) const {
  int m = moment_index(mname);
  if (m < 0) throw std::invalid_argument("unknown moment: " + mname);
  const auto& hs = histories_at(m);
  std::vector<std::vector<bool>> rel(hs.size(),
                                     std::vector<bool>(hs.size(), false));
  for (std::size_t i = 0; i < hs.size(); ++i)
    for (std::size_t j = 0; j < hs.size(); ++j)
      rel[i][j] = undivided(m, hs[i], hs[j]);
  return rel;
}

const std::vector<std::vector<int>>* Model::choice(int m, Agent j) const {
  auto it = choice_.find({m, j});
  return it == choice_.end() ? nullptr : &it->second;
}

const std::vector<int>& Model::cell_of(int m, Agent j, int h) const {
  const auto* part = choice(m, j);
  if (!part)
    throw std::invalid_argument("no choice partition for moment " +
                                data_.moments[static_cast<std::size_t>(m)] + ", agent " +
                                std::to_string(j));
  for (const auto& cell : *part)
    if (std::binary_search(cell.begin(), cell.end(), h)) return cell;
  throw std::invalid_argument("history outside the partition at " +
                              data_.moments[static_cast<std::size_t>(m)]);
}

bool Model::holds_var(const std::string& var, int m, int h) const {
  auto it = val_.find(var);
  if (it == val_.end()) return false;
  return std::binary_search(it->second.begin(), it->second.end(),
                            std::make_pair(m, h));
}

std::vector<Violation> Model::validate() const {
  std::vector<Violation> out;
  const std::size_t n = data_.moments.size();

  if (n == 0)
    out.push_back({"well-formedness", "the moment set is empty", {}});
  {
    std::set<std::string> seen;
    for (const auto& name : data_.moments)
      if (!seen.insert(name).second)
        out.push_back({"well-formedness", "duplicate moment name: " + name, {}});
  }
  {
    std::set<Agent> seen;
    for (Agent a : data_.agents) {
      if (a == 0)
        out.push_back({"well-formedness", "agent ids start at 1", {}});
      else if (!seen.insert(a).second)
        out.push_back({"well-formedness",
                       "duplicate agent id: " + std::to_string(a), {}});
    }
  }
  for (const auto& [a, b] : data_.order)
    if (moment_index(a) < 0 || moment_index(b) < 0)
      out.push_back({"well-formedness",
                     "order pair references unknown moment: " + a + " <= " + b,
                     {}});

  if (!antisymmetric_) {
    out.push_back({"partial-order",
                   "the reflexive-transitive closure of the order is not "
                   "antisymmetric",
                   {}});
    return out;  // histories are undefined past this point
  }
  if (!out.empty() && n == 0) return out;

  // HC: any two moments have a common lower bound.
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      bool found = false;
      for (std::size_t c = 0; c < n && !found; ++c)
        if (leq_[c][a] && leq_[c][b]) found = true;
      if (!found) {
        out.push_back({"HC",
                       "no common lower bound for " + data_.moments[a] +
                           " and " + data_.moments[b],
                       {{"moments", {data_.moments[a], data_.moments[b]}}}});
      }
    }

  // NBB: the past of any moment is linearly ordered.
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        if (leq_[a][m] && leq_[b][m] && !leq_[a][b] && !leq_[b][a])
          out.push_back(
              {"NBB",
               "incomparable moments " + data_.moments[a] + ", " +
                   data_.moments[b] + " below " + data_.moments[m],
               {{"moments",
                 {data_.moments[a], data_.moments[b], data_.moments[m]}}}});

  // Partition well-formedness for every (moment, agent).
  for (std::size_t m = 0; m < n; ++m) {
    const auto& here = hist_at_[m];
    for (Agent j : data_.agents) {
      std::string where = data_.moments[m] + ", agent " + std::to_string(j);
      auto cm = data_.choice.find(data_.moments[m]);
      bool given = cm != data_.choice.end() && cm->second.count(j) > 0;
      if (!given) {
        out.push_back({"partition", "no choice partition at " + where, {}});
        continue;
      }
      const auto* part = choice(static_cast<int>(m), j);
      if (!part) {
        out.push_back({"partition",
                       "partition at " + where +
                           " references an unknown history name",
                       {}});
        continue;
      }
      std::set<int> covered;
      bool ok = true;
      for (const auto& cell : *part) {
        if (cell.empty()) {
          out.push_back({"partition", "empty cell at " + where, {}});
          ok = false;
        }
        for (int h : cell) {
          if (std::find(here.begin(), here.end(), h) == here.end()) {
            out.push_back({"partition",
                           "history " + histories_[static_cast<std::size_t>(h)].name +
                               " does not pass through " + data_.moments[m],
                           {}});
            ok = false;
          } else if (!covered.insert(h).second) {
            out.push_back({"partition",
                           "history " + histories_[static_cast<std::size_t>(h)].name +
                               " occurs in two cells at " + where,
                           {}});
            ok = false;
          }
        }
      }
      if (ok && covered.size() != here.size())
        out.push_back({"partition",
                       "cells at " + where + " do not cover all histories",
                       {}});
    }
  }
  // Unknown names in the choice table itself.
  for (const auto& [mname, per_agent] : data_.choice) {
    if (moment_index(mname) < 0)
      out.push_back(
          {"well-formedness", "choice entry for unknown moment: " + mname, {}});
    else
      for (const auto& [ag, cells] : per_agent) {
        (void)cells;
        if (std::find(data_.agents.begin(), data_.agents.end(), ag) ==
            data_.agents.end())
          out.push_back({"well-formedness",
                         "choice entry at " + mname + " for unknown agent " +
                             std::to_string(ag),
                         {}});
      }
  }

  // NCUH: undivided histories share their cells. Evaluated from each agent's
  // history-to-cell assignment, so it stays meaningful on structures whose
  // partitions have coverage holes (those are reported above).
  for (std::size_t m = 0; m < n; ++m) {
    const auto& here = hist_at_[m];
    for (Agent j : data_.agents) {
      const auto* part = choice(static_cast<int>(m), j);
      if (!part) continue;
      std::map<int, int> assign;
      for (std::size_t c = 0; c < part->size(); ++c)
        for (int h : (*part)[c]) assign[h] = static_cast<int>(c);
      for (std::size_t x = 0; x < here.size(); ++x)
        for (std::size_t y = x + 1; y < here.size(); ++y) {
          if (!undivided(static_cast<int>(m), here[x], here[y])) continue;
          auto cx = assign.find(here[x]);
          auto cy = assign.find(here[y]);
          if (cx == assign.end() || cy == assign.end()) continue;
          if (cx->second != cy->second)
            out.push_back(
                {"NCUH",
                 "undivided histories in different cells at " +
                     data_.moments[m] + " for agent " + std::to_string(j),
                 {{"moment", data_.moments[m]},
                  {"agent", j},
                  {"histories",
                   {histories_[static_cast<std::size_t>(here[x])].name,
                    histories_[static_cast<std::size_t>(here[y])].name}}}});
        }
    }
  }

  // IA: every selector of one cell per agent has non-empty intersection. The
  // selector values for an agent are its cells restricted to the histories
  // through the moment, plus the empty set when some history there lies
  // outside all of its cells (the per-history reading of the condition:
  // f(j) = Choice_j(h_j) for an arbitrary pick of histories).
  for (std::size_t m = 0; m < n; ++m) {
    const auto& here = hist_at_[m];
    std::vector<Agent> checked;
    std::vector<std::vector<std::vector<int>>> values;  // per agent: cells
    for (Agent j : data_.agents) {
      const auto* part = choice(static_cast<int>(m), j);
      if (!part) continue;  // reported as a partition violation
      std::vector<std::vector<int>> vals;
      std::set<int> covered;
      for (const auto& cell : *part) {
        std::vector<int> within;
        for (int h : cell)
          if (std::find(here.begin(), here.end(), h) != here.end()) {
            within.push_back(h);
            covered.insert(h);
          }
        vals.push_back(std::move(within));
      }
      bool hole = false;
      for (int h : here)
        if (!covered.count(h)) hole = true;
      if (hole) vals.push_back({});
      checked.push_back(j);
      values.push_back(std::move(vals));
    }
    const std::size_t na = checked.size();
    if (na == 0) continue;
    std::vector<std::size_t> pick(na, 0);
    bool reported = false;  // one witness per moment is enough
    for (;;) {
      std::vector<int> inter(here.begin(), here.end());
      for (std::size_t a = 0; a < na; ++a) {
        const auto& cell = values[a][pick[a]];
        std::vector<int> next;
        std::set_intersection(inter.begin(), inter.end(), cell.begin(),
                              cell.end(), std::back_inserter(next));
        inter = std::move(next);
        if (inter.empty()) break;
      }
      if (inter.empty() && !reported) {
        reported = true;
        nlohmann::ordered_json selector = nlohmann::ordered_json::object();
        for (std::size_t a = 0; a < na; ++a) {
          nlohmann::ordered_json cell = nlohmann::ordered_json::array();
          for (int h : values[a][pick[a]])
            cell.push_back(histories_[static_cast<std::size_t>(h)].name);
          selector[std::to_string(checked[a])] = cell;
        }
        out.push_back({"IA",
                       "selector with empty intersection at " + data_.moments[m],
                       {{"moment", data_.moments[m]}, {"selector", selector}}});
      }
      if (reported) break;
      std::size_t a = 0;
      while (a < na && ++pick[a] == values[a].size()) pick[a++] = 0;
      if (a == na) break;
    }
  }

  // Valuation triples must name existing moment-history pairs.
  for (const auto& [var, mo, hi] : data_.valuation) {
    int m = moment_index(mo);
    int h = history_index(hi);
    if (m < 0 || h < 0) {
      out.push_back({"valuation",
                     "triple (" + var + ", " + mo + ", " + hi +
                         ") references unknown names",
                     {}});
      continue;
    }
    const auto& chain = histories_[static_cast<std::size_t>(h)].chain;
    if (std::find(chain.begin(), chain.end(), m) == chain.end())
      out.push_back({"valuation",
                     "triple (" + var + ", " + mo + ", " + hi +
                         "): the history misses the moment",
                     {}});
  }
  return out;
}

// Satisfaction never leaves the current moment, so each subformula is labeled
// with the set of histories through m where it holds.
std::vector<char> Model::eval_at_moment(int m, const Formula& f) const {
  const auto& here = histories_at(m);
  const std::size_t k = here.size();
  auto position = [&](int h) {
    return static_cast<std::size_t>(
        std::find(here.begin(), here.end(), h) - here.begin());
  };
  std::vector<char> res(k, 0);
  switch (f.op()) {
    case Op::var: {
      for (std::size_t i = 0; i < k; ++i)
        res[i] = holds_var(f.var_name(), m, here[i]);
      return res;
    }
    case Op::bottom:
      return res;
    case Op::top:
      std::fill(res.begin(), res.end(), 1);
      return res;
    case Op::implies: {
      auto a = eval_at_moment(m, f.lhs());
      auto b = eval_at_moment(m, f.rhs());
      for (std::size_t i = 0; i < k; ++i) res[i] = !a[i] || b[i];
      return res;
    }
    case Op::conj: {
      auto a = eval_at_moment(m, f.lhs());
      auto b = eval_at_moment(m, f.rhs());
      for (std::size_t i = 0; i < k; ++i) res[i] = a[i] && b[i];
      return res;
    }
    case Op::disj: {
      auto a = eval_at_moment(m, f.lhs());
      auto b = eval_at_moment(m, f.rhs());
      for (std::size_t i = 0; i < k; ++i) res[i] = a[i] || b[i];
      return res;
    }
    case Op::neg: {
      auto a = eval_at_moment(m, f.body());
      for (std::size_t i = 0; i < k; ++i) res[i] = !a[i];
      return res;
    }
    case Op::box: {
      auto a = eval_at_moment(m, f.body());
      bool all = std::all_of(a.begin(), a.end(), [](char c) { return c; });
      std::fill(res.begin(), res.end(), all ? 1 : 0);
      return res;
    }
    case Op::diamond: {
      auto a = eval_at_moment(m, f.body());
      bool any = std::any_of(a.begin(), a.end(), [](char c) { return c; });
      std::fill(res.begin(), res.end(), any ? 1 : 0);
      return res;
    }
    case Op::stit:
    case Op::stit_dual: {
      auto a = eval_at_moment(m, f.body());
      const auto* part = choice(m, f.agent());
      if (!part)
        throw std::invalid_argument("agent " + std::to_string(f.agent()) +
                                    " has no choice partition here");
      bool dual = f.op() == Op::stit_dual;
      for (const auto& cell : *part) {
        bool all = true, any = false;
        for (int h : cell) {
          if (a[position(h)]) any = true;
          else all = false;
        }
        bool value = dual ? any : all;
        if (value)
          for (int h : cell) res[position(h)] = 1;
      }
      return res;
    }
    case Op::delib_stit: {
      auto s = eval_at_moment(m, Formula::stit(f.agent(), f.body()));
      auto b = eval_at_moment(m, Formula::box(f.body()));
      for (std::size_t i = 0; i < k; ++i) res[i] = s[i] && !b[i];
      return res;
    }
  }
  throw std::logic_error("unreachable");
}

bool Model::satisfies(int m, int h, const Formula& f) const {
  if (m < 0 || m >= static_cast<int>(data_.moments.size()))
    throw std::invalid_argument("moment index out of range");
  if (h < 0 || h >= static_cast<int>(histories_.size()))
    throw std::invalid_argument("history index out of range");
  const auto& chain = histories_[static_cast<std::size_t>(h)].chain;
  if (std::find(chain.begin(), chain.end(), m) == chain.end())
    throw std::invalid_argument("not a moment-history pair: " +
                                data_.moments[static_cast<std::size_t>(m)] + " not on " +
                                histories_[static_cast<std::size_t>(h)].name);
  const auto& here = histories_at(m);
  auto pos = static_cast<std::size_t>(
      std::find(here.begin(), here.end(), h) - here.begin());
  return eval_at_moment(m, f)[pos] != 0;
}

bool Model::satisfies(const std::string& m, const std::string& h,
                      const Formula& f) const {
  int mi = moment_index(m);
  if (mi < 0) throw std::invalid_argument("unknown moment: " + m);
  int hi = history_index(h);
  if (hi < 0) throw std::invalid_argument("unknown history: " + h);
  return satisfies(mi, hi, f);
}

bool Model::valid_in_model(const Formula& f) const {
  for (std::size_t m = 0; m < data_.moments.size(); ++m) {
    auto res = eval_at_moment(static_cast<int>(m), f);
    if (!std::all_of(res.begin(), res.end(), [](char c) { return c; }))
      return false;
  }
  return true;
}

ModelData model_from_json(const nlohmann::json& j) {
  ModelData d;
  for (const auto& m : j.at("moments")) d.moments.push_back(m.get<std::string>());
  for (const auto& pr : j.at("order"))
    d.order.emplace_back(pr.at(0).get<std::string>(), pr.at(1).get<std::string>());
  for (const auto& a : j.at("agents")) d.agents.push_back(a.get<Agent>());
  if (j.contains("choice"))
    for (const auto& [mname, per_agent] : j.at("choice").items())
      for (const auto& [ag, cells] : per_agent.items()) {
        std::vector<std::vector<std::string>> cs;
        for (const auto& cell : cells) {
          std::vector<std::string> c;
          for (const auto& h : cell) c.push_back(h.get<std::string>());
          cs.push_back(std::move(c));
        }
        d.choice[mname][static_cast<Agent>(std::stoul(ag))] = std::move(cs);
      }
  if (j.contains("valuation"))
    for (const auto& t : j.at("valuation"))
      d.valuation.push_back({t.at(0).get<std::string>(),
                             t.at(1).get<std::string>(),
                             t.at(2).get<std::string>()});
  return d;
}

nlohmann::ordered_json model_to_json(const ModelData& d) {
  nlohmann::ordered_json j;
  j["moments"] = d.moments;
  auto order = nlohmann::ordered_json::array();
  for (const auto& [a, b] : d.order) order.push_back({a, b});
  j["order"] = order;
  j["agents"] = d.agents;
  auto choice = nlohmann::ordered_json::object();
  for (const auto& [mname, per_agent] : d.choice) {
    auto entry = nlohmann::ordered_json::object();
    for (const auto& [ag, cells] : per_agent) entry[std::to_string(ag)] = cells;
    choice[mname] = entry;
  }
  j["choice"] = choice;
  auto val = nlohmann::ordered_json::array();
  for (const auto& t : d.valuation) val.push_back({t[0], t[1], t[2]});
  j["valuation"] = val;
  return j;
}

Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  in >> j;
  return Model::build(model_from_json(j));
}

nlohmann::ordered_json violations_to_json(const std::vector<Violation>& vs) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& v : vs) {
    nlohmann::ordered_json o;
    o["constraint"] = v.constraint;
    o["detail"] = v.detail;
    if (!v.witness.is_null()) o["witness"] = v.witness;
    arr.push_back(o);
  }
  return arr;
}

}  // namespace stit::semantics
