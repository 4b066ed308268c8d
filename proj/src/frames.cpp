#include "stit/frames.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <numeric>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace stit::frames {

namespace {

constexpr int kMaxHistories = 16;
constexpr int kMaxPruneHistories = 6;  // pruning needs k! relabelings

using Mask = std::uint32_t;

std::vector<std::string> default_labels(int k) {
  std::vector<std::string> out;
  for (int i = 1; i <= k; ++i) out.push_back("h" + std::to_string(i));
  return out;
}

// All partitions of {0..k-1} as restricted growth strings, in lexicographic
// order. rgs[i] is the block of element i; blocks are numbered by first
// occurrence.
std::vector<std::vector<std::uint8_t>> set_partitions(int k) {
  std::vector<std::vector<std::uint8_t>> out;
  std::vector<std::uint8_t> rgs(static_cast<std::size_t>(k), 0);
  auto rec = [&](auto&& self, int i, int max_used) -> void {
    if (i == k) {
      out.push_back(rgs);
      return;
    }
    for (int b = 0; b <= max_used + 1 && b < k; ++b) {
      rgs[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(b);
      self(self, i + 1, std::max(max_used, b));
    }
  };
  rec(rec, 1, 0);  // rgs[0] = 0 always
  if (k == 0) out.push_back({});
  return out;
}

std::vector<Mask> rgs_to_cells(const std::vector<std::uint8_t>& rgs) {
  int blocks = rgs.empty() ? 0 : 1 + *std::max_element(rgs.begin(), rgs.end());
  std::vector<Mask> masks(static_cast<std::size_t>(blocks), 0);
  for (std::size_t i = 0; i < rgs.size(); ++i)
    masks[rgs[i]] |= Mask{1} << i;
  return masks;
}

std::vector<std::uint8_t> normalize_rgs(std::vector<std::uint8_t> raw) {
  std::vector<int> rename(raw.size() + 1, -1);
  std::uint8_t next = 0;
  for (auto& b : raw) {
    if (rename[b] < 0) rename[b] = next++;
    b = static_cast<std::uint8_t>(rename[b]);
  }
  return raw;
}

struct Perm {
  std::vector<int> fwd;  // fwd[x] = new index of old history x
  std::vector<int> inv;
};

std::vector<Perm> permutations(int k) {
  std::vector<int> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<Perm> out;
  do {
    Perm p;
    p.fwd = idx;
    p.inv.assign(static_cast<std::size_t>(k), 0);
    for (int x = 0; x < k; ++x) p.inv[static_cast<std::size_t>(idx[static_cast<std::size_t>(x)])] = x;
    out.push_back(std::move(p));
  } while (std::next_permutation(idx.begin(), idx.end()));
  return out;
}

// One admissible partition tuple of a given history count, with the
// relabelings that fix its partition part (the automorphisms). Tuples whose
// partition part is not lexicographically least are dropped up front.
struct TupleEntry {
  std::vector<std::vector<Mask>> cells;            // per agent slot
  std::vector<std::vector<std::uint8_t>> assign;   // per agent slot (RGS)
  std::vector<int> automorphisms;                  // indices into the perm list
};

std::vector<std::uint8_t> permuted_assign(const std::vector<std::uint8_t>& a,
                                          const Perm& p) {
  std::vector<std::uint8_t> raw(a.size());
  for (std::size_t y = 0; y < a.size(); ++y)
    raw[y] = a[static_cast<std::size_t>(p.inv[y])];
  return normalize_rgs(std::move(raw));
}

bool independence_ok(const std::vector<std::vector<Mask>>& cells, Mask full) {
  if (cells.empty()) return true;
  std::vector<std::size_t> pick(cells.size(), 0);
  for (;;) {
    Mask inter = full;
    for (std::size_t a = 0; a < cells.size(); ++a) inter &= cells[a][pick[a]];
    if (inter == 0) return false;
    std::size_t a = 0;
    while (a < cells.size() && ++pick[a] == cells[a].size()) pick[a++] = 0;
    if (a == cells.size()) break;
  }
  return true;
}

// Builds the admissible tuples for history count k, in enumeration order.
// With pruning, entries carry their automorphism lists for the valuation-level
// canonicity test.
std::vector<TupleEntry> admissible_tuples(int k, std::size_t n_agents,
                                          const std::vector<Perm>& perms,
                                          bool prune) {
  auto parts = set_partitions(k);
  Mask full = (Mask{1} << k) - 1;
  std::vector<TupleEntry> out;
  std::vector<std::size_t> pick(n_agents, 0);
  for (;;) {
    TupleEntry e;
    for (std::size_t a = 0; a < n_agents; ++a) {
      e.assign.push_back(parts[pick[a]]);
      e.cells.push_back(rgs_to_cells(parts[pick[a]]));
    }
    if (independence_ok(e.cells, full)) {
      bool least = true;
      if (prune) {
        for (std::size_t pi = 0; pi < perms.size(); ++pi) {
          std::vector<std::uint8_t> key, orig;
          for (std::size_t a = 0; a < n_agents; ++a) {
            auto pa = permuted_assign(e.assign[a], perms[pi]);
            key.insert(key.end(), pa.begin(), pa.end());
            orig.insert(orig.end(), e.assign[a].begin(), e.assign[a].end());
          }
          if (key < orig) {
            least = false;
            break;
          }
          if (key == orig) e.automorphisms.push_back(static_cast<int>(pi));
        }
      }
      if (least) out.push_back(std::move(e));
    }
    if (n_agents == 0) break;
    // advance the rightmost agent fastest: lexicographic tuple order
    std::size_t a = n_agents;
    while (a > 0) {
      if (++pick[a - 1] < parts.size()) break;
      pick[a - 1] = 0;
      --a;
    }
    if (a == 0) break;
  }
  return out;
}

// Valuation ids enumerate per-history variable masks, history 0 most
// significant, ascending from the all-empty valuation.
std::vector<Mask> decode_valuation(std::uint64_t val_id, int k, int n_vars) {
  std::vector<Mask> masks(static_cast<std::size_t>(k), 0);
  for (int h = k - 1; h >= 0; --h) {
    masks[static_cast<std::size_t>(h)] =
        static_cast<Mask>(val_id & ((std::uint64_t{1} << n_vars) - 1));
    val_id >>= n_vars;
  }
  return masks;
}

bool valuation_canonical(const std::vector<Mask>& masks, const TupleEntry& e,
                         const std::vector<Perm>& perms, bool prune) {
  if (!prune) return true;
  for (int pi : e.automorphisms) {
    const Perm& p = perms[static_cast<std::size_t>(pi)];
    bool less = false, greater = false;
    for (std::size_t y = 0; y < masks.size() && !less && !greater; ++y) {
      Mask permuted = masks[static_cast<std::size_t>(p.inv[y])];
      if (permuted < masks[y]) less = true;
      if (permuted > masks[y]) greater = true;
    }
    if (less) return false;  // a relabeling yields a smaller key
  }
  return true;
}

// Compiled formula for the bitmask kernel: postorder nodes, variables and
// agents resolved to slots.
struct Compiled {
  struct N {
    Op op;
    int a = -1, b = -1;
    int var = -1;
    int slot = -1;
  };
  std::vector<N> nodes;
  std::vector<std::string> vars;  // sorted
  std::vector<Agent> agents;     // sorted
};

int compile_rec(const Formula& f, Compiled& c) {
  Compiled::N n;
  n.op = f.op();
  switch (f.op()) {
    case Op::var: {
      auto it = std::find(c.vars.begin(), c.vars.end(), f.var_name());
      n.var = static_cast<int>(it - c.vars.begin());
      break;
    }
    case Op::bottom:
    case Op::top:
      break;
    case Op::implies:
    case Op::conj:
    case Op::disj:
      n.a = compile_rec(f.lhs(), c);
      n.b = compile_rec(f.rhs(), c);
      break;
    case Op::stit:
    case Op::stit_dual:
    case Op::delib_stit: {
      auto it = std::find(c.agents.begin(), c.agents.end(), f.agent());
      n.slot = static_cast<int>(it - c.agents.begin());
      n.a = compile_rec(f.body(), c);
      break;
    }
    default:
      n.a = compile_rec(f.body(), c);
      break;
  }
  c.nodes.push_back(n);
  return static_cast<int>(c.nodes.size()) - 1;
}

Compiled compile(const Formula& f) {
  Compiled c;
  Vocabulary v = vocabulary(f);
  c.vars.assign(v.vars.begin(), v.vars.end());
  c.agents.assign(v.agents.begin(), v.agents.end());
  compile_rec(f, c);
  return c;
}

// Bitmask evaluation over one frame: returns the set of histories where each
// node holds; the root's mask is the satisfaction set of the formula.
Mask eval_compiled(const Compiled& c, const std::vector<Mask>& var_masks,
                   const std::vector<std::vector<Mask>>& cells, Mask full,
                   std::vector<Mask>& scratch) {
  scratch.resize(c.nodes.size());
  for (std::size_t i = 0; i < c.nodes.size(); ++i) {
    const auto& n = c.nodes[i];
    Mask r = 0;
    switch (n.op) {
      case Op::var: r = var_masks[static_cast<std::size_t>(n.var)]; break;
      case Op::bottom: r = 0; break;
      case Op::top: r = full; break;
      case Op::implies:
        r = (~scratch[static_cast<std::size_t>(n.a)] | scratch[static_cast<std::size_t>(n.b)]) & full;
        break;
      case Op::conj:
        r = scratch[static_cast<std::size_t>(n.a)] & scratch[static_cast<std::size_t>(n.b)];
        break;
      case Op::disj:
        r = scratch[static_cast<std::size_t>(n.a)] | scratch[static_cast<std::size_t>(n.b)];
        break;
      case Op::neg:
        r = ~scratch[static_cast<std::size_t>(n.a)] & full;
        break;
      case Op::box:
        r = scratch[static_cast<std::size_t>(n.a)] == full ? full : 0;
        break;
      case Op::diamond:
        r = scratch[static_cast<std::size_t>(n.a)] ? full : 0;
        break;
      case Op::stit:
        for (Mask cell : cells[static_cast<std::size_t>(n.slot)])
          if ((scratch[static_cast<std::size_t>(n.a)] & cell) == cell) r |= cell;
        break;
      case Op::stit_dual:
        for (Mask cell : cells[static_cast<std::size_t>(n.slot)])
          if (scratch[static_cast<std::size_t>(n.a)] & cell) r |= cell;
        break;
      case Op::delib_stit: {
        Mask body = scratch[static_cast<std::size_t>(n.a)];
        Mask st = 0;
        for (Mask cell : cells[static_cast<std::size_t>(n.slot)])
          if ((body & cell) == cell) st |= cell;
        Mask bx = body == full ? full : 0;
        r = st & ~bx & full;
        break;
      }
    }
    scratch[i] = r;
  }
  return scratch.back();
}

std::vector<Mask> var_masks_of(const std::vector<Mask>& val_masks, int n_vars) {
  std::vector<Mask> out(static_cast<std::size_t>(n_vars), 0);
  for (std::size_t h = 0; h < val_masks.size(); ++h)
    for (int v = 0; v < n_vars; ++v)
      if (val_masks[h] & (Mask{1} << v)) out[static_cast<std::size_t>(v)] |= Mask{1} << h;
  return out;
}

ChoiceFrame materialize(int k, const Compiled& c, const TupleEntry& e,
                        const std::vector<Mask>& val_masks) {
  ChoiceFrame f;
  f.histories = default_labels(k);
  for (std::size_t a = 0; a < c.agents.size(); ++a) {
    std::vector<std::vector<int>> cells;
    for (Mask m : e.cells[a]) {
      std::vector<int> cell;
      for (int h = 0; h < k; ++h)
        if (m & (Mask{1} << h)) cell.push_back(h);
      cells.push_back(std::move(cell));
    }
    f.partitions[c.agents[a]] = std::move(cells);
  }
  f.valuation.resize(static_cast<std::size_t>(k));
  for (int h = 0; h < k; ++h)
    for (std::size_t v = 0; v < c.vars.size(); ++v)
      if (val_masks[static_cast<std::size_t>(h)] & (Mask{1} << v))
        f.valuation[static_cast<std::size_t>(h)].insert(c.vars[v]);
  return f;
}

void check_search_size(int k, int n_vars) {
  if (k > kMaxHistories)
    throw std::invalid_argument("history bound too large (max " +
                                std::to_string(kMaxHistories) + ")");
  if (n_vars * k > 40)
    throw std::invalid_argument("search space too large: " +
                                std::to_string(n_vars) + " variables at " +
                                std::to_string(k) + " histories");
}

void recheck_sat_witness(const Formula& f, const ChoiceFrame& frame, int h) {
  semantics::Model model = to_model(frame);
  std::string root = model.moments().front();
  std::string hist = root + ">" + frame.histories[static_cast<std::size_t>(h)];
  if (!model.satisfies(root, hist, f))
    throw std::logic_error("search witness failed the model-checker re-check");
}

}  // namespace

std::vector<std::string> frame_problems(const ChoiceFrame& frame) {
  std::vector<std::string> out;
  const int k = static_cast<int>(frame.histories.size());
  if (k == 0) out.push_back("the history set is empty");
  {
    std::set<std::string> seen;
    for (const auto& l : frame.histories) {
      if (l.empty()) out.push_back("empty history label");
      if (!seen.insert(l).second) out.push_back("duplicate history label: " + l);
    }
  }
  for (const auto& [ag, cells] : frame.partitions) {
    std::string where = "agent " + std::to_string(ag);
    if (ag == 0) out.push_back("agent ids start at 1");
    std::set<int> covered;
    for (const auto& cell : cells) {
      if (cell.empty()) out.push_back("empty cell for " + where);
      for (int h : cell) {
        if (h < 0 || h >= k)
          out.push_back(where + ": history index out of range");
        else if (!covered.insert(h).second)
          out.push_back(where + ": history " + frame.histories[static_cast<std::size_t>(h)] +
                        " occurs in two cells");
      }
    }
    if (static_cast<int>(covered.size()) != k)
      out.push_back(where + ": cells do not cover the history set");
  }
  if (static_cast<int>(frame.valuation.size()) != k)
    out.push_back("valuation must assign a variable set to every history");
  return out;
}

std::optional<Selector> independence_violation(const ChoiceFrame& frame) {
  if (frame.partitions.empty()) return std::nullopt;
  std::vector<Agent> agents;
  std::vector<const std::vector<std::vector<int>>*> parts;
  for (const auto& [ag, cells] : frame.partitions) {
    agents.push_back(ag);
    parts.push_back(&cells);
  }
  std::vector<std::size_t> pick(agents.size(), 0);
  for (;;) {
    std::vector<int> inter;
    for (int h = 0; h < static_cast<int>(frame.histories.size()); ++h)
      inter.push_back(h);
    for (std::size_t a = 0; a < agents.size(); ++a) {
      std::vector<int> cell = (*parts[a])[pick[a]];
      std::sort(cell.begin(), cell.end());
      std::vector<int> next;
      std::set_intersection(inter.begin(), inter.end(), cell.begin(),
                            cell.end(), std::back_inserter(next));
      inter = std::move(next);
    }
    if (inter.empty()) {
      Selector s;
      for (std::size_t a = 0; a < agents.size(); ++a)
        s.cells[agents[a]] = (*parts[a])[pick[a]];
      return s;
    }
    std::size_t a = 0;
    while (a < agents.size() && ++pick[a] == parts[a]->size()) pick[a++] = 0;
    if (a == agents.size()) break;
  }
  return std::nullopt;
}

bool frame_eval(const ChoiceFrame& frame, int h, const Formula& f) {
  switch (f.op()) {
    case Op::var:
      return frame.valuation[static_cast<std::size_t>(h)].count(f.var_name()) > 0;
    case Op::bottom:
      return false;
    case Op::top:
      return true;
    case Op::implies:
      return !frame_eval(frame, h, f.lhs()) || frame_eval(frame, h, f.rhs());
    case Op::conj:
      return frame_eval(frame, h, f.lhs()) && frame_eval(frame, h, f.rhs());
    case Op::disj:
      return frame_eval(frame, h, f.lhs()) || frame_eval(frame, h, f.rhs());
    case Op::neg:
      return !frame_eval(frame, h, f.body());
    case Op::box: {
      for (int g = 0; g < static_cast<int>(frame.histories.size()); ++g)
        if (!frame_eval(frame, g, f.body())) return false;
      return true;
    }
    case Op::diamond: {
      for (int g = 0; g < static_cast<int>(frame.histories.size()); ++g)
        if (frame_eval(frame, g, f.body())) return true;
      return false;
    }
    case Op::stit:
    case Op::stit_dual: {
      auto it = frame.partitions.find(f.agent());
      if (it == frame.partitions.end())
        throw std::invalid_argument("agent " + std::to_string(f.agent()) +
                                    " has no partition in the frame");
      for (const auto& cell : it->second) {
        if (std::find(cell.begin(), cell.end(), h) == cell.end()) continue;
        if (f.op() == Op::stit) {
          for (int g : cell)
            if (!frame_eval(frame, g, f.body())) return false;
          return true;
        }
        for (int g : cell)
          if (frame_eval(frame, g, f.body())) return true;
        return false;
      }
      throw std::invalid_argument("history outside the partition");
    }
    case Op::delib_stit:
      return frame_eval(frame, h, Formula::stit(f.agent(), f.body())) &&
             !frame_eval(frame, h, Formula::box(f.body()));
  }
  throw std::logic_error("unreachable");
}

semantics::Model to_model(const ChoiceFrame& frame) {
  auto problems = frame_problems(frame);
  if (!problems.empty())
    throw std::invalid_argument("not a choice frame: " + problems.front());
  if (auto sel = independence_violation(frame)) {
    std::string msg = "independence fails for selector {";
    for (const auto& [ag, cell] : sel->cells) {
      msg += " " + std::to_string(ag) + ":[";
      for (int h : cell) msg += frame.histories[static_cast<std::size_t>(h)] + " ";
      msg += "]";
    }
    throw std::invalid_argument(msg + " }");
  }
  std::string root = "root";
  while (std::find(frame.histories.begin(), frame.histories.end(), root) !=
         frame.histories.end())
    root += "_";
  semantics::ModelData d;
  d.moments.push_back(root);
  for (const auto& l : frame.histories) d.moments.push_back(l);
  for (const auto& l : frame.histories) d.order.emplace_back(root, l);
  for (const auto& [ag, cells] : frame.partitions) d.agents.push_back(ag);
  std::sort(d.agents.begin(), d.agents.end());
  auto hist_name = [&](int h) { return root + ">" + frame.histories[static_cast<std::size_t>(h)]; };
  for (const auto& [ag, cells] : frame.partitions) {
    std::vector<std::vector<std::string>> named;
    for (const auto& cell : cells) {
      std::vector<std::string> c;
      for (int h : cell) c.push_back(hist_name(h));
      named.push_back(std::move(c));
    }
    d.choice[root][ag] = std::move(named);
    for (int h = 0; h < static_cast<int>(frame.histories.size()); ++h)
      d.choice[frame.histories[static_cast<std::size_t>(h)]][ag] = {{hist_name(h)}};
  }
  for (int h = 0; h < static_cast<int>(frame.histories.size()); ++h)
    for (const auto& var : frame.valuation[static_cast<std::size_t>(h)])
      d.valuation.push_back({var, root, hist_name(h)});
  semantics::Model model = semantics::Model::build(std::move(d));
  if (!model.validate().empty())
    throw std::logic_error("frame lift produced an invalid model");
  return model;
}

SatResult sat_search(const Formula& f, int max_histories,
                     const SearchOptions& opts) {
  if (max_histories < 1)
    throw std::invalid_argument("history bound must be at least 1");
  Compiled c = compile(f);
  const int n_vars = static_cast<int>(c.vars.size());
  check_search_size(max_histories, n_vars);

  for (int k = 1; k <= max_histories; ++k) {
    bool prune = opts.prune_isomorphic && k <= kMaxPruneHistories;
    auto perms = prune ? permutations(k) : std::vector<Perm>{};
    auto tuples = admissible_tuples(k, c.agents.size(), perms, prune);
    const std::uint64_t n_vals = std::uint64_t{1} << (n_vars * k);
    if (!tuples.empty() &&
        tuples.size() > UINT64_MAX / n_vals / static_cast<std::uint64_t>(k) / 2)
      throw std::invalid_argument("search space too large at " +
                                  std::to_string(k) + " histories");
    const Mask full = (Mask{1} << k) - 1;
    const std::uint64_t none = UINT64_MAX;
    std::atomic<std::uint64_t> best{none};  // packed (tuple, valuation, history)

    auto scan_tuple = [&](std::size_t t, std::vector<Mask>& scratch) {
      const std::uint64_t base = t * n_vals * static_cast<std::uint64_t>(k);
      if (base >= best.load(std::memory_order_relaxed)) return;
      for (std::uint64_t val = 0; val < n_vals; ++val) {
        std::uint64_t at = base + val * static_cast<std::uint64_t>(k);
        if (at >= best.load(std::memory_order_relaxed)) return;
        auto masks = decode_valuation(val, k, n_vars);
        if (!valuation_canonical(masks, tuples[t], perms, prune)) continue;
        auto vm = var_masks_of(masks, n_vars);
        Mask sat = eval_compiled(c, vm, tuples[t].cells, full, scratch);
        if (sat == 0) continue;
        std::uint64_t found = at + static_cast<std::uint64_t>(std::countr_zero(sat));
        std::uint64_t cur = best.load(std::memory_order_relaxed);
        while (found < cur &&
               !best.compare_exchange_weak(cur, found, std::memory_order_relaxed)) {
        }
        return;  // later valuations in this tuple cannot beat `found`
      }
    };

#ifdef _OPENMP
    if (opts.workers > 1) {
#pragma omp parallel num_threads(opts.workers)
      {
        std::vector<Mask> scratch;
#pragma omp for schedule(dynamic, 4)
        for (std::int64_t t = 0; t < static_cast<std::int64_t>(tuples.size()); ++t)
          scan_tuple(static_cast<std::size_t>(t), scratch);
      }
    } else
#endif
    {
      std::vector<Mask> scratch;
      for (std::size_t t = 0; t < tuples.size(); ++t) {
        scan_tuple(t, scratch);
        if (best.load() != none) break;  // serial order is already minimal
      }
    }

    std::uint64_t found = best.load();
    if (found != none) {
      std::uint64_t t = found / (n_vals * static_cast<std::uint64_t>(k));
      std::uint64_t rest = found % (n_vals * static_cast<std::uint64_t>(k));
      std::uint64_t val = rest / static_cast<std::uint64_t>(k);
      int h = static_cast<int>(rest % static_cast<std::uint64_t>(k));
      auto masks = decode_valuation(val, k, n_vars);
      ChoiceFrame frame = materialize(k, c, tuples[static_cast<std::size_t>(t)], masks);
      recheck_sat_witness(f, frame, h);
      return {std::move(frame), h, max_histories};
    }
  }
  return {std::nullopt, -1, max_histories};
}

SatResult sat_search_reference(const Formula& f, int max_histories,
                               bool prune_isomorphic) {
  if (max_histories < 1)
    throw std::invalid_argument("history bound must be at least 1");
  Compiled c = compile(f);
  const int n_vars = static_cast<int>(c.vars.size());
  check_search_size(max_histories, n_vars);

  for (int k = 1; k <= max_histories; ++k) {
    bool prune = prune_isomorphic && k <= kMaxPruneHistories;
    auto perms = prune ? permutations(k) : std::vector<Perm>{};
    auto tuples = admissible_tuples(k, c.agents.size(), perms, prune);
    const std::uint64_t n_vals = std::uint64_t{1} << (n_vars * k);
    for (const auto& tuple : tuples) {
      for (std::uint64_t val = 0; val < n_vals; ++val) {
        auto masks = decode_valuation(val, k, n_vars);
        if (!valuation_canonical(masks, tuple, perms, prune)) continue;
        ChoiceFrame frame = materialize(k, c, tuple, masks);
        for (int h = 0; h < k; ++h) {
          if (frame_eval(frame, h, f)) {
            recheck_sat_witness(f, frame, h);
            return {std::move(frame), h, max_histories};
          }
        }
      }
    }
  }
  return {std::nullopt, -1, max_histories};
}

ValidityResult validity_up_to(const Formula& f, int bound,
                              const SearchOptions& opts) {
  SatResult sat = sat_search(Formula::neg(f), bound, opts);
  if (!sat.satisfiable()) return {std::nullopt, -1, bound};
  semantics::Model model = to_model(*sat.frame);
  std::string root = model.moments().front();
  std::string hist = root + ">" + sat.frame->histories[static_cast<std::size_t>(sat.history)];
  if (model.satisfies(root, hist, f))
    throw std::logic_error("countermodel failed the model-checker re-check");
  return {std::move(sat.frame), sat.history, bound};
}

ChoiceFrame frame_from_json(const nlohmann::json& j) {
  ChoiceFrame f;
  for (const auto& h : j.at("histories")) f.histories.push_back(h.get<std::string>());
  auto index_of = [&](const std::string& name) {
    auto it = std::find(f.histories.begin(), f.histories.end(), name);
    if (it == f.histories.end())
      throw std::runtime_error("unknown history in frame file: " + name);
    return static_cast<int>(it - f.histories.begin());
  };
  if (j.contains("partitions"))
    for (const auto& [ag, cells] : j.at("partitions").items()) {
      std::vector<std::vector<int>> cs;
      for (const auto& cell : cells) {
        std::vector<int> c;
        for (const auto& h : cell) c.push_back(index_of(h.get<std::string>()));
        cs.push_back(std::move(c));
      }
      f.partitions[static_cast<Agent>(std::stoul(ag))] = std::move(cs);
    }
  f.valuation.resize(f.histories.size());
  if (j.contains("valuation"))
    for (const auto& [h, vars] : j.at("valuation").items()) {
      int idx = index_of(h);
      for (const auto& v : vars)
        f.valuation[static_cast<std::size_t>(idx)].insert(v.get<std::string>());
    }
  return f;
}

nlohmann::ordered_json frame_to_json(const ChoiceFrame& frame) {
  nlohmann::ordered_json j;
  j["histories"] = frame.histories;
  auto parts = nlohmann::ordered_json::object();
  for (const auto& [ag, cells] : frame.partitions) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& cell : cells) {
      auto c = nlohmann::ordered_json::array();
      for (int h : cell) c.push_back(frame.histories[static_cast<std::size_t>(h)]);
      arr.push_back(c);
    }
    parts[std::to_string(ag)] = arr;
  }
  j["partitions"] = parts;
  auto val = nlohmann::ordered_json::object();
  for (std::size_t h = 0; h < frame.valuation.size(); ++h)
    val[frame.histories[h]] = frame.valuation[h];
  j["valuation"] = val;
  return j;
}

}  // namespace stit::frames
