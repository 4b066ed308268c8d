#include "stit/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace stit {

namespace {

bool is_binary(Op op) {
  return op == Op::implies || op == Op::conj || op == Op::disj;
}

bool is_leaf(Op op) {
  return op == Op::var || op == Op::bottom || op == Op::top;
}

}  // namespace

Formula Formula::var(std::string name) {
  auto n = std::make_shared<Node>();
  n->op = Op::var;
  n->name = std::move(name);
  return Formula(std::move(n));
}

Formula Formula::bottom() {
  auto n = std::make_shared<Node>();
  n->op = Op::bottom;
  return Formula(std::move(n));
}

Formula Formula::top() {
  auto n = std::make_shared<Node>();
  n->op = Op::top;
  return Formula(std::move(n));
}

Formula Formula::unary(Op op, Agent ag, Formula a) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->ag = ag;
  n->a = std::move(a.node_);
  return Formula(std::move(n));
}

Formula Formula::binary(Op op, Formula a, Formula b) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a.node_);
  n->b = std::move(b.node_);
  return Formula(std::move(n));
}

Formula Formula::implies(Formula a, Formula b) {
  return binary(Op::implies, std::move(a), std::move(b));
}
Formula Formula::neg(Formula a) { return unary(Op::neg, 0, std::move(a)); }
Formula Formula::conj(Formula a, Formula b) {
  return binary(Op::conj, std::move(a), std::move(b));
}
Formula Formula::disj(Formula a, Formula b) {
  return binary(Op::disj, std::move(a), std::move(b));
}
Formula Formula::box(Formula a) { return unary(Op::box, 0, std::move(a)); }
Formula Formula::diamond(Formula a) {
  return unary(Op::diamond, 0, std::move(a));
}
Formula Formula::stit(Agent j, Formula a) {
  if (j == 0) throw std::invalid_argument("agent ids start at 1");
  return unary(Op::stit, j, std::move(a));
}
Formula Formula::stit_dual(Agent j, Formula a) {
  if (j == 0) throw std::invalid_argument("agent ids start at 1");
  return unary(Op::stit_dual, j, std::move(a));
}
Formula Formula::delib_stit(Agent j, Formula a) {
  if (j == 0) throw std::invalid_argument("agent ids start at 1");
  return unary(Op::delib_stit, j, std::move(a));
}

const std::string& Formula::var_name() const {
  if (node_->op != Op::var) throw std::logic_error("var_name on non-variable");
  return node_->name;
}

Agent Formula::agent() const {
  switch (node_->op) {
    case Op::stit:
    case Op::stit_dual:
    case Op::delib_stit:
      return node_->ag;
    default:
      throw std::logic_error("agent on non-action node");
  }
}

Formula Formula::lhs() const {
  if (!node_->a) throw std::logic_error("lhs on leaf node");
  return Formula(node_->a);
}

Formula Formula::rhs() const {
  if (!node_->b) throw std::logic_error("rhs on non-binary node");
  return Formula(node_->b);
}

bool Formula::is_core() const {
  switch (op()) {
    case Op::var:
    case Op::bottom:
      return true;
    case Op::implies:
      return lhs().is_core() && rhs().is_core();
    case Op::box:
    case Op::stit:
      return body().is_core();
    default:
      return false;
  }
}

Formula Formula::desugared() const {
  switch (op()) {
    case Op::var:
    case Op::bottom:
      return *this;
    case Op::implies:
      return implies(lhs().desugared(), rhs().desugared());
    case Op::box:
      return box(body().desugared());
    case Op::stit:
      return stit(agent(), body().desugared());
    case Op::top:
      return implies(bottom(), bottom());
    case Op::neg:
      return implies(body().desugared(), bottom());
    case Op::conj: {
      // A & B  =  ~(A -> ~B)
      Formula a = lhs().desugared();
      Formula b = rhs().desugared();
      return implies(implies(a, implies(b, bottom())), bottom());
    }
    case Op::disj:
      return implies(implies(lhs().desugared(), bottom()), rhs().desugared());
    case Op::diamond:
      return implies(box(implies(body().desugared(), bottom())), bottom());
    case Op::stit_dual:
      return implies(stit(agent(), implies(body().desugared(), bottom())),
                     bottom());
    case Op::delib_stit: {
      Formula a = body();
      return conj(stit(agent(), a), neg(box(a))).desugared();
    }
  }
  throw std::logic_error("unreachable");
}

int compare(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return 0;
  Op oa = a.op(), ob = b.op();
  if (oa != ob) return oa < ob ? -1 : 1;
  if (oa == Op::var) {
    int c = a.var_name().compare(b.var_name());
    return c < 0 ? -1 : c > 0 ? 1 : 0;
  }
  if (a.node_->ag != b.node_->ag) return a.node_->ag < b.node_->ag ? -1 : 1;
  if (is_leaf(oa)) return 0;
  int c = compare(a.lhs(), b.lhs());
  if (c != 0) return c;
  if (is_binary(oa)) return compare(a.rhs(), b.rhs());
  return 0;
}

bool Formula::operator==(const Formula& other) const {
  return compare(*this, other) == 0;
}

bool Formula::operator<(const Formula& other) const {
  return compare(*this, other) < 0;
}

std::size_t Formula::node_count() const {
  Op o = op();
  if (is_leaf(o)) return 1;
  if (is_binary(o)) return 1 + lhs().node_count() + rhs().node_count();
  return 1 + body().node_count();
}

Formula conj_all(const std::vector<Formula>& xs) {
  if (xs.empty()) return Formula::top();
  Formula acc = xs.front();
  for (std::size_t i = 1; i < xs.size(); ++i)
    acc = Formula::conj(acc, xs[i]);
  return acc;
}

namespace {

void collect_vocab(const Formula& f, Vocabulary& v) {
  switch (f.op()) {
    case Op::var:
      v.vars.insert(f.var_name());
      return;
    case Op::bottom:
    case Op::top:
      return;
    case Op::stit:
    case Op::stit_dual:
    case Op::delib_stit:
      v.agents.insert(f.agent());
      collect_vocab(f.body(), v);
      return;
    case Op::implies:
    case Op::conj:
    case Op::disj:
      collect_vocab(f.lhs(), v);
      collect_vocab(f.rhs(), v);
      return;
    case Op::box:
    case Op::diamond:
    case Op::neg:
      collect_vocab(f.body(), v);
      return;
  }
}

}  // namespace

Vocabulary vocabulary(const Formula& f) {
  Vocabulary v;
  collect_vocab(f, v);
  return v;
}

bool action_free(const Formula& f) { return vocabulary(f).agents.empty(); }

unsigned modal_depth(const Formula& f) {
  switch (f.op()) {
    case Op::var:
    case Op::bottom:
    case Op::top:
      return 0;
    case Op::implies:
    case Op::conj:
    case Op::disj:
      return std::max(modal_depth(f.lhs()), modal_depth(f.rhs()));
    case Op::neg:
      return modal_depth(f.body());
    case Op::box:
    case Op::diamond:
    case Op::stit:
    case Op::stit_dual:
      return 1 + modal_depth(f.body());
    case Op::delib_stit:
      // [j]A & ~[]A
      return 1 + modal_depth(f.body());
  }
  throw std::logic_error("unreachable");
}

std::vector<Formula> project_boxed(const std::vector<Formula>& fs) {
  std::vector<Formula> out;
  for (const auto& f : fs)
    if (f.desugared().op() == Op::box) out.push_back(f);
  return out;
}

std::vector<Formula> project_stit(const std::vector<Formula>& fs, Agent j) {
  std::vector<Formula> out;
  for (const auto& f : fs) {
    Formula d = f.desugared();
    if (d.op() == Op::stit && d.agent() == j) out.push_back(f);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

struct Token {
  enum class Kind {
    arrow,
    pipe,
    amp,
    tilde,
    box,
    diamond,
    stit,       // [n]
    stit_dual,  // <n>
    delib,      // [d:n]
    lparen,
    rparen,
    ident,
    kw_false,
    kw_true,
    end,
  };
  Kind kind;
  std::string text;
  Agent agent = 0;
  std::size_t pos = 0;
};

const char* token_name(Token::Kind k) {
  switch (k) {
    case Token::Kind::arrow: return "'->'";
    case Token::Kind::pipe: return "'|'";
    case Token::Kind::amp: return "'&'";
    case Token::Kind::tilde: return "'~'";
    case Token::Kind::box: return "'[]'";
    case Token::Kind::diamond: return "'<>'";
    case Token::Kind::stit: return "'[n]'";
    case Token::Kind::stit_dual: return "'<n>'";
    case Token::Kind::delib: return "'[d:n]'";
    case Token::Kind::lparen: return "'('";
    case Token::Kind::rparen: return "')'";
    case Token::Kind::ident: return "identifier";
    case Token::Kind::kw_false: return "'false'";
    case Token::Kind::kw_true: return "'true'";
    case Token::Kind::end: return "end of input";
  }
  return "?";
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t = next();
      out.push_back(t);
      if (t.kind == Token::Kind::end) return out;
    }
  }

 private:
  void skip_space() {
    while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_])))
      ++i_;
  }

  [[noreturn]] void fail(std::size_t pos, const std::string& expected) {
    std::string found = pos < text_.size()
                            ? "'" + std::string(1, text_[pos]) + "'"
                            : "end of input";
    throw ParseError(pos, expected, found);
  }

  Agent read_nat(const char* where) {
    std::size_t start = i_;
    if (i_ >= text_.size() || text_[i_] < '1' || text_[i_] > '9')
      fail(i_, std::string("agent index (digit 1-9) ") + where);
    unsigned long v = 0;
    while (i_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i_]))) {
      v = v * 10 + static_cast<unsigned long>(text_[i_] - '0');
      if (v > 1000000) fail(start, "agent index below 1000000");
      ++i_;
    }
    return static_cast<Agent>(v);
  }

  Token next() {
    std::size_t pos = i_;
    if (i_ >= text_.size()) return {Token::Kind::end, "", 0, pos};
    char c = text_[i_];
    switch (c) {
      case '-':
        if (i_ + 1 < text_.size() && text_[i_ + 1] == '>') {
          i_ += 2;
          return {Token::Kind::arrow, "->", 0, pos};
        }
        fail(pos, "'->'");
      case '|': ++i_; return {Token::Kind::pipe, "|", 0, pos};
      case '&': ++i_; return {Token::Kind::amp, "&", 0, pos};
      case '~': ++i_; return {Token::Kind::tilde, "~", 0, pos};
      case '(': ++i_; return {Token::Kind::lparen, "(", 0, pos};
      case ')': ++i_; return {Token::Kind::rparen, ")", 0, pos};
      case '[': {
        ++i_;
        if (i_ < text_.size() && text_[i_] == ']') {
          ++i_;
          return {Token::Kind::box, "[]", 0, pos};
        }
        if (i_ < text_.size() && text_[i_] == 'd') {
          ++i_;
          if (i_ >= text_.size() || text_[i_] != ':')
            fail(i_, "':' after '[d'");
          ++i_;
          Agent j = read_nat("in '[d:n]'");
          if (i_ >= text_.size() || text_[i_] != ']') fail(i_, "']'");
          ++i_;
          return {Token::Kind::delib, "[d:n]", j, pos};
        }
        Agent j = read_nat("or ']' after '['");
        if (i_ >= text_.size() || text_[i_] != ']') fail(i_, "']'");
        ++i_;
        return {Token::Kind::stit, "[n]", j, pos};
      }
      case '<': {
        ++i_;
        if (i_ < text_.size() && text_[i_] == '>') {
          ++i_;
          return {Token::Kind::diamond, "<>", 0, pos};
        }
        Agent j = read_nat("or '>' after '<'");
        if (i_ >= text_.size() || text_[i_] != '>') fail(i_, "'>'");
        ++i_;
        return {Token::Kind::stit_dual, "<n>", j, pos};
      }
      default:
        break;
    }
    if (c >= 'a' && c <= 'z') {
      std::size_t start = i_;
      while (i_ < text_.size() &&
             ((text_[i_] >= 'a' && text_[i_] <= 'z') ||
              (text_[i_] >= '0' && text_[i_] <= '9') || text_[i_] == '_'))
        ++i_;
      std::string word(text_.substr(start, i_ - start));
      if (word == "false") return {Token::Kind::kw_false, word, 0, pos};
      if (word == "true") return {Token::Kind::kw_true, word, 0, pos};
      return {Token::Kind::ident, word, 0, pos};
    }
    fail(pos, "a formula token");
  }

  std::string_view text_;
  std::size_t i_ = 0;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Formula run() {
    Formula f = impl();
    expect(Token::Kind::end);
    return f;
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  Token take() { return toks_[i_++]; }

  [[noreturn]] void fail(const std::string& expected) {
    const Token& t = peek();
    std::string found =
        t.kind == Token::Kind::end ? "end of input" : "'" + t.text + "'";
    throw ParseError(t.pos, expected, found);
  }

  void expect(Token::Kind k) {
    if (peek().kind != k) fail(token_name(k));
    ++i_;
  }

  Formula impl() {
    Formula left = disj();
    if (peek().kind == Token::Kind::arrow) {
      take();
      return Formula::implies(std::move(left), impl());
    }
    return left;
  }

  Formula disj() {
    Formula acc = conj();
    while (peek().kind == Token::Kind::pipe) {
      take();
      acc = Formula::disj(std::move(acc), conj());
    }
    return acc;
  }

  Formula conj() {
    Formula acc = unary();
    while (peek().kind == Token::Kind::amp) {
      take();
      acc = Formula::conj(std::move(acc), unary());
    }
    return acc;
  }

  Formula unary() {
    switch (peek().kind) {
      case Token::Kind::tilde: take(); return Formula::neg(unary());
      case Token::Kind::box: take(); return Formula::box(unary());
      case Token::Kind::diamond: take(); return Formula::diamond(unary());
      case Token::Kind::stit: {
        Agent j = take().agent;
        return Formula::stit(j, unary());
      }
      case Token::Kind::stit_dual: {
        Agent j = take().agent;
        return Formula::stit_dual(j, unary());
      }
      case Token::Kind::delib: {
        Agent j = take().agent;
        return Formula::delib_stit(j, unary());
      }
      default:
        return atom();
    }
  }

  Formula atom() {
    switch (peek().kind) {
      case Token::Kind::kw_false: take(); return Formula::bottom();
      case Token::Kind::kw_true: take(); return Formula::top();
      case Token::Kind::ident: return Formula::var(take().text);
      case Token::Kind::lparen: {
        take();
        Formula f = impl();
        expect(Token::Kind::rparen);
        return f;
      }
      default:
        fail("a formula");
    }
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

}  // namespace

ParseError::ParseError(std::size_t position_, const std::string& expected_,
                       const std::string& found)
    : std::runtime_error("syntax error at position " +
                         std::to_string(position_) + ": expected " +
                         expected_ + ", found " + found),
      position(position_),
      expected(expected_) {}

Formula parse_formula(std::string_view text) {
  return Parser(Lexer(text).run()).run();
}

// ---------------------------------------------------------------------------
// Printer

namespace {

// Precedence levels: 0 implication, 1 disjunction, 2 conjunction, 3 unary,
// 4 atom. A node is parenthesized when its level is below the context level.
int level(Op op) {
  switch (op) {
    case Op::implies: return 0;
    case Op::disj: return 1;
    case Op::conj: return 2;
    case Op::var:
    case Op::bottom:
    case Op::top:
      return 4;
    default:
      return 3;
  }
}

void print_rec(const Formula& f, int context, std::ostream& os) {
  int lv = level(f.op());
  bool parens = lv < context;
  if (parens) os << '(';
  switch (f.op()) {
    case Op::var: os << f.var_name(); break;
    case Op::bottom: os << "false"; break;
    case Op::top: os << "true"; break;
    case Op::implies:
      print_rec(f.lhs(), 1, os);
      os << " -> ";
      print_rec(f.rhs(), 0, os);
      break;
    case Op::disj:
      print_rec(f.lhs(), 1, os);
      os << " | ";
      print_rec(f.rhs(), 2, os);
      break;
    case Op::conj:
      print_rec(f.lhs(), 2, os);
      os << " & ";
      print_rec(f.rhs(), 3, os);
      break;
    case Op::neg:
      os << '~';
      print_rec(f.body(), 3, os);
      break;
    case Op::box:
      os << "[]";
      print_rec(f.body(), 3, os);
      break;
    case Op::diamond:
      os << "<>";
      print_rec(f.body(), 3, os);
      break;
    case Op::stit:
      os << '[' << f.agent() << ']';
      print_rec(f.body(), 3, os);
      break;
    case Op::stit_dual:
      os << '<' << f.agent() << '>';
      print_rec(f.body(), 3, os);
      break;
    case Op::delib_stit:
      os << "[d:" << f.agent() << ']';
      print_rec(f.body(), 3, os);
      break;
  }
  if (parens) os << ')';
}

}  // namespace

std::string print_formula(const Formula& f) {
  std::ostringstream os;
  print_rec(f, 0, os);
  return os.str();
}

}  // namespace stit
