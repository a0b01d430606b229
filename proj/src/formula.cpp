#include "itl/formula.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace itl {

Formula Formula::make(Node n) {
  return Formula(std::make_shared<const Node>(std::move(n)));
}

namespace {

// Precedence for printing: atoms bind tightest, then unary, & , | , ->.
enum Prec { PrecImp = 0, PrecOr = 1, PrecAnd = 2, PrecUn = 3, PrecAtom = 4 };

int prec_of(Kind k) {
  switch (k) {
    case Kind::Or: return PrecOr;
    case Kind::And: return PrecAnd;
    case Kind::Not:
    case Kind::Diamond:
    case Kind::Box: return PrecUn;
    default: return PrecAtom;
  }
}

void render(const Formula& f, int parent_prec, bool compact, std::string& out) {
  const char* sp = compact ? "" : " ";
  int p = prec_of(f.kind());
  bool paren = p < parent_prec;
  if (paren) out += '(';
  switch (f.kind()) {
    case Kind::Prop: out += f.name(); break;
    case Kind::Sim: out += '~'; break;
    case Kind::TrueConst: out += "true"; break;
    case Kind::FalseConst: out += "false"; break;
    case Kind::Not:
      out += '!';
      render(f.child(), PrecUn, compact, out);
      break;
    case Kind::Diamond:
      out += '<';
      out += rel_name(f.rel());
      out += '>';
      out += sp;
      render(f.child(), PrecUn, compact, out);
      break;
    case Kind::Box:
      out += '[';
      out += rel_name(f.rel());
      out += ']';
      out += sp;
      render(f.child(), PrecUn, compact, out);
      break;
    case Kind::Or:
      render(f.left(), PrecOr, compact, out);
      out += sp;
      out += '|';
      out += sp;
      // right operand parenthesized when it is itself an Or, to keep shape
      render(f.right(), PrecOr + 1, compact, out);
      break;
    case Kind::And:
      render(f.left(), PrecAnd, compact, out);
      out += sp;
      out += '&';
      out += sp;
      render(f.right(), PrecAnd + 1, compact, out);
      break;
  }
  if (paren) out += ')';
}

std::string render_key(const Formula& f) {
  std::string s;
  render(f, PrecImp, /*compact=*/true, s);
  return s;
}

}  // namespace

Formula Formula::prop(std::string name) {
  Node n;
  n.kind = Kind::Prop;
  n.name = std::move(name);
  n.key = n.name;
  return make(std::move(n));
}

Formula Formula::sim() {
  Node n;
  n.kind = Kind::Sim;
  n.key = "~";
  return make(std::move(n));
}

Formula Formula::tt() {
  Node n;
  n.kind = Kind::TrueConst;
  n.key = "true";
  return make(std::move(n));
}

Formula Formula::ff() {
  Node n;
  n.kind = Kind::FalseConst;
  n.key = "false";
  return make(std::move(n));
}

Formula Formula::lnot(Formula f) {
  Node n;
  n.kind = Kind::Not;
  n.lhs = f.node_;
  Formula r = make(std::move(n));
  const_cast<Node*>(r.node_.get())->key = render_key(r);
  return r;
}

Formula Formula::lor(Formula a, Formula b) {
  Node n;
  n.kind = Kind::Or;
  n.lhs = a.node_;
  n.rhs = b.node_;
  Formula r = make(std::move(n));
  const_cast<Node*>(r.node_.get())->key = render_key(r);
  return r;
}

Formula Formula::land(Formula a, Formula b) {
  Node n;
  n.kind = Kind::And;
  n.lhs = a.node_;
  n.rhs = b.node_;
  Formula r = make(std::move(n));
  const_cast<Node*>(r.node_.get())->key = render_key(r);
  return r;
}

Formula Formula::dia(Rel rel, Formula f) {
  Node n;
  n.kind = Kind::Diamond;
  n.rel = rel;
  n.lhs = f.node_;
  Formula r = make(std::move(n));
  const_cast<Node*>(r.node_.get())->key = render_key(r);
  return r;
}

Formula Formula::box(Rel rel, Formula f) {
  Node n;
  n.kind = Kind::Box;
  n.rel = rel;
  n.lhs = f.node_;
  Formula r = make(std::move(n));
  const_cast<Node*>(r.node_.get())->key = render_key(r);
  return r;
}

Formula Formula::implies(Formula a, Formula b) {
  return lor(lnot(std::move(a)), std::move(b));
}

bool Formula::operator==(const Formula& o) const {
  if (node_ == o.node_) return true;
  if (!node_ || !o.node_) return false;
  return node_->key == o.node_->key;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Formula parse() {
    Formula f = parse_imp();
    skip_ws();
    if (pos_ < text_.size()) fail("trailing input after formula");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(msg, line_, col_);
  }

  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {  // comment to end of line
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
        continue;
      }
      if (c != ' ' && c != '\t' && c != '\r' && c != '\n') break;
      advance();
    }
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      advance();
      return true;
    }
    return false;
  }

  bool eat_str(std::string_view s) {
    skip_ws();
    if (text_.substr(pos_, s.size()) == s) {
      for (std::size_t i = 0; i < s.size(); ++i) advance();
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  Formula parse_imp() {
    Formula lhs = parse_or();
    if (eat_str("->")) return Formula::implies(lhs, parse_imp());
    return lhs;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (true) {
      skip_ws();
      // careful: "->" starts with neither '|' nor '&'
      if (pos_ < text_.size() && text_[pos_] == '|') {
        advance();
        f = Formula::lor(f, parse_and());
      } else {
        return f;
      }
    }
  }

  Formula parse_and() {
    Formula f = parse_un();
    while (eat('&')) f = Formula::land(f, parse_un());
    return f;
  }

  Rel parse_mod(char close) {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_])))
      advance();
    std::string name(text_.substr(start, pos_ - start));
    if (!eat(close)) fail(std::string("expected '") + close + "' after modality name");
    if (name == "A") return Rel::A;
    if (name == "Ab") return Rel::Abar;
    if (name == "B") return Rel::B;
    if (name == "Bb") return Rel::Bbar;
    fail("unknown modality name '" + name + "'");
  }

  Formula parse_un() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '!') {
      advance();
      return Formula::lnot(parse_un());
    }
    if (c == '<') {
      advance();
      Rel r = parse_mod('>');
      return Formula::dia(r, parse_un());
    }
    if (c == '[') {
      advance();
      Rel r = parse_mod(']');
      return Formula::box(r, parse_un());
    }
    return parse_atom();
  }

  Formula parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '~') {
      advance();
      return Formula::sim();
    }
    if (c == '(') {
      advance();
      Formula f = parse_imp();
      if (!eat(')')) fail("expected ')'");
      return f;
    }
    if (std::islower(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      advance();
      while (pos_ < text_.size()) {
        char d = text_[pos_];
        if (std::isalnum(static_cast<unsigned char>(d)) || d == '_')
          advance();
        else
          break;
      }
      std::string name(text_.substr(start, pos_ - start));
      if (name == "true") return Formula::tt();
      if (name == "false") return Formula::ff();
      return Formula::prop(std::move(name));
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(text).parse(); }

// ---------------------------------------------------------------------------
// Normalization

namespace {

Formula normalize_rec(const Formula& f);

// normalize !g given already-normalized g, collapsing double negation
Formula neg_norm(const Formula& g) {
  if (g.kind() == Kind::Not) return g.child();
  return Formula::lnot(g);
}

Formula normalize_rec(const Formula& f) {
  switch (f.kind()) {
    case Kind::Prop:
    case Kind::Sim:
    case Kind::FalseConst:
      return f;
    case Kind::TrueConst:
      return Formula::lnot(Formula::ff());
    case Kind::Not:
      return neg_norm(normalize_rec(f.child()));
    case Kind::Or:
      return Formula::lor(normalize_rec(f.left()), normalize_rec(f.right()));
    case Kind::And:
      // a & b == !(!a | !b)
      return neg_norm(Formula::lor(neg_norm(normalize_rec(f.left())),
                                   neg_norm(normalize_rec(f.right()))));
    case Kind::Diamond:
      return Formula::dia(f.rel(), normalize_rec(f.child()));
    case Kind::Box:
      // [R]g == !<R>!g
      return neg_norm(Formula::dia(f.rel(), neg_norm(normalize_rec(f.child()))));
  }
  throw std::logic_error("unreachable formula kind");
}

}  // namespace

Formula normalize(const Formula& f) { return normalize_rec(f); }

std::string print_formula(const Formula& f, bool compact) {
  std::string out;
  Formula n = normalize(f);
  render(n, PrecImp, compact, out);
  return out;
}

// ---------------------------------------------------------------------------
// Derived operators

Formula sing() { return Formula::box(Rel::B, Formula::ff()); }

Formula unit_interval() {
  return Formula::box(Rel::B, Formula::box(Rel::B, Formula::ff()));
}

Formula box_g(Formula f) {
  return Formula::box(Rel::A, Formula::box(Rel::A, std::move(f)));
}

Formula diamond_g(Formula f) {
  return Formula::dia(Rel::A, Formula::dia(Rel::A, std::move(f)));
}

Formula box_cap(Formula f) {
  return Formula::land(Formula::box(Rel::B, Formula::box(Rel::A, f)),
                       Formula::box(Rel::B, f));
}

Formula diamond_cap(Formula f) {
  Formula no_prefix = Formula::box(Rel::B, Formula::lnot(f));
  Formula some_start =
      Formula::dia(Rel::B, Formula::dia(Rel::A, f));
  Formula unique_start = Formula::box(
      Rel::B, Formula::implies(Formula::dia(Rel::A, f),
                               Formula::box(Rel::B, Formula::box(Rel::A, Formula::lnot(f)))));
  return Formula::land(no_prefix, Formula::land(some_start, unique_start));
}

Formula psi_inj(const std::string& p, const std::string& p_sp,
                const std::string& s) {
  Formula pi = sing();
  Formula pv = Formula::prop(p), pspv = Formula::prop(p_sp), sv = Formula::prop(s);
  Formula c1 = Formula::implies(
      Formula::land(pv, pspv),
      Formula::box(Rel::A, Formula::implies(Formula::lnot(pi), sv)));
  Formula c2 = Formula::implies(
      Formula::land(pv, Formula::lnot(pspv)),
      Formula::box(Rel::A, Formula::implies(Formula::lnot(pi), Formula::lnot(sv))));
  return box_g(Formula::land(c1, c2));
}

Formula psi_sur(const std::vector<std::string>& counters,
                const std::string& new_letter, const std::string& p) {
  // One implication per counter letter: a counter unit that is not freshly
  // introduced must be met by a transfer interval.
  Formula acc;
  for (const auto& c : counters) {
    Formula clause = Formula::implies(
        Formula::land(Formula::prop(c), Formula::lnot(Formula::prop(new_letter))),
        Formula::dia(Rel::Abar, Formula::prop(p)));
    acc = acc.valid() ? Formula::land(acc, clause) : clause;
  }
  if (!acc.valid()) acc = Formula::tt();
  return box_g(acc);
}

Formula phi_sim_inj(const std::vector<std::string>& states) {
  Formula any_state;
  for (const auto& q : states) {
    Formula hit = Formula::dia(Rel::B, Formula::dia(Rel::A, Formula::prop(q)));
    any_state = any_state.valid() ? Formula::lor(any_state, hit) : hit;
  }
  if (!any_state.valid()) any_state = Formula::ff();
  return box_g(Formula::implies(
      Formula::land(Formula::sim(), Formula::lnot(sing())), any_state));
}

// ---------------------------------------------------------------------------
// Scans

namespace {
void scan(const Formula& f, std::set<std::string>& letters, bool& sim,
          bool rels[4]) {
  switch (f.kind()) {
    case Kind::Prop: letters.insert(f.name()); return;
    case Kind::Sim: sim = true; return;
    case Kind::TrueConst:
    case Kind::FalseConst: return;
    case Kind::Not: scan(f.child(), letters, sim, rels); return;
    case Kind::Or:
    case Kind::And:
      scan(f.left(), letters, sim, rels);
      scan(f.right(), letters, sim, rels);
      return;
    case Kind::Diamond:
    case Kind::Box:
      rels[static_cast<int>(f.rel())] = true;
      scan(f.child(), letters, sim, rels);
      return;
  }
}
}  // namespace

std::vector<std::string> letters_of(const Formula& f) {
  std::set<std::string> s;
  bool sim = false;
  bool rels[4] = {};
  scan(f, s, sim, rels);
  return {s.begin(), s.end()};
}

bool uses_sim(const Formula& f) {
  std::set<std::string> s;
  bool sim = false;
  bool rels[4] = {};
  scan(f, s, sim, rels);
  return sim;
}

bool uses_rel(const Formula& f, Rel r) {
  std::set<std::string> s;
  bool sim = false;
  bool rels[4] = {};
  scan(f, s, sim, rels);
  return rels[static_cast<int>(r)];
}

}  // namespace itl
