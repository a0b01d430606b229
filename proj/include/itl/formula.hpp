#ifndef ITL_FORMULA_HPP
#define ITL_FORMULA_HPP

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace itl {

// Allen relations: meets, met-by, begun-by, begins.
enum class Rel : unsigned char { A, Abar, B, Bbar };

constexpr const char* rel_name(Rel r) {
  switch (r) {
    case Rel::A: return "A";
    case Rel::Abar: return "Ab";
    case Rel::B: return "B";
    case Rel::Bbar: return "Bb";
  }
  return "?";
}

enum class Kind : unsigned char {
  Prop,
  Sim,
  TrueConst,
  FalseConst,
  Not,
  Or,
  And,
  Diamond,
  Box,
};

// Immutable formula AST with shared subterms. Value type; cheap to copy.
class Formula {
 public:
  Formula() = default;

  static Formula prop(std::string name);
  static Formula sim();
  static Formula tt();
  static Formula ff();
  static Formula lnot(Formula f);
  static Formula lor(Formula a, Formula b);
  static Formula land(Formula a, Formula b);
  static Formula dia(Rel r, Formula f);
  static Formula box(Rel r, Formula f);
  // a -> b, desugared to !a | b.
  static Formula implies(Formula a, Formula b);

  bool valid() const { return node_ != nullptr; }
  Kind kind() const { return node_->kind; }
  const std::string& name() const { return node_->name; }
  Rel rel() const { return node_->rel; }
  Formula child() const { return Formula(node_->lhs); }  // Not/Diamond/Box
  Formula left() const { return Formula(node_->lhs); }
  Formula right() const { return Formula(node_->rhs); }

  bool operator==(const Formula& o) const;
  bool operator!=(const Formula& o) const { return !(*this == o); }
  bool operator<(const Formula& o) const { return key() < o.key(); }

  // Canonical compact rendering; doubles as a structural key.
  const std::string& key() const { return node_->key; }

 private:
  struct Node {
    Kind kind;
    std::string name;  // Prop
    Rel rel = Rel::A;  // Diamond/Box
    std::shared_ptr<const Node> lhs, rhs;
    std::string key;
  };

  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula make(Node n);

  std::shared_ptr<const Node> node_;
};

struct ParseError : std::runtime_error {
  ParseError(std::string msg, int line, int col)
      : std::runtime_error(std::move(msg)), line(line), col(col) {}
  int line, col;
};

// Grammar (whitespace-insensitive):
//   formula := imp
//   imp     := or ("->" imp)?
//   or      := and ("|" and)*
//   and     := un ("&" un)*
//   un      := "!" un | "<" MOD ">" un | "[" MOD "]" un | atom
//   MOD     := "A" | "Ab" | "B" | "Bb"
//   atom    := "true" | "false" | "~" | IDENT | "(" formula ")"
//   IDENT   := [a-z][a-zA-Z0-9_]*, excluding keywords
Formula parse_formula(std::string_view text);

// Rewrites to the primitive basis: And/Box/TrueConst eliminated, double
// negations dropped. FalseConst is kept as a nullary primitive (the closure
// is seeded with it). Idempotent.
Formula normalize(const Formula& f);

// Canonical printer: renders normalize(f) with minimal parentheses, so that
// parse(print(f)) is structurally normalize(f). Compact mode drops spaces
// (used for single-token ids in trace files).
std::string print_formula(const Formula& f, bool compact = false);

// Derived operators.
Formula sing();                               // [B]false, the singleton test
Formula unit_interval();                      // [B][B]false
Formula box_g(Formula f);                     // [A][A]f, universal from [0,0]
Formula diamond_g(Formula f);                 // <A><A>f
Formula box_cap(Formula f);                   // [B][A]f & [B]f
Formula diamond_cap(Formula f);               // [B]!f & <B><A>f & [B](<A>f -> [B][A]!f)
Formula psi_inj(const std::string& p, const std::string& p_sp,
                const std::string& s);
Formula psi_sur(const std::vector<std::string>& counters,
                const std::string& new_letter, const std::string& p);
Formula phi_sim_inj(const std::vector<std::string>& states);

// Letters occurring in f (Sim excluded); sorted, unique.
std::vector<std::string> letters_of(const Formula& f);
bool uses_sim(const Formula& f);
bool uses_rel(const Formula& f, Rel r);

}  // namespace itl

#endif
