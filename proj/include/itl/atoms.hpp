#ifndef ITL_ATOMS_HPP
#define ITL_ATOMS_HPP

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "itl/bits.hpp"
#include "itl/closure.hpp"

namespace itl {

// A maximal locally consistent subset of the extended closure, stored as a
// bitset over unsigned representatives (bit set = positive form present).
// The dummy atom labels compass points below the diagonal; it has empty
// observables and requests.
class Atom {
 public:
  Atom() : dummy_(true) {}
  explicit Atom(Bits bits) : bits_(std::move(bits)), dummy_(false) {}
  static Atom dummy() { return Atom(); }

  bool is_dummy() const { return dummy_; }
  const Bits& bits() const { return bits_; }
  bool has(ItemId id) const { return !dummy_ && bits_.get(id); }
  bool holds(SignedId s) const { return !dummy_ && (bits_.get(s.id) != s.neg); }

  // contains [B]false
  bool is_pi(const ClosureTable& t) const {
    return !dummy_ && !bits_.get(t.pi_item());
  }

  bool operator==(const Atom& o) const {
    return dummy_ == o.dummy_ && bits_ == o.bits_;
  }

 private:
  Bits bits_;
  bool dummy_;
};

// Signed sets (over 2*item_count indices) of observables and requests.
Bits obs(const ClosureTable& t, const Atom& f);
Bits req(const ClosureTable& t, const Atom& f, Rel r);  // r in {A, B, Bbar}

// obs(F) | req_B(F) | req_Bbar(F): the union an A-predecessor's requests
// must equal.
Bits a_profile(const ClosureTable& t, const Atom& f);

// F ->_Bbar G  and  F ->_A G.
bool rel_bbar(const ClosureTable& t, const Atom& f, const Atom& g);
bool rel_a(const ClosureTable& t, const Atom& f, const Atom& g);

// The atom conditions over a raw bitset:
//   (i)  one of psi / !psi per representative   (structural)
//   (ii) disjunction coherence on every Or member
//   (iii)/(iv) for pi-atoms: <A>psi in F iff psi in F or <Bbar>psi in F,
//        for closure psi (both signs)
//   (v)  pi-atoms contain ~ when the fragment admits it
// plus: false is never a member.
bool is_atom(const ClosureTable& t, const Bits& bits);

// The unique atom whose Sigma^T projection equals sigma, if the bottom-up
// completion satisfies the conditions.
std::optional<Atom> f_phi(const ClosureTable& t, const Bits& sigma_t_subset);
std::optional<Atom> f_phi(const ClosureTable& t, const std::vector<ItemId>& sigma);

struct AtomEnumeration {
  std::vector<Atom> atoms;
  bool complete = true;  // false when the limit cut the output short
};

// All atoms, by constraint propagation over the free coordinates (never a
// raw scan over all bitsets). Canonical ascending order.
AtomEnumeration enumerate_atoms(const ClosureTable& t, std::size_t limit);

// Number of atoms without materializing them; saturates at cap.
std::uint64_t count_atoms(const ClosureTable& t,
                          std::uint64_t cap = UINT64_MAX);

// Intern table so atoms can be referred to by small ids.
class AtomRegistry {
 public:
  int intern(const Atom& a);
  const Atom& at(int id) const { return atoms_[id]; }
  int size() const { return static_cast<int>(atoms_.size()); }

 private:
  std::vector<Atom> atoms_;
  std::unordered_map<Bits, int, BitsHash> index_;
};

}  // namespace itl

#endif
