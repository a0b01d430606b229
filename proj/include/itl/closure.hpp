#ifndef ITL_CLOSURE_HPP
#define ITL_CLOSURE_HPP

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "itl/bits.hpp"
#include "itl/formula.hpp"

namespace itl {

struct Fragment {
  bool a = true, abar = false, b = true, bbar = true;
  bool sim_allowed = false;

  static Fragment abb() { return {true, false, true, true, false}; }
  static Fragment abbsim() { return {true, false, true, true, true}; }
  static Fragment aabb() { return {true, true, true, true, false}; }
  static Fragment aabbsim() { return {true, true, true, true, true}; }

  bool has(Rel r) const {
    switch (r) {
      case Rel::A: return a;
      case Rel::Abar: return abar;
      case Rel::B: return b;
      case Rel::Bbar: return bbar;
    }
    return false;
  }
  bool conforms(const Formula& f) const;
  std::string name() const;
};

// Smallest predefined fragment covering the formula.
Fragment infer_fragment(const Formula& f);

struct FragmentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using ItemId = int;
constexpr ItemId kNoItem = -1;

// A signed reference to an unsigned representative: (id, neg) stands for
// item(id) when !neg and for its negation otherwise.
struct SignedId {
  ItemId id = kNoItem;
  bool neg = false;
  int index() const { return id * 2 + (neg ? 1 : 0); }
  SignedId negated() const { return {id, !neg}; }
  bool operator==(const SignedId& o) const { return id == o.id && neg == o.neg; }
};

// Indexed closure / extended closure of a formula under a fragment.
//
// Items are normalized formulas that are not Not-rooted; each stands for
// itself and its negation. The closure always holds the seeded members
// false and [B]false, plus ~ when the fragment admits it, so that atom
// conditions on singleton types are never vacuous.
class ClosureTable {
 public:
  ClosureTable(const Formula& phi, Fragment frag);

  const Fragment& fragment() const { return frag_; }
  const Formula& phi_normalized() const { return phi_; }
  SignedId phi_ref() const { return phi_ref_; }

  int item_count() const { return static_cast<int>(items_.size()); }
  const Formula& item(ItemId id) const { return items_[id]; }
  ItemId find(const Formula& normalized_unsigned) const;

  // Splits a normalized formula into (item, sign); adds nothing.
  std::optional<SignedId> signed_of(const Formula& normalized) const;

  Kind item_kind(ItemId id) const { return items_[id].kind(); }
  bool in_closure(ItemId id) const { return in_closure_[id]; }
  bool is_diamond_item(ItemId id) const { return item_kind(id) == Kind::Diamond; }

  const std::vector<ItemId>& closure_ids() const { return closure_ids_; }
  const std::vector<ItemId>& teclosure_ids() const { return teclosure_ids_; }
  const std::vector<ItemId>& sigma_ids() const { return sigma_ids_; }
  const std::vector<ItemId>& sigma_t_ids() const { return sigma_t_ids_; }
  const Bits& sigma_t_mask() const { return sigma_t_mask_; }

  ItemId false_item() const { return false_item_; }
  // Unsigned representative of [B]false, i.e. the item <B>!false.
  ItemId pi_item() const { return pi_item_; }
  ItemId sim_item() const { return sim_item_; }  // kNoItem when ~ not admitted

  // Or items: bit value is determined by the children's signed bits.
  struct OrInfo {
    ItemId item;
    SignedId lhs, rhs;
  };
  const std::vector<OrInfo>& or_items() const { return or_items_; }

  struct DiamondInfo {
    ItemId item;
    Rel rel;
    SignedId child;
  };
  const std::vector<DiamondInfo>& diamond_items() const { return diamond_items_; }

  // <R>chi for a signed closure member chi, or kNoItem.
  ItemId diamond_of(Rel r, SignedId chi) const {
    const auto& m = prefix_[static_cast<int>(r)];
    auto it = m.find(chi.index());
    return it == m.end() ? kNoItem : it->second;
  }

  // Modalities used when extending the closure (fragment & {A,B,Bbar} plus
  // whatever the formula itself uses).
  const std::vector<Rel>& eclosure_rels() const { return ecl_rels_; }

  // All signed closure members (both signs of every closure item).
  const std::vector<SignedId>& closure_signed() const { return closure_signed_; }
  int signed_universe() const { return item_count() * 2; }

  std::string describe_signed(SignedId s, bool compact = true) const;

 private:
  SignedId add_signed(const Formula& normalized);
  ItemId add_item(const Formula& unsigned_normalized);
  void add_subformulas(const Formula& normalized);

  Fragment frag_;
  Formula phi_;
  SignedId phi_ref_;
  std::vector<Formula> items_;
  std::map<std::string, ItemId> index_;
  std::vector<bool> in_closure_;
  std::vector<ItemId> closure_ids_, teclosure_ids_, sigma_ids_, sigma_t_ids_;
  Bits sigma_t_mask_;
  ItemId false_item_ = kNoItem, pi_item_ = kNoItem, sim_item_ = kNoItem;
  std::vector<OrInfo> or_items_;
  std::vector<DiamondInfo> diamond_items_;
  std::array<std::map<int, ItemId>, 4> prefix_;
  std::vector<Rel> ecl_rels_;
  std::vector<SignedId> closure_signed_;
};

}  // namespace itl

#endif
