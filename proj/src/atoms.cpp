#include "itl/atoms.hpp"

#include <unordered_map>

namespace itl {

Bits obs(const ClosureTable& t, const Atom& f) {
  Bits out(t.signed_universe());
  if (f.is_dummy()) return out;
  for (ItemId id : t.closure_ids())
    out.set(SignedId{id, !f.has(id)}.index());
  return out;
}

Bits req(const ClosureTable& t, const Atom& f, Rel r) {
  Bits out(t.signed_universe());
  if (f.is_dummy()) return out;
  for (const auto& d : t.diamond_items())
    if (d.rel == r && f.has(d.item) && t.in_closure(d.child.id))
      out.set(d.child.index());
  return out;
}

Bits a_profile(const ClosureTable& t, const Atom& f) {
  Bits out = obs(t, f);
  out |= req(t, f, Rel::B);
  out |= req(t, f, Rel::Bbar);
  return out;
}

bool rel_bbar(const ClosureTable& t, const Atom& f, const Atom& g) {
  Bits need_f = obs(t, g) | req(t, g, Rel::Bbar);
  if (!need_f.subset_of(req(t, f, Rel::Bbar))) return false;
  Bits need_g = obs(t, f) | req(t, f, Rel::B);
  return need_g.subset_of(req(t, g, Rel::B));
}

bool rel_a(const ClosureTable& t, const Atom& f, const Atom& g) {
  return req(t, f, Rel::A) == a_profile(t, g);
}

namespace {

inline bool value(const Bits& bits, SignedId s) {
  return bits.get(s.id) != s.neg;
}

bool pi_conditions(const ClosureTable& t, const Bits& bits) {
  if (t.sim_item() != kNoItem && !bits.get(t.sim_item())) return false;  // (v)
  for (SignedId chi : t.closure_signed()) {
    ItemId dia_a = t.diamond_of(Rel::A, chi);
    if (dia_a == kNoItem) continue;
    bool lhs = bits.get(dia_a);
    ItemId dia_bb = t.diamond_of(Rel::Bbar, chi);
    bool rhs = value(bits, chi) || (dia_bb != kNoItem && bits.get(dia_bb));
    if (lhs != rhs) return false;  // (iii)+(iv)
  }
  return true;
}

}  // namespace

bool is_atom(const ClosureTable& t, const Bits& bits) {
  if (static_cast<int>(bits.size()) != t.item_count()) return false;
  if (bits.get(t.false_item())) return false;
  for (const auto& o : t.or_items())
    if (bits.get(o.item) != (value(bits, o.lhs) || value(bits, o.rhs)))
      return false;  // (ii)
  if (!bits.get(t.pi_item()) && !pi_conditions(t, bits)) return false;
  return true;
}

std::optional<Atom> f_phi(const ClosureTable& t, const Bits& sigma) {
  Bits bits(t.item_count());
  for (ItemId id : t.sigma_t_ids())
    if (sigma.get(id)) bits.set(id);
  // bottom-up: Or members are determined by letters and temporal requests
  for (const auto& o : t.or_items())
    bits.set(o.item, value(bits, o.lhs) || value(bits, o.rhs));
  if (!is_atom(t, bits)) return std::nullopt;
  return Atom(bits);
}

std::optional<Atom> f_phi(const ClosureTable& t, const std::vector<ItemId>& sigma) {
  Bits b(t.item_count());
  for (ItemId id : sigma) {
    if (!t.sigma_t_mask().get(id))
      throw std::invalid_argument("f_phi input not a subset of Sigma^T");
    b.set(id);
  }
  return f_phi(t, b);
}

namespace {

// Free coordinates of the atom space, per pi-membership. Everything else is
// pinned or derived: false=0, ~=1 on pi-atoms, <A>-members of pi-atoms come
// from condition (iv), Or members from condition (ii).
std::vector<ItemId> free_items(const ClosureTable& t, bool pi) {
  std::vector<ItemId> vars;
  for (ItemId id : t.sigma_t_ids()) {
    if (id == t.pi_item()) continue;
    if (pi) {
      if (id == t.sim_item()) continue;
      const Formula& f = t.item(id);
      if (f.kind() == Kind::Diamond && f.rel() == Rel::A) continue;  // derived
    }
    vars.push_back(id);
  }
  return vars;
}

template <class Yield>
bool enumerate_branch(const ClosureTable& t, bool pi, Yield&& yield) {
  std::vector<ItemId> vars = free_items(t, pi);
  if (vars.size() >= 63)
    throw std::runtime_error("atom space too large to enumerate (" +
                             std::to_string(vars.size()) + " free coordinates)");
  const std::uint64_t total = std::uint64_t{1} << vars.size();
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    Bits bits(t.item_count());
    if (!pi) bits.set(t.pi_item());
    if (pi && t.sim_item() != kNoItem) bits.set(t.sim_item());
    for (std::size_t i = 0; i < vars.size(); ++i)
      if ((mask >> i) & 1) bits.set(vars[i]);
    // derived bits, in topological item order
    for (ItemId id = 0; id < t.item_count(); ++id) {
      const Formula& f = t.item(id);
      if (f.kind() == Kind::Or) {
        auto so = t.signed_of(f.left());
        auto so2 = t.signed_of(f.right());
        bits.set(id, value(bits, *so) || value(bits, *so2));
      } else if (pi && f.kind() == Kind::Diamond && f.rel() == Rel::A) {
        auto chi = t.signed_of(f.child());
        ItemId dia_bb = t.diamond_of(Rel::Bbar, *chi);
        bits.set(id, value(bits, *chi) || (dia_bb != kNoItem && bits.get(dia_bb)));
      }
    }
    if (!is_atom(t, bits)) continue;  // cannot happen; cheap safety net
    if (!yield(Atom(std::move(bits)))) return false;
  }
  return true;
}

}  // namespace

AtomEnumeration enumerate_atoms(const ClosureTable& t, std::size_t limit) {
  AtomEnumeration out;
  auto take = [&](Atom a) {
    if (out.atoms.size() >= limit) {
      out.complete = false;
      return false;
    }
    out.atoms.push_back(std::move(a));
    return true;
  };
  if (enumerate_branch(t, /*pi=*/true, take))
    enumerate_branch(t, /*pi=*/false, take);
  return out;
}

std::uint64_t count_atoms(const ClosureTable& t, std::uint64_t cap) {
  // every free assignment yields exactly one atom
  std::uint64_t total = 0;
  for (bool pi : {true, false}) {
    std::size_t k = free_items(t, pi).size();
    if (k >= 64) return cap;
    std::uint64_t n = std::uint64_t{1} << k;
    if (total > cap - n) return cap;
    total += n;
  }
  return std::min(total, cap);
}

int AtomRegistry::intern(const Atom& a) {
  if (a.is_dummy()) throw std::invalid_argument("cannot intern the dummy atom");
  auto it = index_.find(a.bits());
  if (it != index_.end()) return it->second;
  int id = static_cast<int>(atoms_.size());
  atoms_.push_back(a);
  index_.emplace(a.bits(), id);
  return id;
}

}  // namespace itl
