#include "itl/closure.hpp"

#include <algorithm>

namespace itl {

bool Fragment::conforms(const Formula& f) const {
  switch (f.kind()) {
    case Kind::Prop:
    case Kind::TrueConst:
    case Kind::FalseConst:
      return true;
    case Kind::Sim:
      return sim_allowed;
    case Kind::Not:
      return conforms(f.child());
    case Kind::Or:
    case Kind::And:
      return conforms(f.left()) && conforms(f.right());
    case Kind::Diamond:
    case Kind::Box:
      return has(f.rel()) && conforms(f.child());
  }
  return false;
}

std::string Fragment::name() const {
  std::string s = "A";
  if (abar) s += "Ab";
  if (b) s += "B";
  if (bbar) s += "Bb";
  if (sim_allowed) s += "~";
  return s;
}

Fragment infer_fragment(const Formula& f) {
  Fragment fr = Fragment::abb();
  fr.abar = uses_rel(f, Rel::Abar);
  fr.sim_allowed = uses_sim(f);
  return fr;
}

ClosureTable::ClosureTable(const Formula& phi, Fragment frag) : frag_(frag) {
  if (!frag.conforms(phi))
    throw FragmentError("formula does not conform to fragment " + frag.name());
  phi_ = normalize(phi);

  // closure: all subformulas (as unsigned representatives), then the seeds
  add_subformulas(phi_);
  phi_ref_ = *signed_of(phi_);
  false_item_ = add_item(Formula::ff());
  pi_item_ = add_signed(normalize(sing())).id;
  if (frag_.sim_allowed) sim_item_ = add_item(Formula::sim());

  std::size_t closure_count = items_.size();
  in_closure_.assign(closure_count, true);
  for (ItemId i = 0; i < static_cast<int>(closure_count); ++i) {
    closure_ids_.push_back(i);
    closure_signed_.push_back({i, false});
    closure_signed_.push_back({i, true});
  }

  // extended closure: prefix every signed closure member with <R>/[R];
  // [R]psi is the negation of <R>!psi, so diamond items cover both.
  ecl_rels_.clear();
  for (Rel r : {Rel::A, Rel::B, Rel::Bbar}) {
    if (frag_.has(r)) ecl_rels_.push_back(r);
  }
  if (frag_.abar && uses_rel(phi_, Rel::Abar)) ecl_rels_.push_back(Rel::Abar);

  for (Rel r : ecl_rels_) {
    for (SignedId chi : closure_signed_) {
      Formula body = chi.neg ? Formula::lnot(items_[chi.id]) : items_[chi.id];
      add_item(Formula::dia(r, body));
    }
  }
  in_closure_.resize(items_.size(), false);

  // per-item structure tables
  for (ItemId i = 0; i < item_count(); ++i) {
    const Formula& f = items_[i];
    if (f.kind() == Kind::Or) {
      auto l = signed_of(f.left()), r = signed_of(f.right());
      or_items_.push_back({i, *l, *r});
    } else if (f.kind() == Kind::Diamond) {
      auto c = signed_of(f.child());
      diamond_items_.push_back({i, f.rel(), *c});
      teclosure_ids_.push_back(i);
      if (c->id < static_cast<ItemId>(closure_count))
        prefix_[static_cast<int>(f.rel())].emplace(c->index(), i);
    }
  }

  for (ItemId i = 0; i < static_cast<int>(closure_count); ++i) {
    Kind k = items_[i].kind();
    if (k == Kind::Prop || k == Kind::Sim) sigma_ids_.push_back(i);
  }
  sigma_t_ids_ = sigma_ids_;
  sigma_t_ids_.insert(sigma_t_ids_.end(), teclosure_ids_.begin(), teclosure_ids_.end());
  std::sort(sigma_t_ids_.begin(), sigma_t_ids_.end());
  sigma_t_ids_.erase(std::unique(sigma_t_ids_.begin(), sigma_t_ids_.end()),
                     sigma_t_ids_.end());
  sigma_t_mask_ = Bits(item_count());
  for (ItemId i : sigma_t_ids_) sigma_t_mask_.set(i);
}

ItemId ClosureTable::find(const Formula& f) const {
  auto it = index_.find(f.key());
  return it == index_.end() ? kNoItem : it->second;
}

std::optional<SignedId> ClosureTable::signed_of(const Formula& normalized) const {
  bool neg = normalized.kind() == Kind::Not;
  const Formula& base = neg ? normalized.child() : normalized;
  ItemId id = find(base);
  if (id == kNoItem) return std::nullopt;
  return SignedId{id, neg};
}

SignedId ClosureTable::add_signed(const Formula& normalized) {
  bool neg = normalized.kind() == Kind::Not;
  const Formula& base = neg ? normalized.child() : normalized;
  return {add_item(base), neg};
}

ItemId ClosureTable::add_item(const Formula& f) {
  auto it = index_.find(f.key());
  if (it != index_.end()) return it->second;
  // children first, so item ids are topologically ordered
  switch (f.kind()) {
    case Kind::Or:
      add_signed(f.left());
      add_signed(f.right());
      break;
    case Kind::Diamond:
      add_signed(f.child());
      break;
    default:
      break;
  }
  ItemId id = static_cast<ItemId>(items_.size());
  items_.push_back(f);
  index_.emplace(f.key(), id);
  return id;
}

void ClosureTable::add_subformulas(const Formula& f) {
  switch (f.kind()) {
    case Kind::Not:
      add_subformulas(f.child());
      return;
    case Kind::Or:
      add_subformulas(f.left());
      add_subformulas(f.right());
      add_item(f);
      return;
    case Kind::Diamond:
      add_subformulas(f.child());
      add_item(f);
      return;
    default:
      add_item(f);
      return;
  }
}

std::string ClosureTable::describe_signed(SignedId s, bool compact) const {
  std::string body = print_formula(items_[s.id], compact);
  return s.neg ? "!" + body : body;
}

}  // namespace itl
