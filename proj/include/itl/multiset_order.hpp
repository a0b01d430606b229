#ifndef ITL_MULTISET_ORDER_HPP
#define ITL_MULTISET_ORDER_HPP

#include <map>
#include <span>
#include <vector>

#include "itl/atoms.hpp"
#include "itl/compass.hpp"

namespace itl {

// Multiset of atoms (by interned id) with multiplicities.
using AtomMultiset = std::map<int, int>;

// Multiset of multisets: one inner multiset per ~ class of points, with
// multiplicity counting classes sharing the same inner multiset.
struct MultisetCollection {
  std::map<AtomMultiset, int> inner;

  bool operator==(const MultisetCollection& o) const { return inner == o.inner; }
};

// M(x,y) over all x-classes of points <= y, for row y of the compass.
MultisetCollection multiset_collection(const CompassStructure& g, int y,
                                       AtomRegistry& registry);

// inner multiset inclusion (componentwise multiplicities)
bool multiset_subseteq(const AtomMultiset& a, const AtomMultiset& b);

// A <= B iff A's inner multisets (with multiplicity) map injectively into
// B's with componentwise inclusion; decided by maximum bipartite matching
// over the multiplicity-expanded sides.
bool wqo_leq(const MultisetCollection& a, const MultisetCollection& b);

// No pair y < y' with collections[y] <= collections[y'].
bool is_minimal_prefix(std::span<const MultisetCollection> collections);

}  // namespace itl

#endif
