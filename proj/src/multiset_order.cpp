#include "itl/multiset_order.hpp"

namespace itl {

MultisetCollection multiset_collection(const CompassStructure& g, int y,
                                       AtomRegistry& registry) {
  if (y < 0 || y >= g.points())
    throw std::invalid_argument("row index out of range");
  // group points x <= y into ~ classes (class representative = smallest)
  std::vector<int> rep(y + 1);
  for (int x = 0; x <= y; ++x) {
    rep[x] = x;
    for (int w = 0; w < x; ++w)
      if (g.sim(w, x)) {
        rep[x] = rep[w];
        break;
      }
  }
  std::map<int, AtomMultiset> per_class;
  for (int x = 0; x <= y; ++x) per_class[rep[x]][registry.intern(g.at(x, y))]++;
  MultisetCollection out;
  for (auto& [r, m] : per_class) out.inner[m]++;
  return out;
}

bool multiset_subseteq(const AtomMultiset& a, const AtomMultiset& b) {
  for (const auto& [atom, count] : a) {
    auto it = b.find(atom);
    if (it == b.end() || it->second < count) return false;
  }
  return true;
}

namespace {

// Kuhn's augmenting-path matching on the multiplicity-expanded bipartite
// graph; left side must be fully matched.
struct Matcher {
  int nl, nr;
  std::vector<std::vector<int>> adj;
  std::vector<int> match_r;
  std::vector<bool> seen;

  bool augment(int u) {
    for (int v : adj[u]) {
      if (seen[v]) continue;
      seen[v] = true;
      if (match_r[v] < 0 || augment(match_r[v])) {
        match_r[v] = u;
        return true;
      }
    }
    return false;
  }

  bool perfect_on_left() {
    match_r.assign(nr, -1);
    for (int u = 0; u < nl; ++u) {
      seen.assign(nr, false);
      if (!augment(u)) return false;
    }
    return true;
  }
};

}  // namespace

bool wqo_leq(const MultisetCollection& a, const MultisetCollection& b) {
  std::vector<const AtomMultiset*> left, right;
  for (const auto& [m, mult] : a.inner)
    for (int i = 0; i < mult; ++i) left.push_back(&m);
  for (const auto& [m, mult] : b.inner)
    for (int i = 0; i < mult; ++i) right.push_back(&m);
  if (left.size() > right.size()) return false;

  Matcher matcher;
  matcher.nl = static_cast<int>(left.size());
  matcher.nr = static_cast<int>(right.size());
  matcher.adj.resize(matcher.nl);
  for (int u = 0; u < matcher.nl; ++u)
    for (int v = 0; v < matcher.nr; ++v)
      if (multiset_subseteq(*left[u], *right[v])) matcher.adj[u].push_back(v);
  return matcher.perfect_on_left();
}

bool is_minimal_prefix(std::span<const MultisetCollection> collections) {
  for (std::size_t y2 = 1; y2 < collections.size(); ++y2)
    for (std::size_t y1 = 0; y1 < y2; ++y1)
      if (wqo_leq(collections[y1], collections[y2])) return false;
  return true;
}

}  // namespace itl
