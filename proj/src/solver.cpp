#include "itl/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <future>
#include <sstream>
#include <unordered_map>

namespace itl {

namespace {

enum class Res : unsigned char { Win, Lose, LoseMaybe, Abort };

struct AtomInfo {
  Bits obs, req_a, req_b, req_bb, mix;  // signed-index sets
};

struct VecHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (int x : v) h = (h ^ static_cast<std::size_t>(x + 2)) * 1099511628211ull;
    return h;
  }
};

class Solver {
 public:
  Solver(std::shared_ptr<const ClosureTable> table, Bits sigma_sp, SynthLimits lim)
      : t_(std::move(table)), sigma_sp_(std::move(sigma_sp)), lim_(lim) {
    const ClosureTable& t = *t_;
    sigma_sp_.for_each([&](std::size_t id) { sp_ids_.push_back(static_cast<ItemId>(id)); });
    int su = t.signed_universe();
    dia_a_.assign(su, kNoItem);
    dia_b_.assign(su, kNoItem);
    dia_bb_.assign(su, kNoItem);
    for (SignedId chi : t.closure_signed()) {
      dia_a_[chi.index()] = t.diamond_of(Rel::A, chi);
      dia_b_[chi.index()] = t.diamond_of(Rel::B, chi);
      dia_bb_[chi.index()] = t.diamond_of(Rel::Bbar, chi);
    }
    for (ItemId id : t.sigma_ids())
      if (id != t.sim_item()) letter_ids_.push_back(id);
    cells_.assign(interval_count(lim_.max_points), -1);
    budget_ = lim.max_nodes;
    if (lim.timeout_s > 0)
      deadline_ = std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(lim.timeout_s));
  }

  SearchStats stats;

  // One top-level branch: Spoiler opens [0,0] with the given labeling.
  Res top_branch(const Bits& sigma_move) { return or_node({0, 0}, sigma_move); }

 private:
  // --- grid -----------------------------------------------------------

  int cell(int x, int y) const { return cells_[interval_index(x, y)]; }
  const Atom& atom_at(int x, int y) const { return registry_.at(cell(x, y)); }

  int intern(const Atom& a) {
    int id = registry_.intern(a);
    if (id == static_cast<int>(info_.size())) {
      AtomInfo inf;
      inf.obs = obs(*t_, a);
      inf.req_a = req(*t_, a, Rel::A);
      inf.req_b = req(*t_, a, Rel::B);
      inf.req_bb = req(*t_, a, Rel::Bbar);
      inf.mix = inf.obs | inf.req_b | inf.req_bb;
      info_.push_back(std::move(inf));
    }
    return id;
  }

  void place(Interval itv, int atom_id) {
    cells_[interval_index(itv)] = atom_id;
    ++filled_in_row_;
    if (filled_in_row_ == rows_done_ + 1) {
      ++rows_done_;
      filled_in_row_ = 0;
    }
  }
  void unplace(Interval itv) {
    if (filled_in_row_ == 0) {
      --rows_done_;
      filled_in_row_ = rows_done_;
    } else {
      --filled_in_row_;
    }
    cells_[interval_index(itv)] = -1;
  }

  std::vector<int> grid_key() const {
    int upto = interval_count(rows_done_ + (filled_in_row_ > 0 ? 1 : 0));
    return std::vector<int>(cells_.begin(), cells_.begin() + upto);
  }

  // req_A shared by the cells of row p, once some cell of the row is placed
  std::optional<Bits> a_target(int p) const {
    if (p < rows_done_) return info_[cell(0, p)].req_a;
    if (p == rows_done_ && filled_in_row_ > 0)
      for (int x = 0; x <= p; ++x)
        if (cell(x, p) >= 0) return info_[cell(x, p)].req_a;
    return std::nullopt;
  }

  CompassStructure compass_of_grid() const {
    CompassStructure g(t_, rows_done_);
    for (int y = 0; y < rows_done_; ++y)
      for (int x = 0; x <= y; ++x) g.set(x, y, atom_at(x, y));
    return g;
  }

  // --- boundary checks --------------------------------------------------

  bool boundary_success(const CompassStructure& g) const {
    if (!g.at(0, 0).holds(t_->phi_ref())) return false;
    return validate_compass(g, /*check_fulfillment=*/true).ok();
  }

  // A Bbar request with no witness below the top cell and no continuation
  // in the top cell's requests can never be fulfilled.
  bool dead_bbar_request(const CompassStructure& g) const {
    int m = g.points();
    for (int x = 0; x < m; ++x) {
      const Bits& top = info_[cell(x, m - 1)].req_bb;
      for (int y = x; y < m - 1; ++y) {
        Bits pending = info_[cell(x, y)].req_bb;
        for (int w = y + 1; w < m; ++w) pending.subtract(info_[cell(x, w)].obs);
        if (!pending.subset_of(top)) return true;
      }
    }
    return false;
  }

  bool minimality_ok() {
    AtomRegistry local;
    CompassStructure g = compass_of_grid();
    std::vector<MultisetCollection> cols;
    cols.reserve(rows_done_);
    for (int y = 0; y < rows_done_; ++y)
      cols.push_back(multiset_collection(g, y, local));
    for (int y = 0; y + 1 < rows_done_; ++y)
      if (wqo_leq(cols[y], cols.back())) return false;
    return true;
  }

  // --- candidate generation ----------------------------------------------

  // Yields candidate atoms for cell (x,y) under the Spoiler labeling, in
  // ascending bitmask order. yield returning false stops the enumeration.
  // Returns false when the pool had to be truncated (campleteness lost).
  template <class Yield>
  bool for_each_candidate(int x, int y, const Bits& sigma_move, Yield&& yield) {
    const ClosureTable& t = *t_;
    const int n_items = t.item_count();
    Bits val(n_items), pin(n_items);
    bool feasible = true;
    auto pin_bit = [&](ItemId id, bool v) {
      if (pin.get(id)) {
        if (val.get(id) != v) feasible = false;
      } else {
        pin.set(id);
        val.set(id, v);
      }
    };

    for (ItemId id : sp_ids_) pin_bit(id, sigma_move.get(id));
    pin_bit(t.false_item(), false);
    pin_bit(t.pi_item(), x != y);

    bool sim_free = false;
    if (t.sim_item() != kNoItem) {
      if (x == y) {
        pin_bit(t.sim_item(), true);
      } else {
        bool allow0 = true, allow1 = true;
        for (int w = 0; w < y; ++w) {  // triples need three distinct points
          if (w == x || cell(w, y) < 0) continue;
          ItemId sid = t.sim_item();
          bool k2 = atom_at(w, y).has(sid);
          bool k1 = atom_at(std::min(w, x), std::max(w, x)).has(sid);
          if (k1 && k2)
            allow0 = false;  // two sides of the triple force the third
          else if (k1 || k2)
            allow1 = false;
        }
        if (!allow0 && !allow1) return true;
        if (allow0 != allow1)
          pin_bit(t.sim_item(), allow1);
        else if (!pin.get(t.sim_item()))
          sim_free = true;
      }
    }
    if (!feasible) return true;

    // copies: intern() during the enumeration may grow the backing vectors
    Bits below_obs, below_req_b, below_req_bb;
    if (x < y) {
      const AtomInfo& below = info_[cell(x, y - 1)];
      below_obs = below.obs;
      below_req_b = below.req_b;
      below_req_bb = below.req_bb;
    }

    // <B> members: empty on the diagonal, otherwise exactly the observables
    // and B-requests of the cell below.
    for (SignedId chi : t.closure_signed()) {
      ItemId bi = dia_b_[chi.index()];
      if (bi == kNoItem) continue;
      bool v = x < y && (below_obs.get(chi.index()) || below_req_b.get(chi.index()));
      pin_bit(bi, v);
    }

    std::optional<Bits> ty = a_target(y);
    std::optional<Bits> tx = (x == y) ? ty : a_target(x);  // bound whenever x < y

    bool guess_a = false;
    if (x < y) {
      if (ty) {
        for (SignedId chi : t.closure_signed()) {
          ItemId ai = dia_a_[chi.index()];
          if (ai != kNoItem) pin_bit(ai, ty->get(chi.index()));
        }
      } else {
        guess_a = true;
      }
    }

    // <Bbar> members: within the below-cell's promises and the column
    // A-profile; on the diagonal the whole signed closure is open.
    std::vector<ItemId> bb_pool_items;
    for (SignedId chi : t.closure_signed()) {
      ItemId bb = dia_bb_[chi.index()];
      if (bb == kNoItem) continue;
      bool allowed = true;
      if (x < y && !below_req_bb.get(chi.index())) allowed = false;
      if (allowed && tx && !tx->get(chi.index())) allowed = false;
      if (!allowed)
        pin_bit(bb, false);
      else if (!pin.get(bb)) {
        bb_pool_items.push_back(bb);
      }
    }
    if (!feasible) return true;

    std::vector<ItemId> free;
    for (ItemId id : letter_ids_)
      if (!pin.get(id)) free.push_back(id);
    if (sim_free) free.push_back(t.sim_item());
    free.insert(free.end(), bb_pool_items.begin(), bb_pool_items.end());
    if (guess_a)
      for (SignedId chi : t.closure_signed()) {
        ItemId ai = dia_a_[chi.index()];
        if (ai != kNoItem && !pin.get(ai)) free.push_back(ai);
      }
    std::sort(free.begin(), free.end());
    free.erase(std::unique(free.begin(), free.end()), free.end());

    bool complete = true;
    if (static_cast<int>(free.size()) > lim_.max_cell_pool) {
      free.resize(lim_.max_cell_pool);
      complete = false;
      stats.width_capped = true;
    }

    const std::uint64_t total = std::uint64_t{1} << free.size();
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      Bits bits = val;
      for (std::size_t i = 0; i < free.size(); ++i)
        if ((mask >> i) & 1) bits.set(free[i]);

      if (guess_a) {
        // a row's A-profile contains at least one sign of every closure item
        bool cover = true;
        for (ItemId ci : t.closure_ids()) {
          ItemId ap = dia_a_[SignedId{ci, false}.index()];
          ItemId an = dia_a_[SignedId{ci, true}.index()];
          if (ap != kNoItem && an != kNoItem && !bits.get(ap) && !bits.get(an)) {
            cover = false;
            break;
          }
        }
        if (!cover) continue;
      }

      // derived members, in topological item order
      for (ItemId id = 0; id < n_items; ++id) {
        const Formula& f = t.item(id);
        if (f.kind() == Kind::Or) {
          auto l = t.signed_of(f.left());
          auto r = t.signed_of(f.right());
          bits.set(id, (bits.get(l->id) != l->neg) || (bits.get(r->id) != r->neg));
        } else if (x == y && f.kind() == Kind::Diamond && f.rel() == Rel::A) {
          auto chi = t.signed_of(f.child());
          ItemId bb = dia_bb_[chi->index()];
          bits.set(id, (bits.get(chi->id) != chi->neg) ||
                           (bb != kNoItem && bits.get(bb)));
        }
      }

      if (!is_atom(t, bits)) continue;
      // success demands phi at the origin cell, and that cell never changes
      if (x == 0 && y == 0 && (bits.get(t.phi_ref().id) == t.phi_ref().neg))
        continue;
      Atom cand(std::move(bits));

      Bits cobs = obs(t, cand);
      Bits creq_bb = req(t, cand, Rel::Bbar);
      if (x < y) {
        Bits need = cobs | creq_bb;
        if (!need.subset_of(below_req_bb)) continue;
      }
      if (tx || ty) {
        Bits mix = cobs | req(t, cand, Rel::B) | creq_bb;
        if (tx && mix != *tx) continue;
        if (x == y && ty && req(t, cand, Rel::A) != *ty) continue;
      }

      stats.candidates++;
      if (!yield(std::move(cand))) return complete;
    }
    return complete;
  }

  // --- AND-OR search ------------------------------------------------------

  bool out_of_resources() {
    if (abort_) return true;
    if (stats.nodes >= budget_) {
      abort_ = true;
      stats.stop_reason = "node budget exhausted";
      return true;
    }
    if (lim_.timeout_s > 0 && (stats.nodes & 1023) == 0 &&
        std::chrono::steady_clock::now() >= deadline_) {
      abort_ = true;
      stats.stop_reason = "timeout";
      return true;
    }
    return false;
  }

  std::vector<Interval> pending_intervals() const {
    std::vector<Interval> out;
    int y = rows_done_;
    for (int x = 0; x <= y; ++x)
      if (cell(x, y) < 0) out.push_back({x, y});
    return out;
  }

  Res search() {
    if (out_of_resources()) return Res::Abort;
    stats.nodes++;
    stats.max_row = std::max(stats.max_row, rows_done_);

    std::vector<int> key = grid_key();
    if (auto it = memo_.find(key); it != memo_.end()) {
      stats.memo_hits++;
      return it->second;
    }

    bool at_boundary = filled_in_row_ == 0;
    if (at_boundary && rows_done_ > 0) {
      CompassStructure g = compass_of_grid();
      std::optional<Res> decided;
      if (boundary_success(g))
        decided = Res::Win;
      else if (lim_.minimality_pruning && !minimality_ok())
        decided = Res::Lose;
      else if (dead_bbar_request(g))
        decided = Res::Lose;
      else if (rows_done_ >= lim_.max_points) {
        stats.width_capped = true;
        decided = Res::LoseMaybe;
      }
      if (decided) {
        memo_.emplace(std::move(key), *decided);
        return *decided;
      }
    }

    std::vector<Interval> pending = pending_intervals();
    // explore the diagonal first: it binds the row's A-profile cheaply
    std::sort(pending.begin(), pending.end(),
              [](Interval a, Interval b) { return a.x > b.x; });

    bool saw_maybe = false;
    const std::uint64_t sp_total = std::uint64_t{1} << sp_ids_.size();
    for (Interval itv : pending) {
      for (std::uint64_t m = 0; m < sp_total; ++m) {
        Bits sig(t_->item_count());
        for (std::size_t i = 0; i < sp_ids_.size(); ++i)
          if ((m >> i) & 1) sig.set(sp_ids_[i]);
        Res r = or_node(itv, sig);
        if (r == Res::Abort) return Res::Abort;
        if (r == Res::Lose) {
          memo_.emplace(std::move(key), Res::Lose);
          return Res::Lose;
        }
        if (r == Res::LoseMaybe) saw_maybe = true;
      }
    }
    Res out = saw_maybe ? Res::LoseMaybe : Res::Win;
    memo_.emplace(std::move(key), out);
    return out;
  }

  Res or_node(Interval itv, const Bits& sigma_move) {
    stats.or_nodes++;
    bool won = false, saw_maybe = false;
    bool complete = for_each_candidate(itv.x, itv.y, sigma_move, [&](Atom cand) {
      int id = intern(cand);
      place(itv, id);
      Res r = search();
      unplace(itv);
      if (r == Res::Win) {
        won = true;
        return false;
      }
      if (r == Res::LoseMaybe) saw_maybe = true;
      return !abort_;
    });
    if (won) return Res::Win;
    if (abort_) return Res::Abort;
    return (saw_maybe || !complete) ? Res::LoseMaybe : Res::Lose;
  }

 public:
  // --- tree construction (after a Win verdict) ----------------------------

  bool build_subtree(ResponseTree& tree, int node) {
    bool at_boundary = filled_in_row_ == 0;
    if (at_boundary && rows_done_ > 0) {
      CompassStructure g = compass_of_grid();
      if (boundary_success(g)) return true;  // leaf
    }
    std::vector<Interval> pending = pending_intervals();  // ascending x
    const std::uint64_t sp_total = std::uint64_t{1} << sp_ids_.size();
    for (Interval itv : pending) {
      for (std::uint64_t m = 0; m < sp_total; ++m) {
        Bits sig(t_->item_count());
        for (std::size_t i = 0; i < sp_ids_.size(); ++i)
          if ((m >> i) & 1) sig.set(sp_ids_[i]);
        bool placed = false;
        for_each_candidate(itv.x, itv.y, sig, [&](Atom cand) {
          int id = intern(cand);
          place(itv, id);
          if (search() == Res::Win) {
            placed = true;
            return false;  // keep placed; recurse below
          }
          unplace(itv);
          return !abort_;
        });
        if (!placed) return false;
        Bits dup = registry_.at(cell(itv.x, itv.y)).bits() & t_->sigma_t_mask();
        dup.subtract(sigma_sp_);
        int child = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back({dup, {}});
        tree.nodes[node].edges.push_back({itv, sig, child});
        bool ok = build_subtree(tree, child);
        unplace(itv);
        if (!ok) return false;
      }
    }
    return true;
  }

  bool build_tree(ResponseTree& tree) {
    tree.nodes.clear();
    tree.nodes.push_back({Bits(t_->item_count()), {}});
    return build_subtree(tree, 0);
  }

  std::optional<CompassStructure> sat_search(int n_target) {
    std::optional<CompassStructure> found;
    sat_fill(n_target, found);
    return found;
  }

 private:
  bool sat_fill(int n_target, std::optional<CompassStructure>& found) {
    if (out_of_resources()) return false;
    stats.nodes++;
    if (getenv("ITL_DEBUG")) fprintf(stderr, "sat_fill rows_done=%d filled=%d\n", rows_done_, filled_in_row_);
    if (filled_in_row_ == 0 && rows_done_ > 0) {
      CompassStructure g = compass_of_grid();
      if (rows_done_ == n_target) {
        if (boundary_success(g)) {
          found = std::move(g);
          return true;
        }
        return false;
      }
      if (dead_bbar_request(g)) return false;
    }
    std::vector<Interval> pending = pending_intervals();
    std::sort(pending.begin(), pending.end(),
              [](Interval a, Interval b) { return a.x > b.x; });
    Interval itv = pending.front();
    Bits empty_sig(t_->item_count());
    bool done = false;
    int cand_count = 0;
    for_each_candidate(itv.x, itv.y, empty_sig, [&](Atom cand) {
      ++cand_count;
      int id = intern(cand);
      place(itv, id);
      done = sat_fill(n_target, found);
      unplace(itv);
      return !done && !abort_;
    });
    if (getenv("ITL_DEBUG")) fprintf(stderr, "cell (%d,%d): %d candidates, done=%d\n", itv.x, itv.y, cand_count, (int)done);
    return done;
  }

  std::shared_ptr<const ClosureTable> t_;
  Bits sigma_sp_;
  std::vector<ItemId> sp_ids_;
  SynthLimits lim_;
  AtomRegistry registry_;
  std::vector<AtomInfo> info_;
  std::vector<ItemId> dia_a_, dia_b_, dia_bb_;
  std::vector<ItemId> letter_ids_;
  std::vector<int> cells_;
  int rows_done_ = 0;
  int filled_in_row_ = 0;
  std::unordered_map<std::vector<int>, Res, VecHash> memo_;
  std::uint64_t budget_;
  bool abort_ = false;
  std::chrono::steady_clock::time_point deadline_;
};

void refuse_unsupported(const ClosureTable& t) {
  if (t.fragment().abar || uses_rel(t.phi_normalized(), Rel::Abar))
    throw FragmentError(
        "synthesis search supports ABBb(~) only; for <Ab> formulas use "
        "bounded game exploration and the model checker");
}

}  // namespace

std::string ResponseTree::serialize(const ClosureTable& table) const {
  std::ostringstream out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    out << "node " << i << " :";
    std::string ids = format_sigma(table, nodes[i].sigma_dup);
    if (!ids.empty()) out << ' ' << ids;
    out << '\n';
  }
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (const auto& e : nodes[i].edges) {
      out << "edge " << i << ' ' << e.child << ' ' << e.itv.x << ' ' << e.itv.y
          << " :";
      std::string ids = format_sigma(table, e.sigma_sp);
      if (!ids.empty()) out << ' ' << ids;
      out << '\n';
    }
  return out.str();
}

std::string SynthesisVerdict::serialize(const ClosureTable& table) const {
  std::ostringstream out;
  switch (kind) {
    case VerdictKind::Realizable: out << "REALIZABLE\n"; break;
    case VerdictKind::Unrealizable: out << "UNREALIZABLE\n"; break;
    case VerdictKind::ResourceExceeded:
      out << "RESOURCE_EXCEEDED\n# " << (stats.stop_reason.empty() ? "limits reached" : stats.stop_reason)
          << '\n';
      break;
  }
  if (tree) out << tree->serialize(table);
  return out.str();
}

SynthesisVerdict decide_finite_synthesis(std::shared_ptr<const ClosureTable> table,
                                         const Bits& sigma_spoiler,
                                         const SynthLimits& limits) {
  refuse_unsupported(*table);
  if (!sigma_spoiler.subset_of(table->sigma_t_mask()))
    throw std::invalid_argument("Sigma^T_spoiler must be a subset of Sigma^T");
  std::vector<ItemId> sp_ids;
  sigma_spoiler.for_each([&](std::size_t id) { sp_ids.push_back(static_cast<ItemId>(id)); });
  if (sp_ids.size() > 16)
    throw std::invalid_argument("Sigma^T_spoiler too large to enumerate");

  // AND over Spoiler's opening labelings of [0,0]; each branch is searched
  // independently with an equal share of the node budget so that verdicts
  // do not depend on the worker count.
  const std::uint64_t branches = std::uint64_t{1} << sp_ids.size();
  SynthLimits branch_lim = limits;
  branch_lim.max_nodes = std::max<std::uint64_t>(1, limits.max_nodes / branches);

  std::vector<Bits> openings;
  for (std::uint64_t m = 0; m < branches; ++m) {
    Bits sig(table->item_count());
    for (std::size_t i = 0; i < sp_ids.size(); ++i)
      if ((m >> i) & 1) sig.set(sp_ids[i]);
    openings.push_back(std::move(sig));
  }

  struct BranchOut {
    Res res;
    SearchStats stats;
  };
  auto run_branch = [&](const Bits& sig) {
    Solver solver(table, sigma_spoiler, branch_lim);
    Res r = solver.top_branch(sig);
    return BranchOut{r, solver.stats};
  };

  std::vector<BranchOut> results;
  if (limits.workers > 1 && openings.size() > 1) {
    std::vector<std::future<BranchOut>> futs;
    for (const auto& sig : openings)
      futs.push_back(std::async(std::launch::async, run_branch, std::cref(sig)));
    for (auto& f : futs) results.push_back(f.get());
  } else {
    for (const auto& sig : openings) results.push_back(run_branch(sig));
  }

  SynthesisVerdict verdict;
  verdict.stats = SearchStats{};
  bool saw_maybe = false, saw_abort = false, saw_lose = false;
  for (const auto& r : results) {
    verdict.stats.nodes += r.stats.nodes;
    verdict.stats.or_nodes += r.stats.or_nodes;
    verdict.stats.candidates += r.stats.candidates;
    verdict.stats.memo_hits += r.stats.memo_hits;
    verdict.stats.max_row = std::max(verdict.stats.max_row, r.stats.max_row);
    verdict.stats.width_capped |= r.stats.width_capped;
    if (!r.stats.stop_reason.empty()) verdict.stats.stop_reason = r.stats.stop_reason;
    switch (r.res) {
      case Res::Win: break;
      case Res::Lose: saw_lose = true; break;
      case Res::LoseMaybe: saw_maybe = true; break;
      case Res::Abort: saw_abort = true; break;
    }
  }

  if (saw_lose) {
    verdict.kind = VerdictKind::Unrealizable;
    return verdict;
  }
  if (saw_abort || saw_maybe) {
    verdict.kind = VerdictKind::ResourceExceeded;
    if (verdict.stats.stop_reason.empty())
      verdict.stats.stop_reason = "search space cut by row or pool caps";
    return verdict;
  }

  verdict.kind = VerdictKind::Realizable;
  Solver builder(table, sigma_spoiler, limits);
  ResponseTree tree;
  if (!builder.build_tree(tree))
    throw std::logic_error("winning verdict but tree reconstruction failed");
  verdict.tree = std::move(tree);
  return verdict;
}

Strategy extract_strategy(std::shared_ptr<const ClosureTable> table,
                          Bits sigma_spoiler, ResponseTree tree) {
  if (tree.nodes.empty()) throw std::invalid_argument("empty response tree");
  auto shared_tree = std::make_shared<const ResponseTree>(std::move(tree));
  return [table, sigma_spoiler, shared_tree](const Run& prefix) -> Bits {
    if (prefix.moves.size() % 2 != 1)
      throw RunError("strategy expects a prefix ending after a Spoiler move");
    int node = 0;
    for (std::size_t i = 0; i < prefix.moves.size(); i += 2) {
      const Move& sp = prefix.moves[i];
      const ResponseTree::Node& cur = shared_tree->nodes[node];
      int next = -1;
      for (const auto& e : cur.edges)
        if (e.itv == sp.itv && e.sigma_sp == sp.sigma) {
          next = e.child;
          break;
        }
      if (next < 0)
        throw RunError("Spoiler prefix leaves the covering tree at move " +
                       std::to_string(i));
      if (i + 1 < prefix.moves.size() &&
          prefix.moves[i + 1].sigma != shared_tree->nodes[next].sigma_dup)
        throw RunError("prefix diverges from the tree's Duplicator labels");
      node = next;
    }
    return shared_tree->nodes[node].sigma_dup;
  };
}

std::optional<IntervalStructure> bounded_sat(
    std::shared_ptr<const ClosureTable> table, int max_points,
    const SynthLimits& limits) {
  refuse_unsupported(*table);
  if (max_points < 1) throw std::invalid_argument("max_points must be >= 1");
  for (int n = 1; n <= max_points; ++n) {
    SynthLimits lim = limits;
    lim.max_points = std::max(lim.max_points, n);
    lim.minimality_pruning = false;
    Solver solver(table, Bits(table->item_count()), lim);
    if (auto g = solver.sat_search(n)) {
      IntervalStructure m = structure_from_compass(*g);
      if (!check(m, {0, 0}, table->phi_normalized()))
        throw std::logic_error("bounded_sat produced a non-model");
      return m;
    }
  }
  return std::nullopt;
}

std::optional<IntervalStructure> bounded_sat(const Formula& phi, Fragment frag,
                                             int max_points,
                                             const SynthLimits& limits) {
  auto table = std::make_shared<ClosureTable>(phi, frag);
  return bounded_sat(table, max_points, limits);
}

std::optional<IntervalStructure> bounded_sat_anywhere(const Formula& phi,
                                                      Fragment frag, int max_points,
                                                      const SynthLimits& limits) {
  auto table = std::make_shared<ClosureTable>(diamond_g(phi), frag);
  auto m = bounded_sat(table, max_points, limits);
  if (m) {
    bool somewhere = false;
    Evaluator ev(*m);
    for (int yy = 0; yy < m->points() && !somewhere; ++yy)
      for (int xx = 0; xx <= yy && !somewhere; ++xx)
        somewhere = ev.check({xx, yy}, phi);
    if (!somewhere) throw std::logic_error("bounded_sat_anywhere produced a non-model");
  }
  return m;
}

}  // namespace itl
