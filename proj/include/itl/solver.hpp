#ifndef ITL_SOLVER_HPP
#define ITL_SOLVER_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "itl/game.hpp"
#include "itl/multiset_order.hpp"

namespace itl {

struct SynthLimits {
  std::uint64_t max_nodes = 2'000'000;  // search entries before giving up
  int max_points = 12;                  // row cap on explored prefixes
  int max_cell_pool = 20;               // free coordinates enumerated per cell
  double timeout_s = 0;                 // 0 = no wall-clock limit
  bool minimality_pruning = true;       // WQO contraction pruning
  int workers = 1;                      // top-level branch parallelism
};

struct SearchStats {
  std::uint64_t nodes = 0;
  std::uint64_t or_nodes = 0;
  std::uint64_t candidates = 0;
  std::uint64_t memo_hits = 0;
  int max_row = 0;
  bool width_capped = false;  // some cell pool was truncated
  std::string stop_reason;
};

// Finite tree encoding a Duplicator strategy: edges carry Spoiler moves
// (interval, sigma), nodes carry Duplicator replies. Node 0 is a virtual
// root with an empty label; leaves close successful runs.
struct ResponseTree {
  struct Edge {
    Interval itv;
    Bits sigma_sp;
    int child;
  };
  struct Node {
    Bits sigma_dup;
    std::vector<Edge> edges;
  };
  std::vector<Node> nodes;

  std::string serialize(const ClosureTable& table) const;
};

enum class VerdictKind { Realizable, Unrealizable, ResourceExceeded };

struct SynthesisVerdict {
  VerdictKind kind;
  std::optional<ResponseTree> tree;  // present when Realizable
  SearchStats stats;

  std::string serialize(const ClosureTable& table) const;
};

// Decides the finite synthesis problem for the table's formula with the
// given Spoiler letter set, by AND-OR search over response trees with
// minimality pruning. Unrealizable is reported only when the minimal-tree
// space was exhausted without any capping; anything cut short by limits
// comes back as ResourceExceeded. Refuses fragments with <Ab>.
SynthesisVerdict decide_finite_synthesis(std::shared_ptr<const ClosureTable> table,
                                         const Bits& sigma_spoiler,
                                         const SynthLimits& limits = {});

// Prefix-lookup strategy over a verified covering tree. Off-tree Spoiler
// prefixes raise RunError.
Strategy extract_strategy(std::shared_ptr<const ClosureTable> table,
                          Bits sigma_spoiler, ResponseTree tree);

// Smallest-n model with n <= max_points, by compass search with atom
// propagation; nullopt means no model within the bound (not
// unsatisfiability). The returned structure model-checks phi at [0,0].
std::optional<IntervalStructure> bounded_sat(
    std::shared_ptr<const ClosureTable> table, int max_points,
    const SynthLimits& limits = {});
std::optional<IntervalStructure> bounded_sat(const Formula& phi, Fragment frag,
                                             int max_points,
                                             const SynthLimits& limits = {});

// Satisfiability on some interval rather than [0,0], by anchoring <A><A>phi
// at the origin. The returned structure satisfies phi somewhere.
std::optional<IntervalStructure> bounded_sat_anywhere(const Formula& phi,
                                                      Fragment frag, int max_points,
                                                      const SynthLimits& limits = {});

}  // namespace itl

#endif
