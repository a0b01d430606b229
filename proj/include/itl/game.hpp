#ifndef ITL_GAME_HPP
#define ITL_GAME_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "itl/compass.hpp"
#include "itl/structure.hpp"

namespace itl {

enum class Role : unsigned char { Spoiler, Duplicator };

struct Move {
  Interval itv;
  Bits sigma;  // item-id bitset, subset of Sigma^T
  Role role;
};

// Alternating Spoiler/Duplicator move sequence. Spoiler plays the even
// indexes and controls sigma_spoiler; Duplicator completes each interval's
// labeling at the following odd index.
struct Run {
  std::shared_ptr<const ClosureTable> table;
  Bits sigma_spoiler;  // Sigma^T_spoiler as an item-id bitset
  std::vector<Move> moves;

  static Run empty(std::shared_ptr<const ClosureTable> table, Bits sigma_spoiler);
};

struct RunError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Spoiler's options after a well-formed even-length prefix: the unvisited
// intervals of the current row, else the next row. The first move is
// always [0,0]. Ascending x order.
std::vector<Interval> legal_moves(const Run& prefix);

struct RunViolation {
  int condition;  // 1 = coverage/completeness, 2 = pairing, 3 = ordering
  int move_index;
  std::string message;
};

struct RunReport {
  std::vector<RunViolation> violations;
  bool complete = false;  // all intervals over {0..points-1} visited
  int points = 0;
  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

RunReport validate_run(const Run& run, bool require_complete = false);

struct InducedStructure {
  IntervalStructure m;
  // f_rho: triangular interval index -> even move index of its pair
  std::vector<int> pair_index;
};

// Valuation from the declared letters of each interval's move pair; point
// classes from the declared ~ choices, which must satisfy the equivalence
// laws (reflexivity on singletons plus the three transitivity rules).
InducedStructure induced_structure(const Run& run);

// Complete, coherently declared, and a model of phi at [0,0]: the induced
// structure satisfies phi and every declared temporal request matches
// model-checked truth.
bool is_successful(const Run& run, const Formula& phi);

// Maps odd-length prefixes (Spoiler just moved) to Duplicator's sigma.
using Strategy = std::function<Bits(const Run& prefix)>;

struct SpoilerMove {
  Interval itv;
  Bits sigma;
};

// Interleaves the strategy's replies with the given Spoiler moves.
// Throws RunError on an interval-illegal Spoiler move or on a strategy
// output that leaves Duplicator's letter set.
Run respond(std::shared_ptr<const ClosureTable> table, const Bits& sigma_spoiler,
            const Strategy& strategy, const std::vector<SpoilerMove>& spoiler_moves);

// Trace format: one move per line, `S|D x y : id1 id2 ...` with compact
// formula tokens as ids.
std::string format_run(const Run& run);
Run parse_run(std::string_view text, std::shared_ptr<const ClosureTable> table,
              Bits sigma_spoiler);

// Item-id set printed as space-separated compact tokens (sorted by id).
std::string format_sigma(const ClosureTable& table, const Bits& sigma);

}  // namespace itl

#endif
