#ifndef ITL_COUNTER_MACHINE_HPP
#define ITL_COUNTER_MACHINE_HPP

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "itl/closure.hpp"
#include "itl/formula.hpp"
#include "itl/structure.hpp"

namespace itl {

struct MachineError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Minsky counter machine: each state carries one transition rule.
struct CounterMachine {
  struct Inc {
    int counter;  // 1-based
    std::string next;
  };
  struct Zdec {
    int counter;
    std::string if_zero, if_pos;
  };
  using Rule = std::variant<Inc, Zdec>;

  int counters = 0;
  std::vector<std::string> states;  // declaration order
  std::map<std::string, Rule> delta;
  std::string init, halt;

  bool has_rule(const std::string& q) const { return delta.count(q) != 0; }

  // Line format:
  //   counters K
  //   state q: inc I goto q'
  //   state q: ifz I goto q' else dec I goto q''
  //   init q
  //   halt q
  static CounterMachine parse(std::string_view text);
  std::string format() const;
  void validate() const;  // delta total except possibly halt, indices in range
};

struct Configuration {
  std::string state;
  std::vector<long> counters;
  bool operator==(const Configuration& o) const {
    return state == o.state && counters == o.counters;
  }
  bool operator<(const Configuration& o) const {
    return state != o.state ? state < o.state : counters < o.counters;
  }
};

// Successor configurations; lossy mode closes the perfect step under
// componentwise counter drops both before and after the transition.
std::vector<Configuration> step(const CounterMachine& m, const Configuration& c,
                                bool lossy);

enum class ReachStatus {
  Found,        // path to (halt, 0) returned
  SpaceClosed,  // every reachable configuration explored, target absent
  BoundExceeded,
};

struct ReachResult {
  ReachStatus status;
  std::vector<Configuration> path;  // nonempty iff Found
  std::uint64_t explored = 0;
  bool counter_capped = false;
};

// Breadth-first 0-0 reachability from (init, 0) to (halt, 0). SpaceClosed
// is only reported when the frontier closed without any counter touching
// the cap; otherwise a closed-but-clipped search is BoundExceeded.
ReachResult reach_00(const CounterMachine& m, bool lossy,
                     std::uint64_t max_configs = 1'000'000,
                     long counter_cap = 64);

struct EncoderConjunct {
  std::string name;
  std::string role;  // what the conjunct enforces
  Formula formula;
};

struct Encoding {
  Formula formula;  // conjunction of all conjuncts
  std::vector<EncoderConjunct> conjuncts;
  Fragment fragment;
  std::vector<std::string> spoiler_letters;
};

// Forward encoding of 0-0 reachability into AABBb synthesis: configurations
// as blocks of unit intervals, counter transfer by the letter p, psi_sur for
// surjectivity, psi_inj (with Spoiler's p_sp) for injectivity.
Encoding encode(const CounterMachine& m);

// Backward ABBb~ satisfiability encoding of lossy 0-0 reachability: blocks
// in reversed computation order, transfer via the equivalence relation,
// phi_sim_inj for per-block injectivity. No <Ab> anywhere.
Encoding encode_abb_sim(const CounterMachine& m);

// Interval structure realizing the backward encoding of a computation:
// state letter on each block's first unit, one counter letter per unit,
// new/del placement, and p-labeled transfer arcs whose endpoints are merged
// into ~ classes. The computation must be a valid transfer-lossy 0-0 run
// (zero tests resolved by the depicted counter values).
IntervalStructure encode_witness_structure(const CounterMachine& m,
                                           const std::vector<Configuration>& path);

}  // namespace itl

#endif
