#ifndef ITL_STRUCTURE_HPP
#define ITL_STRUCTURE_HPP

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "itl/bits.hpp"
#include "itl/closure.hpp"
#include "itl/formula.hpp"

namespace itl {

struct Interval {
  int x = 0, y = 0;  // 0 <= x <= y
  bool operator==(const Interval& o) const { return x == o.x && y == o.y; }
  bool operator!=(const Interval& o) const { return !(*this == o); }
  bool operator<(const Interval& o) const {
    return y != o.y ? y < o.y : x < o.x;
  }
};

inline int interval_index(int x, int y) { return y * (y + 1) / 2 + x; }
inline int interval_index(Interval i) { return interval_index(i.x, i.y); }
inline int interval_count(int n) { return n * (n + 1) / 2; }

std::string to_string(Interval i);

struct StructureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Finite interval structure over points {0..n-1} with an equivalence
// relation over points. ~ is never stored in the valuation: its truth on
// [x,y] is derived from the point partition, which makes reflexivity,
// symmetry and transitivity hold by construction.
class IntervalStructure {
 public:
  explicit IntervalStructure(int n);

  int points() const { return n_; }

  void add_label(Interval i, const std::string& letter);
  void merge_points(int a, int b);

  const std::set<std::string>& labels(Interval i) const;
  bool has_label(Interval i, const std::string& letter) const;
  bool same_class(int a, int b) const { return class_of_[a] == class_of_[b]; }
  const std::vector<int>& point_classes() const { return class_of_; }

  // Line-oriented format:
  //   points N
  //   class p1 p2 ... pk
  //   label x y : id1 id2 ...
  //   # comment
  static IntervalStructure parse(std::string_view text);
  std::string format() const;

  bool operator==(const IntervalStructure& o) const;

 private:
  void canonicalize_classes();

  int n_;
  std::vector<std::set<std::string>> labels_;  // triangular
  std::vector<int> class_of_;
};

struct EvalStats {
  std::size_t formulas_evaluated = 0;
  std::size_t cells_computed = 0;
};

// Bottom-up model checker: evaluates each distinct subformula once over all
// intervals (subformula-major order over the compass grid).
class Evaluator {
 public:
  explicit Evaluator(const IntervalStructure& m) : m_(m) {}

  bool check(Interval i, const Formula& f);
  // Truth of every table item on every interval (interval-indexed bitsets
  // per item id).
  std::vector<Bits> item_tables(const ClosureTable& table);
  // type(I): set of eclosure item ids whose positive form holds on I.
  std::vector<Bits> all_types(const ClosureTable& table);

  const EvalStats& stats() const { return stats_; }

 private:
  const Bits& eval(const Formula& normalized);

  const IntervalStructure& m_;
  std::map<std::string, Bits> memo_;
  EvalStats stats_;
};

bool check(const IntervalStructure& m, Interval i, const Formula& f);

}  // namespace itl

#endif
