#ifndef ITL_COMPASS_HPP
#define ITL_COMPASS_HPP

#include <memory>
#include <string>
#include <vector>

#include "itl/atoms.hpp"
#include "itl/structure.hpp"

namespace itl {

// Grid of atoms over points x <= y; points below the diagonal carry the
// dummy atom. The ~ relation between points is read off the atoms' ~ bits.
class CompassStructure {
 public:
  CompassStructure(std::shared_ptr<const ClosureTable> table, int n);

  int points() const { return n_; }
  const ClosureTable& table() const { return *table_; }
  std::shared_ptr<const ClosureTable> table_ptr() const { return table_; }

  const Atom& at(int x, int y) const;
  void set(int x, int y, Atom a);

  bool sim(int x, int y) const;  // x <= y

  // Debug dump: one line per cell `x y : <unsigned formula list>`.
  std::string dump() const;

 private:
  std::shared_ptr<const ClosureTable> table_;
  int n_;
  std::vector<Atom> cells_;
  Atom dummy_;
};

struct CompassViolation {
  enum Kind {
    PiPlacement,
    SimReflexivity,
    SimTransitivity,
    BbarRelation,
    ARelation,
    Unfulfilled,
  };
  Kind kind;
  int x, y;
  std::string detail;
};

struct CompassReport {
  std::vector<CompassViolation> violations;
  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

// Consistency checks: pi-atoms exactly on the diagonal, the three ~
// coherence rules, ->_Bbar along columns, ->_A between every row cell and
// every cell of the matching column. Fulfillment (every request of every
// cell has a witness) is a separate, optional pass.
CompassReport validate_compass(const CompassStructure& g, bool check_fulfillment);

// tau(x,y) = the atom of type([x,y]). Always globally fulfilling.
CompassStructure compass_from_structure(const IntervalStructure& m,
                                        std::shared_ptr<const ClosureTable> table);

// Interval structure realizing a consistent, globally fulfilling compass:
// labels from the atoms' letter bits, point classes from the ~ bits.
// Rejects input that fails validation.
IntervalStructure structure_from_compass(const CompassStructure& g);

}  // namespace itl

#endif
