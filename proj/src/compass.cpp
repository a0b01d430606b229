#include "itl/compass.hpp"

#include <sstream>

namespace itl {

CompassStructure::CompassStructure(std::shared_ptr<const ClosureTable> table, int n)
    : table_(std::move(table)), n_(n) {
  if (n < 1) throw std::invalid_argument("compass needs at least one point");
  cells_.resize(interval_count(n));
}

const Atom& CompassStructure::at(int x, int y) const {
  if (x > y) return dummy_;
  return cells_[interval_index(x, y)];
}

void CompassStructure::set(int x, int y, Atom a) {
  if (x > y) throw std::invalid_argument("cannot label a point below the diagonal");
  cells_[interval_index(x, y)] = std::move(a);
}

bool CompassStructure::sim(int x, int y) const {
  ItemId s = table_->sim_item();
  if (s == kNoItem) return x == y;
  return at(x, y).has(s);
}

std::string CompassStructure::dump() const {
  std::ostringstream out;
  for (int y = 0; y < n_; ++y)
    for (int x = 0; x <= y; ++x) {
      const Atom& a = at(x, y);
      if (a.is_dummy()) continue;
      out << x << ' ' << y << " :";
      a.bits().for_each([&](std::size_t id) {
        out << ' ' << print_formula(table_->item(static_cast<ItemId>(id)), true);
      });
      out << '\n';
    }
  return out.str();
}

std::string CompassReport::to_string() const {
  if (violations.empty()) return "ok\n";
  std::ostringstream out;
  for (const auto& v : violations) {
    const char* kind = nullptr;
    switch (v.kind) {
      case CompassViolation::PiPlacement: kind = "pi-placement"; break;
      case CompassViolation::SimReflexivity: kind = "sim-reflexivity"; break;
      case CompassViolation::SimTransitivity: kind = "sim-transitivity"; break;
      case CompassViolation::BbarRelation: kind = "bbar-relation"; break;
      case CompassViolation::ARelation: kind = "a-relation"; break;
      case CompassViolation::Unfulfilled: kind = "unfulfilled"; break;
    }
    out << kind << " at (" << v.x << ',' << v.y << "): " << v.detail << '\n';
  }
  return out.str();
}

namespace {

void check_fulfillment_of(const CompassStructure& g, int x, int y,
                          CompassReport& report) {
  const ClosureTable& t = g.table();
  const int n = g.points();
  const Atom& f = g.at(x, y);
  for (const auto& d : t.diamond_items()) {
    if (!f.has(d.item) || !t.in_closure(d.child.id)) continue;
    bool found = false;
    switch (d.rel) {
      case Rel::A:
        for (int z = y; z < n && !found; ++z) found = g.at(y, z).holds(d.child);
        break;
      case Rel::Abar:
        for (int z = 0; z <= x && !found; ++z) found = g.at(z, x).holds(d.child);
        break;
      case Rel::B:
        for (int w = x; w < y && !found; ++w) found = g.at(x, w).holds(d.child);
        break;
      case Rel::Bbar:
        for (int w = y + 1; w < n && !found; ++w) found = g.at(x, w).holds(d.child);
        break;
    }
    if (!found)
      report.violations.push_back(
          {CompassViolation::Unfulfilled, x, y,
           "request <" + std::string(rel_name(d.rel)) + ">" +
               t.describe_signed(d.child) + " has no witness"});
  }
}

}  // namespace

CompassReport validate_compass(const CompassStructure& g, bool check_fulfillment) {
  CompassReport report;
  const ClosureTable& t = g.table();
  const int n = g.points();

  for (int y = 0; y < n; ++y)
    for (int x = 0; x <= y; ++x) {
      const Atom& a = g.at(x, y);
      if (a.is_dummy()) {
        report.violations.push_back({CompassViolation::PiPlacement, x, y,
                                     "cell above the diagonal is unlabeled"});
        continue;
      }
      if (!is_atom(t, a.bits()))
        report.violations.push_back(
            {CompassViolation::PiPlacement, x, y, "cell label is not an atom"});
      bool diag = x == y;
      if (a.is_pi(t) != diag)
        report.violations.push_back(
            {CompassViolation::PiPlacement, x, y,
             diag ? "diagonal cell is not a pi-atom" : "pi-atom off the diagonal"});
    }
  if (!report.ok()) return report;  // further checks assume a full grid

  if (t.sim_item() != kNoItem) {
    for (int x = 0; x < n; ++x)
      if (!g.sim(x, x))
        report.violations.push_back(
            {CompassViolation::SimReflexivity, x, x, "~ missing on the diagonal"});
    for (int z = 0; z < n; ++z)
      for (int y = 0; y < z; ++y)
        for (int x = 0; x < y; ++x) {
          bool xy = g.sim(x, y), yz = g.sim(y, z), xz = g.sim(x, z);
          if ((xy && yz && !xz) || (xz && yz && !xy) || (xz && xy && !yz))
            report.violations.push_back(
                {CompassViolation::SimTransitivity, x, z,
                 "~ not transitive over points " + std::to_string(x) + "," +
                     std::to_string(y) + "," + std::to_string(z)});
        }
  }

  // ->_Bbar stepwise along each column; transitivity covers wider pairs.
  for (int x = 0; x < n; ++x)
    for (int y = x; y + 1 < n; ++y)
      if (!rel_bbar(t, g.at(x, y), g.at(x, y + 1)))
        report.violations.push_back({CompassViolation::BbarRelation, x, y,
                                     "->_Bbar fails toward (" + std::to_string(x) +
                                         "," + std::to_string(y + 1) + ")"});

  // ->_A between every (x,y) and every (y,z).
  for (int y = 0; y < n; ++y)
    for (int x = 0; x <= y; ++x) {
      Bits ra = req(t, g.at(x, y), Rel::A);
      for (int z = y; z < n; ++z)
        if (ra != a_profile(t, g.at(y, z))) {
          report.violations.push_back({CompassViolation::ARelation, x, y,
                                       "->_A fails toward (" + std::to_string(y) +
                                           "," + std::to_string(z) + ")"});
          break;
        }
    }

  if (check_fulfillment && report.ok())
    for (int y = 0; y < n; ++y)
      for (int x = 0; x <= y; ++x) check_fulfillment_of(g, x, y, report);

  return report;
}

CompassStructure compass_from_structure(const IntervalStructure& m,
                                        std::shared_ptr<const ClosureTable> table) {
  Evaluator ev(m);
  std::vector<Bits> types = ev.all_types(*table);
  CompassStructure g(table, m.points());
  for (int y = 0; y < m.points(); ++y)
    for (int x = 0; x <= y; ++x)
      g.set(x, y, Atom(types[interval_index(x, y)]));
  return g;
}

IntervalStructure structure_from_compass(const CompassStructure& g) {
  CompassReport report = validate_compass(g, /*check_fulfillment=*/true);
  if (!report.ok())
    throw std::invalid_argument("compass structure is not fulfilling/consistent:\n" +
                                report.to_string());
  const ClosureTable& t = g.table();
  IntervalStructure m(g.points());
  for (int y = 0; y < g.points(); ++y)
    for (int x = 0; x <= y; ++x) {
      const Atom& a = g.at(x, y);
      for (ItemId id : t.sigma_ids()) {
        if (id == t.sim_item()) continue;
        if (a.has(id)) m.add_label({x, y}, t.item(id).name());
      }
      if (x < y && g.sim(x, y)) m.merge_points(x, y);
    }
  return m;
}

}  // namespace itl
