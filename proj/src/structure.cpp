#include "itl/structure.hpp"

#include <algorithm>
#include <sstream>

namespace itl {

std::string to_string(Interval i) {
  return "[" + std::to_string(i.x) + "," + std::to_string(i.y) + "]";
}

IntervalStructure::IntervalStructure(int n) : n_(n) {
  if (n < 1) throw StructureError("point count must be at least 1");
  labels_.resize(interval_count(n));
  class_of_.resize(n);
  for (int p = 0; p < n; ++p) class_of_[p] = p;
}

void IntervalStructure::add_label(Interval i, const std::string& letter) {
  if (i.x < 0 || i.x > i.y || i.y >= n_)
    throw StructureError("interval " + to_string(i) + " out of range");
  if (letter == "~")
    throw StructureError("~ cannot be stored in a valuation; use point classes");
  labels_[interval_index(i)].insert(letter);
}

void IntervalStructure::merge_points(int a, int b) {
  if (a < 0 || a >= n_ || b < 0 || b >= n_)
    throw StructureError("point index out of range in class declaration");
  int ca = class_of_[a], cb = class_of_[b];
  if (ca == cb) return;
  for (auto& c : class_of_)
    if (c == cb) c = ca;
  canonicalize_classes();
}

void IntervalStructure::canonicalize_classes() {
  // representative = smallest member
  std::map<int, int> rep;
  for (int p = 0; p < n_; ++p) {
    auto it = rep.find(class_of_[p]);
    if (it == rep.end()) rep.emplace(class_of_[p], p);
  }
  for (auto& c : class_of_) c = rep[c];
}

const std::set<std::string>& IntervalStructure::labels(Interval i) const {
  return labels_[interval_index(i)];
}

bool IntervalStructure::has_label(Interval i, const std::string& letter) const {
  const auto& s = labels_[interval_index(i)];
  return s.count(letter) != 0;
}

IntervalStructure IntervalStructure::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  int n = -1;
  IntervalStructure m(1);
  bool have_points = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    auto fail = [&](const std::string& msg) -> void {
      throw StructureError("line " + std::to_string(lineno) + ": " + msg);
    };
    if (word == "points") {
      if (!(ls >> n) || n < 1) fail("expected a positive point count");
      m = IntervalStructure(n);
      have_points = true;
    } else if (word == "class") {
      if (!have_points) fail("'class' before 'points'");
      std::vector<int> pts;
      int p;
      while (ls >> p) pts.push_back(p);
      if (pts.size() < 2) fail("'class' needs at least two points");
      for (std::size_t i = 1; i < pts.size(); ++i) m.merge_points(pts[0], pts[i]);
    } else if (word == "label") {
      if (!have_points) fail("'label' before 'points'");
      int x, y;
      std::string colon;
      if (!(ls >> x >> y >> colon) || colon != ":")
        fail("expected 'label x y : id ...'");
      if (x < 0 || x > y || y >= n)
        fail("interval [" + std::to_string(x) + "," + std::to_string(y) +
             "] out of range" + (x > y ? " (x > y)" : ""));
      std::string id;
      while (ls >> id) m.add_label({x, y}, id);
    } else {
      fail("unknown directive '" + word + "'");
    }
  }
  if (!have_points) throw StructureError("missing 'points' line");
  return m;
}

std::string IntervalStructure::format() const {
  std::ostringstream out;
  out << "points " << n_ << "\n";
  std::map<int, std::vector<int>> classes;
  for (int p = 0; p < n_; ++p) classes[class_of_[p]].push_back(p);
  for (const auto& [rep, pts] : classes) {
    if (pts.size() < 2) continue;
    out << "class";
    for (int p : pts) out << ' ' << p;
    out << "\n";
  }
  for (int y = 0; y < n_; ++y)
    for (int x = 0; x <= y; ++x) {
      const auto& ls = labels_[interval_index(x, y)];
      if (ls.empty()) continue;
      out << "label " << x << ' ' << y << " :";
      for (const auto& l : ls) out << ' ' << l;
      out << "\n";
    }
  return out.str();
}

bool IntervalStructure::operator==(const IntervalStructure& o) const {
  return n_ == o.n_ && labels_ == o.labels_ && class_of_ == o.class_of_;
}

// ---------------------------------------------------------------------------
// Model checking

const Bits& Evaluator::eval(const Formula& f) {
  auto it = memo_.find(f.key());
  if (it != memo_.end()) return it->second;

  const int n = m_.points();
  const int cells = interval_count(n);
  Bits out(cells);
  switch (f.kind()) {
    case Kind::Prop: {
      for (int y = 0; y < n; ++y)
        for (int x = 0; x <= y; ++x)
          if (m_.has_label({x, y}, f.name())) out.set(interval_index(x, y));
      break;
    }
    case Kind::Sim: {
      for (int y = 0; y < n; ++y)
        for (int x = 0; x <= y; ++x)
          if (m_.same_class(x, y)) out.set(interval_index(x, y));
      break;
    }
    case Kind::TrueConst: {
      for (int c = 0; c < cells; ++c) out.set(c);
      break;
    }
    case Kind::FalseConst:
      break;
    case Kind::Not: {
      const Bits child = eval(f.child());
      for (int c = 0; c < cells; ++c) out.set(c, !child.get(c));
      break;
    }
    case Kind::Or: {
      const Bits l = eval(f.left());
      const Bits& r = eval(f.right());
      out = l;
      out |= r;
      break;
    }
    case Kind::And: {
      const Bits l = eval(f.left());
      const Bits& r = eval(f.right());
      out = l;
      out &= r;
      break;
    }
    case Kind::Diamond: {
      const Bits child = eval(f.child());
      switch (f.rel()) {
        case Rel::A: {
          // [x,y] A [y,z]: witness begins at y
          std::vector<bool> from(n, false);
          for (int p = 0; p < n; ++p)
            for (int z = p; z < n; ++z)
              if (child.get(interval_index(p, z))) {
                from[p] = true;
                break;
              }
          for (int y = 0; y < n; ++y)
            if (from[y])
              for (int x = 0; x <= y; ++x) out.set(interval_index(x, y));
          break;
        }
        case Rel::Abar: {
          // [x,y] Abar [z,x]: witness ends at x
          std::vector<bool> upto(n, false);
          for (int p = 0; p < n; ++p)
            for (int z = 0; z <= p; ++z)
              if (child.get(interval_index(z, p))) {
                upto[p] = true;
                break;
              }
          for (int y = 0; y < n; ++y)
            for (int x = 0; x <= y; ++x)
              if (upto[x]) out.set(interval_index(x, y));
          break;
        }
        case Rel::B: {
          // [x,y] B [x,y'] with y' < y: any proper prefix
          for (int x = 0; x < n; ++x) {
            bool seen = false;
            for (int y = x; y < n; ++y) {
              if (seen) out.set(interval_index(x, y));
              seen = seen || child.get(interval_index(x, y));
            }
          }
          break;
        }
        case Rel::Bbar: {
          // [x,y] Bbar [x,y'] with y' > y: any proper extension
          for (int x = 0; x < n; ++x) {
            bool seen = false;
            for (int y = n - 1; y >= x; --y) {
              if (seen) out.set(interval_index(x, y));
              seen = seen || child.get(interval_index(x, y));
            }
          }
          break;
        }
      }
      break;
    }
    case Kind::Box: {
      // not produced by normalize(); evaluate via the dual anyway
      return eval(normalize(f));
    }
  }
  stats_.formulas_evaluated++;
  stats_.cells_computed += static_cast<std::size_t>(cells);
  return memo_.emplace(f.key(), std::move(out)).first->second;
}

bool Evaluator::check(Interval i, const Formula& f) {
  if (i.x < 0 || i.x > i.y || i.y >= m_.points())
    throw StructureError("interval " + to_string(i) + " out of range");
  return eval(normalize(f)).get(interval_index(i));
}

std::vector<Bits> Evaluator::item_tables(const ClosureTable& table) {
  std::vector<Bits> out;
  out.reserve(table.item_count());
  for (ItemId id = 0; id < table.item_count(); ++id) out.push_back(eval(table.item(id)));
  return out;
}

std::vector<Bits> Evaluator::all_types(const ClosureTable& table) {
  std::vector<Bits> tabs = item_tables(table);
  const int cells = interval_count(m_.points());
  std::vector<Bits> types(cells, Bits(table.item_count()));
  for (ItemId id = 0; id < table.item_count(); ++id)
    for (int c = 0; c < cells; ++c)
      if (tabs[id].get(c)) types[c].set(id);
  return types;
}

bool check(const IntervalStructure& m, Interval i, const Formula& f) {
  Evaluator ev(m);
  return ev.check(i, f);
}

}  // namespace itl
