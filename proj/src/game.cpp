#include "itl/game.hpp"

#include <algorithm>
#include <sstream>

namespace itl {

Run Run::empty(std::shared_ptr<const ClosureTable> table, Bits sigma_spoiler) {
  Run r;
  r.table = std::move(table);
  r.sigma_spoiler = std::move(sigma_spoiler);
  return r;
}

namespace {

struct Coverage {
  std::vector<bool> visited;  // triangular, up to row limit
  int row = -1;               // highest right endpoint seen
  int visited_in_row = 0;

  void ensure(int y) {
    if (static_cast<int>(visited.size()) < interval_count(y + 1))
      visited.resize(interval_count(y + 1), false);
  }
  bool row_done() const { return visited_in_row == row + 1; }
};

// replay interval choices, returning the index of the first offending move
// (-1 if clean) along with the violated condition
struct ReplayResult {
  int bad_index = -1;
  int condition = 0;
  std::string message;
};

ReplayResult replay_intervals(const std::vector<Move>& moves, Coverage& cov) {
  ReplayResult res;
  for (std::size_t i = 0; i < moves.size(); i += 2) {
    const Interval itv = moves[i].itv;
    if (i == 0 && !(itv == Interval{0, 0})) {
      res = {0, 2, "first interval must be [0,0]"};
      return res;
    }
    if (itv.y > cov.row + 1 || (itv.y == cov.row + 1 && cov.row >= 0 && !cov.row_done())) {
      res = {static_cast<int>(i), 3,
             "cannot open " + to_string(itv) + " before all intervals ending at " +
                 std::to_string(cov.row) + " are labeled"};
      return res;
    }
    if (itv.y <= cov.row && cov.visited[interval_index(itv)]) {
      res = {static_cast<int>(i), 2, "interval " + to_string(itv) + " already labeled"};
      return res;
    }
    if (itv.y == cov.row + 1) {
      cov.row = itv.y;
      cov.visited_in_row = 0;
    }
    cov.ensure(cov.row);
    cov.visited[interval_index(itv)] = true;
    cov.visited_in_row++;
  }
  return res;
}

}  // namespace

std::vector<Interval> legal_moves(const Run& prefix) {
  if (prefix.moves.size() % 2 != 0)
    throw RunError("legal_moves expects a prefix ending after a Duplicator move");
  if (prefix.moves.empty()) return {Interval{0, 0}};
  Coverage cov;
  ReplayResult res = replay_intervals(prefix.moves, cov);
  if (res.bad_index >= 0) throw RunError("invalid prefix: " + res.message);
  std::vector<Interval> out;
  if (!cov.row_done()) {
    for (int x = 0; x <= cov.row; ++x)
      if (!cov.visited[interval_index(x, cov.row)]) out.push_back({x, cov.row});
  } else {
    for (int x = 0; x <= cov.row + 1; ++x) out.push_back({x, cov.row + 1});
  }
  return out;
}

std::string RunReport::to_string() const {
  std::ostringstream out;
  if (violations.empty()) {
    out << (complete ? "valid complete run" : "valid run prefix") << " over "
        << points << " point(s)\n";
  }
  for (const auto& v : violations)
    out << "condition " << v.condition << " violated at move " << v.move_index
        << ": " << v.message << '\n';
  return out.str();
}

RunReport validate_run(const Run& run, bool require_complete) {
  RunReport report;
  const ClosureTable& t = *run.table;
  const Bits& sp = run.sigma_spoiler;

  for (std::size_t i = 0; i < run.moves.size(); ++i) {
    const Move& m = run.moves[i];
    Role expect = (i % 2 == 0) ? Role::Spoiler : Role::Duplicator;
    if (m.role != expect)
      report.violations.push_back(
          {2, static_cast<int>(i), "players must alternate, Spoiler first"});
    if (i % 2 == 1 && m.itv != run.moves[i - 1].itv)
      report.violations.push_back(
          {2, static_cast<int>(i), "reply must label the interval just chosen"});
    if (!m.sigma.subset_of(t.sigma_t_mask()))
      report.violations.push_back(
          {2, static_cast<int>(i), "labeling outside Sigma^T"});
    if (i % 2 == 0 && !m.sigma.subset_of(sp))
      report.violations.push_back(
          {2, static_cast<int>(i), "Spoiler labeling outside Sigma^T_spoiler"});
    if (i % 2 == 1 && m.sigma.intersects(sp))
      report.violations.push_back(
          {2, static_cast<int>(i), "Duplicator labeling intersects Sigma^T_spoiler"});
  }
  if (run.moves.size() % 2 != 0)
    report.violations.push_back({2, static_cast<int>(run.moves.size()) - 1,
                                 "run ends before Duplicator's reply"});

  Coverage cov;
  ReplayResult res = replay_intervals(run.moves, cov);
  if (res.bad_index >= 0)
    report.violations.push_back({res.condition, res.bad_index, res.message});

  report.points = cov.row + 1;
  report.complete = res.bad_index < 0 && run.moves.size() % 2 == 0 &&
                    !run.moves.empty() && cov.row_done();
  if (report.complete) {
    // all intervals over {0..row} were visited exactly once: pair count
    // must then be row+1 choose 2 plus the diagonal
    int m = cov.row + 1;
    if (static_cast<int>(run.moves.size()) != m * (m + 1))
      report.complete = false;
  }
  if (require_complete && !report.complete)
    report.violations.push_back(
        {1, static_cast<int>(run.moves.size()),
         "run does not cover all intervals over an initial segment of points"});
  return report;
}

InducedStructure induced_structure(const Run& run) {
  RunReport report = validate_run(run, /*require_complete=*/true);
  if (!report.ok()) throw RunError("run is not a complete admissible run:\n" + report.to_string());
  const ClosureTable& t = *run.table;
  const int n = report.points;

  std::vector<Bits> declared(interval_count(n), Bits(t.item_count()));
  std::vector<int> pair_index(interval_count(n), -1);
  for (std::size_t i = 0; i < run.moves.size(); i += 2) {
    int idx = interval_index(run.moves[i].itv);
    pair_index[idx] = static_cast<int>(i);
    declared[idx] = run.moves[i].sigma | run.moves[i + 1].sigma;
  }

  IntervalStructure m(n);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x <= y; ++x) {
      const Bits& d = declared[interval_index(x, y)];
      for (ItemId id : t.sigma_ids())
        if (id != t.sim_item() && d.get(id)) m.add_label({x, y}, t.item(id).name());
    }

  if (t.sim_item() != kNoItem) {
    ItemId sid = t.sim_item();
    auto sim_at = [&](int x, int y) { return declared[interval_index(x, y)].get(sid); };
    for (int p = 0; p < n; ++p)
      if (!sim_at(p, p))
        throw RunError("~ declarations violate reflexivity at point " + std::to_string(p));
    for (int z = 0; z < n; ++z)
      for (int y = 0; y < z; ++y)
        for (int x = 0; x < y; ++x) {
          bool xy = sim_at(x, y), yz = sim_at(y, z), xz = sim_at(x, z);
          if ((xy && yz && !xz) || (xz && yz && !xy) || (xz && xy && !yz))
            throw RunError("~ declarations are not an equivalence over points " +
                           std::to_string(x) + "," + std::to_string(y) + "," +
                           std::to_string(z));
        }
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < y; ++x)
        if (sim_at(x, y)) m.merge_points(x, y);
  }
  return {std::move(m), std::move(pair_index)};
}

bool is_successful(const Run& run, const Formula& phi) {
  if (!validate_run(run, /*require_complete=*/true).ok()) return false;
  std::optional<InducedStructure> maybe;
  try {
    maybe.emplace(induced_structure(run));
  } catch (const RunError&) {
    return false;  // ~ declarations broke the equivalence laws
  }
  InducedStructure& ind = *maybe;

  const ClosureTable& t = *run.table;
  Evaluator ev(ind.m);
  if (!ev.check({0, 0}, phi)) return false;

  const int n = ind.m.points();
  for (int y = 0; y < n; ++y)
    for (int x = 0; x <= y; ++x) {
      int idx = interval_index(x, y);
      int i = ind.pair_index[idx];
      Bits d = run.moves[i].sigma | run.moves[i + 1].sigma;
      for (ItemId id : t.teclosure_ids())
        if (d.get(id) != ev.check({x, y}, t.item(id))) return false;
    }
  return true;
}

Run respond(std::shared_ptr<const ClosureTable> table, const Bits& sigma_spoiler,
            const Strategy& strategy, const std::vector<SpoilerMove>& spoiler_moves) {
  Run run = Run::empty(table, sigma_spoiler);
  for (const auto& sm : spoiler_moves) {
    std::vector<Interval> legal = legal_moves(run);
    if (std::find(legal.begin(), legal.end(), sm.itv) == legal.end())
      throw RunError("Spoiler move " + to_string(sm.itv) + " is not interval-legal");
    if (!sm.sigma.subset_of(sigma_spoiler))
      throw RunError("Spoiler labeling outside Sigma^T_spoiler");
    run.moves.push_back({sm.itv, sm.sigma, Role::Spoiler});
    Bits reply = strategy(run);
    if (reply.intersects(sigma_spoiler) || !reply.subset_of(table->sigma_t_mask()))
      throw RunError("strategy output must stay within Sigma^T minus Sigma^T_spoiler");
    run.moves.push_back({sm.itv, reply, Role::Duplicator});
  }
  return run;
}

std::string format_sigma(const ClosureTable& table, const Bits& sigma) {
  std::string out;
  sigma.for_each([&](std::size_t id) {
    if (!out.empty()) out += ' ';
    out += print_formula(table.item(static_cast<ItemId>(id)), /*compact=*/true);
  });
  return out;
}

std::string format_run(const Run& run) {
  std::ostringstream out;
  for (const auto& m : run.moves) {
    out << (m.role == Role::Spoiler ? 'S' : 'D') << ' ' << m.itv.x << ' '
        << m.itv.y << " :";
    std::string ids = format_sigma(*run.table, m.sigma);
    if (!ids.empty()) out << ' ' << ids;
    out << '\n';
  }
  return out.str();
}

Run parse_run(std::string_view text, std::shared_ptr<const ClosureTable> table,
              Bits sigma_spoiler) {
  Run run = Run::empty(table, std::move(sigma_spoiler));
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string role, colon;
    int x, y;
    if (!(ls >> role)) continue;
    auto fail = [&](const std::string& msg) -> void {
      throw RunError("line " + std::to_string(lineno) + ": " + msg);
    };
    if (role != "S" && role != "D") fail("expected move role 'S' or 'D'");
    if (!(ls >> x >> y >> colon) || colon != ":") fail("expected 'S|D x y : ids...'");
    Bits sigma(table->item_count());
    std::string tok;
    while (ls >> tok) {
      Formula f;
      try {
        f = normalize(parse_formula(tok));
      } catch (const ParseError& e) {
        fail("bad id token '" + tok + "': " + e.what());
      }
      ItemId id = table->find(f);
      if (id == kNoItem || !table->sigma_t_mask().get(id))
        fail("token '" + tok + "' is not a member of Sigma^T");
      sigma.set(id);
    }
    run.moves.push_back({{x, y}, std::move(sigma),
                         role == "S" ? Role::Spoiler : Role::Duplicator});
  }
  return run;
}

}  // namespace itl
