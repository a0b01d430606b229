#include "itl/counter_machine.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace itl {

namespace {

bool valid_ident(const std::string& s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return s != "true" && s != "false";
}

bool reserved_letter(const std::string& s) {
  if (s == "new" || s == "del" || s == "p" || s == "p_sp" || s == "s") return true;
  if (s.size() >= 2 && s[0] == 'c' &&
      std::all_of(s.begin() + 1, s.end(),
                  [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    return true;
  return false;
}

}  // namespace

CounterMachine CounterMachine::parse(std::string_view text) {
  CounterMachine m;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    auto fail = [&](const std::string& msg) -> void {
      throw MachineError("line " + std::to_string(lineno) + ": " + msg);
    };
    auto read_state = [&]() {
      std::string q;
      if (!(ls >> q)) fail("expected a state name");
      if (!valid_ident(q)) fail("state name '" + q + "' is not an identifier");
      if (reserved_letter(q)) fail("state name '" + q + "' collides with an encoder letter");
      return q;
    };
    if (word == "counters") {
      if (!(ls >> m.counters) || m.counters < 0) fail("expected a counter count");
    } else if (word == "state") {
      std::string q = read_state();
      std::string colon, op;
      if (!(ls >> colon) || colon != ":") fail("expected ':' after state name");
      if (!(ls >> op)) fail("expected 'inc' or 'ifz'");
      if (m.delta.count(q)) fail("state '" + q + "' declared twice");
      if (op == "inc") {
        int i;
        std::string kw;
        if (!(ls >> i >> kw) || kw != "goto") fail("expected 'inc I goto q'");
        std::string tgt = read_state();
        m.delta.emplace(q, Inc{i, tgt});
      } else if (op == "ifz") {
        int i, i2;
        std::string kw1, kw2, kw3;
        if (!(ls >> i >> kw1) || kw1 != "goto") fail("expected 'ifz I goto q'");
        std::string qz = read_state();
        if (!(ls >> kw2) || kw2 != "else") fail("expected 'else'");
        if (!(ls >> kw3 >> i2) || kw3 != "dec" || i2 != i)
          fail("expected 'dec " + std::to_string(i) + "' on the else branch");
        if (!(ls >> kw1) || kw1 != "goto") fail("expected 'goto' after dec");
        std::string qp = read_state();
        m.delta.emplace(q, Zdec{i, qz, qp});
      } else {
        fail("unknown rule '" + op + "'");
      }
      m.states.push_back(q);
    } else if (word == "init") {
      m.init = read_state();
    } else if (word == "halt") {
      m.halt = read_state();
    } else {
      fail("unknown directive '" + word + "'");
    }
  }
  m.validate();
  return m;
}

void CounterMachine::validate() const {
  if (counters < 1) throw MachineError("machine needs at least one counter");
  if (init.empty() || halt.empty()) throw MachineError("init and halt states required");
  std::set<std::string> known(states.begin(), states.end());
  known.insert(init);
  known.insert(halt);
  auto check_rule = [&](const std::string& q, const Rule& r) {
    int i = std::holds_alternative<Inc>(r) ? std::get<Inc>(r).counter
                                           : std::get<Zdec>(r).counter;
    if (i < 1 || i > counters)
      throw MachineError("state '" + q + "' uses counter " + std::to_string(i) +
                         " out of range");
  };
  for (const auto& [q, r] : delta) check_rule(q, r);
  std::set<std::string> targets;
  for (const auto& [q, r] : delta) {
    if (std::holds_alternative<Inc>(r)) {
      targets.insert(std::get<Inc>(r).next);
    } else {
      targets.insert(std::get<Zdec>(r).if_zero);
      targets.insert(std::get<Zdec>(r).if_pos);
    }
  }
  targets.insert(init);
  for (const auto& q : targets)
    if (q != halt && !delta.count(q))
      throw MachineError("state '" + q + "' has no transition rule");
}

std::string CounterMachine::format() const {
  std::ostringstream out;
  out << "counters " << counters << "\n";
  for (const auto& q : states) {
    const Rule& r = delta.at(q);
    out << "state " << q << ": ";
    if (const Inc* inc = std::get_if<Inc>(&r)) {
      out << "inc " << inc->counter << " goto " << inc->next;
    } else {
      const Zdec& z = std::get<Zdec>(r);
      out << "ifz " << z.counter << " goto " << z.if_zero << " else dec "
          << z.counter << " goto " << z.if_pos;
    }
    out << "\n";
  }
  out << "init " << init << "\nhalt " << halt << "\n";
  return out.str();
}

namespace {

Configuration perfect_step(const CounterMachine& m, const Configuration& c,
                           const CounterMachine::Rule& r) {
  Configuration next = c;
  if (const auto* inc = std::get_if<CounterMachine::Inc>(&r)) {
    next.counters[inc->counter - 1]++;
    next.state = inc->next;
  } else {
    const auto& z = std::get<CounterMachine::Zdec>(r);
    if (c.counters[z.counter - 1] == 0) {
      next.state = z.if_zero;
    } else {
      next.counters[z.counter - 1]--;
      next.state = z.if_pos;
    }
  }
  return next;
}

void all_drops(const Configuration& c, std::size_t i, Configuration& cur,
               std::set<Configuration>& out) {
  if (i == c.counters.size()) {
    out.insert(cur);
    return;
  }
  for (long v = c.counters[i]; v >= 0; --v) {
    cur.counters[i] = v;
    all_drops(c, i + 1, cur, out);
  }
}

std::set<Configuration> drops_of(const Configuration& c) {
  std::set<Configuration> out;
  Configuration cur = c;
  all_drops(c, 0, cur, out);
  return out;
}

}  // namespace

std::vector<Configuration> step(const CounterMachine& m, const Configuration& c,
                                bool lossy) {
  if (static_cast<int>(c.counters.size()) != m.counters)
    throw MachineError("configuration has wrong counter count");
  std::set<Configuration> out;
  auto it = m.delta.find(c.state);
  if (it == m.delta.end()) return {};
  if (!lossy) {
    out.insert(perfect_step(m, c, it->second));
  } else {
    for (const Configuration& pre : drops_of(c)) {
      Configuration mid = perfect_step(m, pre, it->second);
      for (const Configuration& post : drops_of(mid)) out.insert(post);
    }
  }
  return {out.begin(), out.end()};
}

ReachResult reach_00(const CounterMachine& m, bool lossy,
                     std::uint64_t max_configs, long counter_cap) {
  ReachResult res;
  Configuration start{m.init, std::vector<long>(m.counters, 0)};
  Configuration target{m.halt, std::vector<long>(m.counters, 0)};
  std::map<Configuration, Configuration> parent;
  std::deque<Configuration> queue;
  parent.emplace(start, start);
  queue.push_back(start);
  auto emit_path = [&](Configuration c) {
    std::vector<Configuration> path{c};
    while (!(parent.at(c) == c)) {
      c = parent.at(c);
      path.push_back(c);
    }
    std::reverse(path.begin(), path.end());
    return path;
  };
  if (start == target) return {ReachStatus::Found, emit_path(start), 1, false};
  while (!queue.empty()) {
    if (res.explored >= max_configs) {
      res.status = ReachStatus::BoundExceeded;
      return res;
    }
    Configuration c = queue.front();
    queue.pop_front();
    res.explored++;
    for (const Configuration& n : step(m, c, lossy)) {
      bool over = false;
      for (long v : n.counters)
        if (v > counter_cap) over = true;
      if (over) {
        res.counter_capped = true;
        continue;
      }
      if (parent.count(n)) continue;
      parent.emplace(n, c);
      if (n == target) {
        res.status = ReachStatus::Found;
        res.path = emit_path(n);
        return res;
      }
      queue.push_back(n);
    }
  }
  res.status = res.counter_capped ? ReachStatus::BoundExceeded : ReachStatus::SpaceClosed;
  return res;
}

// ---------------------------------------------------------------------------
// Encoders

namespace {

using FV = std::vector<Formula>;

Formula fold_and(const FV& fs) {
  if (fs.empty()) return Formula::tt();
  Formula acc = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) acc = Formula::land(acc, fs[i]);
  return acc;
}

Formula fold_or(const FV& fs) {
  if (fs.empty()) return Formula::ff();
  Formula acc = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) acc = Formula::lor(acc, fs[i]);
  return acc;
}

// Shared temporal scaffolding combinators for the block encodings.
struct EncCtx {
  const CounterMachine& m;
  std::vector<std::string> counter_letters;
  Formula pi, u, lastpt, st, ctr, ust, nostrictst, e1;

  explicit EncCtx(const CounterMachine& machine) : m(machine) {
    for (int i = 1; i <= m.counters; ++i)
      counter_letters.push_back("c" + std::to_string(i));
    pi = sing();
    u = unit_interval();
    lastpt = Formula::land(pi, Formula::box(Rel::Bbar, Formula::ff()));
    FV qs;
    std::set<std::string> all(m.states.begin(), m.states.end());
    all.insert(m.init);
    all.insert(m.halt);
    state_list.assign(all.begin(), all.end());
    for (const auto& q : state_list) qs.push_back(Formula::prop(q));
    st = fold_or(qs);
    FV cs;
    for (const auto& c : counter_letters) cs.push_back(Formula::prop(c));
    ctr = fold_or(cs);
    ust = Formula::land(u, st);
    // no state unit starts strictly inside the interval
    nostrictst =
        Formula::box(Rel::B, Formula::implies(Formula::dia(Rel::A, ust), pi));
    // exactly one state unit starts strictly inside
    Formula at_most_one = Formula::box(
        Rel::B,
        Formula::implies(
            Formula::land(Formula::lnot(pi), Formula::dia(Rel::A, ust)),
            Formula::box(Rel::B, Formula::implies(Formula::dia(Rel::A, ust), pi))));
    e1 = Formula::land(Formula::lnot(nostrictst), at_most_one);
  }

  std::vector<std::string> state_list;

  Formula q(const std::string& name) const { return Formula::prop(name); }
  Formula c(int i) const { return Formula::prop(counter_letters[i - 1]); }

  // every counter unit of the own block (anchored at any unit) satisfies x
  Formula own(Formula x) const {
    Formula per_unit = Formula::implies(
        Formula::land(u, Formula::lnot(st)), x);
    return Formula::land(
        Formula::box(Rel::A, per_unit),
        Formula::box(Rel::Bbar,
                     Formula::implies(nostrictst, Formula::box(Rel::A, per_unit))));
  }
  Formula ownex(Formula x) const { return Formula::lnot(own(Formula::lnot(x))); }

  // every counter unit of the next block along the time line
  Formula next_block(Formula x) const {
    Formula per_unit = Formula::implies(Formula::land(u, Formula::lnot(st)), x);
    return Formula::box(Rel::Bbar,
                        Formula::implies(e1, Formula::box(Rel::A, per_unit)));
  }
  Formula next_block_ex(Formula x) const {
    return Formula::lnot(next_block(Formula::lnot(x)));
  }

  // the first state unit after this one carries the given letter
  Formula hasnext(Formula target) const {
    Formula hit = Formula::land(nostrictst,
                                Formula::dia(Rel::A, Formula::land(u, target)));
    return Formula::lor(hit, Formula::dia(Rel::Bbar, hit));
  }

  Formula shared_scaffolding(std::vector<EncoderConjunct>& out,
                             bool with_transfer_letter) const {
    FV excl;
    for (std::size_t a = 0; a < state_list.size(); ++a)
      for (std::size_t b = a + 1; b < state_list.size(); ++b)
        excl.push_back(Formula::lnot(
            Formula::land(q(state_list[a]), q(state_list[b]))));
    for (int i = 1; i <= m.counters; ++i)
      for (int j = i + 1; j <= m.counters; ++j)
        excl.push_back(Formula::lnot(Formula::land(c(i), c(j))));
    excl.push_back(Formula::lnot(Formula::land(st, ctr)));
    out.push_back({"labels-exclusive",
                   "state and counter letters are mutually exclusive",
                   box_g(fold_and(excl))});
    Formula letters =
        fold_or({st, ctr, Formula::prop("new"), Formula::prop("del")});
    out.push_back({"letters-on-units",
                   "state, counter and marker letters live on unit intervals",
                   box_g(Formula::implies(letters, u))});
    out.push_back({"units-labeled", "every unit interval is a state or a counter",
                   box_g(Formula::implies(u, Formula::lor(st, ctr)))});
    out.push_back({"markers-on-counters", "new/del mark counter units",
                   box_g(Formula::land(
                       Formula::implies(Formula::prop("new"), ctr),
                       Formula::implies(Formula::prop("del"), ctr)))});
    out.push_back({"new-unique-per-block",
                   "at most one freshly created unit per configuration",
                   box_g(Formula::implies(Formula::land(u, Formula::prop("new")),
                                          own(Formula::lnot(Formula::prop("new")))))});
    out.push_back({"del-unique-per-block",
                   "at most one deleted unit per configuration",
                   box_g(Formula::implies(Formula::land(u, Formula::prop("del")),
                                          own(Formula::lnot(Formula::prop("del")))))});
    (void)with_transfer_letter;
    return Formula::tt();
  }
};

}  // namespace

Encoding encode(const CounterMachine& m) {
  m.validate();
  EncCtx ctx(m);
  std::vector<EncoderConjunct> cj;
  Formula u = ctx.u, pi = ctx.pi;
  Formula newl = Formula::prop("new"), dell = Formula::prop("del");
  Formula p = Formula::prop("p");

  cj.push_back({"init-anchor",
                "the model opens with the initial state over empty counters",
                Formula::dia(Rel::A,
                             Formula::land(Formula::land(u, ctx.q(m.init)),
                                           Formula::lor(Formula::dia(Rel::A, ctx.ust),
                                                        Formula::dia(Rel::A, ctx.lastpt))))});
  cj.push_back({"halt-present", "a halting configuration exists",
                diamond_g(Formula::land(u, ctx.q(m.halt)))});
  cj.push_back({"halt-final",
                "the halting configuration is last and has empty counters",
                box_g(Formula::implies(Formula::land(u, ctx.q(m.halt)),
                                       Formula::dia(Rel::A, ctx.lastpt)))});
  ctx.shared_scaffolding(cj, true);

  for (const auto& qname : ctx.state_list) {
    auto it = m.delta.find(qname);
    if (it == m.delta.end()) continue;
    Formula at_q = Formula::land(u, ctx.q(qname));
    if (const auto* inc = std::get_if<CounterMachine::Inc>(&it->second)) {
      Formula body = fold_and({ctx.hasnext(ctx.q(inc->next)),
                               ctx.next_block_ex(Formula::land(newl, ctx.c(inc->counter))),
                               ctx.own(Formula::lnot(dell))});
      cj.push_back({"trans-" + qname,
                    "increment: successor state, one fresh counter unit, no deletion",
                    box_g(Formula::implies(at_q, body))});
    } else {
      const auto& z = std::get<CounterMachine::Zdec>(it->second);
      Formula zero = ctx.own(Formula::lnot(ctx.c(z.counter)));
      Formula zcase = fold_and({zero, ctx.hasnext(ctx.q(z.if_zero)),
                                ctx.own(Formula::lnot(dell))});
      Formula pcase = fold_and(
          {Formula::lnot(zero), ctx.hasnext(ctx.q(z.if_pos)),
           ctx.ownex(Formula::land(dell, ctx.c(z.counter))),
           ctx.own(Formula::implies(dell, ctx.c(z.counter)))});
      Formula body = Formula::land(Formula::lor(zcase, pcase),
                                   ctx.next_block(Formula::lnot(newl)));
      cj.push_back({"trans-" + qname,
                    "zero test: branch on the depicted counter, delete on decrement",
                    box_g(Formula::implies(at_q, body))});
    }
  }

  Formula src_ctr = Formula::dia(Rel::B, Formula::land(u, ctx.ctr));
  cj.push_back({"transfer-shape",
                "p spans counter-unit start to counter-unit start across one state",
                box_g(Formula::implies(
                    p, fold_and({src_ctr, ctx.e1,
                                 Formula::dia(Rel::A, Formula::land(u, ctx.ctr))})))});
  for (int i = 1; i <= m.counters; ++i)
    cj.push_back({"transfer-keeps-c" + std::to_string(i),
                  "transfer preserves the counter index",
                  box_g(Formula::implies(
                      Formula::land(p, Formula::dia(Rel::B, Formula::land(u, ctx.c(i)))),
                      Formula::dia(Rel::A, Formula::land(u, ctx.c(i)))))});
  cj.push_back({"transfer-function", "at most one transfer leaves each unit",
                box_g(Formula::implies(p, Formula::box(Rel::B, Formula::lnot(p))))});
  for (int i = 1; i <= m.counters; ++i)
    cj.push_back({"transfer-total-c" + std::to_string(i),
                  "every surviving counter unit is transferred",
                  box_g(Formula::implies(
                      fold_and({u, ctx.c(i), Formula::lnot(dell)}),
                      Formula::dia(Rel::Bbar, p)))});
  cj.push_back({"transfer-skips-del", "deleted units are not transferred",
                box_g(Formula::implies(Formula::land(u, dell),
                                       Formula::box(Rel::Bbar, Formula::lnot(p))))});
  cj.push_back({"surjectivity", "no unsupported increments across configurations",
                psi_sur(ctx.counter_letters, "new", "p")});
  cj.push_back({"injectivity", "transfer collisions are refuted through p_sp",
                psi_inj("p", "p_sp", "s")});

  Encoding enc;
  enc.conjuncts = std::move(cj);
  FV all;
  for (const auto& c : enc.conjuncts) all.push_back(c.formula);
  enc.formula = fold_and(all);
  enc.fragment = Fragment::aabb();
  enc.spoiler_letters = {"p_sp"};
  return enc;
}

Encoding encode_abb_sim(const CounterMachine& m) {
  m.validate();
  EncCtx ctx(m);
  std::vector<EncoderConjunct> cj;
  Formula u = ctx.u, pi = ctx.pi;
  Formula newl = Formula::prop("new"), dell = Formula::prop("del");

  cj.push_back({"halt-anchor",
                "the model opens with the halting configuration (reversed time)",
                Formula::dia(Rel::A,
                             Formula::land(Formula::land(u, ctx.q(m.halt)),
                                           Formula::lor(Formula::dia(Rel::A, ctx.ust),
                                                        Formula::dia(Rel::A, ctx.lastpt))))});
  cj.push_back({"init-closes-model",
                "the initial configuration is the final block and is empty",
                Formula::land(
                    diamond_g(fold_and({u, ctx.q(m.init), Formula::dia(Rel::A, ctx.lastpt)})),
                    box_g(Formula::implies(
                        fold_and({u, ctx.st, Formula::dia(Rel::A, ctx.lastpt)}),
                        ctx.q(m.init))))});
  cj.push_back(
      {"halt-only-first", "the halting state appears only as the first block",
       Formula::land(
           Formula::box(Rel::A,
                        Formula::implies(
                            Formula::land(Formula::lnot(pi), Formula::lnot(u)),
                            Formula::box(Rel::A, Formula::implies(
                                                     u, Formula::lnot(ctx.q(m.halt)))))),
           Formula::box(Rel::A,
                        Formula::implies(
                            u, Formula::box(Rel::A, Formula::implies(
                                                        u, Formula::lnot(ctx.q(m.halt)))))))});
  ctx.shared_scaffolding(cj, false);

  for (const auto& qname : ctx.state_list) {
    auto it = m.delta.find(qname);
    if (it == m.delta.end()) continue;
    // attached at the predecessor-in-time block (the computation successor)
    Formula guard = fold_and({u, ctx.st, ctx.hasnext(ctx.q(qname))});
    if (const auto* inc = std::get_if<CounterMachine::Inc>(&it->second)) {
      Formula body = fold_and({ctx.q(inc->next),
                               ctx.ownex(Formula::land(newl, ctx.c(inc->counter))),
                               ctx.next_block(Formula::lnot(dell))});
      cj.push_back({"trans-" + qname,
                    "increment read backwards: fresh unit here, none deleted there",
                    box_g(Formula::implies(guard, body))});
    } else {
      const auto& z = std::get<CounterMachine::Zdec>(it->second);
      Formula zero = ctx.next_block(Formula::lnot(ctx.c(z.counter)));
      Formula zcase = Formula::implies(
          zero, fold_and({ctx.q(z.if_zero), ctx.next_block(Formula::lnot(dell)),
                          ctx.own(Formula::lnot(newl))}));
      Formula pcase = Formula::implies(
          Formula::lnot(zero),
          fold_and({ctx.q(z.if_pos),
                    ctx.next_block_ex(Formula::land(dell, ctx.c(z.counter))),
                    ctx.next_block(Formula::implies(dell, ctx.c(z.counter))),
                    ctx.own(Formula::lnot(newl))}));
      cj.push_back({"trans-" + qname,
                    "zero test read backwards, branching on the depicted counter",
                    box_g(Formula::implies(guard, Formula::land(zcase, pcase)))});
    }
  }

  for (int i = 1; i <= m.counters; ++i)
    cj.push_back({"sim-transfer-c" + std::to_string(i),
                  "surviving counter units trace to the previous configuration "
                  "through ~",
                  box_g(Formula::implies(
                      fold_and({u, ctx.c(i), Formula::lnot(newl)}),
                      Formula::dia(Rel::Bbar,
                                   fold_and({ctx.e1, Formula::sim(),
                                             Formula::dia(Rel::A,
                                                          fold_and({u, ctx.c(i),
                                                                    Formula::lnot(dell)}))}))))});
  cj.push_back({"sim-injectivity",
                "a proper ~ interval crosses a state unit, so classes are "
                "per-block injective",
                phi_sim_inj(ctx.state_list)});

  Encoding enc;
  enc.conjuncts = std::move(cj);
  FV all;
  for (const auto& c : enc.conjuncts) all.push_back(c.formula);
  enc.formula = fold_and(all);
  enc.fragment = Fragment::abbsim();
  enc.spoiler_letters = {};
  return enc;
}

// ---------------------------------------------------------------------------
// Witness structures

namespace {

struct StepKind {
  int inc_counter = 0;   // 1-based, 0 = none
  int del_counter = 0;   // 1-based, 0 = none
};

StepKind classify_step(const CounterMachine& m, const Configuration& cur,
                       const Configuration& next, std::size_t t) {
  auto it = m.delta.find(cur.state);
  if (it == m.delta.end())
    throw MachineError("computation stuck: no rule for state '" + cur.state +
                       "' at step " + std::to_string(t));
  auto fail = [&](const std::string& msg) -> void {
    throw MachineError("invalid computation at step " + std::to_string(t) + ": " + msg);
  };
  StepKind kind;
  std::vector<long> limit = cur.counters;
  if (const auto* inc = std::get_if<CounterMachine::Inc>(&it->second)) {
    if (next.state != inc->next) fail("increment must reach '" + inc->next + "'");
    kind.inc_counter = inc->counter;
    if (next.counters[inc->counter - 1] < 1)
      fail("the freshly created unit cannot be dropped in this encoding");
    limit[inc->counter - 1]++;
  } else {
    const auto& z = std::get<CounterMachine::Zdec>(it->second);
    if (cur.counters[z.counter - 1] == 0) {
      if (next.state != z.if_zero) fail("zero branch must reach '" + z.if_zero + "'");
    } else {
      if (next.state != z.if_pos) fail("positive branch must reach '" + z.if_pos + "'");
      kind.del_counter = z.counter;
      limit[z.counter - 1]--;
    }
  }
  for (int i = 0; i < m.counters; ++i) {
    if (next.counters[i] < 0) fail("negative counter");
    if (next.counters[i] > limit[i])
      fail("counter " + std::to_string(i + 1) + " grows beyond a lossy transfer");
  }
  return kind;
}

}  // namespace

IntervalStructure encode_witness_structure(const CounterMachine& m,
                                           const std::vector<Configuration>& path) {
  m.validate();
  if (path.empty()) throw MachineError("empty computation");
  for (const auto& c : path)
    if (static_cast<int>(c.counters.size()) != m.counters)
      throw MachineError("configuration arity mismatch");
  Configuration zero{m.init, std::vector<long>(m.counters, 0)};
  if (!(path.front().state == m.init) || path.front().counters != zero.counters)
    throw MachineError("computation must start at (init, 0)");
  if (!(path.back().state == m.halt) ||
      path.back().counters != std::vector<long>(m.counters, 0))
    throw MachineError("computation must end at (halt, 0)");

  const std::size_t T = path.size() - 1;
  std::vector<StepKind> kinds(T);
  for (std::size_t t = 0; t < T; ++t)
    kinds[t] = classify_step(m, path[t], path[t + 1], t);

  // Backward layout: block j holds configuration path[T - j].
  // Unit order within a block: state, then counters by ascending index.
  struct Block {
    int start = 0;                        // left endpoint of the state unit
    std::vector<std::vector<int>> cpos;   // per counter: unit left endpoints
  };
  std::vector<Block> blocks(T + 1);
  int pos = 0;
  for (std::size_t j = 0; j <= T; ++j) {
    const Configuration& cfg = path[T - j];
    blocks[j].start = pos++;
    blocks[j].cpos.resize(m.counters);
    for (int i = 0; i < m.counters; ++i)
      for (long v = 0; v < cfg.counters[i]; ++v) blocks[j].cpos[i].push_back(pos++);
  }
  IntervalStructure w(pos + 1);

  for (std::size_t j = 0; j <= T; ++j) {
    const Configuration& cfg = path[T - j];
    w.add_label({blocks[j].start, blocks[j].start + 1}, cfg.state);
    for (int i = 0; i < m.counters; ++i)
      for (int cp : blocks[j].cpos[i])
        w.add_label({cp, cp + 1}, "c" + std::to_string(i + 1));
  }

  // Transition t (computation order) pairs block jl = T-t-1 (configuration
  // t+1) with block jr = T-t (configuration t). new marks the last unit of
  // the incremented counter on the left, del the last unit of the
  // decremented counter on the right; survivors are matched in order and
  // joined by p arcs and ~ classes.
  for (std::size_t t = 0; t < T; ++t) {
    const Block& left = blocks[T - t - 1];
    const Block& right = blocks[T - t];
    if (kinds[t].inc_counter > 0) {
      const auto& units = left.cpos[kinds[t].inc_counter - 1];
      int nu = units.back();
      w.add_label({nu, nu + 1}, "new");
    }
    if (kinds[t].del_counter > 0) {
      const auto& units = right.cpos[kinds[t].del_counter - 1];
      int du = units.back();
      w.add_label({du, du + 1}, "del");
    }
    for (int i = 0; i < m.counters; ++i) {
      std::vector<int> sources = left.cpos[i];   // configuration t+1
      std::vector<int> targets = right.cpos[i];  // configuration t
      if (kinds[t].inc_counter == i + 1) sources.pop_back();  // the new unit
      if (kinds[t].del_counter == i + 1) targets.pop_back();  // the deleted unit
      if (sources.size() > targets.size())
        throw MachineError("internal: transfer cannot be injective");
      for (std::size_t k = 0; k < sources.size(); ++k) {
        w.add_label({sources[k], targets[k]}, "p");
        w.merge_points(sources[k], targets[k]);
      }
    }
  }
  return w;
}

}  // namespace itl
