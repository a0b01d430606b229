// Command-line front end: model checking, bounded satisfiability, finite
// synthesis, counter-machine encodings, and a terminal game REPL.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "itl/counter_machine.hpp"
#include "itl/game.hpp"
#include "itl/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitInput = 2;
constexpr int kExitResource = 3;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

itl::Fragment fragment_by_name(const std::string& name, const itl::Formula& phi) {
  if (name == "auto") return itl::infer_fragment(phi);
  if (name == "abb") return itl::Fragment::abb();
  if (name == "abbsim") return itl::Fragment::abbsim();
  if (name == "aabb") return itl::Fragment::aabb();
  if (name == "aabbsim") return itl::Fragment::aabbsim();
  throw std::runtime_error("unknown fragment '" + name + "'");
}

itl::Bits parse_spoiler_set(const itl::ClosureTable& table, const std::string& spec) {
  itl::Bits out(table.item_count());
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    itl::Formula f = itl::normalize(itl::parse_formula(tok));
    itl::ItemId id = table.find(f);
    if (id == itl::kNoItem || !table.sigma_t_mask().get(id))
      throw std::runtime_error("spoiler id '" + tok + "' is not a member of Sigma^T");
    out.set(id);
  }
  return out;
}

struct PlayOptions {
  bool as_duplicator = false;
};

int run_play(std::shared_ptr<const itl::ClosureTable> table, const itl::Formula& phi,
             const itl::Bits& sigma_sp, const itl::SynthLimits& limits,
             const PlayOptions& opts) {
  using namespace itl;
  Strategy engine;
  if (!opts.as_duplicator) {
    std::cout << "solving for a Duplicator strategy...\n";
    SynthesisVerdict verdict = decide_finite_synthesis(table, sigma_sp, limits);
    if (verdict.kind != VerdictKind::Realizable) {
      std::cout << verdict.serialize(*table);
      std::cout << "no winning Duplicator strategy available; try --as-duplicator\n";
      return verdict.kind == VerdictKind::Unrealizable ? kExitNegative : kExitResource;
    }
    engine = extract_strategy(table, sigma_sp, *verdict.tree);
    std::cout << "REALIZABLE; you play Spoiler.\n";
  } else {
    std::cout << "you play Duplicator against an enumerating Spoiler.\n";
  }

  std::vector<ItemId> sp_ids;
  sigma_sp.for_each([&](std::size_t id) { sp_ids.push_back(static_cast<ItemId>(id)); });
  Run run = Run::empty(table, sigma_sp);
  std::string line;
  while (true) {
    std::vector<Interval> legal = legal_moves(run);
    std::cout << "legal intervals:";
    for (Interval itv : legal) std::cout << ' ' << to_string(itv);
    std::cout << "\n";

    Bits move_sigma(table->item_count());
    Interval itv{};
    if (!opts.as_duplicator) {
      std::cout << "spoiler> " << std::flush;
      if (!std::getline(std::cin, line)) break;
      std::istringstream ls(line);
      std::string first;
      if (!(ls >> first)) continue;
      if (first == "quit") break;
      int mx = 0, my = 0;
      try {
        mx = std::stoi(first);
        if (!(ls >> my)) throw std::runtime_error("missing y");
      } catch (...) {
        std::cout << "expected: x y id1 id2 ... | quit\n";
        continue;
      }
      itv = {mx, my};
      if (std::find(legal.begin(), legal.end(), itv) == legal.end()) {
        bool revisit = false;
        for (const Move& mv : run.moves) revisit |= mv.itv == itv;
        std::cout << "illegal move " << to_string(itv) << ": run condition "
                  << (revisit ? "2 (each interval is labeled exactly once)"
                              : "3 (no jumping ahead of unlabeled intervals)")
                  << "\n";
        continue;
      }
      bool bad = false;
      std::string tok;
      while (ls >> tok) {
        try {
          Formula f = normalize(parse_formula(tok));
          ItemId id = table->find(f);
          if (id == kNoItem || !sigma_sp.get(id))
            throw std::runtime_error("not Spoiler-controlled");
          move_sigma.set(id);
        } catch (const std::exception& e) {
          std::cout << "rejected id '" << tok << "': run condition 2 "
                    << "(Spoiler labels only his own letters): " << e.what() << "\n";
          bad = true;
          break;
        }
      }
      if (bad) continue;
      run.moves.push_back({itv, move_sigma, Role::Spoiler});
      Bits reply = engine(run);
      run.moves.push_back({itv, reply, Role::Duplicator});
      std::cout << "duplicator labels " << to_string(itv) << " :";
      std::string ids = format_sigma(*table, reply);
      if (!ids.empty()) std::cout << ' ' << ids;
      std::cout << "\n";
    } else {
      itv = legal.front();
      std::uint64_t mask = 0;
      if (!sp_ids.empty())
        mask = (run.moves.size() / 2) % (std::uint64_t{1} << sp_ids.size());
      for (std::size_t i = 0; i < sp_ids.size(); ++i)
        if ((mask >> i) & 1) move_sigma.set(sp_ids[i]);
      std::cout << "spoiler plays " << to_string(itv) << " :";
      std::string ids = format_sigma(*table, move_sigma);
      if (!ids.empty()) std::cout << ' ' << ids;
      std::cout << "\nduplicator> " << std::flush;
      if (!std::getline(std::cin, line)) break;
      if (line == "quit") break;
      std::istringstream ls(line);
      std::string tok;
      Bits reply(table->item_count());
      bool bad = false;
      while (ls >> tok) {
        try {
          Formula f = normalize(parse_formula(tok));
          ItemId id = table->find(f);
          if (id == kNoItem || !table->sigma_t_mask().get(id) || sigma_sp.get(id))
            throw std::runtime_error("not Duplicator-controlled");
          reply.set(id);
        } catch (const std::exception& e) {
          std::cout << "rejected id '" << tok << "': run condition 2 "
                    << "(Duplicator labels the complement of Sigma^T_spoiler): "
                    << e.what() << "\n";
          bad = true;
          break;
        }
      }
      if (bad) continue;
      run.moves.push_back({itv, move_sigma, Role::Spoiler});
      run.moves.push_back({itv, reply, Role::Duplicator});
    }

    RunReport report = validate_run(run);
    if (report.complete && is_successful(run, phi)) {
      std::cout << "success: the labeled prefix over " << report.points
                << " point(s) is a model of the formula\n";
      std::cout << format_run(run);
      return kExitOk;
    }
  }
  std::cout << "bye\n";
  return kExitOk;
}

int dispatch(int argc, char** argv) {
  using namespace itl;
  CLI::App app{"interval temporal logic synthesis toolkit"};
  app.require_subcommand(1);

  std::string structure_path, formula_path, machine_path, run_path, variant;
  std::string fragment_name = "auto", spoiler_spec;
  int x = 0, y = 0;
  int max_points = 4;
  std::size_t atom_limit = 1000;
  SynthLimits limits;
  bool no_pruning = false, as_duplicator = false, show_conjuncts = false;

  auto add_limit_flags = [&](CLI::App* cmd) {
    cmd->add_option("--max-nodes", limits.max_nodes, "search node budget");
    cmd->add_option("--max-depth", limits.max_points, "largest explored point count");
    cmd->add_option("--timeout-s", limits.timeout_s, "wall clock limit in seconds");
    cmd->add_option("--workers", limits.workers, "top-level branch workers");
    cmd->add_flag("--no-pruning", no_pruning, "disable WQO minimality pruning");
  };

  auto* c_check = app.add_subcommand("check", "model-check a formula on a structure");
  c_check->add_option("structure", structure_path)->required();
  c_check->add_option("x", x)->required();
  c_check->add_option("y", y)->required();
  c_check->add_option("formula", formula_path)->required();

  auto* c_sat = app.add_subcommand("sat", "bounded satisfiability");
  c_sat->add_option("formula", formula_path)->required();
  c_sat->add_option("--max-points", max_points, "largest model size tried");
  c_sat->add_option("--fragment", fragment_name, "abb|abbsim|aabb|aabbsim|auto");
  bool sat_anywhere = false;
  c_sat->add_flag("--anywhere", sat_anywhere, "satisfy on some interval, not [0,0]");

  auto* c_synth = app.add_subcommand("synth", "decide finite synthesis");
  c_synth->add_option("formula", formula_path)->required();
  c_synth->add_option("--spoiler", spoiler_spec, "comma-separated Sigma^T_spoiler ids");
  c_synth->add_option("--fragment", fragment_name);
  add_limit_flags(c_synth);

  auto* c_play = app.add_subcommand("play", "interactive game REPL");
  c_play->add_option("formula", formula_path)->required();
  c_play->add_option("--spoiler", spoiler_spec);
  c_play->add_option("--fragment", fragment_name);
  c_play->add_flag("--as-duplicator", as_duplicator,
                   "play Duplicator yourself against an enumerating Spoiler");
  add_limit_flags(c_play);

  auto* c_enc = app.add_subcommand("encode_cm", "encode a counter machine");
  c_enc->add_option("machine", machine_path)->required();
  c_enc->add_option("variant", variant, "aabb|abbsim")->required();
  c_enc->add_flag("--conjuncts", show_conjuncts, "list named conjuncts");

  auto* c_atoms = app.add_subcommand("atoms", "enumerate formula atoms");
  c_atoms->add_option("formula", formula_path)->required();
  c_atoms->add_option("--limit", atom_limit, "output size bound");
  c_atoms->add_option("--fragment", fragment_name);

  auto* c_val = app.add_subcommand("validate", "validate a run trace");
  c_val->add_option("run", run_path)->required();
  c_val->add_option("formula", formula_path)->required();
  c_val->add_option("--spoiler", spoiler_spec);
  c_val->add_option("--fragment", fragment_name);

  CLI11_PARSE(app, argc, argv);
  limits.minimality_pruning = !no_pruning;

  if (*c_check) {
    IntervalStructure m = IntervalStructure::parse(slurp(structure_path));
    Formula phi = parse_formula(slurp(formula_path));
    bool res = check(m, {x, y}, phi);
    std::cout << (res ? "true" : "false") << "\n";
    return res ? kExitOk : kExitNegative;
  }
  if (*c_sat) {
    Formula phi = parse_formula(slurp(formula_path));
    Fragment frag = fragment_by_name(fragment_name, phi);
    auto model = sat_anywhere
                     ? bounded_sat_anywhere(phi, frag, max_points, limits)
                     : bounded_sat(phi, frag, max_points, limits);
    if (!model) {
      std::cout << "NONE-WITHIN-BOUND\n";
      return kExitNegative;
    }
    std::cout << model->format();
    return kExitOk;
  }
  if (*c_synth) {
    Formula phi = parse_formula(slurp(formula_path));
    auto table = std::make_shared<ClosureTable>(phi, fragment_by_name(fragment_name, phi));
    Bits sp = parse_spoiler_set(*table, spoiler_spec);
    SynthesisVerdict verdict = decide_finite_synthesis(table, sp, limits);
    std::cout << verdict.serialize(*table);
    switch (verdict.kind) {
      case VerdictKind::Realizable: return kExitOk;
      case VerdictKind::Unrealizable: return kExitNegative;
      case VerdictKind::ResourceExceeded: return kExitResource;
    }
  }
  if (*c_play) {
    Formula phi = parse_formula(slurp(formula_path));
    auto table = std::make_shared<ClosureTable>(phi, fragment_by_name(fragment_name, phi));
    Bits sp = parse_spoiler_set(*table, spoiler_spec);
    return run_play(table, phi, sp, limits, {as_duplicator});
  }
  if (*c_enc) {
    CounterMachine m = CounterMachine::parse(slurp(machine_path));
    Encoding enc;
    if (variant == "aabb")
      enc = encode(m);
    else if (variant == "abbsim")
      enc = encode_abb_sim(m);
    else
      throw std::runtime_error("variant must be aabb or abbsim");
    if (show_conjuncts) {
      for (const auto& c : enc.conjuncts)
        std::cout << "# " << c.name << ": " << c.role << "\n"
                  << print_formula(c.formula) << "\n";
    } else {
      std::cout << print_formula(enc.formula) << "\n";
    }
    if (!enc.spoiler_letters.empty()) {
      std::cout << "# spoiler:";
      for (const auto& l : enc.spoiler_letters) std::cout << ' ' << l;
      std::cout << "\n";
    }
    return kExitOk;
  }
  if (*c_atoms) {
    Formula phi = parse_formula(slurp(formula_path));
    ClosureTable table(phi, fragment_by_name(fragment_name, phi));
    AtomEnumeration enumeration = enumerate_atoms(table, atom_limit);
    std::cout << "atoms " << enumeration.atoms.size()
              << (enumeration.complete ? "" : "+ (limit exceeded, partial)") << "\n";
    for (const auto& a : enumeration.atoms) {
      std::string ids;
      a.bits().for_each([&](std::size_t id) {
        if (!ids.empty()) ids += ' ';
        ids += print_formula(table.item(static_cast<ItemId>(id)), true);
      });
      std::cout << ids << "\n";
    }
    return enumeration.complete ? kExitOk : kExitResource;
  }
  if (*c_val) {
    Formula phi = parse_formula(slurp(formula_path));
    auto table = std::make_shared<ClosureTable>(phi, fragment_by_name(fragment_name, phi));
    Bits sp = parse_spoiler_set(*table, spoiler_spec);
    Run run = parse_run(slurp(run_path), table, sp);
    RunReport report = validate_run(run);
    std::cout << report.to_string();
    if (report.ok() && report.complete) {
      bool succ = is_successful(run, phi);
      std::cout << (succ ? "successful\n" : "not successful\n");
      return succ ? kExitOk : kExitNegative;
    }
    return report.ok() ? kExitOk : kExitNegative;
  }
  return kExitInput;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const itl::ParseError& e) {
    std::cerr << "parse error at " << e.line << ":" << e.col << ": " << e.what()
              << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
