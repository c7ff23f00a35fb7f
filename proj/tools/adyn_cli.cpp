#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "adyn/adapters.hpp"
#include "adyn/analysis.hpp"
#include "adyn/dynamics.hpp"
#include "adyn/generators.hpp"
#include "adyn/regret.hpp"
#include "adyn/schedule.hpp"
#include "adyn/specfile.hpp"

namespace {

using namespace adyn;

constexpr int kExitOk = 0;
constexpr int kExitNonConvergent = 10;
constexpr int kExitError = 2;
constexpr int kExitWitnessRejected = 1;

struct CommonOpts {
  std::string spec_path = "-";
  int activation_cap = 0;
  std::uint64_t seed = 0;  // absent seed = seed 0
  std::string format = "text";
};

ScheduleSource schedule_from_flag(const std::string& flag, int n, int r, std::uint64_t seed,
                                  const SystemSpec& spec) {
  if (flag == "roundrobin") return ScheduleSource::round_robin(n);
  if (flag == "randomfair") return ScheduleSource::random_fair(n, r > 0 ? r : n, seed);
  if (flag == "allsubsets") return ScheduleSource::all_subsets(n);
  if (flag.rfind("witness:", 0) == 0) {
    WitnessFile wf = parse_witness_file(spec, read_file(flag.substr(8)));
    return ScheduleSource::from_witness(n, wf.witness);
  }
  throw SpecError("unknown schedule '" + flag + "' (roundrobin|randomfair|allsubsets|witness:FILE)");
}

int emit_verdict(const SystemSpec& spec, const Verdict& verdict, const CommonOpts& opts,
                 const std::string& witness_out) {
  std::cout << (opts.format == "json" ? format_verdict_json(spec, verdict)
                                      : format_verdict_report(spec, verdict));
  if (verdict.non_convergent() && !witness_out.empty())
    write_file(witness_out, format_witness_file(spec, verdict.initial, verdict.witness));
  return verdict.non_convergent() ? kExitNonConvergent : kExitOk;
}

Configuration initial_from_flags(const SystemSpec& spec, const std::vector<std::string>& lines) {
  if (lines.empty()) {
    SpaceCodec codec(spec);
    return Configuration{codec.decode_window(0), 0};  // lowest-code window
  }
  if (static_cast<int>(lines.size()) == spec.recall_k) {
    std::vector<Profile> window;
    for (const auto& l : lines) window.push_back(parse_profile(spec, l));
    return initial_configuration(spec, std::move(window));
  }
  if (lines.size() == 1) return initial_configuration(spec, parse_profile(spec, lines[0]));
  throw SpecError("--initial must appear once or recall-many times");
}

int cmd_simulate(const CommonOpts& opts, const std::string& schedule_flag, int r,
                 long long horizon, const std::vector<std::string>& initial_lines,
                 const std::string& verify_path) {
  SystemSpec spec = load_system_file(opts.spec_path);
  if (!verify_path.empty()) {
    WitnessFile wf = parse_witness_file(spec, read_file(verify_path));
    std::string why;
    if (verify_witness(spec, wf.initial, wf.witness, &why)) {
      std::cout << "witness verified: fair non-convergent run\n";
      return kExitOk;
    }
    std::cout << "witness rejected: " << why << "\n";
    return kExitWitnessRejected;
  }
  ScheduleSource sched = schedule_from_flag(schedule_flag, spec.n, r, opts.seed, spec);
  Configuration initial = initial_from_flags(spec, initial_lines);
  Trace trace = run_dynamics(spec, initial, sched, horizon, opts.seed);
  std::cout << format_trace(spec, trace);
  if (auto stable = detect_stabilization(trace, spec))
    std::cout << "stabilized " << format_profile(spec, *stable) << "\n";
  else
    std::cout << "not-stabilized\n";
  return kExitOk;
}

int cmd_stable_states(const CommonOpts& opts) {
  SystemSpec spec = load_system_file(opts.spec_path);
  auto stable = enumerate_stable_states(spec);
  for (const auto& p : stable) std::cout << format_profile(spec, p) << "\n";
  std::cout << "count " << stable.size() << "\n";
  return kExitOk;
}

int cmd_check(const CommonOpts& opts, int r, const std::string& witness_out) {
  SystemSpec spec = load_system_file(opts.spec_path);
  Verdict verdict = r > 0 ? decide_r_convergent(spec, r, opts.activation_cap)
                          : decide_convergent(spec, opts.activation_cap);
  return emit_verdict(spec, verdict, opts, witness_out);
}

int cmd_synthesize(const CommonOpts& opts, const std::string& out_path) {
  SystemSpec spec = load_system_file(opts.spec_path);
  Oscillation osc = synthesize_oscillation(spec, opts.activation_cap);
  write_file(out_path, format_witness_file(spec, osc.initial, osc.witness));
  if (out_path != "-") std::cout << "witness written to " << out_path << "\n";
  return kExitOk;
}

int cmd_color(const CommonOpts& opts) {
  SystemSpec spec = load_system_file(opts.spec_path);
  StableColoring col = stable_coloring(spec, opts.activation_cap);
  SpaceCodec codec(spec);
  std::cout << "stable-states " << col.stable_states.size() << "\n";
  for (std::uint64_t v = 0; v < col.vertices; ++v) {
    std::cout << format_window(spec, codec, v) << " :";
    for (const auto& p : col.colors_of(v)) std::cout << " {" << format_profile(spec, p) << "}";
    if (col.color_count(v) == 0) std::cout << " none";
    std::cout << "\n";
  }
  std::cout << "good-initial-states " << count_good_initial_states(spec) << "\n";
  return kExitOk;
}

int cmd_generate(const std::string& kind, int n, int dim, std::uint64_t budget,
                 const std::string& ea, const std::string& eb, bool snake_only,
                 const std::string& snake_file, const std::string& gamma, int t,
                 const std::string& table, std::uint64_t seed) {
  auto parse_elems = [](const std::string& csv) {
    std::vector<int> out;
    std::istringstream in(csv);
    std::string tok;
    while (std::getline(in, tok, ','))
      if (!tok.empty()) out.push_back(std::stoi(tok));
    return out;
  };
  auto get_snake = [&]() {
    if (!snake_file.empty()) return parse_snake(read_file(snake_file));
    SnakeSearchResult res = find_max_snake(dim, budget);
    std::cerr << "snake search: length " << res.best.size()
              << (res.exhaustive ? " (exhaustive maximum)" : " (budget-limited best)");
    if (res.certified_lower_bound > 0)
      std::cerr << ", certified lower bound " << res.certified_lower_bound;
    std::cerr << "\n";
    return res.best;
  };

  if (kind == "snake" && snake_only) {
    std::cout << format_snake(get_snake());
    return kExitOk;
  }
  SystemSpec spec;
  if (kind == "ex1" || kind == "ex2" || kind == "ex3" || kind == "ex4")
    spec = make_example(kind, n);
  else if (kind == "snake")
    spec = build_snake_system(get_snake());
  else if (kind == "disjointness")
    spec = build_disjointness_system(parse_elems(ea), parse_elems(eb), get_snake());
  else if (kind == "string-machine") {
    StringMachine m;
    m.t = t;
    {
      std::istringstream in(gamma);
      std::string tok;
      while (std::getline(in, tok, ','))
        if (!tok.empty()) m.gamma.push_back(tok);
    }
    std::istringstream in(table);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      if (tok.empty()) continue;
      if (tok == "halt") {
        m.table.push_back(static_cast<int>(m.gamma.size()));
      } else {
        auto it = std::find(m.gamma.begin(), m.gamma.end(), tok);
        if (it == m.gamma.end()) throw SpecError("table symbol '" + tok + "' not in gamma");
        m.table.push_back(static_cast<int>(it - m.gamma.begin()));
      }
    }
    spec = build_string_system(m);
  } else if (kind == "random")
    spec = random_self_independent_system(n, seed);
  else
    throw SpecError("unknown generator '" + kind + "'");
  std::cout << format_system(spec);
  return kExitOk;
}

int cmd_adapt(const std::string& kind, const std::string& in_path) {
  std::string text = read_file(in_path);
  SystemSpec spec;
  if (kind == "game") spec = game_to_system(parse_game(text));
  else if (kind == "circuit") spec = circuit_to_system(parse_circuit(text));
  else if (kind == "social") spec = social_to_system(parse_social(text));
  else if (kind == "spp") spec = routing_to_system(parse_spp(text));
  else if (kind == "congestion") spec = congestion_to_system(parse_congestion(text));
  else throw SpecError("unknown adapter '" + kind + "' (game|circuit|social|spp|congestion)");
  std::cout << format_system(spec);
  return kExitOk;
}

int cmd_regret(const std::string& config_path) {
  std::istringstream in(read_file(config_path));
  std::string line;
  int lineno = 0;
  NormalFormGame game;
  bool have_game = false;
  std::vector<std::string> alg_tokens;
  std::string schedule_kind = "roundrobin";
  int r = 0;
  long long horizon = 10000;
  std::vector<std::uint64_t> seeds{0};
  auto failat = [&](const std::string& m) -> void {
    throw SpecError("regret config line " + std::to_string(lineno) + ": " + m);
  };
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string tok;
    while (ls >> tok) toks.push_back(tok);
    if (toks.empty()) continue;
    if (!header) {
      if (toks[0] != "regret") failat("expected 'regret' header");
      header = true;
      continue;
    }
    if (toks[0] == "end") break;
    if (toks[0] == "game" && toks.size() == 2) {
      game = parse_game(read_file(toks[1]));
      have_game = true;
    } else if (toks[0] == "builtin-game" && toks.size() == 2) {
      if (toks[1] == "pennies") game = matching_pennies();
      else if (toks[1] == "coordination") game = coordination_2x2();
      else if (toks[1] == "pd") game = prisoners_dilemma();
      else failat("unknown builtin game");
      have_game = true;
    } else if (toks[0] == "algorithms") {
      alg_tokens.assign(toks.begin() + 1, toks.end());
    } else if (toks[0] == "schedule" && toks.size() == 2) {
      schedule_kind = toks[1];
    } else if (toks[0] == "r" && toks.size() == 2) {
      r = std::stoi(toks[1]);
    } else if (toks[0] == "T" && toks.size() == 2) {
      horizon = std::stoll(toks[1]);
    } else if (toks[0] == "seeds") {
      seeds.clear();
      for (std::size_t i = 1; i < toks.size(); ++i) seeds.push_back(std::stoull(toks[i]));
    } else {
      failat("unknown directive '" + toks[0] + "'");
    }
  }
  if (!have_game) throw SpecError("regret config names no game");
  if (static_cast<int>(alg_tokens.size()) != game.players)
    throw SpecError("regret config needs one algorithm per player");

  std::vector<LearnerSpec> specs;
  for (int i = 0; i < game.players; ++i) {
    const std::string& a = alg_tokens[i];
    if (a == "mw") specs.push_back(LearnerSpec::mw());
    else if (a.rfind("mw:", 0) == 0) specs.push_back(LearnerSpec::mw(std::stod(a.substr(3))));
    else if (a == "swap") specs.push_back(LearnerSpec::swap());
    else if (a.rfind("fixed:", 0) == 0) {
      std::string name = a.substr(6);
      auto& names = game.strategies[i];
      auto it = std::find(names.begin(), names.end(), name);
      if (it == names.end()) throw SpecError("fixed strategy '" + name + "' unknown");
      specs.push_back(LearnerSpec::fixed(static_cast<int>(it - names.begin())));
    } else {
      throw SpecError("unknown algorithm '" + a + "' (mw|mw:ETA|swap|fixed:STRATEGY)");
    }
  }

  std::cout << "seed\tplayer\tT\text_regret\tswap_regret\tce_gap\tavg_gain\n";
  for (std::uint64_t seed : seeds) {
    ScheduleSource sched = schedule_kind == "randomfair"
                               ? ScheduleSource::random_fair(game.players, r > 0 ? r : 2, seed)
                               : ScheduleSource::round_robin(game.players);
    LearningOutcome out = run_learning(game, specs, sched, horizon, seed);
    for (int i = 0; i < game.players; ++i) {
      const auto& rep = out.players[i];
      std::cout << seed << "\t" << i + 1 << "\t" << horizon << "\t" << rep.external_regret
                << "\t" << rep.swap_regret << "\t" << out.ce_gap.to_double() << "\t"
                << rep.avg_gain << "\n";
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "asynchronous adaptive-heuristic dynamics: simulator, convergence model checker and "
      "instance generators"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string schedule_flag = "roundrobin";
  int r_flag = 0;
  long long horizon = 100;
  std::vector<std::string> initial_lines;
  std::string verify_path, witness_out, out_path = "-";

  auto add_common = [&](CLI::App* cmd, bool with_cap = true) {
    cmd->add_option("--spec", opts.spec_path, "system file ('-' = stdin)");
    cmd->add_option("--seed", opts.seed, "random seed (default 0)");
    cmd->add_option("--format", opts.format, "text|json")
        ->check(CLI::IsMember({"text", "json"}));
    if (with_cap)
      cmd->add_option("--activation-cap", opts.activation_cap,
                      "max simultaneous activations enumerated (default n)");
  };

  auto* simulate = app.add_subcommand("simulate", "run the dynamics or verify a witness");
  add_common(simulate, false);
  simulate->add_option("--horizon", horizon, "steps to run");
  simulate->add_option("--schedule", schedule_flag,
                       "roundrobin|randomfair|allsubsets|witness:FILE");
  simulate->add_option("--r", r_flag, "fairness bound for randomfair");
  simulate->add_option("--initial", initial_lines,
                       "initial profile, e.g. \"x y\" (repeat recall-many times for windows)");
  simulate->add_option("--verify-witness", verify_path, "check a witness file and exit");

  auto* stable = app.add_subcommand("stable-states", "enumerate stable states");
  add_common(stable, false);

  auto* check = app.add_subcommand("check", "decide convergence (exit 0/10/2)");
  add_common(check);
  check->add_option("--witness-out", witness_out, "write the oscillation witness here");

  auto* check_r = app.add_subcommand("check-r", "decide r-convergence (exit 0/10/2)");
  add_common(check_r);
  check_r->add_option("--r", r_flag, "fairness bound r")->required();
  check_r->add_option("--witness-out", witness_out, "write the oscillation witness here");

  auto* synthesize = app.add_subcommand("synthesize", "synthesize an oscillation witness");
  add_common(synthesize);
  synthesize->add_option("--out", out_path, "witness file path ('-' = stdout)");

  auto* color = app.add_subcommand("color", "stable coloring of every configuration");
  add_common(color);

  std::string gen_kind, gen_ea, gen_eb, snake_file, gamma = "a,b", table;
  int gen_n = 2, gen_dim = 3, gen_t = 2;
  std::uint64_t gen_budget = 0;
  bool snake_only = false;
  auto* generate = app.add_subcommand("generate", "emit a generated system file");
  generate->add_option("kind", gen_kind, "ex1|ex2|ex3|ex4|snake|disjointness|string-machine|random")
      ->required();
  generate->add_option("--n", gen_n, "node count (ex3/ex4/random)");
  generate->add_option("--dim", gen_dim, "hypercube dimension (snake/disjointness)");
  generate->add_option("--budget", gen_budget, "snake search budget (0 = default)");
  generate->add_option("--snake-file", snake_file, "use this snake instead of searching");
  generate->add_flag("--snake-only", snake_only, "emit the snake text format, not a system");
  generate->add_option("--ea", gen_ea, "comma list, Alice's set (disjointness)");
  generate->add_option("--eb", gen_eb, "comma list, Bob's set (disjointness)");
  generate->add_option("--gamma", gamma, "comma list of machine symbols");
  generate->add_option("--t", gen_t, "string length (string-machine)");
  generate->add_option("--table", table,
                       "comma list of outputs over Gamma^t in code order, 'halt' allowed");
  generate->add_option("--seed", opts.seed, "seed (random)");

  std::string adapt_kind, adapt_in = "-";
  auto* adapt = app.add_subcommand("adapt", "encode an application instance as a system");
  adapt->add_option("kind", adapt_kind, "game|circuit|social|spp|congestion")->required();
  adapt->add_option("--in", adapt_in, "input file ('-' = stdin)");

  std::string regret_config;
  auto* regret = app.add_subcommand("regret", "no-regret experiment from a config file");
  regret->add_option("--config", regret_config, "experiment config file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed())
      return cmd_simulate(opts, schedule_flag, r_flag, horizon, initial_lines, verify_path);
    if (stable->parsed()) return cmd_stable_states(opts);
    if (check->parsed()) return cmd_check(opts, 0, witness_out);
    if (check_r->parsed()) return cmd_check(opts, r_flag, witness_out);
    if (synthesize->parsed()) return cmd_synthesize(opts, out_path);
    if (color->parsed()) return cmd_color(opts);
    if (generate->parsed())
      return cmd_generate(gen_kind, gen_n, gen_dim, gen_budget, gen_ea, gen_eb, snake_only,
                          snake_file, gamma, gen_t, table, opts.seed);
    if (adapt->parsed()) return cmd_adapt(adapt_kind, adapt_in);
    if (regret->parsed()) return cmd_regret(regret_config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
