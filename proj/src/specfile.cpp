#include "adyn/specfile.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <variant>

#include "adyn/generators.hpp"
#include "json.hpp"

namespace adyn {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> toks;
  std::string tok;
  while (in >> tok) toks.push_back(tok);
  return toks;
}

[[noreturn]] void fail(int lineno, const std::string& msg) {
  throw SpecError("system file line " + std::to_string(lineno) + ": " + msg);
}

std::string strip_comment(std::string line) {
  auto hash = line.find('#');
  if (hash != std::string::npos) line.erase(hash);
  return line;
}

std::string flag_names(const Flags& f) {
  std::string s;
  auto add = [&](bool v, const char* name) {
    if (!v) return;
    if (!s.empty()) s += ' ';
    s += name;
  };
  add(f.deterministic, "deterministic");
  add(f.self_independent, "self_independent");
  add(f.stationary, "stationary");
  add(f.historyless, "historyless");
  return s;
}

std::string distribution_text(const SystemSpec& spec, int node, const Distribution& d) {
  if (d.is_point()) return spec.alphabets[node][d.point_action()];
  std::string out;
  for (std::size_t i = 0; i < d.weights.size(); ++i) {
    if (i) out += ' ';
    out += spec.alphabets[node][d.weights[i].first] + ":" + d.weights[i].second.str();
  }
  return out;
}

}  // namespace

std::string format_system(const SystemSpec& spec) {
  std::ostringstream out;
  out << "system\n";
  if (spec.provenance) {
    out << "generator " << spec.provenance->id << "\n";
    for (const auto& [k, v] : spec.provenance->params) out << k << " " << v << "\n";
    out << "end\n";
    return out.str();
  }
  out << "n " << spec.n << "\n";
  out << "recall " << spec.recall_k << "\n";
  for (int i = 0; i < spec.n; ++i) {
    out << "alphabet " << i + 1;
    for (const auto& s : spec.alphabets[i]) out << " " << s;
    out << "\n";
  }
  std::string fl = flag_names(spec.flags);
  if (!fl.empty()) out << "flags " << fl << "\n";

  SpaceCodec codec(spec);
  for (int i = 0; i < spec.n; ++i) {
    if (!spec.reactions[i].is_table())
      throw SpecError("cannot format a named reaction without generator provenance");
    const auto& slices = spec.reactions[i].table().slices;
    for (std::size_t s = 0; s < slices.size(); ++s) {
      out << "table " << i + 1;
      if (slices.size() > 1) out << " slice " << s + 1;
      out << "\n";
      for (std::uint64_t w = 0; w < codec.window_count(); ++w)
        out << format_window(spec, codec, w) << " -> " << distribution_text(spec, i, slices[s][w])
            << "\n";
    }
  }
  out << "end\n";
  return out.str();
}

namespace {

Distribution parse_distribution(const SystemSpec& spec, int node,
                                const std::vector<std::string>& toks, int lineno) {
  Distribution d;
  if (toks.size() == 1 && toks[0].find(':') == std::string::npos) {
    int a = spec.symbol_index(node, toks[0]);
    if (a < 0) fail(lineno, "symbol '" + toks[0] + "' not in node " + std::to_string(node + 1) +
                                "'s alphabet");
    return Distribution::point(a);
  }
  for (const auto& tok : toks) {
    auto colon = tok.find(':');
    if (colon == std::string::npos) fail(lineno, "expected SYMBOL:WEIGHT, got '" + tok + "'");
    int a = spec.symbol_index(node, tok.substr(0, colon));
    if (a < 0) fail(lineno, "symbol '" + tok.substr(0, colon) + "' not in alphabet");
    Rational w = Rational::from_string(tok.substr(colon + 1));
    d.weights.emplace_back(a, w);
  }
  std::sort(d.weights.begin(), d.weights.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return d;
}

}  // namespace

SystemSpec parse_system(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto next = [&](std::vector<std::string>* toks, std::string* raw = nullptr) {
    while (std::getline(in, line)) {
      ++lineno;
      std::string stripped = strip_comment(line);
      *toks = tokenize(stripped);
      if (!toks->empty()) {
        if (raw) *raw = stripped;
        return true;
      }
    }
    return false;
  };

  std::vector<std::string> toks;
  if (!next(&toks) || toks[0] != "system") fail(lineno, "expected 'system' header");

  SystemSpec spec;
  bool saw_n = false;
  std::string raw;
  while (next(&toks, &raw)) {
    if (toks[0] == "end") break;
    if (toks[0] == "generator") {
      if (toks.size() != 2) fail(lineno, "generator stanza needs an id");
      GeneratorStanza stanza;
      stanza.id = toks[1];
      while (next(&toks, &raw)) {
        if (toks[0] == "end") {
          SystemSpec built = rebuild_generator(stanza);
          validate_spec(built);
          return built;
        }
        std::string value = raw;
        auto pos = value.find(toks[0]);
        value = value.substr(pos + toks[0].size());
        while (!value.empty() && (value.front() == ' ' || value.front() == '\t'))
          value.erase(value.begin());
        while (!value.empty() && (value.back() == ' ' || value.back() == '\r'))
          value.pop_back();
        stanza.params.emplace_back(toks[0], value);
      }
      fail(lineno, "generator stanza missing 'end'");
    }
    if (toks[0] == "n" && toks.size() == 2) {
      spec.n = std::stoi(toks[1]);
      if (spec.n < 1 || spec.n > guard::max_nodes) fail(lineno, "n out of range");
      spec.alphabets.assign(spec.n, {});
      spec.reactions.assign(spec.n, {});
      saw_n = true;
    } else if (toks[0] == "recall" && toks.size() == 2) {
      spec.recall_k = spec.window_w = std::stoi(toks[1]);
      if (spec.recall_k < 1) fail(lineno, "recall must be >= 1");
    } else if (toks[0] == "alphabet" && toks.size() >= 3) {
      if (!saw_n) fail(lineno, "'n' must come before alphabets");
      int node = std::stoi(toks[1]);
      if (node < 1 || node > spec.n) fail(lineno, "node out of range");
      spec.alphabets[node - 1].assign(toks.begin() + 2, toks.end());
    } else if (toks[0] == "flags") {
      for (std::size_t t = 1; t < toks.size(); ++t) {
        if (toks[t] == "deterministic") spec.flags.deterministic = true;
        else if (toks[t] == "self_independent") spec.flags.self_independent = true;
        else if (toks[t] == "stationary") spec.flags.stationary = true;
        else if (toks[t] == "historyless") spec.flags.historyless = true;
        else fail(lineno, "unknown flag '" + toks[t] + "'");
      }
    } else if (toks[0] == "table" && toks.size() >= 2) {
      if (!saw_n) fail(lineno, "'n' must come before tables");
      for (int i = 0; i < spec.n; ++i)
        if (spec.alphabets[i].empty())
          fail(lineno, "alphabet of node " + std::to_string(i + 1) + " missing before tables");
      int node = std::stoi(toks[1]);
      if (node < 1 || node > spec.n) fail(lineno, "node out of range");
      std::size_t slice = 0;
      if (toks.size() == 4 && toks[2] == "slice") slice = std::stoul(toks[3]) - 1;
      else if (toks.size() != 2) fail(lineno, "expected 'table NODE [slice S]'");

      SpaceCodec codec(spec);
      if (codec.window_count() > guard::table_entries)
        throw SizeGuardError("system file table would need " +
                             std::to_string(codec.window_count()) + " entries");
      auto& rf = spec.reactions[node - 1];
      if (!rf.is_table()) rf.fn = TableFn{};
      auto& table = std::get<TableFn>(rf.fn);
      if (table.slices.size() != slice)
        fail(lineno, "table slices must appear in order starting at 1");
      table.slices.emplace_back(codec.window_count());
      std::vector<bool> filled(codec.window_count(), false);

      std::uint64_t remaining = codec.window_count();
      while (remaining > 0) {
        if (!next(&toks, &raw)) fail(lineno, "table ended before covering every window");
        auto arrow = std::find(toks.begin(), toks.end(), "->");
        if (arrow == toks.end()) fail(lineno, "table entry needs '->'");
        // left side: k profiles separated by '|', oldest first
        std::vector<Profile> profiles;
        Profile current;
        for (auto it = toks.begin(); it != arrow; ++it) {
          if (*it == "|") {
            profiles.push_back(current);
            current.clear();
            continue;
          }
          int node_idx = static_cast<int>(current.size());
          if (node_idx >= spec.n) fail(lineno, "too many symbols in window profile");
          int a = spec.symbol_index(node_idx, *it);
          if (a < 0) fail(lineno, "symbol '" + *it + "' not in node " +
                                      std::to_string(node_idx + 1) + "'s alphabet");
          current.push_back(a);
        }
        profiles.push_back(current);
        if (static_cast<int>(profiles.size()) != spec.recall_k)
          fail(lineno, "window must list exactly " + std::to_string(spec.recall_k) +
                           " profile(s)");
        for (const auto& p : profiles)
          if (static_cast<int>(p.size()) != spec.n)
            fail(lineno, "profile must list one symbol per node");
        std::uint64_t w = codec.window_of_profiles(profiles);
        if (filled[w]) fail(lineno, "duplicate table entry for this window");
        filled[w] = true;
        --remaining;
        table.slices[slice][w] = parse_distribution(
            spec, node - 1, std::vector<std::string>(arrow + 1, toks.end()), lineno);
      }
    } else {
      fail(lineno, "unknown directive '" + toks[0] + "'");
    }
  }
  validate_spec(spec);
  return spec;
}

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SpecError("cannot open '" + path + "' for writing");
  out << content;
}

SystemSpec load_system_file(const std::string& path) { return parse_system(read_file(path)); }

Profile parse_profile(const SystemSpec& spec, const std::string& line) {
  auto toks = tokenize(line);
  if (static_cast<int>(toks.size()) != spec.n)
    throw SpecError("profile needs " + std::to_string(spec.n) + " symbols, got " +
                    std::to_string(toks.size()));
  Profile p(spec.n);
  for (int i = 0; i < spec.n; ++i) {
    p[i] = spec.symbol_index(i, toks[i]);
    if (p[i] < 0)
      throw SpecError("symbol '" + toks[i] + "' not in node " + std::to_string(i + 1) +
                      "'s alphabet");
  }
  return p;
}

std::string format_witness_file(const SystemSpec& spec, const Configuration& initial,
                                const ScheduleWitness& witness) {
  std::ostringstream out;
  out << "witness\n";
  for (const auto& p : initial.window) out << "initial " << format_profile(spec, p) << "\n";
  out << "schedule\n" << format_witness(witness) << "end\n";
  return out.str();
}

WitnessFile parse_witness_file(const SystemSpec& spec, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  WitnessFile wf;
  bool header = false, in_schedule = false;
  std::string schedule_text;
  while (std::getline(in, line)) {
    ++lineno;
    std::string stripped = strip_comment(line);
    auto toks = tokenize(stripped);
    if (!header) {
      if (toks.empty()) continue;
      if (toks[0] != "witness")
        throw SpecError("witness file line " + std::to_string(lineno) +
                        ": expected 'witness' header");
      header = true;
      continue;
    }
    if (in_schedule) {
      if (!toks.empty() && toks[0] == "end") break;
      schedule_text += stripped + "\n";
      continue;
    }
    if (toks.empty()) continue;
    if (toks[0] == "initial") {
      wf.initial.window.push_back(
          parse_profile(spec, stripped.substr(stripped.find("initial") + 7)));
    } else if (toks[0] == "schedule") {
      in_schedule = true;
    } else {
      throw SpecError("witness file line " + std::to_string(lineno) + ": unexpected '" +
                      toks[0] + "'");
    }
  }
  if (!in_schedule) throw SpecError("witness file has no schedule section");
  wf.witness = parse_witness(schedule_text);
  validate_configuration(spec, wf.initial);
  return wf;
}

std::string format_verdict_report(const SystemSpec& spec, const Verdict& verdict) {
  std::ostringstream out;
  out << "verdict " << (verdict.non_convergent() ? "NonConvergent" : "Convergent") << "\n";
  if (verdict.r > 0) out << "r " << verdict.r << "\n";
  out << "vertices " << verdict.stats.vertices << "\n";
  out << "edges " << verdict.stats.edges << "\n";
  out << "search-nodes " << verdict.stats.search_nodes << "\n";
  out << "activation-cap " << verdict.activation_cap << "\n";
  if (!verdict.cap_exhaustive && !verdict.non_convergent())
    out << "note convergent under <=" << verdict.activation_cap
        << "-simultaneity (activation cap below n)\n";
  if (verdict.non_convergent()) {
    for (const auto& p : verdict.initial.window)
      out << "initial " << format_profile(spec, p) << "\n";
    out << "witness\n" << format_witness(verdict.witness) << "end\n";
  }
  return out.str();
}

std::string format_verdict_json(const SystemSpec& spec, const Verdict& verdict) {
  nlohmann::json j;
  j["verdict"] = verdict.non_convergent() ? "NonConvergent" : "Convergent";
  if (verdict.r > 0) j["r"] = verdict.r;
  j["vertices"] = verdict.stats.vertices;
  j["edges"] = verdict.stats.edges;
  j["search_nodes"] = verdict.stats.search_nodes;
  j["activation_cap"] = verdict.activation_cap;
  j["cap_exhaustive"] = verdict.cap_exhaustive;
  if (verdict.non_convergent()) {
    auto& init = j["initial"] = nlohmann::json::array();
    for (const auto& p : verdict.initial.window) init.push_back(format_profile(spec, p));
    auto sets = [](const std::vector<NodeSet>& v) {
      nlohmann::json arr = nlohmann::json::array();
      for (NodeSet s : v) arr.push_back(format_node_set(s));
      return arr;
    };
    j["witness"]["prefix"] = sets(verdict.witness.prefix);
    j["witness"]["cycle"] = sets(verdict.witness.cycle);
  }
  return j.dump(2) + "\n";
}

std::string format_trace(const SystemSpec& spec, const Trace& trace) {
  std::ostringstream out;
  out << "trace\n";
  for (const auto& p : trace.initial.window) out << "initial " << format_profile(spec, p) << "\n";
  if (trace.rng_seed) out << "seed " << *trace.rng_seed << "\n";
  for (const auto& s : trace.steps)
    out << "step " << format_node_set(s.active) << " : " << format_profile(spec, s.profile)
        << "\n";
  out << "end\n";
  return out.str();
}

}  // namespace adyn
