#include "adyn/adapters.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace adyn {

namespace {

struct LineReader {
  explicit LineReader(const std::string& text, std::string format)
      : in(text), format_(std::move(format)) {}

  // next meaningful line, tokenized on whitespace; false at end of input
  bool next(std::vector<std::string>* tokens) {
    std::string line;
    while (std::getline(in, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::istringstream ls(line);
      tokens->clear();
      std::string tok;
      while (ls >> tok) tokens->push_back(tok);
      if (!tokens->empty()) return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw SpecError(format_ + " line " + std::to_string(lineno) + ": " + msg);
  }

  std::istringstream in;
  int lineno = 0;
  std::string format_;
};

int parse_int(const LineReader& r, const std::string& tok) {
  try {
    std::size_t used = 0;
    int v = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (...) {
    r.fail("expected an integer, got '" + tok + "'");
  }
}

Rational parse_rat(const LineReader& r, const std::string& tok) {
  try {
    return Rational::from_string(tok);
  } catch (...) {
    r.fail("expected a rational, got '" + tok + "'");
  }
}

TableFn tabulate_profiles(const SystemSpec& spec, int node,
                          const std::function<int(const Profile&)>& g) {
  SpaceCodec codec(spec);
  std::vector<Distribution> slice(codec.profile_count());
  for (std::uint64_t p = 0; p < codec.profile_count(); ++p)
    slice[p] = Distribution::point(g(codec.decode_profile(p)));
  return TableFn{{std::move(slice)}};
}

SystemSpec historyless_system(std::vector<std::vector<std::string>> alphabets,
                              const std::function<int(int, const Profile&)>& g, Flags flags) {
  SystemSpec spec;
  spec.n = static_cast<int>(alphabets.size());
  spec.alphabets = std::move(alphabets);
  spec.recall_k = spec.window_w = 1;
  spec.reactions.resize(spec.n);
  for (int i = 0; i < spec.n; ++i)
    spec.reactions[i].fn = tabulate_profiles(spec, i, [&, i](const Profile& p) { return g(i, p); });
  spec.flags = flags;
  return spec;
}

}  // namespace

// ---------------------------------------------------------------------------
// Games
// ---------------------------------------------------------------------------

std::uint64_t NormalFormGame::profile_count() const {
  std::uint64_t c = 1;
  for (const auto& s : strategies) c *= s.size();
  return c;
}

std::uint64_t NormalFormGame::code_of(const Profile& s) const {
  std::uint64_t code = 0, m = 1;
  for (int i = 0; i < players; ++i) {
    code += static_cast<std::uint64_t>(s[i]) * m;
    m *= strategies[i].size();
  }
  return code;
}

void validate_game(const NormalFormGame& game) {
  if (game.players < 1) throw SpecError("game needs >= 1 player");
  if (static_cast<int>(game.strategies.size()) != game.players)
    throw SpecError("strategy sets != player count");
  for (const auto& s : game.strategies)
    if (s.empty()) throw SpecError("empty strategy set");
  if (game.utilities.size() != game.profile_count() * game.players)
    throw SpecError("utility table is not total over S");
}

NormalFormGame parse_game(const std::string& text) {
  LineReader r(text, "game");
  std::vector<std::string> toks;
  if (!r.next(&toks) || toks[0] != "game") r.fail("expected 'game' header");
  NormalFormGame game;
  std::vector<bool> filled;
  while (r.next(&toks)) {
    if (toks[0] == "end") break;
    if (toks[0] == "players" && toks.size() == 2) {
      game.players = parse_int(r, toks[1]);
      if (game.players < 1 || game.players > 10) r.fail("players must be in [1, 10]");
      game.strategies.assign(game.players, {});
    } else if (toks[0] == "strategies" && toks.size() >= 3) {
      int p = parse_int(r, toks[1]);
      if (p < 1 || p > game.players) r.fail("player out of range");
      game.strategies[p - 1].assign(toks.begin() + 2, toks.end());
    } else if (toks[0] == "payoff") {
      if (game.utilities.empty()) {
        game.utilities.assign(game.profile_count() * game.players, Rational(0));
        filled.assign(game.profile_count(), false);
      }
      auto colon = std::find(toks.begin(), toks.end(), ":");
      if (colon == toks.end()) r.fail("payoff line needs ':'");
      std::vector<std::string> strat(toks.begin() + 1, colon);
      std::vector<std::string> utils(colon + 1, toks.end());
      if (static_cast<int>(strat.size()) != game.players ||
          static_cast<int>(utils.size()) != game.players)
        r.fail("payoff line needs one strategy and one utility per player");
      Profile s(game.players);
      for (int i = 0; i < game.players; ++i) {
        const auto& names = game.strategies[i];
        auto it = std::find(names.begin(), names.end(), strat[i]);
        if (it == names.end()) r.fail("unknown strategy '" + strat[i] + "'");
        s[i] = static_cast<int>(it - names.begin());
      }
      std::uint64_t code = game.code_of(s);
      filled[code] = true;
      for (int i = 0; i < game.players; ++i)
        game.utilities[code * game.players + i] = parse_rat(r, utils[i]);
    } else {
      r.fail("unknown directive '" + toks[0] + "'");
    }
  }
  for (std::size_t c = 0; c < filled.size(); ++c)
    if (!filled[c]) throw SpecError("game: payoff table is not total over S");
  validate_game(game);
  return game;
}

std::string format_game(const NormalFormGame& game) {
  std::ostringstream out;
  out << "game\nplayers " << game.players << "\n";
  for (int i = 0; i < game.players; ++i) {
    out << "strategies " << i + 1;
    for (const auto& s : game.strategies[i]) out << " " << s;
    out << "\n";
  }
  Profile s(game.players, 0);
  for (std::uint64_t c = 0; c < game.profile_count(); ++c) {
    std::uint64_t rest = c;
    for (int i = 0; i < game.players; ++i) {
      s[i] = static_cast<int>(rest % game.strategies[i].size());
      rest /= game.strategies[i].size();
    }
    out << "payoff";
    for (int i = 0; i < game.players; ++i) out << " " << game.strategies[i][s[i]];
    out << " :";
    for (int i = 0; i < game.players; ++i)
      out << " " << game.utilities[c * game.players + i].str();
    out << "\n";
  }
  out << "end\n";
  return out.str();
}

SystemSpec game_to_system(const NormalFormGame& game,
                          const std::vector<std::vector<int>>& tie_break) {
  validate_game(game);
  std::vector<std::vector<int>> order = tie_break;
  if (order.empty()) {
    order.resize(game.players);
    for (int i = 0; i < game.players; ++i) {
      order[i].resize(game.strategy_count(i));
      std::iota(order[i].begin(), order[i].end(), 0);
    }
  }
  for (int i = 0; i < game.players; ++i) {
    std::vector<int> sorted = order[i];
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> expect(game.strategy_count(i));
    std::iota(expect.begin(), expect.end(), 0);
    if (sorted != expect) throw SpecError("tie-break order must be a total order per player");
  }

  return historyless_system(
      game.strategies,
      [&](int i, const Profile& p) {
        Profile probe = p;
        int best = -1;
        Rational best_util;
        for (int cand : order[i]) {
          probe[i] = cand;
          Rational u = game.utility(probe, i);
          if (best == -1 || u > best_util) {
            best = cand;
            best_util = u;
          }
        }
        return best;
      },
      Flags{true, true, true, true});
}

std::vector<Profile> pure_nash_equilibria(const NormalFormGame& game) {
  validate_game(game);
  std::vector<Profile> out;
  Profile s(game.players, 0);
  for (std::uint64_t c = 0; c < game.profile_count(); ++c) {
    std::uint64_t rest = c;
    for (int i = 0; i < game.players; ++i) {
      s[i] = static_cast<int>(rest % game.strategies[i].size());
      rest /= game.strategies[i].size();
    }
    bool ne = true;
    for (int i = 0; i < game.players && ne; ++i) {
      Rational have = game.utility(s, i);
      Profile dev = s;
      for (int j = 0; j < game.strategy_count(i) && ne; ++j) {
        dev[i] = j;
        ne = game.utility(dev, i) <= have;
      }
    }
    if (ne) out.push_back(s);
  }
  return out;
}

NormalFormGame matching_pennies() {
  NormalFormGame g;
  g.players = 2;
  g.strategies = {{"H", "T"}, {"H", "T"}};
  g.utilities.assign(8, Rational(0));
  auto set = [&](int a, int b, int u0) {
    std::uint64_t c = static_cast<std::uint64_t>(a) + 2 * b;
    g.utilities[c * 2] = Rational(u0);
    g.utilities[c * 2 + 1] = Rational(-u0);
  };
  set(0, 0, 1);
  set(1, 1, 1);
  set(0, 1, -1);
  set(1, 0, -1);
  return g;
}

NormalFormGame coordination_2x2() {
  NormalFormGame g;
  g.players = 2;
  g.strategies = {{"a", "b"}, {"a", "b"}};
  g.utilities.assign(8, Rational(0));
  for (int s = 0; s < 2; ++s) {
    std::uint64_t c = static_cast<std::uint64_t>(s) + 2 * s;
    g.utilities[c * 2] = g.utilities[c * 2 + 1] = Rational(1);
  }
  return g;
}

NormalFormGame prisoners_dilemma() {
  NormalFormGame g;
  g.players = 2;
  g.strategies = {{"C", "D"}, {"C", "D"}};
  g.utilities.assign(8, Rational(0));
  auto set = [&](int a, int b, int u0, int u1) {
    std::uint64_t c = static_cast<std::uint64_t>(a) + 2 * b;
    g.utilities[c * 2] = Rational(u0);
    g.utilities[c * 2 + 1] = Rational(u1);
  };
  set(0, 0, 3, 3);
  set(0, 1, 0, 5);
  set(1, 0, 5, 0);
  set(1, 1, 1, 1);
  return g;
}

// ---------------------------------------------------------------------------
// Circuits
// ---------------------------------------------------------------------------

void validate_circuit(const CircuitNetlist& netlist) {
  std::set<std::string> names;
  for (const auto& v : netlist.vertices) {
    if (!names.insert(v.name).second) throw SpecError("duplicate circuit vertex '" + v.name + "'");
    if (v.is_input) {
      if (v.fixed_bit != 0 && v.fixed_bit != 1) throw SpecError("input bit must be 0 or 1");
      continue;
    }
    if (v.sources.empty()) throw SpecError("gate '" + v.name + "' has no inputs");
    if (v.truth.size() != (std::size_t{1} << v.sources.size()))
      throw SpecError("gate '" + v.name + "' fan-in does not match its truth-table arity");
    for (int b : v.truth)
      if (b != 0 && b != 1) throw SpecError("truth table bits must be 0 or 1");
    for (int s : v.sources)
      if (s < 0 || s >= static_cast<int>(netlist.vertices.size()))
        throw SpecError("gate '" + v.name + "' wired to a missing vertex");
  }
}

namespace {

std::vector<int> builtin_gate_truth(const std::string& kind, int arity, const std::string& at) {
  if (kind.rfind("table:", 0) == 0) {
    std::string bits = kind.substr(6);
    if (bits.size() != (std::size_t{1} << arity))
      throw SpecError(at + ": table has " + std::to_string(bits.size()) + " bits, arity needs " +
                      std::to_string(std::size_t{1} << arity));
    std::vector<int> t;
    for (char ch : bits) {
      if (ch != '0' && ch != '1') throw SpecError(at + ": truth table must be bits");
      t.push_back(ch - '0');
    }
    return t;
  }
  std::vector<int> t(std::size_t{1} << arity, 0);
  for (std::size_t idx = 0; idx < t.size(); ++idx) {
    int ones = std::popcount(idx);
    int total = arity;
    if (kind == "and") t[idx] = ones == total;
    else if (kind == "or") t[idx] = ones > 0;
    else if (kind == "nand") t[idx] = ones != total;
    else if (kind == "nor") t[idx] = ones == 0;
    else if (kind == "xor") t[idx] = ones % 2;
    else if (kind == "xnor") t[idx] = 1 - ones % 2;
    else if (kind == "not" && arity == 1) t[idx] = 1 - static_cast<int>(idx);
    else if (kind == "buf" && arity == 1) t[idx] = static_cast<int>(idx);
    else throw SpecError(at + ": unknown gate kind '" + kind + "'");
  }
  return t;
}

}  // namespace

CircuitNetlist parse_circuit(const std::string& text) {
  LineReader r(text, "circuit");
  std::vector<std::string> toks;
  if (!r.next(&toks) || toks[0] != "circuit") r.fail("expected 'circuit' header");
  CircuitNetlist net;
  std::map<std::string, int> index;
  struct Pending {
    int vertex;
    std::string kind;
    std::vector<std::string> sources;
    int lineno;
  };
  std::vector<Pending> pending;
  while (r.next(&toks)) {
    if (toks[0] == "end") break;
    if (toks[0] == "input" && toks.size() == 3) {
      CircuitNetlist::Vertex v;
      v.name = toks[1];
      v.is_input = true;
      v.fixed_bit = parse_int(r, toks[2]);
      index[v.name] = static_cast<int>(net.vertices.size());
      net.vertices.push_back(v);
    } else if (toks[0] == "gate" && toks.size() >= 4) {
      CircuitNetlist::Vertex v;
      v.name = toks[1];
      index[v.name] = static_cast<int>(net.vertices.size());
      net.vertices.push_back(v);
      pending.push_back({index[v.name], toks[2],
                         std::vector<std::string>(toks.begin() + 3, toks.end()), r.lineno});
    } else {
      r.fail("expected 'input NAME BIT' or 'gate NAME KIND SRC...'");
    }
  }
  for (const auto& p : pending) {
    auto& v = net.vertices[p.vertex];
    for (const auto& s : p.sources) {
      auto it = index.find(s);
      if (it == index.end())
        throw SpecError("circuit line " + std::to_string(p.lineno) + ": unknown wire source '" +
                        s + "'");
      v.sources.push_back(it->second);
    }
    v.truth = builtin_gate_truth(p.kind, static_cast<int>(v.sources.size()),
                                 "circuit line " + std::to_string(p.lineno));
  }
  validate_circuit(net);
  return net;
}

SystemSpec circuit_to_system(const CircuitNetlist& netlist) {
  validate_circuit(netlist);
  std::vector<std::vector<std::string>> alphabets(netlist.vertices.size(),
                                                  std::vector<std::string>{"0", "1"});
  return historyless_system(
      alphabets,
      [&](int i, const Profile& p) {
        const auto& v = netlist.vertices[i];
        if (v.is_input) return v.fixed_bit;
        std::size_t idx = 0;
        for (int s : v.sources) idx = (idx << 1) | static_cast<std::size_t>(p[s]);
        return v.truth[idx];
      },
      Flags{true, false, true, true});
}

// ---------------------------------------------------------------------------
// Social networks
// ---------------------------------------------------------------------------

void validate_social(const SocialGraph& graph) {
  if (graph.nodes < 1) throw SpecError("social graph needs >= 1 node");
  if (static_cast<int>(graph.friends.size()) != graph.nodes)
    throw SpecError("friend lists != node count");
  for (int i = 0; i < graph.nodes; ++i) {
    if (graph.friends[i].empty())
      throw SpecError("node " + std::to_string(i + 1) +
                      " has no friends; majority is undefined");
    for (int j : graph.friends[i]) {
      if (j < 0 || j >= graph.nodes) throw SpecError("friend index out of range");
      if (j == i) throw SpecError("self-friendship breaks self-independence");
    }
  }
}

SocialGraph parse_social(const std::string& text) {
  LineReader r(text, "social");
  std::vector<std::string> toks;
  if (!r.next(&toks) || toks[0] != "social") r.fail("expected 'social' header");
  SocialGraph g;
  while (r.next(&toks)) {
    if (toks[0] == "end") break;
    if (toks[0] == "nodes" && toks.size() == 2) {
      g.nodes = parse_int(r, toks[1]);
      g.friends.assign(g.nodes, {});
    } else if (toks[0] == "edge" && toks.size() == 3) {
      int a = parse_int(r, toks[1]), b = parse_int(r, toks[2]);
      if (a < 1 || a > g.nodes || b < 1 || b > g.nodes) r.fail("edge endpoint out of range");
      g.friends[a - 1].push_back(b - 1);
    } else {
      r.fail("expected 'nodes N' or 'edge A B'");
    }
  }
  validate_social(g);
  return g;
}

SystemSpec social_to_system(const SocialGraph& graph) {
  validate_social(graph);
  std::vector<std::vector<std::string>> alphabets(graph.nodes,
                                                  std::vector<std::string>{"X", "Y"});
  return historyless_system(
      alphabets,
      [&](int i, const Profile& p) {
        int x = 0;
        for (int j : graph.friends[i]) x += p[j] == 0;
        // at least half of i's friends on X selects X
        return 2 * x >= static_cast<int>(graph.friends[i].size()) ? 0 : 1;
      },
      Flags{true, true, true, true});
}

// ---------------------------------------------------------------------------
// Stable paths instances
// ---------------------------------------------------------------------------

namespace {

bool spp_has_edge(const SppInstance& spp, int a, int b) {
  for (auto [x, y] : spp.edges)
    if ((x == a && y == b) || (x == b && y == a)) return true;
  return false;
}

std::string route_symbol(const std::vector<int>& route) {
  std::string s;
  for (std::size_t i = 0; i < route.size(); ++i) {
    if (i) s += '-';
    s += route[i] == 0 ? "d" : std::to_string(route[i]);
  }
  return s;
}

}  // namespace

void validate_spp(const SppInstance& spp) {
  if (spp.nodes < 1) throw SpecError("spp needs >= 1 AS");
  if (static_cast<int>(spp.permitted.size()) != spp.nodes)
    throw SpecError("route rankings != AS count");
  for (auto [a, b] : spp.edges) {
    if (a < 0 || a > spp.nodes || b < 0 || b > spp.nodes || a == b)
      throw SpecError("bad spp edge");
  }
  for (int i = 1; i <= spp.nodes; ++i) {
    std::set<std::vector<int>> seen;
    for (const auto& route : spp.permitted[i - 1]) {
      if (route.size() < 2 || route.front() != i || route.back() != 0)
        throw SpecError("route of AS " + std::to_string(i) + " must run from it to d");
      std::set<int> nodes_on(route.begin(), route.end());
      if (nodes_on.size() != route.size())
        throw SpecError("permitted route of AS " + std::to_string(i) + " is not simple");
      for (std::size_t h = 0; h + 1 < route.size(); ++h)
        if (!spp_has_edge(spp, route[h], route[h + 1]))
          throw SpecError("route of AS " + std::to_string(i) + " uses a missing link");
      if (!seen.insert(route).second)
        throw SpecError("duplicate permitted route for AS " + std::to_string(i) +
                        " (ranking must be strict)");
    }
  }
}

SppInstance parse_spp(const std::string& text) {
  LineReader r(text, "spp");
  std::vector<std::string> toks;
  if (!r.next(&toks) || toks[0] != "spp") r.fail("expected 'spp' header");
  SppInstance spp;
  auto node_of = [&](const std::string& tok) {
    if (tok == "d") return 0;
    int v = parse_int(r, tok);
    if (v < 1 || v > spp.nodes) r.fail("AS index out of range");
    return v;
  };
  while (r.next(&toks)) {
    if (toks[0] == "end") break;
    if (toks[0] == "nodes" && toks.size() == 2) {
      spp.nodes = parse_int(r, toks[1]);
      spp.permitted.assign(spp.nodes, {});
    } else if (toks[0] == "edge" && toks.size() == 3) {
      spp.edges.emplace_back(node_of(toks[1]), node_of(toks[2]));
    } else if (toks[0] == "rank" && toks.size() >= 3 && toks[2] == ":") {
      int owner = parse_int(r, toks[1]);
      if (owner < 1 || owner > spp.nodes) r.fail("AS index out of range");
      std::vector<int> route;
      for (std::size_t t = 3; t < toks.size(); ++t) {
        if (toks[t] == ">") {
          spp.permitted[owner - 1].push_back(route);
          route.clear();
        } else {
          route.push_back(node_of(toks[t]));
        }
      }
      if (!route.empty()) spp.permitted[owner - 1].push_back(route);
    } else {
      r.fail("expected 'nodes N', 'edge A B' or 'rank I : route > route > ...'");
    }
  }
  validate_spp(spp);
  return spp;
}

SystemSpec routing_to_system(const SppInstance& spp) {
  validate_spp(spp);
  std::vector<std::vector<std::string>> alphabets(spp.nodes);
  for (int i = 0; i < spp.nodes; ++i) {
    for (const auto& route : spp.permitted[i]) alphabets[i].push_back(route_symbol(route));
    alphabets[i].push_back("empty");
  }
  return historyless_system(
      alphabets,
      [&](int i, const Profile& p) {
        const auto& routes = spp.permitted[i];
        for (std::size_t rank = 0; rank < routes.size(); ++rank) {
          const auto& route = routes[rank];
          int hop = route[1];
          if (hop == 0) return static_cast<int>(rank);  // direct route to d
          const auto& hop_routes = spp.permitted[hop - 1];
          int hop_action = p[hop - 1];
          if (hop_action >= static_cast<int>(hop_routes.size())) continue;  // hop holds empty
          const auto& hop_route = hop_routes[hop_action];
          if (std::equal(route.begin() + 1, route.end(), hop_route.begin(), hop_route.end()))
            return static_cast<int>(rank);
        }
        return static_cast<int>(routes.size());  // empty route
      },
      Flags{true, true, true, true});
}

SppInstance disagree_gadget() {
  SppInstance spp;
  spp.nodes = 2;
  spp.edges = {{1, 0}, {2, 0}, {1, 2}};
  spp.permitted = {{{1, 2, 0}, {1, 0}}, {{2, 1, 0}, {2, 0}}};
  return spp;
}

SppInstance bad_gadget() {
  SppInstance spp;
  spp.nodes = 3;
  spp.edges = {{1, 0}, {2, 0}, {3, 0}, {1, 2}, {2, 3}, {3, 1}};
  spp.permitted = {{{1, 2, 0}, {1, 0}}, {{2, 3, 0}, {2, 0}}, {{3, 1, 0}, {3, 0}}};
  return spp;
}

SppInstance shortest_path_spp() {
  // 4 ASes on a path-with-shortcut topology; rankings by (length, lexicographic)
  SppInstance spp;
  spp.nodes = 4;
  spp.edges = {{1, 0}, {2, 0}, {1, 2}, {2, 3}, {3, 4}, {4, 1}};
  auto shorter = [](const std::vector<int>& a, const std::vector<int>& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  };
  spp.permitted.assign(4, {});
  // enumerate all simple routes per AS
  std::function<void(int, std::vector<int>&, std::vector<bool>&)> walk =
      [&](int owner, std::vector<int>& route, std::vector<bool>& used) {
        int at = route.back();
        if (at == 0) {
          spp.permitted[owner - 1].push_back(route);
          return;
        }
        for (int nxt = 0; nxt <= spp.nodes; ++nxt) {
          if (nxt != 0 && used[nxt]) continue;
          if (!spp_has_edge(spp, at, nxt)) continue;
          route.push_back(nxt);
          if (nxt != 0) used[nxt] = true;
          walk(owner, route, used);
          if (nxt != 0) used[nxt] = false;
          route.pop_back();
        }
      };
  for (int i = 1; i <= 4; ++i) {
    std::vector<int> route{i};
    std::vector<bool> used(spp.nodes + 1, false);
    used[i] = true;
    walk(i, route, used);
    std::sort(spp.permitted[i - 1].begin(), spp.permitted[i - 1].end(), shorter);
  }
  return spp;
}

// ---------------------------------------------------------------------------
// Congestion control
// ---------------------------------------------------------------------------

namespace {

long long units_of(const Rational& value, const Rational& gran, const std::string& what) {
  Rational q = value / gran;
  if (q.den() != 1 || q.num() < 0)
    throw SpecError(what + " (" + value.str() + ") is not a nonnegative multiple of the grid");
  return q.num();
}

// connections through edge e, in declaration order
std::vector<int> conns_through(const CongestionNetwork& net, int e) {
  std::vector<int> out;
  for (std::size_t c = 0; c < net.connections.size(); ++c)
    for (int re : net.connections[c].route)
      if (re == e) {
        out.push_back(static_cast<int>(c));
        break;
      }
  return out;
}

void enumerate_allocations(long long cap, int slots, std::vector<long long>& cur,
                           std::vector<std::vector<long long>>* out) {
  if (slots == 0) {
    out->push_back(cur);
    return;
  }
  for (long long x = 0; x <= cap; ++x) {
    cur.push_back(x);
    enumerate_allocations(cap - x, slots - 1, cur, out);
    cur.pop_back();
  }
}

std::vector<long long> apply_policy(const CongestionNetwork::Policy& policy,
                                    const std::vector<long long>& w, long long cap) {
  std::vector<long long> x(w.size(), 0);
  switch (policy.kind) {
    case CongestionNetwork::PolicyKind::fixed:
      return policy.fixed;
    case CongestionNetwork::PolicyKind::priority: {
      long long left = cap;
      for (int local : policy.priority) {
        x[local] = std::min(w[local], left);
        left -= x[local];
      }
      return x;
    }
    case CongestionNetwork::PolicyKind::fair_share: {
      // deterministic integer max-min: equal shares, leftovers by index order
      long long left = cap;
      while (left > 0) {
        std::vector<int> unsat;
        for (std::size_t c = 0; c < w.size(); ++c)
          if (x[c] < w[c]) unsat.push_back(static_cast<int>(c));
        if (unsat.empty()) break;
        long long q = left / static_cast<long long>(unsat.size());
        if (q == 0) {
          for (int c : unsat) {
            if (left == 0) break;
            ++x[c];
            --left;
          }
          break;
        }
        for (int c : unsat) {
          long long give = std::min(q, w[c] - x[c]);
          x[c] += give;
          left -= give;
        }
      }
      return x;
    }
  }
  throw SpecError("unreachable policy kind");
}

}  // namespace

void validate_congestion(const CongestionNetwork& net) {
  if (net.granularity <= Rational(0)) throw SpecError("granularity must be positive");
  if (net.edges.size() < 1) throw SpecError("congestion network needs edges");
  if (net.policies.size() != net.edges.size())
    throw SpecError("every edge needs a queueing policy");
  std::set<std::string> names;
  for (const auto& e : net.edges) {
    if (!names.insert(e.name).second) throw SpecError("duplicate edge '" + e.name + "'");
    units_of(e.capacity, net.granularity, "capacity of " + e.name);
  }
  for (const auto& c : net.connections) {
    if (c.route.empty()) throw SpecError("connection '" + c.name + "' has no route");
    if (units_of(c.rate, net.granularity, "rate of " + c.name) < 1)
      throw SpecError("connection '" + c.name + "' must send at a positive rate");
    std::set<int> seen;
    for (int e : c.route) {
      if (e < 0 || e >= static_cast<int>(net.edges.size()))
        throw SpecError("route of '" + c.name + "' uses a missing edge");
      if (!seen.insert(e).second)
        throw SpecError("route of '" + c.name + "' repeats an edge");
    }
  }
  for (std::size_t e = 0; e < net.edges.size(); ++e) {
    const auto& pol = net.policies[e];
    std::vector<int> through = conns_through(net, static_cast<int>(e));
    if (pol.kind == CongestionNetwork::PolicyKind::priority) {
      std::vector<int> sorted = pol.priority;
      std::sort(sorted.begin(), sorted.end());
      std::vector<int> expect(through.size());
      std::iota(expect.begin(), expect.end(), 0);
      if (sorted != expect)
        throw SpecError("priority order of '" + net.edges[e].name +
                        "' must rank each connection through it exactly once");
    }
    if (pol.kind == CongestionNetwork::PolicyKind::fixed &&
        pol.fixed.size() != through.size())
      throw SpecError("fixed allocation of '" + net.edges[e].name + "' has wrong arity");
  }
}

CongestionNetwork parse_congestion(const std::string& text) {
  LineReader r(text, "congestion");
  std::vector<std::string> toks;
  if (!r.next(&toks) || toks[0] != "congestion") r.fail("expected 'congestion' header");
  CongestionNetwork net;
  std::map<std::string, int> edge_index, conn_index;
  struct PendingPolicy {
    int edge;
    std::vector<std::string> toks;
    int lineno;
  };
  std::vector<PendingPolicy> pending;
  while (r.next(&toks)) {
    if (toks[0] == "end") break;
    if (toks[0] == "granularity" && toks.size() == 2) {
      net.granularity = parse_rat(r, toks[1]);
    } else if (toks[0] == "edge" && toks.size() == 3) {
      edge_index[toks[1]] = static_cast<int>(net.edges.size());
      net.edges.push_back({toks[1], parse_rat(r, toks[2])});
    } else if (toks[0] == "conn" && toks.size() >= 5 && toks[3] == ":") {
      CongestionNetwork::Connection c;
      c.name = toks[1];
      c.rate = parse_rat(r, toks[2]);
      for (std::size_t t = 4; t < toks.size(); ++t) {
        auto it = edge_index.find(toks[t]);
        if (it == edge_index.end()) r.fail("unknown edge '" + toks[t] + "'");
        c.route.push_back(it->second);
      }
      conn_index[c.name] = static_cast<int>(net.connections.size());
      net.connections.push_back(c);
    } else if (toks[0] == "policy" && toks.size() >= 3) {
      auto it = edge_index.find(toks[1]);
      if (it == edge_index.end()) r.fail("unknown edge '" + toks[1] + "'");
      pending.push_back({it->second, toks, r.lineno});
    } else {
      r.fail("expected granularity/edge/conn/policy/end");
    }
  }
  net.policies.resize(net.edges.size());
  for (const auto& p : pending) {
    auto& pol = net.policies[p.edge];
    std::vector<int> through = conns_through(net, p.edge);
    const std::string& kind = p.toks[2];
    auto local_of = [&](const std::string& name) {
      auto it = conn_index.find(name);
      if (it == conn_index.end())
        throw SpecError("congestion line " + std::to_string(p.lineno) +
                        ": unknown connection '" + name + "'");
      auto pos = std::find(through.begin(), through.end(), it->second);
      if (pos == through.end())
        throw SpecError("congestion line " + std::to_string(p.lineno) + ": connection '" + name +
                        "' does not traverse that edge");
      return static_cast<int>(pos - through.begin());
    };
    if (kind == "priority") {
      pol.kind = CongestionNetwork::PolicyKind::priority;
      for (std::size_t t = 3; t < p.toks.size(); ++t) pol.priority.push_back(local_of(p.toks[t]));
    } else if (kind == "fairshare") {
      pol.kind = CongestionNetwork::PolicyKind::fair_share;
    } else if (kind == "fixed") {
      pol.kind = CongestionNetwork::PolicyKind::fixed;
      for (std::size_t t = 3; t < p.toks.size(); ++t)
        pol.fixed.push_back(parse_int(r, p.toks[t]));
    } else {
      throw SpecError("congestion line " + std::to_string(p.lineno) + ": unknown policy '" +
                      kind + "'");
    }
  }
  validate_congestion(net);
  return net;
}

SystemSpec congestion_to_system(const CongestionNetwork& net) {
  validate_congestion(net);
  // system nodes = edges that carry at least one connection
  std::vector<int> node_edges;
  for (std::size_t e = 0; e < net.edges.size(); ++e)
    if (!conns_through(net, static_cast<int>(e)).empty())
      node_edges.push_back(static_cast<int>(e));
  if (node_edges.empty()) throw SpecError("no edge carries a connection");

  std::vector<std::vector<int>> through(node_edges.size());
  std::vector<long long> cap_units(node_edges.size());
  std::vector<std::vector<std::vector<long long>>> actions(node_edges.size());
  std::vector<std::vector<std::string>> alphabets(node_edges.size());
  for (std::size_t ni = 0; ni < node_edges.size(); ++ni) {
    int e = node_edges[ni];
    through[ni] = conns_through(net, e);
    cap_units[ni] = units_of(net.edges[e].capacity, net.granularity, "capacity");
    std::vector<long long> cur;
    enumerate_allocations(cap_units[ni], static_cast<int>(through[ni].size()), cur,
                          &actions[ni]);
    if (actions[ni].size() > 4096)
      throw SizeGuardError("edge '" + net.edges[e].name + "' has " +
                           std::to_string(actions[ni].size()) +
                           " discretized allocations, beyond the per-edge guard");
    for (const auto& a : actions[ni]) {
      std::string sym;
      for (std::size_t c = 0; c < a.size(); ++c) sym += (c ? "_" : "") + std::to_string(a[c]);
      alphabets[ni].push_back(sym);
    }
  }
  auto node_of_edge = [&](int e) {
    auto it = std::find(node_edges.begin(), node_edges.end(), e);
    return static_cast<int>(it - node_edges.begin());
  };

  // incoming flow of connection c at edge e: the rate at the first edge of
  // its route, otherwise the upstream edge's current allocation
  auto incoming = [&](std::size_t ni, int c, const Profile& p) -> long long {
    const auto& route = net.connections[c].route;
    int e = node_edges[ni];
    auto pos = std::find(route.begin(), route.end(), e);
    if (pos == route.begin()) return units_of(net.connections[c].rate, net.granularity, "rate");
    int up = *(pos - 1);
    std::size_t uni = static_cast<std::size_t>(node_of_edge(up));
    const auto& up_alloc = actions[uni][static_cast<std::size_t>(p[uni])];
    auto cpos = std::find(through[uni].begin(), through[uni].end(), c);
    return up_alloc[static_cast<std::size_t>(cpos - through[uni].begin())];
  };

  // exhaustive policy-output check: w_i >= x_i and capacity on every input
  for (std::size_t ni = 0; ni < node_edges.size(); ++ni) {
    int e = node_edges[ni];
    std::vector<long long> wmax(through[ni].size());
    for (std::size_t c = 0; c < through[ni].size(); ++c) {
      const auto& route = net.connections[through[ni][c]].route;
      auto pos = std::find(route.begin(), route.end(), e);
      wmax[c] = pos == route.begin()
                    ? units_of(net.connections[through[ni][c]].rate, net.granularity, "rate")
                    : cap_units[node_of_edge(*(pos - 1))];
    }
    std::vector<long long> w(through[ni].size(), 0);
    std::function<void(std::size_t)> sweep = [&](std::size_t c) {
      if (c == w.size()) {
        auto x = apply_policy(net.policies[e], w, cap_units[ni]);
        long long total = 0;
        for (std::size_t j = 0; j < x.size(); ++j) {
          if (x[j] < 0 || x[j] > w[j])
            throw SpecError("policy of '" + net.edges[e].name +
                            "' allocates more than a connection's incoming flow");
          total += x[j];
        }
        if (total > cap_units[ni])
          throw SpecError("policy of '" + net.edges[e].name + "' exceeds the edge capacity");
        return;
      }
      for (w[c] = 0; w[c] <= wmax[c]; ++w[c]) sweep(c + 1);
      w[c] = 0;
    };
    sweep(0);
  }

  return historyless_system(
      alphabets,
      [&](int ni, const Profile& p) {
        int e = node_edges[ni];
        std::vector<long long> w(through[ni].size());
        for (std::size_t c = 0; c < w.size(); ++c)
          w[c] = incoming(static_cast<std::size_t>(ni), through[ni][c], p);
        auto x = apply_policy(net.policies[e], w, cap_units[ni]);
        auto it = std::find(actions[ni].begin(), actions[ni].end(), x);
        if (it == actions[ni].end())
          throw SpecError("policy of '" + net.edges[e].name + "' left the allocation grid");
        return static_cast<int>(it - actions[ni].begin());
      },
      Flags{true, true, true, true});
}

CongestionNetwork opposed_priority_cycle() {
  CongestionNetwork net;
  net.granularity = Rational(1);
  net.edges = {{"e1", Rational(1)}, {"e2", Rational(1)}};
  net.connections = {{"A", Rational(1), {0, 1}}, {"B", Rational(1), {1, 0}}};
  net.policies.resize(2);
  net.policies[0].kind = CongestionNetwork::PolicyKind::priority;
  net.policies[0].priority = {1, 0};  // e1 serves B first
  net.policies[1].kind = CongestionNetwork::PolicyKind::priority;
  net.policies[1].priority = {0, 1};  // e2 serves A first
  return net;
}

}  // namespace adyn
