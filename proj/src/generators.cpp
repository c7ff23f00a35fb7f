#include "adyn/generators.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <functional>
#include <random>
#include <sstream>

#include "adyn/analysis.hpp"

namespace adyn {

namespace {

constexpr int kX = 0, kY = 1, kZ = 2;

std::vector<std::string> binary_alphabet() { return {"x", "y"}; }

/// Stationary table from a plain function profile -> action (historyless).
TableFn tabulate(const SystemSpec& spec, int node, const std::function<int(const Profile&)>& g) {
  SpaceCodec codec(spec);
  std::vector<Distribution> slice(codec.profile_count());
  for (std::uint64_t p = 0; p < codec.profile_count(); ++p)
    slice[p] = Distribution::point(g(codec.decode_profile(p)));
  return TableFn{{std::move(slice)}};
}

SystemSpec historyless_shell(int n, std::vector<std::vector<std::string>> alphabets) {
  SystemSpec spec;
  spec.n = n;
  spec.alphabets = std::move(alphabets);
  spec.recall_k = 1;
  spec.window_w = 1;
  spec.reactions.resize(n);
  return spec;
}

void fill_tables(SystemSpec& spec,
                 const std::function<int(int, const Profile&)>& g) {
  for (int i = 0; i < spec.n; ++i)
    spec.reactions[i].fn = tabulate(spec, i, [&, i](const Profile& p) { return g(i, p); });
}

bool others_all(const Profile& p, int self, int sym) {
  for (std::size_t j = 0; j < p.size(); ++j)
    if (static_cast<int>(j) != self && p[j] != sym) return false;
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// Examples
// ---------------------------------------------------------------------------

SystemSpec make_example_ex1() {
  // Node 1 symbols d.m.b: displayed action, last observed action of node 2,
  // sticky "saw node 2 change x -> y" bit. index = d + 2m + 4b.
  std::vector<std::string> a1;
  for (int b = 0; b < 2; ++b)
    for (int m = 0; m < 2; ++m)
      for (int d = 0; d < 2; ++d) {
        std::string xy = "xy";
        a1.push_back(std::string(1, xy[d]) + "." + xy[m] + "." + std::to_string(b));
      }
  SystemSpec spec = historyless_shell(2, {a1, binary_alphabet()});
  auto decode1 = [](int a) { return std::array<int, 3>{a & 1, (a >> 1) & 1, (a >> 2) & 1}; };
  fill_tables(spec, [&](int i, const Profile& p) {
    auto [d, m, b] = decode1(p[0]);
    if (i == 1) return d;
    int b2 = (b || (m == kX && p[1] == kY)) ? 1 : 0;
    int m2 = p[1];
    int d2 = b2 ? kY : kX;
    return d2 + 2 * m2 + 4 * b2;
  });
  spec.flags = {true, false, true, true};
  spec.provenance = GeneratorStanza{"ex1", {}};
  return spec;
}

SystemSpec make_example_ex2() {
  SystemSpec spec = historyless_shell(2, {binary_alphabet(), binary_alphabet()});
  fill_tables(spec, [](int i, const Profile& p) {
    if (p[0] == kX && p[1] == kX) return kY;
    return p[i];  // reselect current action
  });
  spec.flags = {true, false, true, true};
  spec.provenance = GeneratorStanza{"ex2", {}};
  return spec;
}

namespace {

Flags named_flags() { return Flags{true, true, true, true}; }

SystemSpec example_shell_named(const std::string& family, int n,
                               std::vector<std::string> alphabet, std::uint64_t table_limit) {
  SystemSpec spec;
  spec.n = n;
  spec.alphabets.assign(n, alphabet);
  spec.recall_k = spec.window_w = 1;
  spec.reactions.resize(n);
  SpaceCodec codec(spec);
  bool tabulated = codec.profile_count() <= table_limit;
  for (int i = 0; i < n; ++i) {
    std::string id = family;
    if (family == "ex4") id = i < 2 ? "ex4_boundary" : "ex4_core";
    spec.reactions[i].fn = NamedFn{id, {i}, named_flags()};
  }
  if (tabulated) {
    // materialize through the named families so both paths stay equivalent
    for (int i = 0; i < n; ++i) {
      std::vector<Distribution> slice(codec.profile_count());
      for (std::uint64_t p = 0; p < codec.profile_count(); ++p)
        slice[p] =
            Distribution::point(eval_deterministic(spec, codec, i, codec.constant_window(p)));
      spec.reactions[i].fn = TableFn{{std::move(slice)}};
    }
  }
  spec.flags = named_flags();
  return spec;
}

}  // namespace

SystemSpec make_example_ex3(int n) {
  if (n < 2) throw SpecError("ex3 needs n >= 2");
  SystemSpec spec = example_shell_named("ex3", n, binary_alphabet(), 1u << 16);
  spec.provenance = GeneratorStanza{"ex3", {{"n", std::to_string(n)}}};
  return spec;
}

SystemSpec make_example_ex4(int n) {
  if (n < 3) throw SpecError("ex4 needs n >= 3");
  SystemSpec spec = example_shell_named("ex4", n, {"x", "y", "z"}, 1u << 16);
  spec.provenance = GeneratorStanza{"ex4", {{"n", std::to_string(n)}}};
  return spec;
}

SystemSpec make_example(const std::string& name, int n) {
  if (name == "ex1") return make_example_ex1();
  if (name == "ex2") return make_example_ex2();
  if (name == "ex3") return make_example_ex3(n);
  if (name == "ex4") return make_example_ex4(n);
  throw SpecError("unknown example '" + name + "' (ex1|ex2|ex3|ex4)");
}

// ---------------------------------------------------------------------------
// Snakes
// ---------------------------------------------------------------------------

void validate_snake(const Snake& snake) {
  int z = snake.dimension;
  if (z < 2) throw SpecError("snake dimension must be >= 2");
  const auto& vs = snake.vertices;
  if (vs.size() < 4) throw SpecError("a hypercube cycle has at least 4 vertices");
  std::vector<bool> seen(std::size_t{1} << z, false);
  for (std::uint32_t v : vs) {
    if (v >= (std::uint32_t{1} << z)) throw SpecError("snake vertex out of the hypercube");
    if (seen[v]) throw SpecError("snake cycle is not simple");
    seen[v] = true;
  }
  std::size_t q = vs.size();
  for (std::size_t i = 0; i < q; ++i)
    if (std::popcount(vs[i] ^ vs[(i + 1) % q]) != 1)
      throw SpecError("consecutive snake vertices must differ in exactly one bit");
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = i + 1; j < q; ++j) {
      bool consecutive = (j == i + 1) || (i == 0 && j == q - 1);
      if (!consecutive && std::popcount(vs[i] ^ vs[j]) == 1)
        throw SpecError("snake has a chord between vertices " + std::to_string(i) + " and " +
                        std::to_string(j));
    }
}

namespace {

struct SnakeDfs {
  int z;
  std::uint32_t all;
  std::uint64_t budget;
  std::uint64_t expanded = 0;
  bool exhausted_budget = false;
  std::vector<std::uint32_t> path;
  std::vector<bool> on_path;
  std::vector<std::uint32_t> best;

  explicit SnakeDfs(int z_, std::uint64_t budget_)
      : z(z_), all((std::uint32_t{1} << z_) - 1), budget(budget_),
        on_path(std::size_t{1} << z_, false) {}

  // u may extend as an interior vertex iff its only path neighbor is the
  // current tail; adjacency to the start is allowed only to close the cycle.
  bool extendable_interior(std::uint32_t u) const {
    if (on_path[u]) return false;
    for (int c = 0; c < z; ++c) {
      std::uint32_t w = u ^ (std::uint32_t{1} << c);
      if (on_path[w] && w != path.back()) return false;
    }
    return true;
  }

  bool closes_cycle(std::uint32_t u) const {
    // u (not on the path) would join tail and the start into a cycle
    if (path.size() < 3) return false;
    if (std::popcount(u ^ path.front()) != 1) return false;
    for (int c = 0; c < z; ++c) {
      std::uint32_t w = u ^ (std::uint32_t{1} << c);
      if (on_path[w] && w != path.back() && w != path.front()) return false;
    }
    // the start's path neighbors must be exactly path[1] (u is off-path)
    for (int c = 0; c < z; ++c) {
      std::uint32_t w = path.front() ^ (std::uint32_t{1} << c);
      if (on_path[w] && w != path[1]) return false;
    }
    return true;
  }

  void dfs(int coords_used) {
    if (budget && expanded >= budget) {
      exhausted_budget = true;
      return;
    }
    ++expanded;
    std::uint32_t tail = path.back();
    for (int c = 0; c < z; ++c) {
      if (c > coords_used) break;  // canonical: coordinates appear in first-use order
      std::uint32_t u = tail ^ (std::uint32_t{1} << c);
      if (!on_path[u] && closes_cycle(u) && path.size() + 1 > best.size()) {
        best = path;
        best.push_back(u);
      }
      if (!extendable_interior(u)) continue;
      path.push_back(u);
      on_path[u] = true;
      dfs(std::max(coords_used, c + 1));
      on_path[u] = false;
      path.pop_back();
      if (exhausted_budget) return;
    }
  }
};

}  // namespace

SnakeSearchResult find_max_snake(int z, std::uint64_t budget) {
  if (z < 2) throw SpecError("snake search needs z >= 2");
  if (z > 16) throw SpecError("snake search supports z <= 16");
  if (budget == 0) budget = z <= 4 ? 0 : 20'000'000;  // z <= 4 is fully exhaustive

  SnakeDfs dfs(z, budget);
  dfs.best = {0, 1, 3, 2};  // the 4-cycle exists in every Q_z, z >= 2
  dfs.path.push_back(0);
  dfs.on_path[0] = true;
  dfs.path.push_back(1);
  dfs.on_path[1] = true;
  dfs.dfs(1);

  SnakeSearchResult res;
  res.nodes_expanded = dfs.expanded;
  res.exhaustive = !dfs.exhausted_budget;
  res.certified_lower_bound = z >= 5 ? 0.3 * static_cast<double>(std::uint64_t{1} << z) : 0.0;
  if (dfs.best.empty()) throw SpecError("no snake found (impossible for z >= 2)");
  res.best.dimension = z;
  res.best.vertices = dfs.best;
  validate_snake(res.best);
  return res;
}

std::string format_snake(const Snake& snake) {
  std::string out;
  for (std::uint32_t v : snake.vertices) {
    for (int c = snake.dimension - 1; c >= 0; --c) out += ((v >> c) & 1) ? '1' : '0';
    out += '\n';
  }
  return out;
}

Snake parse_snake(const std::string& text) {
  Snake snake;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::uint32_t v = 0;
    for (char ch : line) {
      if (ch != '0' && ch != '1') throw SpecError("snake vertex must be a bit string: " + line);
      v = (v << 1) | (ch == '1');
    }
    if (snake.dimension == 0)
      snake.dimension = static_cast<int>(line.size());
    else if (static_cast<int>(line.size()) != snake.dimension)
      throw SpecError("snake vertices have inconsistent dimensions");
    snake.vertices.push_back(v);
  }
  validate_snake(snake);
  return snake;
}

// ---------------------------------------------------------------------------
// Snake and disjointness systems
// ---------------------------------------------------------------------------

namespace {

/// Orientation of Q_z as in the threshold construction; head(u, v) gives the
/// endpoint the edge {u, v} points to.
class CubeOrientation {
 public:
  CubeOrientation(const Snake& snake, int z) : z_(z) {
    pos_.assign(std::size_t{1} << z, -1);
    for (std::size_t i = 0; i < snake.vertices.size(); ++i)
      pos_[snake.vertices[i]] = static_cast<int>(i);
    cycle_ = snake.vertices;
  }

  std::uint32_t head(std::uint32_t u, std::uint32_t v) const {
    int pu = pos_[u], pv = pos_[v];
    if (pu >= 0 && pv >= 0) {
      // both on the snake: chordlessness makes them cycle-consecutive
      std::size_t q = cycle_.size();
      if ((pu + 1) % static_cast<int>(q) == pv) return v;
      return u;
    }
    if (pv >= 0) return v;  // point edges into the snake
    if (pu >= 0) return u;
    return std::min(u, v);  // fixed arbitrary orientation
  }

 private:
  int z_;
  std::vector<int> pos_;
  std::vector<std::uint32_t> cycle_;
};

std::uint32_t cube_vertex_of(const Profile& p) {
  std::uint32_t v = 0;
  for (std::size_t j = 2; j < p.size(); ++j)
    if (p[j] == kY) v |= std::uint32_t{1} << (j - 2);
  return v;
}

/// Output of a cube node (0-based index >= 2) under the orientation: the
/// edge along its own coordinate, fixed by the other nodes' actions, points
/// to the vertex whose own-coordinate bit is the node's next action.
int cube_node_output(const CubeOrientation& orient, const Profile& p, int node) {
  int c = node - 2;
  std::uint32_t v0 = cube_vertex_of(p) & ~(std::uint32_t{1} << c);
  std::uint32_t v1 = v0 | (std::uint32_t{1} << c);
  std::uint32_t h = orient.head(v0, v1);
  return (h >> c) & 1 ? kY : kX;
}

Snake relabel_to_contain_origin(const Snake& snake, std::uint32_t* mask_out) {
  std::uint32_t mask = 0;
  if (std::find(snake.vertices.begin(), snake.vertices.end(), 0u) == snake.vertices.end())
    mask = snake.vertices.front();
  Snake out = snake;
  for (auto& v : out.vertices) v ^= mask;
  if (mask_out) *mask_out = mask;
  return out;
}

std::string join_elements(const std::vector<int>& e) {
  std::string s;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(e[i]);
  }
  return s;
}

std::string snake_vertices_param(const Snake& snake) {
  std::string s;
  for (std::size_t i = 0; i < snake.vertices.size(); ++i) {
    if (i) s += ' ';
    for (int c = snake.dimension - 1; c >= 0; --c)
      s += ((snake.vertices[i] >> c) & 1) ? '1' : '0';
  }
  return s;
}

}  // namespace

SystemSpec build_snake_system(const Snake& snake_in) {
  validate_snake(snake_in);
  std::uint32_t relabel_mask = 0;
  Snake snake = relabel_to_contain_origin(snake_in, &relabel_mask);
  int z = snake.dimension;
  int n = z + 2;
  if (n > guard::max_nodes) throw SizeGuardError("snake system too large");

  CubeOrientation orient(snake, z);
  SystemSpec spec = historyless_shell(n, std::vector<std::vector<std::string>>(
                                             static_cast<std::size_t>(n), binary_alphabet()));
  fill_tables(spec, [&](int i, const Profile& p) {
    if (i < 2) return others_all(p, i, kX) ? kX : kY;
    if (p[0] == kY && p[1] == kY) return kY;
    return cube_node_output(orient, p, i);
  });
  spec.flags = {true, true, true, true};
  spec.provenance = GeneratorStanza{
      "snake",
      {{"dim", std::to_string(z)},
       {"vertices", snake_vertices_param(snake_in)},
       {"relabel", std::to_string(relabel_mask)}}};

  // y^n must be the unique stable state under this labeling.
  auto stable = enumerate_stable_states(spec);
  if (stable.size() != 1 || !others_all(stable[0], -1, kY))
    throw SpecError("snake system does not have y^n as its unique stable state");
  return spec;
}

SystemSpec build_disjointness_system(const std::vector<int>& ea, const std::vector<int>& eb,
                                     const Snake& snake_in) {
  validate_snake(snake_in);
  int q = static_cast<int>(snake_in.size());
  for (const auto* set : {&ea, &eb})
    for (int e : *set)
      if (e < 1 || e > q)
        throw SpecError("set element " + std::to_string(e) + " out of range [1, " +
                        std::to_string(q) + "]");

  std::uint32_t relabel_mask = 0;
  Snake snake = relabel_to_contain_origin(snake_in, &relabel_mask);
  int z = snake.dimension;
  int n = z + 2;
  if (n > guard::max_nodes) throw SizeGuardError("disjointness system too large");

  // element j <-> j-th snake vertex
  std::vector<int> element_of(std::size_t{1} << z, 0);
  for (std::size_t i = 0; i < snake.vertices.size(); ++i)
    element_of[snake.vertices[i]] = static_cast<int>(i) + 1;
  auto in_set = [&](const std::vector<int>& set, std::uint32_t v) {
    int e = element_of[v];
    return e != 0 && std::find(set.begin(), set.end(), e) != set.end();
  };

  CubeOrientation orient(snake, z);
  SystemSpec spec = historyless_shell(n, std::vector<std::vector<std::string>>(
                                             static_cast<std::size_t>(n), binary_alphabet()));
  fill_tables(spec, [&](int i, const Profile& p) {
    if (i < 2) {
      int peer = 1 - i;
      const std::vector<int>& set = i == 0 ? ea : eb;
      return (p[peer] == kY && in_set(set, cube_vertex_of(p))) ? kX : kY;
    }
    if (!(p[0] == kX && p[1] == kX)) return kY;
    return cube_node_output(orient, p, i);
  });
  spec.flags = {true, true, true, true};
  spec.provenance = GeneratorStanza{"disjointness",
                                    {{"dim", std::to_string(z)},
                                     {"vertices", snake_vertices_param(snake_in)},
                                     {"ea", join_elements(ea)},
                                     {"eb", join_elements(eb)}}};
  return spec;
}

// ---------------------------------------------------------------------------
// String machines
// ---------------------------------------------------------------------------

std::uint64_t StringMachine::string_count() const {
  std::uint64_t c = 1;
  for (int i = 0; i < t; ++i) c *= gamma.size();
  return c;
}

int StringMachine::eval(const std::vector<int>& s) const {
  std::uint64_t idx = 0, m = 1;
  for (int i = 0; i < t; ++i) {
    idx += static_cast<std::uint64_t>(s[i]) * m;
    m *= gamma.size();
  }
  return table[idx];
}

void validate_string_machine(const StringMachine& m) {
  if (m.t < 1) throw SpecError("string machine needs t >= 1");
  if (m.gamma.empty()) throw SpecError("string machine alphabet is empty");
  for (const auto& s : m.gamma)
    if (s == "halt") throw SpecError("'halt' is reserved and lies outside Gamma");
  std::uint64_t states = m.string_count() * static_cast<std::uint64_t>(m.t);
  if (states > guard::string_machine_states)
    throw SizeGuardError("string machine has " + std::to_string(states) +
                         " (T, i) states, beyond the guard");
  if (m.table.size() != m.string_count()) throw SpecError("string machine table has wrong size");
  for (int v : m.table)
    if (v < 0 || v > m.halt_value()) throw SpecError("string machine table value out of range");
}

MachineRun run_string_machine(const StringMachine& m, const std::vector<int>& t0,
                              long long max_steps) {
  validate_string_machine(m);
  if (static_cast<int>(t0.size()) != m.t) throw SpecError("initial string has wrong length");
  for (int s : t0)
    if (s < 0 || s >= static_cast<int>(m.gamma.size()))
      throw SpecError("initial string symbol out of Gamma");
  std::vector<int> T = t0;
  int i = 0;
  for (long long steps = 0; steps < max_steps; ++steps) {
    int g = m.eval(T);
    if (g == m.halt_value()) return {true, steps};
    T[i] = g;
    i = (i + 1) % m.t;
  }
  if (m.eval(T) == m.halt_value()) return {true, max_steps};
  return {false, max_steps};
}

bool string_machine_nonterminates(const StringMachine& m) {
  validate_string_machine(m);
  std::uint64_t strings = m.string_count();
  std::uint64_t states = strings * static_cast<std::uint64_t>(m.t);
  // functional graph over (T, i); 0 unknown, 1 halts, 2 loops, 3 on current walk
  std::vector<unsigned char> status(states, 0);
  std::vector<int> T(m.t);
  for (std::uint64_t s0 = 0; s0 < strings; ++s0) {
    std::uint64_t state = s0 * m.t;  // i = 0
    if (status[state]) {
      if (status[state] == 2) return true;
      continue;
    }
    std::vector<std::uint64_t> walk;
    std::uint64_t rest = s0;
    for (int j = 0; j < m.t; ++j) {
      T[j] = static_cast<int>(rest % m.gamma.size());
      rest /= m.gamma.size();
    }
    int i = 0;
    unsigned char verdict = 0;
    while (true) {
      std::uint64_t enc = 0, mul = 1;
      for (int j = 0; j < m.t; ++j) {
        enc += static_cast<std::uint64_t>(T[j]) * mul;
        mul *= m.gamma.size();
      }
      enc = enc * m.t + i;
      if (status[enc] == 1 || status[enc] == 2) {
        verdict = status[enc];
        break;
      }
      if (status[enc] == 3) {
        verdict = 2;  // revisited a state on this walk: cycle
        break;
      }
      status[enc] = 3;
      walk.push_back(enc);
      int g = m.eval(T);
      if (g == m.halt_value()) {
        verdict = 1;
        break;
      }
      T[i] = g;
      i = (i + 1) % m.t;
    }
    for (std::uint64_t s : walk) status[s] = verdict;
    if (verdict == 2) return true;
  }
  return false;
}

SystemSpec build_string_system(const StringMachine& m) {
  validate_string_machine(m);
  if (m.t < 2)
    throw SpecError("build_string_system requires t >= 2 (the counter cannot witness progress "
                    "at t = 1)");
  const int G = static_cast<int>(m.gamma.size());
  const int n = m.t + 1;
  if (n > guard::max_nodes) throw SizeGuardError("string system too large");

  std::vector<std::string> index_alphabet = m.gamma;
  index_alphabet.push_back("halt");
  std::vector<std::string> counter_alphabet;
  for (int j = 0; j < m.t; ++j)
    for (const auto& s : index_alphabet) counter_alphabet.push_back(std::to_string(j) + "." + s);

  std::vector<std::vector<std::string>> alphabets(static_cast<std::size_t>(m.t),
                                                  index_alphabet);
  alphabets.push_back(counter_alphabet);
  SystemSpec spec = historyless_shell(n, std::move(alphabets));

  const int halt = G;  // index-alphabet code of halt
  auto counter_code = [&](int j, int gamma) { return j * (G + 1) + gamma; };
  auto g_hat = [&](const Profile& p) {
    std::vector<int> T(m.t);
    for (int j = 0; j < m.t; ++j) {
      if (p[j] == halt) return halt;  // g extended to halt-bearing strings
      T[j] = p[j];
    }
    return m.eval(T);
  };
  fill_tables(spec, [&](int i, const Profile& p) {
    int j = p[m.t] / (G + 1);
    int gamma = p[m.t] % (G + 1);
    if (i < m.t) {
      if (gamma == halt) return halt;
      if (j == i && p[i] != gamma) return gamma;
      return p[i];
    }
    if (gamma == halt) return counter_code(0, halt);
    if (p[j] == gamma) return counter_code((j + 1) % m.t, g_hat(p));
    return p[m.t];
  });
  spec.flags = {true, false, true, true};

  GeneratorStanza stanza{"string", {{"t", std::to_string(m.t)}}};
  std::string gs;
  for (std::size_t i = 0; i < m.gamma.size(); ++i) gs += (i ? " " : "") + m.gamma[i];
  stanza.params.emplace_back("gamma", gs);
  std::string ts;
  for (std::size_t i = 0; i < m.table.size(); ++i) {
    if (i) ts += ' ';
    ts += m.table[i] == m.halt_value() ? "halt" : m.gamma[m.table[i]];
  }
  stanza.params.emplace_back("table", ts);
  spec.provenance = stanza;
  return spec;
}

// ---------------------------------------------------------------------------
// Provenance round-trip and random systems
// ---------------------------------------------------------------------------

namespace {

std::string stanza_param(const GeneratorStanza& s, const std::string& key) {
  for (const auto& [k, v] : s.params)
    if (k == key) return v;
  throw SpecError("generator stanza missing parameter '" + key + "'");
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

Snake snake_from_params(const GeneratorStanza& s) {
  int dim = std::stoi(stanza_param(s, "dim"));
  Snake snake;
  snake.dimension = dim;
  for (const auto& bits : split_ws(stanza_param(s, "vertices"))) {
    if (static_cast<int>(bits.size()) != dim) throw SpecError("snake vertex dimension mismatch");
    std::uint32_t v = 0;
    for (char ch : bits) v = (v << 1) | (ch == '1');
    snake.vertices.push_back(v);
  }
  validate_snake(snake);
  return snake;
}

std::vector<int> ints_from_param(const GeneratorStanza& s, const std::string& key) {
  std::vector<int> out;
  for (const auto& tok : split_ws(stanza_param(s, key))) out.push_back(std::stoi(tok));
  return out;
}

}  // namespace

SystemSpec rebuild_generator(const GeneratorStanza& stanza) {
  const std::string& id = stanza.id;
  if (id == "ex1") return make_example_ex1();
  if (id == "ex2") return make_example_ex2();
  if (id == "ex3") return make_example_ex3(std::stoi(stanza_param(stanza, "n")));
  if (id == "ex4") return make_example_ex4(std::stoi(stanza_param(stanza, "n")));
  if (id == "snake") return build_snake_system(snake_from_params(stanza));
  if (id == "disjointness")
    return build_disjointness_system(ints_from_param(stanza, "ea"),
                                     ints_from_param(stanza, "eb"),
                                     snake_from_params(stanza));
  if (id == "string") {
    StringMachine m;
    m.t = std::stoi(stanza_param(stanza, "t"));
    m.gamma = split_ws(stanza_param(stanza, "gamma"));
    for (const auto& tok : split_ws(stanza_param(stanza, "table"))) {
      if (tok == "halt") {
        m.table.push_back(static_cast<int>(m.gamma.size()));
        continue;
      }
      auto it = std::find(m.gamma.begin(), m.gamma.end(), tok);
      if (it == m.gamma.end()) throw SpecError("string table symbol '" + tok + "' not in Gamma");
      m.table.push_back(static_cast<int>(it - m.gamma.begin()));
    }
    return build_string_system(m);
  }
  if (id == "random") {
    return random_self_independent_system(std::stoi(stanza_param(stanza, "n")),
                                          std::stoull(stanza_param(stanza, "seed")));
  }
  throw SpecError("unknown generator '" + id + "'");
}

SystemSpec random_self_independent_system(int n, std::uint64_t seed) {
  if (n < 2) throw SpecError("random system needs n >= 2");
  if (n > 20) throw SizeGuardError("random system generator supports n <= 20");
  std::mt19937_64 rng(seed);
  // g_i : A_{-i} -> {x, y} sampled uniformly, replicated across own bit
  std::vector<std::vector<int>> g(n);
  for (int i = 0; i < n; ++i) {
    g[i].resize(std::size_t{1} << (n - 1));
    for (auto& v : g[i]) v = static_cast<int>(rng() & 1);
  }
  SystemSpec spec = historyless_shell(n, std::vector<std::vector<std::string>>(
                                             static_cast<std::size_t>(n), binary_alphabet()));
  fill_tables(spec, [&](int i, const Profile& p) {
    std::uint32_t key = 0;
    int bit = 0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      key |= static_cast<std::uint32_t>(p[j]) << bit++;
    }
    return g[i][key];
  });
  spec.flags = {true, true, true, true};
  spec.provenance =
      GeneratorStanza{"random", {{"n", std::to_string(n)}, {"seed", std::to_string(seed)}}};
  return spec;
}

}  // namespace adyn
