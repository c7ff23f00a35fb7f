#include "adyn/analysis.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <unordered_map>

namespace adyn {

namespace {

void require_deterministic_stationary(const SystemSpec& spec, const char* op) {
  for (const auto& rf : spec.reactions) {
    if (rf.is_table()) {
      const auto& slices = rf.table().slices;
      for (std::size_t s = 1; s < slices.size(); ++s)
        if (slices[s] != slices[0])
          throw HypothesesError(std::string(op) + ": non-stationary reaction function");
      for (const auto& slice : slices)
        for (const auto& d : slice)
          if (!d.is_point())
            throw HypothesesError(std::string(op) + ": randomized reaction function");
    } else {
      const Flags& cf = rf.named().certified;
      if (!cf.deterministic)
        throw HypothesesError(std::string(op) + ": randomized reaction function");
      if (!cf.stationary)
        throw HypothesesError(std::string(op) + ": non-stationary reaction function");
    }
  }
}

int effective_cap(const SystemSpec& spec, int activation_cap) {
  if (activation_cap == 0) return spec.n;
  if (activation_cap < 1 || activation_cap > spec.n)
    throw SpecError("activation cap must be in [1, n]");
  return activation_cap;
}

Configuration configuration_of(const SystemSpec& spec, const SpaceCodec& codec,
                               std::uint64_t vertex) {
  return Configuration{codec.decode_window(vertex), 0};
}

}  // namespace

std::vector<NodeSet> canonical_subsets(int n, int activation_cap) {
  std::vector<std::vector<int>> lists;
  for (NodeSet s = 1; s <= full_set(n); ++s) {
    if (std::popcount(s) > activation_cap) continue;
    std::vector<int> els;
    for (int i = 1; i <= n; ++i)
      if (contains(s, i)) els.push_back(i);
    lists.push_back(std::move(els));
  }
  std::sort(lists.begin(), lists.end());
  std::vector<NodeSet> out;
  out.reserve(lists.size());
  for (const auto& els : lists) {
    NodeSet s = 0;
    for (int i : els) s |= node_bit(i);
    out.push_back(s);
  }
  return out;
}

ConfigurationGraph build_configuration_graph(const SystemSpec& spec, int activation_cap) {
  require_deterministic_stationary(spec, "build_configuration_graph");
  int cap = effective_cap(spec, activation_cap);
  SpaceCodec codec(spec);

  ConfigurationGraph g;
  g.vertices = codec.window_count();
  g.activation_cap = cap;
  g.subsets = canonical_subsets(spec.n, cap);
  if (g.vertices * g.subsets.size() > guard::graph_edges)
    throw SizeGuardError("configuration graph needs " +
                         std::to_string(g.vertices * g.subsets.size()) +
                         " edges, beyond the guard");

  // Deterministic outputs per (vertex, node), then successors per subset.
  std::vector<int> outs(static_cast<std::size_t>(g.vertices) * spec.n);
  for (std::uint64_t v = 0; v < g.vertices; ++v)
    for (int i = 0; i < spec.n; ++i)
      outs[v * spec.n + i] = eval_deterministic(spec, codec, i, v);

  std::vector<std::uint64_t> mul(spec.n);
  {
    std::uint64_t m = 1;
    for (int i = 0; i < spec.n; ++i) {
      mul[i] = m;
      m *= static_cast<std::uint64_t>(spec.alphabet_size(i));
    }
  }

  g.succ.resize(static_cast<std::size_t>(g.vertices) * g.subsets.size());
  for (std::uint64_t v = 0; v < g.vertices; ++v) {
    std::uint64_t last = codec.latest_profile(v);
    for (std::size_t si = 0; si < g.subsets.size(); ++si) {
      std::uint64_t np = last;
      NodeSet s = g.subsets[si];
      for (int i = 0; i < spec.n; ++i)
        if (contains(s, i + 1)) {
          int cur = codec.profile_digit(np, i);
          np += (static_cast<std::int64_t>(outs[v * spec.n + i]) - cur) * mul[i];
        }
      g.succ[v * g.subsets.size() + si] = static_cast<std::uint32_t>(codec.shift(v, np));
    }
  }
  return g;
}

std::vector<Profile> enumerate_stable_states(const SystemSpec& spec) {
  require_deterministic_stationary(spec, "enumerate_stable_states");
  SpaceCodec codec(spec);
  if (codec.profile_count() > guard::table_entries)
    throw SizeGuardError("stable-state enumeration over " +
                         std::to_string(codec.profile_count()) + " profiles, beyond the guard");
  std::vector<Profile> out;
  for (std::uint64_t p = 0; p < codec.profile_count(); ++p) {
    std::uint64_t w = codec.constant_window(p);
    bool fixed = true;
    for (int i = 0; i < spec.n && fixed; ++i)
      fixed = eval_deterministic(spec, codec, i, w) == codec.profile_digit(p, i);
    if (fixed) out.push_back(codec.decode_profile(p));
  }
  return out;
}

// ---------------------------------------------------------------------------
// decide_convergent: per-anchor BFS over (configuration, covered mask,
// changed bit). A path from (c0, {}, 0) to (c0, [n], 1) is a closed covering
// walk through >= 2 distinct configurations; repeating it forever is a fair
// schedule whose run never stabilizes. Conversely any fair non-convergent
// run, by finiteness, contains such a walk.
// ---------------------------------------------------------------------------

Verdict decide_convergent(const SystemSpec& spec, int activation_cap) {
  require_deterministic_stationary(spec, "decide_convergent");
  ConfigurationGraph g = build_configuration_graph(spec, activation_cap);
  SpaceCodec codec(spec);

  const int n = spec.n;
  const std::uint64_t mask_count = std::uint64_t{1} << n;
  const std::uint64_t state_count = g.vertices * mask_count * 2;
  if (state_count > guard::product_states)
    throw SizeGuardError("decide_convergent product space has " + std::to_string(state_count) +
                         " states, beyond the guard");

  Verdict verdict;
  verdict.stats.vertices = g.vertices;
  verdict.stats.edges = g.edges();
  verdict.activation_cap = g.activation_cap;
  verdict.cap_exhaustive = g.activation_cap >= n;

  auto encode = [&](std::uint64_t v, std::uint64_t mask, int changed) {
    return ((v << n) | mask) << 1 | static_cast<std::uint64_t>(changed);
  };

  std::vector<std::uint32_t> stamp(state_count, 0);
  std::vector<std::uint32_t> parent(state_count);
  std::vector<std::uint16_t> via(state_count);
  std::vector<std::uint32_t> queue;
  const NodeSet all = full_set(n);

  for (std::uint32_t anchor = 0; anchor < g.vertices; ++anchor) {
    const std::uint32_t epoch = anchor + 1;
    const std::uint64_t start = encode(anchor, 0, 0);
    const std::uint64_t goal = encode(anchor, all, 1);
    queue.clear();
    queue.push_back(static_cast<std::uint32_t>(start));
    stamp[start] = epoch;
    bool found = false;
    for (std::size_t qi = 0; qi < queue.size() && !found; ++qi) {
      std::uint64_t cur = queue[qi];
      ++verdict.stats.search_nodes;
      std::uint64_t v = cur >> (n + 1);
      std::uint64_t mask = (cur >> 1) & (mask_count - 1);
      int changed = static_cast<int>(cur & 1);
      for (std::size_t si = 0; si < g.subsets.size(); ++si) {
        std::uint32_t u = g.successor(static_cast<std::uint32_t>(v), si);
        std::uint64_t nxt = encode(u, mask | g.subsets[si], changed | (u != v ? 1 : 0));
        if (stamp[nxt] == epoch) continue;
        stamp[nxt] = epoch;
        parent[nxt] = static_cast<std::uint32_t>(cur);
        via[nxt] = static_cast<std::uint16_t>(si);
        if (nxt == goal) {
          found = true;
          break;
        }
        queue.push_back(static_cast<std::uint32_t>(nxt));
      }
    }
    if (found) {
      std::vector<NodeSet> cycle;
      for (std::uint64_t s = goal; s != start; s = parent[s]) cycle.push_back(g.subsets[via[s]]);
      std::reverse(cycle.begin(), cycle.end());
      verdict.result = Result::non_convergent;
      verdict.initial = configuration_of(spec, codec, anchor);
      verdict.witness = ScheduleWitness{{}, std::move(cycle)};
      return verdict;
    }
  }
  verdict.result = Result::convergent;
  return verdict;
}

// ---------------------------------------------------------------------------
// decide_r_convergent: SCC search over the product (configuration, idle
// counters < r). Transitions must activate every node whose counter reached
// r-1, so any closed product walk repeated forever is an r-fair schedule; a
// node never activated along a closed walk could not return its counter to
// the start value, so closed walks cover all nodes by construction.
// ---------------------------------------------------------------------------

namespace {

struct RProduct {
  const ConfigurationGraph* g;
  int n, r;
  std::uint64_t counters;            // r^n
  std::vector<std::uint64_t> rpow;   // r^i

  std::uint64_t states() const { return g->vertices * counters; }

  // Enumerates transitions of `state`; returns successor state or UINT64_MAX.
  std::uint64_t transition(std::uint64_t state, std::size_t si) const {
    std::uint64_t v = state / counters;
    std::uint64_t c = state % counters;
    NodeSet s = g->subsets[si];
    std::uint64_t nc = 0;
    for (int i = 0; i < n; ++i) {
      std::uint64_t d = (c / rpow[i]) % static_cast<std::uint64_t>(r);
      if (contains(s, i + 1)) continue;  // counter resets to 0
      if (d + 1 >= static_cast<std::uint64_t>(r)) return UINT64_MAX;  // would violate r-fairness
      nc += (d + 1) * rpow[i];
    }
    return static_cast<std::uint64_t>(g->successor(static_cast<std::uint32_t>(v), si)) *
               counters +
           nc;
  }
};

// Iterative Tarjan over the implicit product graph.
struct TarjanResult {
  std::vector<std::uint32_t> comp;
  std::uint32_t comp_count = 0;
  std::uint64_t visited = 0;
};

TarjanResult tarjan_scc(const RProduct& p) {
  const std::uint64_t S = p.states();
  constexpr std::uint32_t kUnset = UINT32_MAX;
  TarjanResult res;
  res.comp.assign(S, kUnset);
  std::vector<std::uint32_t> index(S, kUnset), lowlink(S);
  std::vector<bool> onstack(S, false);
  std::vector<std::uint32_t> stack;
  struct Frame {
    std::uint64_t state;
    std::uint32_t si;
  };
  std::vector<Frame> frames;
  std::uint32_t next_index = 0;

  for (std::uint64_t root = 0; root < S; ++root) {
    if (index[root] != kUnset) continue;
    frames.push_back({root, 0});
    index[root] = lowlink[root] = next_index++;
    stack.push_back(static_cast<std::uint32_t>(root));
    onstack[root] = true;
    ++res.visited;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.si < p.g->subsets.size()) {
        std::uint64_t u = p.transition(f.state, f.si++);
        if (u == UINT64_MAX) continue;
        if (index[u] == kUnset) {
          index[u] = lowlink[u] = next_index++;
          stack.push_back(static_cast<std::uint32_t>(u));
          onstack[u] = true;
          ++res.visited;
          frames.push_back({u, 0});
        } else if (onstack[u]) {
          lowlink[f.state] = std::min(lowlink[f.state], index[u]);
        }
      } else {
        std::uint64_t v = f.state;
        frames.pop_back();
        if (!frames.empty())
          lowlink[frames.back().state] = std::min(lowlink[frames.back().state], lowlink[v]);
        if (lowlink[v] == index[v]) {
          while (true) {
            std::uint32_t w = stack.back();
            stack.pop_back();
            onstack[w] = false;
            res.comp[w] = res.comp_count;
            if (w == static_cast<std::uint32_t>(v)) break;
          }
          ++res.comp_count;
        }
      }
    }
  }
  return res;
}

// Shortest label path from `from` to `to` inside one component.
std::vector<NodeSet> path_in_component(const RProduct& p, const TarjanResult& t,
                                       std::uint64_t from, std::uint64_t to) {
  const std::uint64_t S = p.states();
  std::vector<std::uint32_t> parent(S, UINT32_MAX);
  std::vector<std::uint16_t> via(S);
  std::vector<std::uint32_t> queue{static_cast<std::uint32_t>(from)};
  parent[from] = static_cast<std::uint32_t>(from);
  std::uint32_t cid = t.comp[from];
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    std::uint64_t cur = queue[qi];
    if (cur == to && qi > 0) break;
    for (std::size_t si = 0; si < p.g->subsets.size(); ++si) {
      std::uint64_t u = p.transition(cur, si);
      if (u == UINT64_MAX || t.comp[u] != cid || parent[u] != UINT32_MAX) continue;
      if (u == from) continue;
      parent[u] = static_cast<std::uint32_t>(cur);
      via[u] = static_cast<std::uint16_t>(si);
      queue.push_back(static_cast<std::uint32_t>(u));
    }
  }
  std::vector<NodeSet> labels;
  for (std::uint64_t s = to; s != from; s = parent[s]) labels.push_back(p.g->subsets[via[s]]);
  std::reverse(labels.begin(), labels.end());
  return labels;
}

// Closed label walk from `from` back to itself passing through `through`.
std::vector<NodeSet> cycle_through(const RProduct& p, const TarjanResult& t, std::uint64_t from,
                                   std::uint64_t through) {
  std::vector<NodeSet> a = path_in_component(p, t, from, through);
  std::vector<NodeSet> b = path_in_component(p, t, through, from);
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

Verdict decide_r_convergent(const SystemSpec& spec, int r, int activation_cap) {
  if (r < 1) throw SpecError("r must be >= 1");
  require_deterministic_stationary(spec, "decide_r_convergent");
  ConfigurationGraph g = build_configuration_graph(spec, activation_cap);
  SpaceCodec codec(spec);

  RProduct p;
  p.g = &g;
  p.n = spec.n;
  p.r = r;
  p.counters = 1;
  p.rpow.resize(spec.n);
  for (int i = 0; i < spec.n; ++i) {
    p.rpow[i] = p.counters;
    if (p.counters > guard::product_states) break;
    p.counters *= static_cast<std::uint64_t>(r);
  }
  if (g.vertices * p.counters > guard::product_states)
    throw SizeGuardError("decide_r_convergent product space has " +
                         std::to_string(g.vertices * p.counters) +
                         " states, beyond the guard");

  Verdict verdict;
  verdict.stats.vertices = g.vertices;
  verdict.stats.edges = g.edges();
  verdict.activation_cap = g.activation_cap;
  verdict.cap_exhaustive = g.activation_cap >= spec.n;
  verdict.r = r;

  TarjanResult t = tarjan_scc(p);
  verdict.stats.search_nodes = t.visited;

  // A component holding two states with distinct configurations yields a
  // closed r-fair walk whose run changes configuration forever.
  std::vector<std::uint64_t> first_state(t.comp_count, UINT64_MAX);
  std::uint64_t sa = UINT64_MAX, sb = UINT64_MAX;
  for (std::uint64_t s = 0; s < p.states() && sa == UINT64_MAX; ++s) {
    std::uint32_t c = t.comp[s];
    if (first_state[c] == UINT64_MAX) {
      first_state[c] = s;
    } else if (first_state[c] / p.counters != s / p.counters) {
      sa = first_state[c];
      sb = s;
    }
  }
  if (sa == UINT64_MAX) {
    verdict.result = Result::convergent;
    return verdict;
  }

  std::vector<NodeSet> cycle = cycle_through(p, t, sa, sb);
  verdict.result = Result::non_convergent;
  verdict.initial = configuration_of(spec, codec, sa / p.counters);
  verdict.witness = ScheduleWitness{{}, std::move(cycle)};
  return verdict;
}

// ---------------------------------------------------------------------------
// Stable coloring and oscillation synthesis.
// ---------------------------------------------------------------------------

int StableColoring::color_count(std::uint64_t v) const {
  int c = 0;
  for (std::size_t b = 0; b < blocks_per_vertex; ++b)
    c += std::popcount(bits[v * blocks_per_vertex + b]);
  return c;
}

bool StableColoring::has_color(std::uint64_t v, std::size_t i) const {
  return (bits[v * blocks_per_vertex + i / 64] >> (i % 64)) & 1;
}

std::vector<Profile> StableColoring::colors_of(std::uint64_t v) const {
  std::vector<Profile> out;
  for (std::size_t i = 0; i < stable_states.size(); ++i)
    if (has_color(v, i)) out.push_back(stable_states[i]);
  return out;
}

StableColoring stable_coloring(const SystemSpec& spec, int activation_cap) {
  ConfigurationGraph g = build_configuration_graph(spec, activation_cap);
  SpaceCodec codec(spec);

  StableColoring col;
  col.stable_states = enumerate_stable_states(spec);
  col.vertices = g.vertices;
  col.blocks_per_vertex = (col.stable_states.size() + 63) / 64;
  if (col.blocks_per_vertex == 0) col.blocks_per_vertex = 1;
  if (col.vertices * col.blocks_per_vertex * 64 > (1ull << 32))
    throw SizeGuardError("stable coloring bit matrix beyond the guard");
  col.bits.assign(col.vertices * col.blocks_per_vertex, 0);

  // Reverse adjacency (deduplicated), then one backward BFS per stable state.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> redges;
  redges.reserve(g.succ.size());
  for (std::uint64_t v = 0; v < g.vertices; ++v)
    for (std::size_t si = 0; si < g.subsets.size(); ++si)
      redges.emplace_back(g.successor(static_cast<std::uint32_t>(v), si),
                          static_cast<std::uint32_t>(v));
  std::sort(redges.begin(), redges.end());
  redges.erase(std::unique(redges.begin(), redges.end()), redges.end());
  std::vector<std::uint32_t> rstart(g.vertices + 1, 0);
  for (const auto& e : redges) ++rstart[e.first + 1];
  for (std::uint64_t v = 0; v < g.vertices; ++v) rstart[v + 1] += rstart[v];

  std::vector<bool> seen(g.vertices);
  std::vector<std::uint32_t> queue;
  for (std::size_t fi = 0; fi < col.stable_states.size(); ++fi) {
    std::fill(seen.begin(), seen.end(), false);
    queue.clear();
    std::uint64_t root = codec.constant_window(codec.encode_profile(col.stable_states[fi]));
    queue.push_back(static_cast<std::uint32_t>(root));
    seen[root] = true;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      std::uint32_t v = queue[qi];
      col.bits[static_cast<std::uint64_t>(v) * col.blocks_per_vertex + fi / 64] |=
          std::uint64_t{1} << (fi % 64);
      for (std::uint32_t e = rstart[v]; e < rstart[v + 1]; ++e) {
        std::uint32_t u = redges[e].second;
        if (!seen[u]) {
          seen[u] = true;
          queue.push_back(u);
        }
      }
    }
  }
  return col;
}

std::uint64_t count_good_initial_states(const SystemSpec& spec) {
  StableColoring col = stable_coloring(spec);
  std::uint64_t good = 0;
  for (std::uint64_t v = 0; v < col.vertices; ++v)
    if (col.color_count(v) > 0) ++good;
  return good;
}

namespace {

// Shortest fair extension from `from`: activation sequence covering all
// nodes, ending in a vertex of the target class. BFS over (vertex, covered
// mask); lexicographically earliest sets win ties. Tries singleton
// activations first, then the full subset list.
bool fair_extension(const ConfigurationGraph& g, int n, const std::vector<char>& target,
                    std::uint32_t from, std::vector<NodeSet>* labels, std::uint32_t* end) {
  std::vector<std::size_t> singleton_idx, all_idx;
  for (std::size_t si = 0; si < g.subsets.size(); ++si) {
    all_idx.push_back(si);
    if (std::popcount(g.subsets[si]) == 1) singleton_idx.push_back(si);
  }
  const std::uint64_t mask_count = std::uint64_t{1} << n;
  const NodeSet all = full_set(n);
  for (const auto& order : {singleton_idx, all_idx}) {
    std::vector<std::int32_t> parent(g.vertices * mask_count, -1);
    std::vector<std::uint16_t> via(g.vertices * mask_count);
    std::vector<std::uint32_t> queue;
    std::uint64_t start = static_cast<std::uint64_t>(from) * mask_count;
    parent[start] = static_cast<std::int32_t>(start);
    queue.push_back(static_cast<std::uint32_t>(start));
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      std::uint64_t cur = queue[qi];
      std::uint32_t v = static_cast<std::uint32_t>(cur / mask_count);
      NodeSet mask = static_cast<NodeSet>(cur % mask_count);
      if (mask == all && target[v] && cur != start) {
        labels->clear();
        for (std::uint64_t s = cur; s != start; s = parent[s])
          labels->push_back(g.subsets[via[s]]);
        std::reverse(labels->begin(), labels->end());
        *end = v;
        return true;
      }
      for (std::size_t si : order) {
        std::uint32_t u = g.successor(v, si);
        std::uint64_t nxt = static_cast<std::uint64_t>(u) * mask_count | (mask | g.subsets[si]);
        if (parent[nxt] != -1) continue;
        parent[nxt] = static_cast<std::int32_t>(cur);
        via[nxt] = static_cast<std::uint16_t>(si);
        queue.push_back(static_cast<std::uint32_t>(nxt));
      }
    }
  }
  return false;
}

}  // namespace

Oscillation synthesize_oscillation(const SystemSpec& spec, int activation_cap) {
  FlagReport flags = verify_flags(spec);
  if (!flags.deterministic.ok())
    throw HypothesesError("synthesize_oscillation: hypotheses not met (deterministic): " +
                          flags.deterministic.counterexample);
  if (!flags.stationary.ok())
    throw HypothesesError("synthesize_oscillation: hypotheses not met (stationary): " +
                          flags.stationary.counterexample);
  if (!flags.self_independent.ok())
    throw HypothesesError("synthesize_oscillation: hypotheses not met (self-independent): " +
                          flags.self_independent.counterexample);

  StableColoring col = stable_coloring(spec, activation_cap);
  if (col.stable_states.size() < 2)
    throw HypothesesError("synthesize_oscillation: hypotheses not met (>= 2 stable states): " +
                          std::to_string(col.stable_states.size()) + " stable state(s)");

  ConfigurationGraph g = build_configuration_graph(spec, activation_cap);
  SpaceCodec codec(spec);

  std::vector<char> poly(g.vertices, 0), empty(g.vertices, 0);
  bool any_poly = false, any_empty = false;
  for (std::uint64_t v = 0; v < g.vertices; ++v) {
    int c = col.color_count(v);
    poly[v] = c >= 2;
    empty[v] = c == 0;
    any_poly |= poly[v] != 0;
    any_empty |= empty[v] != 0;
  }

  if (any_poly) {
    // Fair-extension loop: hop between polychromatic configurations, each hop
    // covering all nodes, until one repeats; the repeat closes the cycle.
    std::uint32_t start = 0;
    while (!poly[start]) ++start;
    std::unordered_map<std::uint32_t, std::size_t> seen{{start, 0}};
    std::vector<std::vector<NodeSet>> extensions;
    std::vector<std::uint32_t> endpoints{start};
    std::uint32_t cur = start;
    for (std::uint64_t round = 0; round <= g.vertices; ++round) {
      std::vector<NodeSet> labels;
      std::uint32_t end = 0;
      if (!fair_extension(g, spec.n, poly, cur, &labels, &end))
        throw SynthesisAnomaly(
            "no polychromatic fair extension found; one must exist for deterministic "
            "self-independent systems with several stable states");
      extensions.push_back(std::move(labels));
      cur = end;
      auto [it, fresh] = seen.emplace(cur, extensions.size());
      if (!fresh) {
        std::size_t j = it->second;
        Oscillation osc;
        osc.initial = Configuration{codec.decode_window(endpoints[0]), 0};
        for (std::size_t e = 0; e < j; ++e)
          osc.witness.prefix.insert(osc.witness.prefix.end(), extensions[e].begin(),
                                    extensions[e].end());
        for (std::size_t e = j; e < extensions.size(); ++e)
          osc.witness.cycle.insert(osc.witness.cycle.end(), extensions[e].begin(),
                                   extensions[e].end());
        std::string why;
        if (!verify_witness(spec, osc.initial, osc.witness, &why))
          throw SynthesisAnomaly("synthesized witness failed verification: " + why);
        return osc;
      }
      endpoints.push_back(cur);
    }
    throw SynthesisAnomaly("fair-extension loop failed to close a cycle");
  }

  if (!any_empty)
    throw SynthesisAnomaly(
        "no polychromatic and no empty-colored configuration despite >= 2 stable states");

  // Empty-color fallback: nothing reachable from here can ever stabilize, so
  // the eventually-periodic orbit of the round-robin schedule is a witness.
  std::uint32_t start = 0;
  while (!empty[start]) ++start;
  std::vector<std::size_t> rr;  // subset index of {i}
  for (int i = 1; i <= spec.n; ++i) {
    NodeSet s = node_bit(i);
    auto it = std::find(g.subsets.begin(), g.subsets.end(), s);
    rr.push_back(static_cast<std::size_t>(it - g.subsets.begin()));
  }
  std::unordered_map<std::uint64_t, std::size_t> when;
  std::vector<NodeSet> labels;
  std::uint32_t v = start;
  std::size_t t = 0;
  while (true) {
    std::uint64_t key = static_cast<std::uint64_t>(v) * spec.n + (t % spec.n);
    auto [it, fresh] = when.emplace(key, t);
    if (!fresh) {
      std::size_t j = it->second;
      Oscillation osc;
      osc.initial = Configuration{codec.decode_window(start), 0};
      osc.witness.prefix.assign(labels.begin(), labels.begin() + j);
      osc.witness.cycle.assign(labels.begin() + j, labels.end());
      std::string why;
      if (!verify_witness(spec, osc.initial, osc.witness, &why))
        throw SynthesisAnomaly("synthesized witness failed verification: " + why);
      return osc;
    }
    std::size_t si = rr[t % spec.n];
    labels.push_back(g.subsets[si]);
    v = g.successor(v, si);
    ++t;
  }
}

bool verify_witness(const SystemSpec& spec, const Configuration& initial,
                    const ScheduleWitness& witness, std::string* why) {
  auto bail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (witness.cycle.empty()) return bail("cycle is empty");
  NodeSet covered = 0;
  for (NodeSet s : witness.cycle) covered |= s;
  if ((covered & full_set(spec.n)) != full_set(spec.n))
    return bail("cycle does not activate every node");

  try {
    require_deterministic_stationary(spec, "verify_witness");
    validate_configuration(spec, initial);
    // replay through apply_activation to exercise the execution path itself
    Configuration cfg = initial;
    for (NodeSet s : witness.prefix) cfg = apply_activation(spec, cfg, s, nullptr);
    Configuration at_cycle = cfg;
    bool changed = false;
    for (NodeSet s : witness.cycle) {
      cfg = apply_activation(spec, cfg, s, nullptr);
      changed |= !(cfg.window == at_cycle.window);
    }
    if (!(cfg.window == at_cycle.window))
      return bail("cycle does not return to its starting configuration");
    if (!changed) return bail("cycle never leaves its starting configuration");
    return true;
  } catch (const std::exception& e) {
    return bail(e.what());
  }
}

}  // namespace adyn
