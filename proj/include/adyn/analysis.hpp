#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "adyn/dynamics.hpp"
#include "adyn/schedule.hpp"
#include "adyn/system.hpp"

namespace adyn {

/// Thrown by synthesize_oscillation when the greedy fair-extension search
/// exhausts its options on an input that satisfies the hypotheses. This is a
/// falsifying anomaly: it must never happen (see the acceptance suite).
struct SynthesisAnomaly : std::runtime_error {
  explicit SynthesisAnomaly(const std::string& what) : std::runtime_error(what) {}
};

/// Explicit labeled transition system over all recall windows of a
/// deterministic stationary system. Vertices are window codes (SpaceCodec
/// order); edges are (vertex, activation set) -> successor for every nonempty
/// set of at most `activation_cap` nodes, in canonical (lexicographic by
/// element list) order.
struct ConfigurationGraph {
  std::uint64_t vertices = 0;
  int activation_cap = 0;
  std::vector<NodeSet> subsets;
  std::vector<std::uint32_t> succ;  // vertices x subsets.size()

  std::uint64_t edges() const { return vertices * subsets.size(); }
  std::uint32_t successor(std::uint32_t v, std::size_t si) const {
    return succ[static_cast<std::size_t>(v) * subsets.size() + si];
  }
};

/// activation_cap = 0 means "all 2^n - 1 subsets". A cap c < n
/// under-approximates the schedule space: NonConvergent stays sound,
/// Convergent means "convergent under <= c-simultaneity".
ConfigurationGraph build_configuration_graph(const SystemSpec& spec, int activation_cap = 0);

enum class Result { convergent, non_convergent };

struct SearchStats {
  std::uint64_t vertices = 0;
  std::uint64_t edges = 0;
  std::uint64_t search_nodes = 0;
};

/// Result of a convergence analysis. NonConvergent verdicts carry a
/// replayable witness: an initial configuration plus an eventually-periodic
/// schedule whose run provably never stabilizes (verify_witness checks it).
struct Verdict {
  Result result = Result::convergent;
  Configuration initial;     // meaningful iff non_convergent
  ScheduleWitness witness;   // meaningful iff non_convergent
  SearchStats stats;
  int activation_cap = 0;
  bool cap_exhaustive = true;
  int r = 0;  // 0: plain convergence; > 0: r-convergence

  bool non_convergent() const { return result == Result::non_convergent; }
};

/// All stable states of a deterministic stationary system: profiles that,
/// held constant, are fixed by every reaction function (for historyless
/// systems, exactly the fixed points of g). Sorted by profile code.
std::vector<Profile> enumerate_stable_states(const SystemSpec& spec);

/// Decides convergence for every initial configuration and fair schedule
/// (exponential-time, desk scale). NonConvergent iff the configuration graph
/// has a closed walk through >= 2 distinct configurations whose activation
/// labels cover all n nodes; the search runs per anchor over the
/// (configuration, covered-node bitmask) product space.
Verdict decide_convergent(const SystemSpec& spec, int activation_cap = 0);

/// Same question restricted to r-fair schedules. The cycle search runs over
/// the product (configuration, per-node idle counters < r); the counters
/// enforce r-fairness along the cycle and the cycle must return to the exact
/// same product state.
Verdict decide_r_convergent(const SystemSpec& spec, int r, int activation_cap = 0);

/// Stable coloring: color(cfg) = set of stable states whose constant window
/// is reachable from cfg (backward closure from each fixed point). A
/// configuration with >= 2 colors is polychromatic; an empty color means no
/// stable state can ever be reached from there.
struct StableColoring {
  std::vector<Profile> stable_states;
  std::uint64_t vertices = 0;
  std::size_t blocks_per_vertex = 0;
  std::vector<std::uint64_t> bits;  // vertices x blocks_per_vertex

  int color_count(std::uint64_t v) const;
  bool has_color(std::uint64_t v, std::size_t stable_index) const;
  std::vector<Profile> colors_of(std::uint64_t v) const;
};

StableColoring stable_coloring(const SystemSpec& spec, int activation_cap = 0);

/// Number of initial configurations from which at least one stable state is
/// reachable (for historyless systems: initial profiles).
std::uint64_t count_good_initial_states(const SystemSpec& spec);

struct Oscillation {
  Configuration initial;
  ScheduleWitness witness;
};

/// Constructive non-convergence for deterministic, stationary,
/// self-independent systems with >= 2 stable states: picks a polychromatic
/// configuration and greedily extends by fair extensions (activation
/// sequences covering all nodes, explored lexicographically) that stay
/// polychromatic, closing the cycle when a configuration repeats. When no
/// polychromatic configuration exists, synthesizes from an empty-colored one
/// instead (no stable state is reachable from it, so any fair covering cycle
/// there oscillates). Throws HypothesesError if the hypotheses fail and
/// SynthesisAnomaly if the guaranteed search fails.
Oscillation synthesize_oscillation(const SystemSpec& spec, int activation_cap = 0);

/// Certifies a Verdict witness: replaying prefix then cycle from `initial`
/// must return to the configuration at the cycle's start, visit >= 2 distinct
/// configurations within the cycle, and the cycle's label union must cover
/// all nodes (so prefix.cycle^omega is a fair non-convergent run). False on
/// any failure; `why` gets a diagnostic.
bool verify_witness(const SystemSpec& spec, const Configuration& initial,
                    const ScheduleWitness& witness, std::string* why = nullptr);

/// Canonical enumeration order of activation sets (nonempty, |S| <= cap,
/// lexicographic by sorted element list).
std::vector<NodeSet> canonical_subsets(int n, int activation_cap);

}  // namespace adyn
