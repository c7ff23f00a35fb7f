#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "adyn/system.hpp"

namespace adyn {

/// Named example systems. ex1 is the finite-state encoding of the
/// unbounded-recall example: node 1's action carries (displayed action,
/// last observed peer action, sticky change-detected bit); node 2 copies
/// node 1's displayed action. ex3/ex4 take the node count n.
SystemSpec make_example_ex1();
SystemSpec make_example_ex2();
SystemSpec make_example_ex3(int n);
SystemSpec make_example_ex4(int n);
SystemSpec make_example(const std::string& name, int n = 0);

/// Simple chordless cycle in the z-dimensional hypercube.
struct Snake {
  int dimension = 0;
  std::vector<std::uint32_t> vertices;  // cyclic order; consecutive differ in one bit

  std::size_t size() const { return vertices.size(); }
};

/// Throws SpecError unless the cycle is simple and chordless (any two cycle
/// vertices adjacent in the hypercube are consecutive on the cycle).
void validate_snake(const Snake& snake);

struct SnakeSearchResult {
  Snake best;
  bool exhaustive = false;              // exact maximum (z <= 4, or budget not hit)
  std::uint64_t nodes_expanded = 0;
  double certified_lower_bound = 0.0;   // 0.3 * 2^z for large z (Abbot–Katchalski)
};

/// Longest-snake search by DFS with canonical-form pruning (start fixed at
/// vertex 0, coordinates introduced in first-use order). Exhaustive for
/// z <= 4; for larger z stops after `budget` node expansions (0 = default
/// budget) and reports the certified lower bound alongside the best found.
SnakeSearchResult find_max_snake(int z, std::uint64_t budget = 0);

// Snake text format: one vertex bit-string per line (coordinate 0 is the
// rightmost character).
std::string format_snake(const Snake& snake);
Snake parse_snake(const std::string& text);

/// The r-convergence threshold construction over Q_{n-2}, n = z + 2. Nodes
/// 1 and 2 map x^{n-1} to x and everything else to y; the remaining nodes
/// follow an orientation of the hypercube that turns the snake into a cycle,
/// points non-snake vertices toward the snake, and orients the rest toward
/// the numerically smaller endpoint. The snake is relabeled (xor) so that
/// x^{n-2} lies on it; the builder records the relabeling and asserts
/// computationally that y^n is the unique stable state.
SystemSpec build_snake_system(const Snake& snake);

/// Set-disjointness instance over a snake with q = |S| elements: element j is
/// the j-th snake vertex; node 1 answers x exactly on (y, v_j) with j in ea,
/// node 2 on (y, v_j) with j in eb; the cube nodes freeze to y unless nodes 1
/// and 2 both hold x. The system is non-convergent iff ea and eb intersect.
SystemSpec build_disjointness_system(const std::vector<int>& ea, const std::vector<int>& eb,
                                     const Snake& snake);

/// Total function g : Gamma^t -> Gamma + {halt} given as a truth table.
struct StringMachine {
  std::vector<std::string> gamma;  // alphabet; "halt" is implicit and distinct
  int t = 0;
  std::vector<int> table;  // size |gamma|^t, little-endian mixed radix; value
                           // in [0, |gamma|]; |gamma| encodes halt

  int halt_value() const { return static_cast<int>(gamma.size()); }
  std::uint64_t string_count() const;
  int eval(const std::vector<int>& s) const;
};

void validate_string_machine(const StringMachine& m);

struct MachineRun {
  bool halted = false;
  long long steps = 0;  // steps executed; for halted runs, loop iterations
};

/// Faithful execution of: i := 0; while g(T) != halt { T_i := g(T);
/// i := (i+1) mod t }.
MachineRun run_string_machine(const StringMachine& m, const std::vector<int>& t0,
                              long long max_steps);

/// Exact nontermination decision by cycle detection over the finite (T, i)
/// space (|Gamma|^t * t states, guarded).
bool string_machine_nonterminates(const StringMachine& m);

/// The t+1-node encoding: t index nodes over Gamma + {halt} and one counter
/// node over [t] x (Gamma + {halt}). Unique stable state (halt,...,halt) with
/// the counter at (0, halt); the system is convergent iff the machine
/// terminates from every initial string. Requires t >= 2 (the counter cannot
/// witness progress at t = 1).
SystemSpec build_string_system(const StringMachine& m);

/// Rebuilds a generated system from its provenance stanza (used by the
/// system file format). Throws SpecError for unknown generators or bad parameters.
SystemSpec rebuild_generator(const GeneratorStanza& stanza);

/// Uniformly random deterministic, historyless, self-independent binary
/// system on n nodes (g_i : A_{-i} -> A_i i.i.d. uniform).
SystemSpec random_self_independent_system(int n, std::uint64_t seed);

}  // namespace adyn
