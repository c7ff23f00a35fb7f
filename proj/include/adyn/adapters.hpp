#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "adyn/rational.hpp"
#include "adyn/system.hpp"

namespace adyn {

// ---------------------------------------------------------------------------
// Normal-form games
// ---------------------------------------------------------------------------

struct NormalFormGame {
  int players = 0;
  std::vector<std::vector<std::string>> strategies;
  std::vector<Rational> utilities;  // [profile_code * players + player]

  std::uint64_t profile_count() const;
  std::uint64_t code_of(const Profile& s) const;
  const Rational& utility(const Profile& s, int player) const {
    return utilities[code_of(s) * players + player];
  }
  int strategy_count(int player) const { return static_cast<int>(strategies[player].size()); }
};

void validate_game(const NormalFormGame& game);
NormalFormGame parse_game(const std::string& text);
std::string format_game(const NormalFormGame& game);

/// Best-response dynamics with consistent tie-breaking: f_i(s) is the
/// tie-break-minimal maximizer of u_i(., s_{-i}). Default tie-break is the
/// strategy declaration order; a custom total order per player may be given
/// (tie_break[i] lists strategy indices, most preferred first).
SystemSpec game_to_system(const NormalFormGame& game,
                          const std::vector<std::vector<int>>& tie_break = {});

/// Direct argmax enumeration (the cross-check oracle for fixed points).
std::vector<Profile> pure_nash_equilibria(const NormalFormGame& game);

// Small builders used all over the tests.
NormalFormGame matching_pennies();
NormalFormGame coordination_2x2();
NormalFormGame prisoners_dilemma();

// ---------------------------------------------------------------------------
// Asynchronous Boolean circuits
// ---------------------------------------------------------------------------

struct CircuitNetlist {
  struct Vertex {
    std::string name;
    bool is_input = false;
    int fixed_bit = 0;            // inputs only
    std::vector<int> sources;     // gates only; indices into vertices
    std::vector<int> truth;       // gates only; size 2^arity, first source = MSB
  };
  std::vector<Vertex> vertices;
};

void validate_circuit(const CircuitNetlist& netlist);
CircuitNetlist parse_circuit(const std::string& text);

/// Nodes are the circuit inputs (constant reactions) and the logic gates
/// (truth tables over their wire sources); stable states are the consistent
/// Boolean assignments.
SystemSpec circuit_to_system(const CircuitNetlist& netlist);

// ---------------------------------------------------------------------------
// Social networks (majority dynamics over technologies {X, Y})
// ---------------------------------------------------------------------------

struct SocialGraph {
  int nodes = 0;
  std::vector<std::vector<int>> friends;  // out-neighbors, 0-based
};

void validate_social(const SocialGraph& graph);
SocialGraph parse_social(const std::string& text);

/// Majority dynamics: node i picks X iff at least half of its friends use X.
/// Nodes without friends are rejected (majority undefined), as are
/// self-loops (they would break self-independence).
SystemSpec social_to_system(const SocialGraph& graph);

// ---------------------------------------------------------------------------
// Interdomain routing (stable paths instances)
// ---------------------------------------------------------------------------

struct SppInstance {
  int nodes = 0;                                   // ASes 1..nodes; destination is d
  std::vector<std::pair<int, int>> edges;          // undirected; 0 stands for d
  std::vector<std::vector<std::vector<int>>> permitted;  // per node, ranked routes
                                                         // (best first); route =
                                                         // node list from self to 0
};

void validate_spp(const SppInstance& spp);
SppInstance parse_spp(const std::string& text);

/// BGP-style dynamics: each AS picks its top-ranked permitted route that is
/// consistent with its neighbors' current routes, else the empty route.
/// Stable routing trees are exactly the fixed points.
SystemSpec routing_to_system(const SppInstance& spp);

SppInstance disagree_gadget();
SppInstance bad_gadget();
SppInstance shortest_path_spp();

// ---------------------------------------------------------------------------
// Congestion control (discretized capacity allocation)
// ---------------------------------------------------------------------------

struct CongestionNetwork {
  struct Edge {
    std::string name;
    Rational capacity;
  };
  struct Connection {
    std::string name;
    Rational rate;
    std::vector<int> route;  // edge indices, in traversal order
  };
  enum class PolicyKind { priority, fair_share, fixed };
  struct Policy {
    PolicyKind kind = PolicyKind::fair_share;
    std::vector<int> priority;     // connection indices (through this edge), best first
    std::vector<long long> fixed;  // fixed allocation in grid units
  };

  Rational granularity = Rational(1);
  std::vector<Edge> edges;
  std::vector<Connection> connections;
  std::vector<Policy> policies;  // per edge
};

void validate_congestion(const CongestionNetwork& net);
CongestionNetwork parse_congestion(const std::string& text);

/// Nodes are the edges that carry at least one connection; actions are grid
/// allocations (x_1..x_{N(e)}) with sum <= c_e; the reaction applies the
/// edge's queueing policy to the incoming flows implied by upstream
/// allocations. Policies must satisfy x_i <= w_i on every input (checked
/// exhaustively at build time; violating policies are a construction error).
SystemSpec congestion_to_system(const CongestionNetwork& net);

CongestionNetwork opposed_priority_cycle();

}  // namespace adyn
