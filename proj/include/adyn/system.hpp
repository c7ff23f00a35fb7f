#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "adyn/errors.hpp"
#include "adyn/rational.hpp"

namespace adyn {

/// Set of nodes as a bitmask; bit i-1 stands for node i (node ids are 1-based
/// in all public interfaces and text formats).
using NodeSet = std::uint32_t;

inline NodeSet node_bit(int node) { return NodeSet{1} << (node - 1); }
inline bool contains(NodeSet s, int node) { return (s & node_bit(node)) != 0; }
inline NodeSet full_set(int n) { return n >= 32 ? ~NodeSet{0} : (NodeSet{1} << n) - 1; }

/// One action per node, as indices into the per-node alphabets.
using Profile = std::vector<int>;

/// Probability distribution over one node's actions. Weights are exact
/// rationals and must sum to 1; entries sorted by action, nonzero only.
struct Distribution {
  std::vector<std::pair<int, Rational>> weights;

  static Distribution point(int action) { return Distribution{{{action, Rational(1)}}}; }
  bool is_point() const { return weights.size() == 1; }
  int point_action() const { return weights.front().first; }

  friend bool operator==(const Distribution&, const Distribution&) = default;
};

struct Flags {
  bool deterministic = false;
  bool self_independent = false;
  bool stationary = false;
  bool historyless = false;

  friend bool operator==(const Flags&, const Flags&) = default;
};

/// Tabulated reaction function. slices[s] maps a window code (see SpaceCodec)
/// to a distribution; the update step u = 1,2,... uses slice
/// min(u-1, slices.size()-1). A single slice is a stationary function.
struct TableFn {
  std::vector<std::vector<Distribution>> slices;

  friend bool operator==(const TableFn&, const TableFn&) = default;
};

/// Builtin reaction-function family, so exponentially large systems need not
/// be tabulated. Flags are certified by the generator that produced it.
struct NamedFn {
  std::string id;                  // one of the families in named_families()
  std::vector<long long> params;   // family specific; params[0] = owning node (0-based)
  Flags certified;

  friend bool operator==(const NamedFn&, const NamedFn&) = default;
};

struct ReactionFn {
  std::variant<TableFn, NamedFn> fn;

  bool is_table() const { return std::holds_alternative<TableFn>(fn); }
  const TableFn& table() const { return std::get<TableFn>(fn); }
  const NamedFn& named() const { return std::get<NamedFn>(fn); }

  friend bool operator==(const ReactionFn&, const ReactionFn&) = default;
};

/// Provenance of a generated system; lets spec files round-trip as a
/// generator stanza instead of dumped tables.
struct GeneratorStanza {
  std::string id;
  std::vector<std::pair<std::string, std::string>> params;

  friend bool operator==(const GeneratorStanza&, const GeneratorStanza&) = default;
};

/// The interaction system: node count, per-node action alphabets, recall
/// depth, reaction functions and capability flags. Flags are verified against
/// the tables (verify_flags), not trusted.
struct SystemSpec {
  int n = 0;
  std::vector<std::vector<std::string>> alphabets;  // size n, symbols per node
  int recall_k = 1;
  int window_w = 1;  // initial-history length; this implementation pins w = k
  std::vector<ReactionFn> reactions;  // size n
  Flags flags;
  std::optional<GeneratorStanza> provenance;

  int alphabet_size(int i) const { return static_cast<int>(alphabets[i].size()); }
  int symbol_index(int i, const std::string& sym) const;  // -1 if absent

  friend bool operator==(const SystemSpec& a, const SystemSpec& b) {
    return a.n == b.n && a.alphabets == b.alphabets && a.recall_k == b.recall_k &&
           a.window_w == b.window_w && a.reactions == b.reactions && a.flags == b.flags &&
           a.provenance == b.provenance;
  }
};

/// Mixed-radix codes for profiles and recall windows of one system.
/// Profile code: sum a_i * mul[i].  Window code: sum pc_m * P^m where m = 0 is
/// the OLDEST profile, so shifting in a new profile p is
///   w' = w / P + encode_profile(p) * P^(k-1).
class SpaceCodec {
 public:
  explicit SpaceCodec(const SystemSpec& spec);

  int n() const { return n_; }
  int k() const { return k_; }
  std::uint64_t profile_count() const { return profiles_; }
  std::uint64_t window_count() const { return windows_; }

  std::uint64_t encode_profile(const Profile& p) const;
  Profile decode_profile(std::uint64_t code) const;
  int profile_digit(std::uint64_t code, int node) const {
    return static_cast<int>((code / mul_[node]) % sizes_[node]);
  }

  std::uint64_t window_of_profiles(const std::vector<Profile>& ps) const;
  std::uint64_t constant_window(std::uint64_t profile_code) const;
  std::uint64_t latest_profile(std::uint64_t window_code) const {
    return window_code / wmul_;
  }
  std::uint64_t profile_at(std::uint64_t window_code, int m) const;  // m = 0 oldest
  std::uint64_t shift(std::uint64_t window_code, std::uint64_t new_profile) const {
    return window_code / profiles_ + new_profile * wmul_;
  }
  std::vector<Profile> decode_window(std::uint64_t window_code) const;

 private:
  int n_, k_;
  std::vector<int> sizes_;
  std::vector<std::uint64_t> mul_;
  std::uint64_t profiles_ = 1;
  std::uint64_t windows_ = 1;
  std::uint64_t wmul_ = 1;  // P^(k-1)
};

/// Structural validation of a SystemSpec (alphabets, table shapes,
/// distributions summing to one, flag consistency). Throws SpecError.
void validate_spec(const SystemSpec& spec);

/// Evaluates node i's reaction function on a recall window at the given
/// update step (1-based; only relevant for multi-slice tables).
Distribution eval_reaction(const SystemSpec& spec, const SpaceCodec& codec, int node,
                           std::uint64_t window_code, long long update_step = 1);

/// Deterministic fast path; requires a point-mass output (throws otherwise).
int eval_deterministic(const SystemSpec& spec, const SpaceCodec& codec, int node,
                       std::uint64_t window_code, long long update_step = 1);

enum class FlagStatus { holds, fails, certified };

struct FlagCheck {
  FlagStatus status = FlagStatus::holds;
  std::string counterexample;  // human-readable witness for a failure
  bool ok() const { return status != FlagStatus::fails; }
};

struct FlagReport {
  FlagCheck deterministic, self_independent, stationary, historyless;
};

/// Verifies capability flags against the reaction tables by exhaustive
/// enumeration (own-coordinate perturbation for self-independence, point-mass
/// check for determinism, cross-slice equality for stationarity).
/// Named reactions carry certified flags from their generator and are
/// reported as such. Refuses with SizeGuardError beyond guard::table_entries.
FlagReport verify_flags(const SystemSpec& spec);

/// True iff the declared flags are consistent with verify_flags.
bool flags_consistent(const SystemSpec& spec, std::string* detail = nullptr);

std::string format_profile(const SystemSpec& spec, const Profile& p);
std::string format_window(const SystemSpec& spec, const SpaceCodec& codec, std::uint64_t code);
std::string format_node_set(NodeSet s);

}  // namespace adyn
