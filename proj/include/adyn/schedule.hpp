#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "adyn/system.hpp"

namespace adyn {

/// Finitely represented eventually-periodic schedule prefix . cycle^omega.
/// The denoted infinite schedule is fair whenever every node appears in some
/// cycle set.
struct ScheduleWitness {
  std::vector<NodeSet> prefix;
  std::vector<NodeSet> cycle;  // nonempty

  friend bool operator==(const ScheduleWitness&, const ScheduleWitness&) = default;
};

/// True iff every length-r window of the denoted infinite schedule contains
/// every node in [1..n]. The check unrolls prefix plus enough cycle copies to
/// cover all distinct windows (prefix.cycle.cycle suffices only for
/// r <= |cycle|).
bool witness_is_r_fair(const ScheduleWitness& w, int r, int n);

/// Smallest r for which the witness is r-fair, or 0 if it is not fair at all.
int witness_fairness_bound(const ScheduleWitness& w, int n);

// Text format: one line per set, comma-separated 1-based node indices, a
// literal "---" line separating prefix from cycle.
std::string format_witness(const ScheduleWitness& w);
ScheduleWitness parse_witness(const std::string& text);

enum class ScheduleKind { round_robin, random_fair, witness, all_subsets };

/// Infinite, restartable source of activation sets. Value semantics: copying
/// a source replays it from its current state; reset() restarts from the
/// beginning.
class ScheduleSource {
 public:
  static ScheduleSource round_robin(int n);
  static ScheduleSource random_fair(int n, int r, std::uint64_t seed);
  static ScheduleSource from_witness(int n, ScheduleWitness w);
  static ScheduleSource all_subsets(int n);

  NodeSet next();
  void reset();

  ScheduleKind kind() const { return kind_; }
  int n() const { return n_; }
  /// Declared fairness bound: r for random_fair, n for round robin,
  /// witness_fairness_bound for witnesses, 0 (merely fair) for all_subsets.
  int r_bound() const { return r_; }

 private:
  ScheduleSource(ScheduleKind kind, int n) : kind_(kind), n_(n) {}

  ScheduleKind kind_;
  int n_;
  int r_ = 0;
  std::uint64_t seed_ = 0;
  ScheduleWitness witness_;
  // mutable run state
  std::uint64_t pos_ = 0;
  std::mt19937_64 rng_;
  std::vector<int> idle_;
};

ScheduleSource make_schedule(ScheduleKind kind, int n, int r = 0, std::uint64_t seed = 0,
                             const ScheduleWitness* w = nullptr);

}  // namespace adyn
