#pragma once

#include <optional>
#include <random>

#include "adyn/schedule.hpp"
#include "adyn/system.hpp"

namespace adyn {

/// Dynamics state: the window of the last k action profiles (most recent
/// last) plus the number of update steps applied so far (drives non-stationary
/// reaction functions).
struct Configuration {
  std::vector<Profile> window;
  long long step = 0;

  const Profile& latest() const { return window.back(); }

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

Configuration initial_configuration(const SystemSpec& spec, const Profile& profile);
Configuration initial_configuration(const SystemSpec& spec, std::vector<Profile> window);
void validate_configuration(const SystemSpec& spec, const Configuration& cfg);

/// An executed run: every step records the activated set and the resulting
/// profile. Replaying initial + active sets (same seed) reproduces the steps.
struct Trace {
  struct Step {
    NodeSet active;
    Profile profile;
  };
  Configuration initial;
  std::vector<Step> steps;
  std::optional<std::uint64_t> rng_seed;  // absent for deterministic systems

  Configuration final_configuration(const SystemSpec& spec) const;
};

/// One dynamics step: every node in `active` simultaneously resamples its
/// action from its reaction function applied to the pre-step history; all
/// other nodes keep their latest action. Sampling draws (activated,
/// randomized nodes only) happen in ascending node order.
Configuration apply_activation(const SystemSpec& spec, const Configuration& cfg, NodeSet active,
                               std::mt19937_64* rng = nullptr);

/// Runs the (s0, sigma)-dynamics for exactly `horizon` steps.
Trace run_dynamics(const SystemSpec& spec, const Configuration& initial,
                   ScheduleSource schedule, long long horizon, std::uint64_t seed = 0);

/// Returns the profile the trace conclusively stabilized to: the final window
/// must be constant at some profile a and a must be a fixed point of the
/// reaction functions (point mass on a_i for every node, at every reachable
/// table slice), so the evidence is conclusive rather than merely quiet.
std::optional<Profile> detect_stabilization(const Trace& trace, const SystemSpec& spec);

/// True iff profile a, held constant, stays forever: every node's reaction on
/// the constant window is a point mass on a_i (checked across all table
/// slices reachable from `from_step` on).
bool is_stable_state(const SystemSpec& spec, const SpaceCodec& codec, const Profile& a,
                     long long from_step = 0);

}  // namespace adyn
