#pragma once

#include <stdexcept>
#include <string>

namespace adyn {

/// Malformed or inconsistent model input.
struct SpecError : std::runtime_error {
  explicit SpecError(const std::string& what) : std::runtime_error(what) {}
};

/// An exhaustive operation refused to run because the state space exceeds the
/// guard. Always an explicit error, never silent truncation.
struct SizeGuardError : std::runtime_error {
  explicit SizeGuardError(const std::string& what) : std::runtime_error(what) {}
};

/// A decision procedure was called on a system outside its preconditions
/// (randomized, non-stationary, missing fixed points, ...).
struct HypothesesError : std::runtime_error {
  explicit HypothesesError(const std::string& what) : std::runtime_error(what) {}
};

namespace guard {
constexpr unsigned long long table_entries = 1ull << 24;
constexpr unsigned long long graph_edges = 1ull << 24;
constexpr unsigned long long product_states = 1ull << 24;
constexpr unsigned long long string_machine_states = 1ull << 20;
constexpr int max_nodes = 30;
}  // namespace guard

}  // namespace adyn
