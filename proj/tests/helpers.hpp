#pragma once

#include <functional>
#include <string>
#include <vector>

#include "adyn/dynamics.hpp"
#include "adyn/system.hpp"

namespace adyn::testing {

/// Historyless deterministic system from a plain function (node, profile) ->
/// action index. All tests build hand specs through this.
inline SystemSpec historyless(std::vector<std::vector<std::string>> alphabets,
                              const std::function<int(int, const Profile&)>& g,
                              Flags flags = {}) {
  SystemSpec spec;
  spec.n = static_cast<int>(alphabets.size());
  spec.alphabets = std::move(alphabets);
  spec.recall_k = spec.window_w = 1;
  spec.reactions.resize(spec.n);
  SpaceCodec codec(spec);
  for (int i = 0; i < spec.n; ++i) {
    std::vector<Distribution> slice(codec.profile_count());
    for (std::uint64_t p = 0; p < codec.profile_count(); ++p)
      slice[p] = Distribution::point(g(i, codec.decode_profile(p)));
    spec.reactions[i].fn = TableFn{{std::move(slice)}};
  }
  spec.flags = flags;
  return spec;
}

inline std::vector<std::vector<std::string>> binary_alphabets(int n) {
  return std::vector<std::vector<std::string>>(n, {"x", "y"});
}

/// g_i constant c_i.
inline SystemSpec constant_system(const Profile& c) {
  return historyless(binary_alphabets(static_cast<int>(c.size())),
                     [&](int i, const Profile&) { return c[i]; },
                     Flags{true, true, true, true});
}

/// Two-node best-response dynamics of matching pennies (no fixed point):
/// node 1 matches node 2, node 2 mismatches node 1.
inline SystemSpec pennies_best_response() {
  return historyless(binary_alphabets(2),
                     [](int i, const Profile& p) { return i == 0 ? p[1] : 1 - p[0]; },
                     Flags{true, true, true, true});
}

inline Profile profile_of(const SystemSpec& spec, const std::string& text) {
  std::vector<std::string> toks;
  std::string tok;
  for (char ch : text) {
    if (ch == ' ') {
      if (!tok.empty()) toks.push_back(tok);
      tok.clear();
    } else {
      tok += ch;
    }
  }
  if (!tok.empty()) toks.push_back(tok);
  Profile p;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    int a = spec.symbol_index(static_cast<int>(i), toks[i]);
    if (a < 0) throw SpecError("test profile symbol '" + toks[i] + "'");
    p.push_back(a);
  }
  return p;
}

inline Configuration config_of(const SystemSpec& spec, const std::string& text) {
  return initial_configuration(spec, profile_of(spec, text));
}

}  // namespace adyn::testing
