#include "adyn/system.hpp"

#include <algorithm>
#include <unordered_map>

namespace adyn {

int SystemSpec::symbol_index(int i, const std::string& sym) const {
  const auto& a = alphabets[i];
  auto it = std::find(a.begin(), a.end(), sym);
  return it == a.end() ? -1 : static_cast<int>(it - a.begin());
}

SpaceCodec::SpaceCodec(const SystemSpec& spec) : n_(spec.n), k_(spec.recall_k) {
  sizes_.resize(n_);
  mul_.resize(n_);
  for (int i = 0; i < n_; ++i) {
    sizes_[i] = spec.alphabet_size(i);
    mul_[i] = profiles_;
    if (sizes_[i] <= 0) throw SpecError("node " + std::to_string(i + 1) + " has empty alphabet");
    if (profiles_ > guard::table_entries * 16) throw SizeGuardError("profile space too large");
    profiles_ *= static_cast<std::uint64_t>(sizes_[i]);
  }
  for (int m = 0; m < k_; ++m) {
    if (windows_ > guard::table_entries * 16) throw SizeGuardError("window space too large");
    wmul_ = windows_;
    windows_ *= profiles_;
  }
}

std::uint64_t SpaceCodec::encode_profile(const Profile& p) const {
  std::uint64_t code = 0;
  for (int i = 0; i < n_; ++i) code += static_cast<std::uint64_t>(p[i]) * mul_[i];
  return code;
}

Profile SpaceCodec::decode_profile(std::uint64_t code) const {
  Profile p(n_);
  for (int i = 0; i < n_; ++i) p[i] = profile_digit(code, i);
  return p;
}

std::uint64_t SpaceCodec::window_of_profiles(const std::vector<Profile>& ps) const {
  std::uint64_t code = 0, m = 1;
  for (const auto& p : ps) {
    code += encode_profile(p) * m;
    m *= profiles_;
  }
  return code;
}

std::uint64_t SpaceCodec::constant_window(std::uint64_t profile_code) const {
  std::uint64_t code = 0, m = 1;
  for (int i = 0; i < k_; ++i) {
    code += profile_code * m;
    m *= profiles_;
  }
  return code;
}

std::uint64_t SpaceCodec::profile_at(std::uint64_t window_code, int m) const {
  for (int i = 0; i < m; ++i) window_code /= profiles_;
  return window_code % profiles_;
}

std::vector<Profile> SpaceCodec::decode_window(std::uint64_t window_code) const {
  std::vector<Profile> ps;
  ps.reserve(k_);
  for (int m = 0; m < k_; ++m) ps.push_back(decode_profile(profile_at(window_code, m)));
  return ps;
}

namespace {

void validate_distribution(const SystemSpec& spec, int node, const Distribution& d,
                           const std::string& where) {
  if (d.weights.empty()) throw SpecError(where + ": empty distribution");
  Rational sum(0);
  int prev = -1;
  for (const auto& [a, w] : d.weights) {
    if (a <= prev) throw SpecError(where + ": distribution entries not sorted/unique");
    prev = a;
    if (a < 0 || a >= spec.alphabet_size(node))
      throw SpecError(where + ": action index out of alphabet");
    if (w <= Rational(0)) throw SpecError(where + ": non-positive weight");
    sum += w;
  }
  if (sum != Rational(1)) throw SpecError(where + ": weights sum to " + sum.str() + ", not 1");
}

// ---- Named reaction families -------------------------------------------
//
// ex3(node; n):        f_i = x iff every other node's action is x, else y.
// ex4_core(node; n):   f_i(x^{n-1}) = x; f_i(z^{n-1}) = z; else y.
// ex4_boundary(node; n):
//     additionally f_i(x y^{n-2}) = z (first listed other node holds x) and
//     f_i(y^{n-1}) = x.
// All three are deterministic, historyless, self-independent; alphabets are
// {x,y} resp. {x,y,z} with x = 0, y = 1, z = 2.

constexpr int kX = 0, kY = 1, kZ = 2;

int eval_named_g(const NamedFn& nf, const SpaceCodec& codec, int node,
                 std::uint64_t profile_code) {
  const int n = codec.n();
  auto count_others = [&](int sym) {
    int c = 0;
    for (int j = 0; j < n; ++j)
      if (j != node && codec.profile_digit(profile_code, j) == sym) ++c;
    return c;
  };
  if (nf.id == "ex3") return count_others(kX) == n - 1 ? kX : kY;
  if (nf.id == "ex4_core" || nf.id == "ex4_boundary") {
    if (count_others(kX) == n - 1) return kX;
    if (count_others(kZ) == n - 1) return kZ;
    if (nf.id == "ex4_boundary") {
      // others ordered by node index; "x y^{n-2}" means the first other node
      // (the peer in {1,2}) holds x and the rest hold y
      int first_other = node == 0 ? 1 : 0;
      bool xy = codec.profile_digit(profile_code, first_other) == kX;
      for (int j = 0; j < n && xy; ++j)
        if (j != node && j != first_other) xy = codec.profile_digit(profile_code, j) == kY;
      if (xy) return kZ;
      if (count_others(kY) == n - 1) return kX;
    }
    return kY;
  }
  throw SpecError("unknown named reaction family '" + nf.id + "'");
}

}  // namespace

void validate_spec(const SystemSpec& spec) {
  if (spec.n < 1) throw SpecError("node count must be >= 1");
  if (spec.n > guard::max_nodes) throw SpecError("at most 30 nodes supported");
  if (spec.recall_k < 1) throw SpecError("recall depth must be >= 1");
  if (spec.window_w != spec.recall_k)
    throw SpecError("initial-history length w must equal recall k (w = k convention)");
  if (static_cast<int>(spec.alphabets.size()) != spec.n)
    throw SpecError("alphabets size != n");
  if (static_cast<int>(spec.reactions.size()) != spec.n)
    throw SpecError("reactions size != n");
  for (int i = 0; i < spec.n; ++i) {
    const auto& a = spec.alphabets[i];
    if (a.empty()) throw SpecError("node " + std::to_string(i + 1) + ": empty alphabet");
    for (const auto& s : a) {
      if (s.empty() || s.find_first_of(" \t|,") != std::string::npos)
        throw SpecError("node " + std::to_string(i + 1) + ": bad symbol '" + s + "'");
      if (std::count(a.begin(), a.end(), s) != 1)
        throw SpecError("node " + std::to_string(i + 1) + ": duplicate symbol '" + s + "'");
    }
  }
  if (spec.flags.historyless && (spec.recall_k != 1 || !spec.flags.stationary))
    throw SpecError("historyless requires recall 1 and stationary");

  SpaceCodec codec(spec);
  for (int i = 0; i < spec.n; ++i) {
    const auto& rf = spec.reactions[i];
    if (rf.is_table()) {
      const auto& t = rf.table();
      if (t.slices.empty()) throw SpecError("node " + std::to_string(i + 1) + ": empty table");
      if (codec.window_count() > guard::table_entries)
        throw SizeGuardError("reaction table for node " + std::to_string(i + 1) + " would need " +
                             std::to_string(codec.window_count()) + " entries (guard 2^24)");
      for (const auto& slice : t.slices) {
        if (slice.size() != codec.window_count())
          throw SpecError("node " + std::to_string(i + 1) + ": table slice has wrong size");
        for (std::uint64_t w = 0; w < slice.size(); ++w)
          validate_distribution(spec, i, slice[w],
                                "node " + std::to_string(i + 1) + " window " + std::to_string(w));
      }
    } else {
      const auto& nf = rf.named();
      if (nf.params.empty() || nf.params[0] != i)
        throw SpecError("named reaction of node " + std::to_string(i + 1) +
                        " must carry its node index");
      if (spec.recall_k != 1)
        throw SpecError("named reaction families are historyless (recall 1)");
    }
  }
}

Distribution eval_reaction(const SystemSpec& spec, const SpaceCodec& codec, int node,
                           std::uint64_t window_code, long long update_step) {
  const auto& rf = spec.reactions[node];
  if (rf.is_table()) {
    const auto& slices = rf.table().slices;
    std::size_t s = std::min<std::size_t>(static_cast<std::size_t>(update_step - 1),
                                          slices.size() - 1);
    return slices[s][window_code];
  }
  return Distribution::point(
      eval_named_g(rf.named(), codec, node, codec.latest_profile(window_code)));
}

int eval_deterministic(const SystemSpec& spec, const SpaceCodec& codec, int node,
                       std::uint64_t window_code, long long update_step) {
  const auto& rf = spec.reactions[node];
  if (!rf.is_table())
    return eval_named_g(rf.named(), codec, node, codec.latest_profile(window_code));
  const auto& slices = rf.table().slices;
  std::size_t s =
      std::min<std::size_t>(static_cast<std::size_t>(update_step - 1), slices.size() - 1);
  const Distribution& d = slices[s][window_code];
  if (!d.is_point()) throw HypothesesError("reaction function is randomized");
  return d.point_action();
}

std::string format_window(const SystemSpec& spec, const SpaceCodec& codec, std::uint64_t code) {
  auto ps = codec.decode_window(code);
  std::string out;
  for (std::size_t m = 0; m < ps.size(); ++m) {
    if (m) out += " | ";
    out += format_profile(spec, ps[m]);
  }
  return out;
}

FlagReport verify_flags(const SystemSpec& spec) {
  SpaceCodec codec(spec);
  FlagReport rep;

  bool any_table = false;
  for (const auto& rf : spec.reactions) any_table |= rf.is_table();
  if (any_table && codec.window_count() > guard::table_entries)
    throw SizeGuardError("verify_flags: " + std::to_string(codec.window_count()) +
                         " table entries exceed the 2^24 guard");

  auto fail = [](FlagCheck& c, const std::string& why) {
    if (c.status != FlagStatus::fails) c = {FlagStatus::fails, why};
  };
  auto certify = [](FlagCheck& c, bool certified_value, const std::string& what, int node) {
    if (c.status == FlagStatus::fails) return;
    if (!certified_value)
      c = {FlagStatus::fails,
           "node " + std::to_string(node + 1) + ": generator does not certify " + what};
    else
      c.status = FlagStatus::certified;
  };

  for (int i = 0; i < spec.n; ++i) {
    const auto& rf = spec.reactions[i];
    if (!rf.is_table()) {
      const Flags& cf = rf.named().certified;
      certify(rep.deterministic, cf.deterministic, "determinism", i);
      certify(rep.self_independent, cf.self_independent, "self-independence", i);
      certify(rep.stationary, cf.stationary, "stationarity", i);
      continue;
    }
    const auto& slices = rf.table().slices;

    for (std::size_t s = 0; s < slices.size() && rep.deterministic.ok(); ++s)
      for (std::uint64_t w = 0; w < codec.window_count(); ++w)
        if (!slices[s][w].is_point()) {
          fail(rep.deterministic, "node " + std::to_string(i + 1) + ", window [" +
                                      format_window(spec, codec, w) + "]: randomized output");
          break;
        }

    if (slices.size() > 1 && rep.stationary.status != FlagStatus::fails) {
      for (std::size_t s = 1; s < slices.size(); ++s)
        if (slices[s] != slices[0]) {
          fail(rep.stationary, "node " + std::to_string(i + 1) + ": slice " + std::to_string(s) +
                                   " differs from slice 0");
          break;
        }
    }

    // Self-independence: exhaust windows grouped by the node's own history
    // erased; all windows in a group must map to the same distribution.
    if (rep.self_independent.status != FlagStatus::fails) {
      std::unordered_map<std::uint64_t, std::uint64_t> rep_window;
      rep_window.reserve(codec.window_count());
      for (std::size_t s = 0; s < slices.size(); ++s) {
        rep_window.clear();
        for (std::uint64_t w = 0; w < codec.window_count(); ++w) {
          auto ps = codec.decode_window(w);
          for (auto& p : ps) p[i] = 0;
          std::uint64_t key = codec.window_of_profiles(ps);
          auto [it, fresh] = rep_window.emplace(key, w);
          if (!fresh && !(slices[s][it->second] == slices[s][w])) {
            fail(rep.self_independent,
                 "node " + std::to_string(i + 1) + ": windows [" +
                     format_window(spec, codec, it->second) + "] and [" +
                     format_window(spec, codec, w) +
                     "] differ only in its own actions but map to different outputs");
            break;
          }
        }
        if (!rep.self_independent.ok()) break;
      }
    }
  }

  if (spec.recall_k != 1)
    fail(rep.historyless, "recall depth is " + std::to_string(spec.recall_k));
  else if (!rep.stationary.ok())
    fail(rep.historyless, "not stationary: " + rep.stationary.counterexample);
  else if (rep.stationary.status == FlagStatus::certified)
    rep.historyless.status = FlagStatus::certified;

  return rep;
}

bool flags_consistent(const SystemSpec& spec, std::string* detail) {
  FlagReport rep = verify_flags(spec);
  auto check = [&](bool declared, const FlagCheck& c, const char* name) {
    if (declared && !c.ok()) {
      if (detail) *detail = std::string(name) + " declared but fails: " + c.counterexample;
      return false;
    }
    return true;
  };
  return check(spec.flags.deterministic, rep.deterministic, "deterministic") &&
         check(spec.flags.self_independent, rep.self_independent, "self_independent") &&
         check(spec.flags.stationary, rep.stationary, "stationary") &&
         check(spec.flags.historyless, rep.historyless, "historyless");
}

std::string format_profile(const SystemSpec& spec, const Profile& p) {
  std::string out;
  for (int i = 0; i < spec.n; ++i) {
    if (i) out += ' ';
    out += spec.alphabets[i][p[i]];
  }
  return out;
}

std::string format_node_set(NodeSet s) {
  std::string out;
  for (int i = 1; i <= 32; ++i)
    if (contains(s, i)) {
      if (!out.empty()) out += ',';
      out += std::to_string(i);
    }
  return out;
}

}  // namespace adyn
