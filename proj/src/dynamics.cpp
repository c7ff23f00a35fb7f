#include "adyn/dynamics.hpp"

#include <algorithm>

namespace adyn {

Configuration initial_configuration(const SystemSpec& spec, const Profile& profile) {
  return Configuration{std::vector<Profile>(static_cast<std::size_t>(spec.recall_k), profile), 0};
}

Configuration initial_configuration(const SystemSpec& spec, std::vector<Profile> window) {
  Configuration cfg{std::move(window), 0};
  validate_configuration(spec, cfg);
  return cfg;
}

void validate_configuration(const SystemSpec& spec, const Configuration& cfg) {
  if (static_cast<int>(cfg.window.size()) != spec.recall_k)
    throw SpecError("configuration window length " + std::to_string(cfg.window.size()) +
                    " != recall depth " + std::to_string(spec.recall_k));
  for (const auto& p : cfg.window) {
    if (static_cast<int>(p.size()) != spec.n)
      throw SpecError("profile arity != node count");
    for (int i = 0; i < spec.n; ++i)
      if (p[i] < 0 || p[i] >= spec.alphabet_size(i))
        throw SpecError("out-of-alphabet symbol for node " + std::to_string(i + 1));
  }
}

namespace {

// Unbiased draw in [0, bound) from the engine; rejection keeps it exact and
// independent of std::uniform_int_distribution's library-specific mapping.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
  std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % bound;
}

int sample(const Distribution& d, std::mt19937_64* rng) {
  if (d.is_point()) return d.point_action();
  if (!rng) throw SpecError("randomized reaction function needs a seeded generator");
  long long den = 1;
  for (const auto& [a, w] : d.weights) den = std::lcm(den, w.den());
  std::uint64_t v = draw_below(*rng, static_cast<std::uint64_t>(den));
  for (const auto& [a, w] : d.weights) {
    std::uint64_t mass = static_cast<std::uint64_t>(w.num() * (den / w.den()));
    if (v < mass) return a;
    v -= mass;
  }
  return d.weights.back().first;  // unreachable: weights sum to 1
}

}  // namespace

Configuration apply_activation(const SystemSpec& spec, const Configuration& cfg, NodeSet active,
                               std::mt19937_64* rng) {
  if (active == 0) throw SpecError("empty activation set");
  if ((active & ~full_set(spec.n)) != 0) throw SpecError("activation set names unknown nodes");
  validate_configuration(spec, cfg);

  SpaceCodec codec(spec);
  std::uint64_t wcode = codec.window_of_profiles(cfg.window);
  Profile next = cfg.latest();
  for (int i = 0; i < spec.n; ++i)
    if (contains(active, i + 1))
      next[i] = sample(eval_reaction(spec, codec, i, wcode, cfg.step + 1), rng);

  Configuration out = cfg;
  out.window.erase(out.window.begin());
  out.window.push_back(std::move(next));
  out.step = cfg.step + 1;
  return out;
}

Trace run_dynamics(const SystemSpec& spec, const Configuration& initial,
                   ScheduleSource schedule, long long horizon, std::uint64_t seed) {
  if (horizon < 1) throw SpecError("horizon must be >= 1");
  validate_configuration(spec, initial);

  bool randomized = false;
  for (const auto& rf : spec.reactions) {
    if (rf.is_table()) {
      for (const auto& slice : rf.table().slices)
        for (const auto& d : slice) randomized |= !d.is_point();
    } else {
      randomized |= !rf.named().certified.deterministic;
    }
  }

  std::mt19937_64 rng(seed);
  Trace trace;
  trace.initial = initial;
  if (randomized) trace.rng_seed = seed;

  Configuration cfg = initial;
  for (long long t = 0; t < horizon; ++t) {
    NodeSet active = schedule.next();
    if (active == 0) throw SpecError("schedule yielded an empty activation set");
    cfg = apply_activation(spec, cfg, active, randomized ? &rng : nullptr);
    trace.steps.push_back({active, cfg.latest()});
  }
  return trace;
}

Configuration Trace::final_configuration(const SystemSpec& spec) const {
  Configuration cfg = initial;
  for (const auto& s : steps) {
    cfg.window.erase(cfg.window.begin());
    cfg.window.push_back(s.profile);
    ++cfg.step;
  }
  return cfg;
}

bool is_stable_state(const SystemSpec& spec, const SpaceCodec& codec, const Profile& a,
                     long long from_step) {
  std::uint64_t wcode = codec.constant_window(codec.encode_profile(a));
  for (int i = 0; i < spec.n; ++i) {
    std::size_t nslices = 1;
    if (spec.reactions[i].is_table()) nslices = spec.reactions[i].table().slices.size();
    std::size_t first =
        std::min(static_cast<std::size_t>(std::max(from_step, 0ll)), nslices - 1);
    for (std::size_t s = first; s < nslices; ++s) {
      Distribution d = eval_reaction(spec, codec, i, wcode, static_cast<long long>(s) + 1);
      if (!d.is_point() || d.point_action() != a[i]) return false;
    }
  }
  return true;
}

std::optional<Profile> detect_stabilization(const Trace& trace, const SystemSpec& spec) {
  if (trace.steps.empty() && trace.initial.window.empty()) throw SpecError("empty trace");
  SpaceCodec codec(spec);
  Configuration fin = trace.final_configuration(spec);
  const Profile& a = fin.latest();
  for (const auto& p : fin.window)
    if (p != a) return std::nullopt;
  if (!is_stable_state(spec, codec, a, fin.step)) return std::nullopt;
  return a;
}

}  // namespace adyn
