#include "doctest.h"

#include <algorithm>
#include <set>

#include "adyn/analysis.hpp"
#include "adyn/generators.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace adyn;
using namespace adyn::testing;

TEST_CASE("enumerate_stable_states") {
  SUBCASE("Example 2 has all profiles but (x,x)") {
    auto stable = enumerate_stable_states(make_example_ex2());
    REQUIRE(stable.size() == 3);
    SystemSpec ex2 = make_example_ex2();
    std::set<Profile> got(stable.begin(), stable.end());
    CHECK(got.count(profile_of(ex2, "x y")));
    CHECK(got.count(profile_of(ex2, "y x")));
    CHECK(got.count(profile_of(ex2, "y y")));
  }
  SUBCASE("Example 3 has x^n and y^n") {
    SystemSpec ex3 = make_example_ex3(4);
    auto stable = enumerate_stable_states(ex3);
    REQUIRE(stable.size() == 2);
    CHECK(stable.front() == profile_of(ex3, "x x x x"));
    CHECK(stable.back() == profile_of(ex3, "y y y y"));
  }
  SUBCASE("a constant system has exactly its constant") {
    auto stable = enumerate_stable_states(constant_system({1, 0}));
    REQUIRE(stable.size() == 1);
    CHECK(stable[0] == Profile{1, 0});
  }
  SUBCASE("randomized specs are refused") {
    SystemSpec coin;
    coin.n = 1;
    coin.alphabets = {{"x", "y"}};
    coin.recall_k = coin.window_w = 1;
    Distribution half{{{0, Rational(1, 2)}, {1, Rational(1, 2)}}};
    coin.reactions = {ReactionFn{TableFn{{{half, half}}}}};
    CHECK_THROWS_AS(enumerate_stable_states(coin), HypothesesError);
  }
  SUBCASE("size guard refuses huge named systems explicitly") {
    CHECK_THROWS_AS(enumerate_stable_states(make_example_ex3(26)), SizeGuardError);
  }
}

TEST_CASE("build_configuration_graph") {
  SUBCASE("one node, identity reactions: two vertices, two self-loops") {
    SystemSpec sys = historyless({{"x", "y"}}, [](int, const Profile& p) { return p[0]; });
    ConfigurationGraph g = build_configuration_graph(sys);
    CHECK(g.vertices == 2);
    CHECK(g.subsets.size() == 1);
    CHECK(g.successor(0, 0) == 0);
    CHECK(g.successor(1, 0) == 1);
  }
  SUBCASE("Example 2: 4 vertices; ((x,x),{1,2}) -> (y,y)") {
    SystemSpec ex2 = make_example_ex2();
    ConfigurationGraph g = build_configuration_graph(ex2);
    CHECK(g.vertices == 4);
    SpaceCodec codec(ex2);
    std::uint64_t xx = codec.encode_profile(profile_of(ex2, "x x"));
    std::uint64_t yy = codec.encode_profile(profile_of(ex2, "y y"));
    auto both = std::find(g.subsets.begin(), g.subsets.end(), full_set(2));
    REQUIRE(both != g.subsets.end());
    CHECK(g.successor(static_cast<std::uint32_t>(xx), both - g.subsets.begin()) == yy);
  }
  SUBCASE("Example 3 at n=4: 16 vertices x 15 subsets = 240 edges") {
    ConfigurationGraph g = build_configuration_graph(make_example_ex3(4));
    CHECK(g.vertices == 16);
    CHECK(g.subsets.size() == 15);
    CHECK(g.edges() == 240);
  }
  SUBCASE("activation cap prunes subsets") {
    ConfigurationGraph g = build_configuration_graph(make_example_ex3(4), 2);
    CHECK(g.subsets.size() == 10);  // 4 singletons + 6 pairs
  }
}

TEST_CASE("decide_convergent") {
  SUBCASE("Example 2 converges despite three stable states") {
    Verdict v = decide_convergent(make_example_ex2());
    CHECK(!v.non_convergent());
    CHECK(confirm_convergent_by_simulation(make_example_ex2(), 1000, 16));
  }
  SUBCASE("the Example 1 encoding converges despite two stable states") {
    Verdict v = decide_convergent(make_example_ex1());
    CHECK(!v.non_convergent());
  }
  SUBCASE("Example 3 oscillates with a verified witness") {
    SystemSpec ex3 = make_example_ex3(4);
    Verdict v = decide_convergent(ex3);
    REQUIRE(v.non_convergent());
    std::string why;
    CHECK(verify_witness(ex3, v.initial, v.witness, &why));
    CHECK(why.empty());
  }
  SUBCASE("zero stable states force non-convergence") {
    Verdict v = decide_convergent(pennies_best_response());
    REQUIRE(v.non_convergent());
    CHECK(verify_witness(pennies_best_response(), v.initial, v.witness));
  }
  SUBCASE("randomized and non-stationary specs are refused") {
    SystemSpec sys = constant_system({0});
    auto& table = std::get<TableFn>(sys.reactions[0].fn);
    table.slices.push_back({Distribution::point(1), Distribution::point(1)});
    CHECK_THROWS_AS(decide_convergent(sys), HypothesesError);
  }
}

TEST_CASE("decide_r_convergent matches the Example 3 thresholds") {
  SUBCASE("n=4: convergent below n-1, oscillating at n-1") {
    SystemSpec ex3 = make_example_ex3(4);
    CHECK(!decide_r_convergent(ex3, 2).non_convergent());
    Verdict v = decide_r_convergent(ex3, 3);
    REQUIRE(v.non_convergent());
    std::string why;
    CHECK(verify_witness(ex3, v.initial, v.witness, &why));
    CHECK(witness_is_r_fair(v.witness, 3, 4));
  }
  SUBCASE("monotonicity: non-convergence persists as r grows") {
    SystemSpec ex3 = make_example_ex3(4);
    for (int r = 3; r <= 6; ++r) CHECK(decide_r_convergent(ex3, r).non_convergent());
  }
  SUBCASE("r-witnesses replay as r-fair oscillations at n=5") {
    SystemSpec ex3 = make_example_ex3(5);
    for (int r = 1; r <= 3; ++r) CHECK(!decide_r_convergent(ex3, r).non_convergent());
    Verdict v = decide_r_convergent(ex3, 4);
    REQUIRE(v.non_convergent());
    CHECK(verify_witness(ex3, v.initial, v.witness));
    CHECK(witness_is_r_fair(v.witness, 4, 5));
  }
}

TEST_CASE("stable coloring") {
  SUBCASE("the Example 1 encoding has a bichromatic configuration") {
    SystemSpec ex1 = make_example_ex1();
    StableColoring col = stable_coloring(ex1);
    REQUIRE(col.stable_states.size() == 2);
    SpaceCodec codec(ex1);
    // displayed (y, x) with no change recorded: both stable states reachable
    std::uint64_t v = codec.encode_profile(profile_of(ex1, "y.x.0 x"));
    CHECK(col.color_count(v) == 2);
  }
  SUBCASE("fixed points are monochromatic in their own color") {
    SystemSpec ex2 = make_example_ex2();
    StableColoring col = stable_coloring(ex2);
    SpaceCodec codec(ex2);
    for (const auto& a : col.stable_states) {
      std::uint64_t v = codec.constant_window(codec.encode_profile(a));
      CHECK(col.color_count(v) == 1);
      CHECK(col.colors_of(v)[0] == a);
    }
  }
  SUBCASE("Example 4: y^n is colorless and 4n+2 states are good") {
    SystemSpec ex4 = make_example_ex4(4);
    StableColoring col = stable_coloring(ex4);
    SpaceCodec codec(ex4);
    CHECK(col.color_count(codec.encode_profile(profile_of(ex4, "y y y y"))) == 0);
    CHECK(count_good_initial_states(ex4) == 18);
    CHECK(count_good_initial_states(make_example_ex4(5)) == 22);
  }
  SUBCASE("colors only shrink along edges") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      SystemSpec sys = random_self_independent_system(4, seed);
      StableColoring col = stable_coloring(sys);
      ConfigurationGraph g = build_configuration_graph(sys);
      for (std::uint64_t v = 0; v < g.vertices; ++v)
        for (std::size_t si = 0; si < g.subsets.size(); ++si) {
          std::uint32_t u = g.successor(static_cast<std::uint32_t>(v), si);
          for (std::size_t f = 0; f < col.stable_states.size(); ++f)
            if (col.has_color(u, f)) CHECK(col.has_color(v, f));
        }
    }
  }
}

TEST_CASE("synthesize_oscillation") {
  SUBCASE("Example 3 yields a replayable pair-style oscillation") {
    SystemSpec ex3 = make_example_ex3(4);
    Oscillation osc = synthesize_oscillation(ex3);
    std::string why;
    CHECK(verify_witness(ex3, osc.initial, osc.witness, &why));
  }
  SUBCASE("two-node mutual majority flips forever under joint activation") {
    SystemSpec axis = historyless(binary_alphabets(2),
                                  [](int i, const Profile& p) { return p[1 - i]; },
                                  Flags{true, true, true, true});
    Oscillation osc = synthesize_oscillation(axis);
    CHECK(verify_witness(axis, osc.initial, osc.witness));
    // the hand witness: (x,y) flips to (y,x) and back under joint activation;
    // two copies of {1,2} make the cycle return to its start
    ScheduleWitness joint{{}, {full_set(2), full_set(2)}};
    CHECK(verify_witness(axis, config_of(axis, "x y"), joint));
    ScheduleWitness half_period{{}, {full_set(2)}};
    std::string why;
    CHECK(!verify_witness(axis, config_of(axis, "x y"), half_period, &why));
  }
  SUBCASE("a unique fixed point violates the hypotheses") {
    CHECK_THROWS_AS(synthesize_oscillation(constant_system({0, 0})), HypothesesError);
  }
  SUBCASE("non-self-independent specs are rejected with the violated hypothesis") {
    try {
      synthesize_oscillation(make_example_ex2());
      FAIL("expected HypothesesError");
    } catch (const HypothesesError& e) {
      CHECK(std::string(e.what()).find("self-independent") != std::string::npos);
    }
  }
  SUBCASE("empty-color fallback covers Example 4 (no polychromatic state exists)") {
    SystemSpec ex4 = make_example_ex4(4);
    StableColoring col = stable_coloring(ex4);
    for (std::uint64_t v = 0; v < col.vertices; ++v) CHECK(col.color_count(v) <= 1);
    Oscillation osc = synthesize_oscillation(ex4);
    std::string why;
    CHECK(verify_witness(ex4, osc.initial, osc.witness, &why));
  }
}

TEST_CASE("verify_witness rejects junk") {
  SystemSpec ex2 = make_example_ex2();
  SUBCASE("a self-loop at a fixed point is a converged run") {
    ScheduleWitness w{{}, {full_set(2)}};
    std::string why;
    CHECK(!verify_witness(ex2, config_of(ex2, "y y"), w, &why));
    CHECK(why.find("never leaves") != std::string::npos);
  }
  SUBCASE("cycles must cover every node") {
    ScheduleWitness w{{}, {node_bit(1)}};
    std::string why;
    CHECK(!verify_witness(ex2, config_of(ex2, "x x"), w, &why));
    CHECK(why.find("activate every node") != std::string::npos);
  }
  SUBCASE("cycles must close") {
    SystemSpec ex3 = make_example_ex3(4);
    ScheduleWitness w{{}, {full_set(4), node_bit(1) | node_bit(2), node_bit(3) | node_bit(4)}};
    std::string why;
    CHECK(!verify_witness(ex3, config_of(ex3, "y x x x"), w, &why));
  }
}

TEST_CASE("self-independent systems with several stable states always oscillate") {
  int built = 0;
  std::uint64_t seed = 0;
  while (built < 40) {
    SystemSpec sys = random_self_independent_system(2 + static_cast<int>(seed % 5), seed);
    ++seed;
    if (enumerate_stable_states(sys).size() < 2) continue;
    ++built;
    Verdict v = decide_convergent(sys);
    CHECK(v.non_convergent());
    Oscillation osc = synthesize_oscillation(sys);
    std::string why;
    CHECK(verify_witness(sys, osc.initial, osc.witness, &why));
  }
}

TEST_CASE("cross-oracle smoke: decider agrees with the SCC oracle") {
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    std::mt19937_64 rng(seed);
    int n = 2 + static_cast<int>(seed % 2);
    SystemSpec sys = historyless(binary_alphabets(n), [&](int, const Profile&) {
      return static_cast<int>(rng() & 1);
    });
    CHECK(decide_convergent(sys).non_convergent() == oracle_non_convergent(sys));
  }
}

TEST_CASE("capped verdicts stay sound") {
  SystemSpec ex3 = make_example_ex3(4);
  Verdict v = decide_convergent(ex3, 2);
  REQUIRE(v.non_convergent());          // the pair oscillation needs only pairs
  CHECK(!v.cap_exhaustive);
  CHECK(verify_witness(ex3, v.initial, v.witness));

  // under cap 1, NonConvergent would still be sound; here the system converges
  // under singleton activations, and the verdict says it is cap-limited
  Verdict capped = decide_convergent(ex3, 1);
  CHECK(!capped.non_convergent());
  CHECK(!capped.cap_exhaustive);
  CHECK(capped.activation_cap == 1);
}

TEST_CASE("k-recall systems analyze over full windows") {
  // two nodes, 2-recall: each copies the other's action from the OLDEST
  // profile in its window; self-independent with stable states (x,x), (y,y)
  SystemSpec sys;
  sys.n = 2;
  sys.alphabets = binary_alphabets(2);
  sys.recall_k = sys.window_w = 2;
  sys.reactions.resize(2);
  {
    SpaceCodec codec(sys);
    for (int i = 0; i < 2; ++i) {
      std::vector<Distribution> slice(codec.window_count());
      for (std::uint64_t w = 0; w < codec.window_count(); ++w) {
        Profile oldest = codec.decode_profile(codec.profile_at(w, 0));
        slice[w] = Distribution::point(oldest[1 - i]);
      }
      sys.reactions[i].fn = TableFn{{std::move(slice)}};
    }
  }
  sys.flags = {true, true, true, false};
  validate_spec(sys);

  FlagReport rep = verify_flags(sys);
  CHECK(rep.self_independent.status == FlagStatus::holds);
  CHECK(rep.historyless.status == FlagStatus::fails);

  auto stable = enumerate_stable_states(sys);
  REQUIRE(stable.size() == 2);

  ConfigurationGraph g = build_configuration_graph(sys);
  CHECK(g.vertices == 16);  // all A^k windows

  Verdict v = decide_convergent(sys);
  REQUIRE(v.non_convergent());
  CHECK(v.initial.window.size() == 2);
  CHECK(verify_witness(sys, v.initial, v.witness));

  Oscillation osc = synthesize_oscillation(sys);
  CHECK(verify_witness(sys, osc.initial, osc.witness));

  // r = 1 forces joint activation every step: both nodes flip between the
  // mismatched constant windows forever, so even r = 1 oscillates here
  Verdict r1 = decide_r_convergent(sys, 1);
  CHECK(r1.non_convergent());
  CHECK(witness_is_r_fair(r1.witness, 1, 2));
}

TEST_CASE("r-verdicts are monotone and consistent with the fair decider") {
  int checked = 0;
  for (std::uint64_t seed = 100; checked < 15; ++seed) {
    SystemSpec sys = random_self_independent_system(3, seed);
    Verdict fair = decide_convergent(sys);
    bool seen_nc = false;
    for (int r = 1; r <= 6; ++r) {
      bool nc = decide_r_convergent(sys, r).non_convergent();
      if (seen_nc) CHECK(nc);  // NonConvergent at r persists at r+1
      seen_nc |= nc;
      if (nc) CHECK(fair.non_convergent());  // r-fair oscillation is a fair one
    }
    if (fair.non_convergent()) {
      // the witness cycle repeated forever is r-fair for r = 2 |cycle|
      int L = static_cast<int>(fair.witness.cycle.size());
      CHECK(decide_r_convergent(sys, std::max(1, 2 * L)).non_convergent());
    } else {
      CHECK(!seen_nc);
    }
    ++checked;
  }
}

TEST_CASE("count_good_initial_states on a constant system counts every profile") {
  SystemSpec sys = constant_system({0, 1, 0});
  CHECK(count_good_initial_states(sys) == 8);
}
