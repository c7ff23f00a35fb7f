#include "doctest.h"

#include <algorithm>
#include <bit>
#include <functional>
#include <random>
#include <set>

#include "adyn/analysis.hpp"
#include "adyn/generators.hpp"
#include "helpers.hpp"

using namespace adyn;
using namespace adyn::testing;

namespace {

// Independent longest-snake oracle: plain DFS over all vertex sequences
// starting anywhere, no canonical pruning, validity via validate_snake.
std::size_t brute_force_max_snake(int z) {
  std::uint32_t count = std::uint32_t{1} << z;
  std::size_t best = 0;
  std::vector<std::uint32_t> path;
  std::vector<bool> used(count, false);
  auto try_cycle = [&]() {
    if (path.size() < 4) return;
    Snake s{z, path};
    try {
      validate_snake(s);
      best = std::max(best, path.size());
    } catch (const SpecError&) {
    }
  };
  std::function<void()> dfs = [&]() {
    try_cycle();
    std::uint32_t tail = path.back();
    for (int c = 0; c < z; ++c) {
      std::uint32_t u = tail ^ (std::uint32_t{1} << c);
      if (used[u]) continue;
      path.push_back(u);
      used[u] = true;
      dfs();
      used[u] = false;
      path.pop_back();
    }
  };
  for (std::uint32_t v0 = 0; v0 < count; ++v0) {
    path = {v0};
    std::fill(used.begin(), used.end(), false);
    used[v0] = true;
    dfs();
  }
  return best;
}

}  // namespace

TEST_CASE("snake search is exhaustive and matches the brute-force oracle") {
  for (int z : {2, 3}) {
    SnakeSearchResult res = find_max_snake(z);
    CHECK(res.exhaustive);
    CHECK(res.best.size() == brute_force_max_snake(z));
  }
  CHECK(find_max_snake(2).best.size() == 4);
  CHECK(find_max_snake(3).best.size() == 6);
  CHECK(find_max_snake(4).best.size() == 8);
  SUBCASE("larger dimensions report the certified lower bound") {
    SnakeSearchResult q5 = find_max_snake(5, 200000);
    CHECK(q5.certified_lower_bound == doctest::Approx(0.3 * 32));
    CHECK(q5.best.size() >= 4);
    validate_snake(q5.best);
  }
}

TEST_CASE("snake validation rejects chords, repeats and non-steps") {
  CHECK_THROWS_AS(validate_snake(Snake{3, {0, 1, 3, 2, 6, 4}}), SpecError);  // chord 0-2
  CHECK_THROWS_AS(validate_snake(Snake{2, {0, 1, 0, 2}}), SpecError);        // repeat
  CHECK_THROWS_AS(validate_snake(Snake{3, {0, 3, 1, 5}}), SpecError);        // non-step
  validate_snake(Snake{2, {0, 1, 3, 2}});                                    // the 4-cycle
}

TEST_CASE("snake text format round-trips") {
  Snake s = find_max_snake(3).best;
  Snake back = parse_snake(format_snake(s));
  CHECK(back.dimension == s.dimension);
  CHECK(back.vertices == s.vertices);
  CHECK_THROWS_AS(parse_snake("01\n0x\n"), SpecError);
}

TEST_CASE("build_snake_system") {
  SUBCASE("Q2 snake at n=4 satisfies all three restrictions") {
    SystemSpec sys = build_snake_system(Snake{2, {0, 1, 3, 2}});
    FlagReport rep = verify_flags(sys);
    CHECK(rep.deterministic.status == FlagStatus::holds);
    CHECK(rep.self_independent.status == FlagStatus::holds);
    CHECK(rep.historyless.status == FlagStatus::holds);
  }
  SUBCASE("unique stable state y^n") {
    SystemSpec sys = build_snake_system(find_max_snake(3).best);
    auto stable = enumerate_stable_states(sys);
    REQUIRE(stable.size() == 1);
    CHECK(stable[0] == Profile(5, 1));
  }
  SUBCASE("r-convergence threshold sits exactly at |S|") {
    SystemSpec sys = build_snake_system(Snake{2, {0, 1, 3, 2}});
    CHECK(!decide_r_convergent(sys, 3).non_convergent());
    Verdict v = decide_r_convergent(sys, 4);
    REQUIRE(v.non_convergent());
    CHECK(verify_witness(sys, v.initial, v.witness));
    CHECK(witness_is_r_fair(v.witness, 4, 4));
  }
  SUBCASE("snakes not through x^{n-2} get relabeled") {
    SystemSpec sys = build_snake_system(Snake{2, {3, 1, 0, 2}});  // origin inside
    CHECK(enumerate_stable_states(sys).size() == 1);
    SystemSpec shifted = build_snake_system(Snake{2, {1, 3, 2, 0}});
    CHECK(enumerate_stable_states(shifted).size() == 1);
  }
}

TEST_CASE("disjointness reduction") {
  Snake q2{2, {0, 1, 3, 2}};
  SUBCASE("overlapping singletons oscillate") {
    SystemSpec sys = build_disjointness_system({1}, {1}, q2);
    CHECK(decide_convergent(sys).non_convergent());
  }
  SUBCASE("disjoint halves converge") {
    SystemSpec sys = build_disjointness_system({1, 2}, {3, 4}, q2);
    CHECK(!decide_convergent(sys).non_convergent());
  }
  SUBCASE("an empty set intersects nothing") {
    for (int e = 1; e <= 4; ++e) {
      SystemSpec sys = build_disjointness_system({}, {e}, q2);
      CHECK(!decide_convergent(sys).non_convergent());
    }
  }
  SUBCASE("elements out of range are rejected") {
    CHECK_THROWS_AS(build_disjointness_system({5}, {}, q2), SpecError);
    CHECK_THROWS_AS(build_disjointness_system({0}, {}, q2), SpecError);
  }
  SUBCASE("equivalence holds exhaustively over all q = 6 instance pairs") {
    Snake q3 = find_max_snake(3).best;
    int mismatches = 0;
    for (int ea = 0; ea < 64; ++ea)
      for (int eb = 0; eb < 64; ++eb) {
        std::vector<int> a, b;
        for (int e = 0; e < 6; ++e) {
          if (ea & (1 << e)) a.push_back(e + 1);
          if (eb & (1 << e)) b.push_back(e + 1);
        }
        SystemSpec sys = build_disjointness_system(a, b, q3);
        mismatches += decide_convergent(sys).non_convergent() != ((ea & eb) != 0);
      }
    CHECK(mismatches == 0);
  }
}

TEST_CASE("string machines") {
  StringMachine halter;
  halter.gamma = {"a", "b"};
  halter.t = 2;
  halter.table.assign(4, halter.halt_value());

  StringMachine flipper;  // g(T) = not T_1; no halt entries, so it runs forever
  flipper.gamma = {"a", "b"};
  flipper.t = 2;
  flipper.table = {1, 1, 0, 0};  // index = T_0 + 2*T_1

  SUBCASE("g == halt halts immediately from every string") {
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        MachineRun run = run_string_machine(halter, {a, b}, 100);
        CHECK(run.halted);
        CHECK(run.steps == 0);
      }
    CHECK(!string_machine_nonterminates(halter));
  }
  SUBCASE("the flipper cycles forever") {
    MachineRun run = run_string_machine(flipper, {0, 0}, 50);
    CHECK(!run.halted);
    CHECK(string_machine_nonterminates(flipper));
  }
  SUBCASE("the encoded system has the all-halt state as its unique fixed point") {
    SystemSpec sys = build_string_system(halter);
    auto stable = enumerate_stable_states(sys);
    REQUIRE(stable.size() == 1);
    CHECK(stable[0][0] == halter.halt_value());
    CHECK(stable[0][1] == halter.halt_value());
    CHECK(stable[0][2] == halter.halt_value());  // counter (0, halt)
    CHECK(enumerate_stable_states(build_string_system(flipper)).size() == 1);
  }
  SUBCASE("reduction equivalence on the two pinned machines") {
    CHECK(!decide_convergent(build_string_system(halter)).non_convergent());
    Verdict v = decide_convergent(build_string_system(flipper));
    REQUIRE(v.non_convergent());
    CHECK(verify_witness(build_string_system(flipper), v.initial, v.witness));
  }
  SUBCASE("t = 1 cannot be encoded faithfully and is refused") {
    StringMachine tiny;
    tiny.gamma = {"a"};
    tiny.t = 1;
    tiny.table = {0};
    CHECK(string_machine_nonterminates(tiny));  // g(a) = a loops
    CHECK_THROWS_AS(build_string_system(tiny), SpecError);
  }
  SUBCASE("guards and validation") {
    StringMachine bad = halter;
    bad.table.pop_back();
    CHECK_THROWS_AS(validate_string_machine(bad), SpecError);
    StringMachine huge;
    huge.gamma = {"a", "b", "c", "d", "e", "f", "g", "h"};
    huge.t = 8;
    huge.table.assign(1, 0);
    CHECK_THROWS_AS(validate_string_machine(huge), SizeGuardError);
  }
}

TEST_CASE("generated specs pass verify_flags for their advertised restrictions") {
  std::vector<SystemSpec> specs;
  specs.push_back(make_example_ex1());
  specs.push_back(make_example_ex2());
  specs.push_back(make_example_ex3(5));
  specs.push_back(make_example_ex4(4));
  specs.push_back(build_snake_system(Snake{2, {0, 1, 3, 2}}));
  specs.push_back(build_disjointness_system({1}, {2}, Snake{2, {0, 1, 3, 2}}));
  {
    StringMachine m;
    m.gamma = {"a", "b"};
    m.t = 2;
    m.table = {1, 2, 0, 2};
    specs.push_back(build_string_system(m));
  }
  for (const auto& spec : specs) {
    std::string detail;
    CHECK_MESSAGE(flags_consistent(spec, &detail), detail);
  }
}

TEST_CASE("example generators reject bad parameters") {
  CHECK_THROWS_AS(make_example_ex3(1), SpecError);
  CHECK_THROWS_AS(make_example_ex4(2), SpecError);
  CHECK_THROWS_AS(make_example("ex9", 3), SpecError);
}

TEST_CASE("a starved budget still yields the universal 4-cycle") {
  SnakeSearchResult res = find_max_snake(4, 1);
  CHECK(!res.exhaustive);
  validate_snake(res.best);
  CHECK(res.best.size() >= 4);
}
