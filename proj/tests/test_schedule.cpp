#include "doctest.h"

#include "adyn/schedule.hpp"
#include "helpers.hpp"

using namespace adyn;

namespace {

ScheduleWitness round_robin_witness(int n) {
  ScheduleWitness w;
  for (int i = 1; i <= n; ++i) w.cycle.push_back(node_bit(i));
  return w;
}

}  // namespace

TEST_CASE("witness_is_r_fair") {
  SUBCASE("round-robin singletons over 3 nodes") {
    ScheduleWitness w = round_robin_witness(3);
    CHECK(witness_is_r_fair(w, 3, 3));
    CHECK(!witness_is_r_fair(w, 2, 3));  // window ({2},{3}) misses node 1
  }
  SUBCASE("the Example 3 pair cycle is (n-1)-fair at n=4") {
    ScheduleWitness w{{}, {node_bit(1) | node_bit(2), node_bit(2) | node_bit(3),
                           node_bit(3) | node_bit(4), node_bit(4) | node_bit(1)}};
    CHECK(witness_is_r_fair(w, 3, 4));
    CHECK(!witness_is_r_fair(w, 2, 4));
  }
  SUBCASE("monotone in r") {
    ScheduleWitness w{{node_bit(2)}, {node_bit(1), node_bit(1), node_bit(2)}};
    for (int r = 1; r < 8; ++r)
      if (witness_is_r_fair(w, r, 2)) CHECK(witness_is_r_fair(w, r + 1, 2));
  }
  SUBCASE("a cycle missing a node is not r-fair for any r") {
    ScheduleWitness w{{node_bit(2)}, {node_bit(1)}};  // node 2 only in the prefix
    CHECK(!witness_is_r_fair(w, 1, 2));
    CHECK(!witness_is_r_fair(w, 5, 2));   // r larger than the unrolled text
    CHECK(!witness_is_r_fair(w, 50, 2));  // and much larger
    CHECK(witness_fairness_bound(w, 2) == 0);
  }
  SUBCASE("constant full activation is 1-fair") {
    ScheduleWitness w{{}, {node_bit(1) | node_bit(2)}};
    CHECK(witness_is_r_fair(w, 1, 2));
    CHECK(witness_fairness_bound(w, 2) == 1);
  }
}

TEST_CASE("witness text format round-trips") {
  ScheduleWitness w{{node_bit(1) | node_bit(3)}, {node_bit(2), node_bit(1), node_bit(3)}};
  ScheduleWitness back = parse_witness(format_witness(w));
  CHECK(back == w);
  CHECK_THROWS_AS(parse_witness("1,2\n"), SpecError);       // missing ---
  CHECK_THROWS_AS(parse_witness("zap\n---\n1\n"), SpecError);
  CHECK_THROWS_AS(parse_witness("---\n"), SpecError);       // empty cycle
}

TEST_CASE("make_schedule sources") {
  SUBCASE("round robin emits singletons cyclically") {
    ScheduleSource s = make_schedule(ScheduleKind::round_robin, 2);
    CHECK(s.next() == node_bit(1));
    CHECK(s.next() == node_bit(2));
    CHECK(s.next() == node_bit(1));
    s.reset();
    CHECK(s.next() == node_bit(1));
  }
  SUBCASE("witness source denotes prefix then cycle forever") {
    ScheduleWitness w{{node_bit(2)}, {node_bit(1) | node_bit(2)}};
    ScheduleSource s = make_schedule(ScheduleKind::witness, 2, 0, 0, &w);
    CHECK(s.next() == node_bit(2));
    for (int i = 0; i < 5; ++i) CHECK(s.next() == (node_bit(1) | node_bit(2)));
  }
  SUBCASE("random fair emissions satisfy their r-window property") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      int r = 1 + static_cast<int>(seed % 4);
      ScheduleSource s = ScheduleSource::random_fair(3, r, seed);
      std::vector<NodeSet> emitted;
      for (int t = 0; t < 60; ++t) emitted.push_back(s.next());
      for (std::size_t t = 0; t + r <= emitted.size(); ++t) {
        NodeSet seen = 0;
        for (int k = 0; k < r; ++k) seen |= emitted[t + k];
        CHECK(seen == full_set(3));
      }
    }
  }
  SUBCASE("cloning a source replays it") {
    ScheduleSource s = ScheduleSource::random_fair(4, 3, 99);
    s.next();
    ScheduleSource copy = s;
    std::vector<NodeSet> a, b;
    for (int i = 0; i < 10; ++i) a.push_back(s.next());
    for (int i = 0; i < 10; ++i) b.push_back(copy.next());
    CHECK(a == b);
  }
  SUBCASE("parameter validation") {
    CHECK_THROWS_AS(ScheduleSource::random_fair(3, 0, 1), SpecError);
    CHECK_THROWS_AS(ScheduleSource::round_robin(0), SpecError);
    CHECK_THROWS_AS(make_schedule(ScheduleKind::witness, 2), SpecError);
  }
  SUBCASE("r = 1 forces everyone every step") {
    ScheduleSource s = ScheduleSource::random_fair(3, 1, 5);
    for (int i = 0; i < 8; ++i) CHECK(s.next() == full_set(3));
  }
}

TEST_CASE("the all-subsets enumerator cycles through every nonempty set") {
  ScheduleSource s = ScheduleSource::all_subsets(2);
  CHECK(s.next() == NodeSet{1});
  CHECK(s.next() == NodeSet{2});
  CHECK(s.next() == NodeSet{3});
  CHECK(s.next() == NodeSet{1});  // wraps around
  CHECK(s.r_bound() == 0);        // fair, but no certified window bound
}
