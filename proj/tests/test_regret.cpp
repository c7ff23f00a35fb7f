#include "doctest.h"

#include <cmath>
#include <random>

#include "adyn/regret.hpp"

using namespace adyn;

namespace {

std::vector<std::vector<Rational>> constant_profits(int steps, std::vector<Rational> p) {
  return std::vector<std::vector<Rational>>(static_cast<std::size_t>(steps), std::move(p));
}

RegretHistory point_history(const std::vector<std::vector<Rational>>& profits, int action) {
  RegretHistory h;
  h.m = static_cast<int>(profits[0].size());
  for (const auto& p : profits) {
    RegretHistory::Step s;
    s.activated = true;
    s.dist.assign(h.m, 0.0);
    s.dist[action] = 1.0;
    s.profit = p;
    h.steps.push_back(s);
  }
  return h;
}

}  // namespace

TEST_CASE("compute_regret on hand histories") {
  auto profits = constant_profits(100, {Rational(1), Rational(0)});
  SUBCASE("playing the best action gives zero external regret") {
    RegretHistory h = point_history(profits, 0);
    CHECK(compute_regret(h, RegretNotion::external) == doctest::Approx(0.0));
  }
  SUBCASE("playing the dominated action gives regret T") {
    RegretHistory h = point_history(profits, 1);
    CHECK(compute_regret(h, RegretNotion::external) == doctest::Approx(100.0));
    CHECK(compute_regret(h, RegretNotion::internal, 1, 0) == doctest::Approx(100.0));
    CHECK(compute_regret(h, RegretNotion::internal, 0, 1) == doctest::Approx(0.0));
  }
  SUBCASE("swap >= external, and decomposition matches map enumeration") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
      RegretHistory h;
      h.m = 3;
      for (int t = 0; t < 40; ++t) {
        RegretHistory::Step s;
        s.activated = true;
        double a = static_cast<double>(rng() % 1000) / 1000.0;
        double b = static_cast<double>(rng() % 1000) / 1000.0;
        double c = std::max(0.0, 1.0 - a - b);
        s.dist = {a, b, c};
        double norm = a + b + c;
        for (auto& d : s.dist) d /= norm;
        s.profit = {Rational(static_cast<long long>(rng() % 100), 100),
                    Rational(static_cast<long long>(rng() % 100), 100),
                    Rational(static_cast<long long>(rng() % 100), 100)};
        h.steps.push_back(s);
      }
      double swap = compute_regret(h, RegretNotion::swap);
      double ext = compute_regret(h, RegretNotion::external);
      CHECK(swap >= ext - 1e-9);
      CHECK(swap == doctest::Approx(swap_regret_by_enumeration(h)).epsilon(1e-9));
    }
  }
}

TEST_CASE("frozen while idle, and the meta-step equivalence is exact") {
  // adversarial profits, learner activated on an irregular 3-fair schedule
  std::mt19937_64 rng(9);
  std::vector<std::vector<Rational>> profits;
  for (int t = 0; t < 200; ++t)
    profits.push_back({Rational(static_cast<long long>(rng() % 10), 10),
                       Rational(static_cast<long long>(rng() % 10), 10)});
  ScheduleSource sched = ScheduleSource::random_fair(1, 3, 4);
  RegretHistory h = run_adversarial(LearnerSpec::mw(), profits, sched);

  SUBCASE("idle steps keep the distribution pinned") {
    for (std::size_t t = 1; t < h.steps.size(); ++t)
      if (!h.steps[t].activated) CHECK(h.steps[t].dist == h.steps[t - 1].dist);
  }
  SUBCASE("batched updates replay the classic learner exactly") {
    double eta = std::sqrt(std::log(2.0) / 200.0);
    MwLearner classic(2, eta);
    std::vector<Rational> batch(2, Rational(0));
    for (std::size_t t = 0; t < h.steps.size(); ++t) {
      if (h.steps[t].activated) {
        classic.update(batch);
        batch.assign(2, Rational(0));
        CHECK(h.steps[t].dist == classic.distribution());  // bitwise equality
      }
      for (int j = 0; j < 2; ++j) batch[j] += h.steps[t].profit[j];
    }
  }
}

TEST_CASE("MW external regret stays under 2 r sqrt(T ln m) on adversarial sequences") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 8; ++trial) {
    int m = 2 + static_cast<int>(rng() % 3);
    int T = 2000;
    int r = 1 + static_cast<int>(rng() % 3);
    std::vector<std::vector<Rational>> profits;
    for (int t = 0; t < T; ++t) {
      std::vector<Rational> p;
      for (int j = 0; j < m; ++j) {
        // adversarial mix: alternating spikes plus noise
        if (trial % 2 == 0 && j == (t / 50) % m) p.push_back(Rational(1));
        else p.push_back(Rational(static_cast<long long>(rng() % 100), 100));
      }
      profits.push_back(p);
    }
    ScheduleSource sched = r == 1 ? ScheduleSource::round_robin(1)
                                  : ScheduleSource::random_fair(1, r, 1000 + trial);
    RegretHistory h = run_adversarial(LearnerSpec::mw(), profits, sched);
    double bound = 2.0 * r * std::sqrt(static_cast<double>(T) * std::log(m));
    CHECK(compute_regret(h, RegretNotion::external) <= bound);
  }
}

TEST_CASE("minimax_value") {
  SUBCASE("matching pennies is worth zero") {
    CHECK(minimax_value(matching_pennies()) == Rational(0));
  }
  SUBCASE("a saddle point is the pure minimax") {
    NormalFormGame g;
    g.players = 2;
    g.strategies = {{"a", "b"}, {"a", "b"}};
    // row a dominates; column a best response: saddle at (a,a) value 2
    auto u = [&](int i, int j, long long v) {
      std::uint64_t c = static_cast<std::uint64_t>(i) + 2 * j;
      g.utilities.resize(8, Rational(0));
      g.utilities[c * 2] = Rational(v);
      g.utilities[c * 2 + 1] = Rational(-v);
    };
    u(0, 0, 2);
    u(0, 1, 3);
    u(1, 0, 1);
    u(1, 1, 0);
    CHECK(minimax_value(g) == Rational(2));
  }
  SUBCASE("random 3x3 matrices match a fine-grid oracle") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 6; ++trial) {
      NormalFormGame g;
      g.players = 2;
      g.strategies = {{"a", "b", "c"}, {"a", "b", "c"}};
      std::vector<std::vector<long long>> u(3, std::vector<long long>(3));
      for (auto& row : u)
        for (auto& v : row) v = static_cast<long long>(rng() % 11) - 5;
      g.utilities.resize(18);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          std::uint64_t c = static_cast<std::uint64_t>(i) + 3 * j;
          g.utilities[c * 2] = Rational(u[i][j]);
          g.utilities[c * 2 + 1] = Rational(-u[i][j]);
        }
      double exact = minimax_value(g).to_double();
      // grid oracle over row mixtures
      double best = -1e9;
      const int steps = 60;
      for (int a = 0; a <= steps; ++a)
        for (int b = 0; a + b <= steps; ++b) {
          double x0 = static_cast<double>(a) / steps;
          double x1 = static_cast<double>(b) / steps;
          double x2 = 1.0 - x0 - x1;
          double worst = 1e9;
          for (int j = 0; j < 3; ++j)
            worst = std::min(worst, x0 * u[0][j] + x1 * u[1][j] + x2 * u[2][j]);
          best = std::max(best, worst);
        }
      CHECK(exact >= best - 1e-9);       // the grid only underestimates
      CHECK(exact <= best + 0.2);        // and not by much at this resolution
    }
  }
  SUBCASE("non-zero-sum inputs are rejected") {
    CHECK_THROWS_AS(minimax_value(prisoners_dilemma()), SpecError);
  }
}

TEST_CASE("zero-sum no-regret play approaches the minimax value") {
  NormalFormGame pennies = matching_pennies();
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    ScheduleSource sched = ScheduleSource::round_robin(2);
    LearningOutcome out = run_learning(pennies, {LearnerSpec::mw(), LearnerSpec::mw()}, sched,
                                       10000, seed);
    for (const auto& rep : out.players) CHECK(rep.avg_gain >= -0.05);
  }
}

TEST_CASE("swap-regret play yields an approximate correlated equilibrium") {
  NormalFormGame pennies = matching_pennies();
  ScheduleSource sched = ScheduleSource::random_fair(2, 3, 21);
  LearningOutcome out = run_learning(pennies, {LearnerSpec::swap(), LearnerSpec::swap()}, sched,
                                     20000, 21);
  CHECK(out.ce_gap.to_double() <= 0.05);
  for (const auto& rep : out.players) CHECK(rep.swap_regret / 20000.0 <= 0.05);

  SUBCASE("the empirical gap equals the worst realized swap regret, exactly") {
    Rational worst(0);
    for (int i = 0; i < 2; ++i) {
      Rational r = realized_swap_regret(out, pennies, i);
      if (r > worst) worst = r;
    }
    CHECK(out.ce_gap == worst / Rational(out.horizon));
  }
}

TEST_CASE("correlated_eq_gap") {
  SUBCASE("a symmetric coordination correlation is an exact equilibrium") {
    NormalFormGame g = coordination_2x2();
    std::map<Profile, Rational> dist;
    dist[{0, 0}] = Rational(1, 2);
    dist[{1, 1}] = Rational(1, 2);
    CHECK(correlated_eq_gap(dist, g) == Rational(0));
  }
  SUBCASE("mutual cooperation in the dilemma pays the defection gain") {
    NormalFormGame g = prisoners_dilemma();
    std::map<Profile, Rational> dist;
    dist[{0, 0}] = Rational(1);
    CHECK(correlated_eq_gap(dist, g) == Rational(2));  // 5 - 3
  }
  SUBCASE("distributions must sum to one") {
    std::map<Profile, Rational> dist;
    dist[{0, 0}] = Rational(1, 2);
    CHECK_THROWS_AS(correlated_eq_gap(dist, coordination_2x2()), SpecError);
  }
}

TEST_CASE("fixed-action opponents leave a well-formed report") {
  NormalFormGame pennies = matching_pennies();
  ScheduleSource sched = ScheduleSource::round_robin(2);
  LearningOutcome out = run_learning(
      pennies, {LearnerSpec::mw(), LearnerSpec::fixed(0)}, sched, 2000, 5);
  CHECK(out.players.size() == 2);
  // the learner exploits a fixed opponent: nearly the maximal gain of 1
  CHECK(out.players[0].avg_gain >= 0.8);
  CHECK(out.players[0].external_regret >= -1e-9);
  for (const auto& step : out.histories[1].steps) CHECK(step.dist[0] == 1.0);
}

TEST_CASE("schedules without a certified fairness bound are rejected") {
  NormalFormGame pennies = matching_pennies();
  ScheduleSource sched = ScheduleSource::all_subsets(2);
  CHECK_THROWS_AS(
      run_learning(pennies, {LearnerSpec::mw(), LearnerSpec::mw()}, sched, 100, 0),
      SpecError);
}

TEST_CASE("learning reports carry gains and the internal-regret matrix") {
  NormalFormGame pennies = matching_pennies();
  LearningOutcome out = run_learning(pennies, {LearnerSpec::mw(), LearnerSpec::mw()},
                                     ScheduleSource::round_robin(2), 1000, 2);
  for (const auto& rep : out.players) {
    CHECK(rep.cumulative_gain == doctest::Approx(rep.avg_gain * 1000));
    REQUIRE(rep.internal.size() == 4);
    CHECK(rep.internal[0] == doctest::Approx(0.0));  // identity deviations
    CHECK(rep.internal[3] == doctest::Approx(0.0));
    // swap regret dominates every single-pair substitution
    for (double v : rep.internal) CHECK(rep.swap_regret >= v - 1e-9);
  }
}
