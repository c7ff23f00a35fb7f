#include "adyn/regret.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <variant>

namespace adyn {

// ---------------------------------------------------------------------------
// Regret notions
// ---------------------------------------------------------------------------

namespace {

double gain_of(const RegretHistory& h) {
  double g = 0;
  for (const auto& s : h.steps)
    for (int j = 0; j < h.m; ++j) g += s.dist[j] * s.profit[j].to_double();
  return g;
}

}  // namespace

double compute_regret(const RegretHistory& h, RegretNotion notion, int from, int to) {
  switch (notion) {
    case RegretNotion::external: {
      Rational best(0);
      for (int j = 0; j < h.m; ++j) {
        Rational sum(0);
        for (const auto& s : h.steps) sum += s.profit[j];
        if (j == 0 || sum > best) best = sum;
      }
      return best.to_double() - gain_of(h);
    }
    case RegretNotion::internal: {
      double r = 0;
      for (const auto& s : h.steps)
        r += s.dist[from] * (s.profit[to] - s.profit[from]).to_double();
      return r;
    }
    case RegretNotion::swap: {
      // decomposes exactly: the best map picks, per source action i, the
      // target maximizing sum_t D_t(i) p_t(j)
      double total = 0;
      for (int i = 0; i < h.m; ++i) {
        double best = -1e300;
        for (int j = 0; j < h.m; ++j) {
          double s = 0;
          for (const auto& st : h.steps) s += st.dist[i] * st.profit[j].to_double();
          best = std::max(best, s);
        }
        total += best;
      }
      return total - gain_of(h);
    }
  }
  throw SpecError("unreachable regret notion");
}

double swap_regret_by_enumeration(const RegretHistory& h) {
  if (h.m > 6) throw SpecError("map enumeration supported for m <= 6");
  std::uint64_t maps = 1;
  for (int i = 0; i < h.m; ++i) maps *= static_cast<std::uint64_t>(h.m);
  double best = -1e300;
  std::vector<int> phi(h.m);
  for (std::uint64_t code = 0; code < maps; ++code) {
    std::uint64_t rest = code;
    for (int i = 0; i < h.m; ++i) {
      phi[i] = static_cast<int>(rest % h.m);
      rest /= h.m;
    }
    double g = 0;
    for (const auto& st : h.steps)
      for (int i = 0; i < h.m; ++i) g += st.dist[i] * st.profit[phi[i]].to_double();
    best = std::max(best, g);
  }
  return best - gain_of(h);
}

// ---------------------------------------------------------------------------
// Learners
// ---------------------------------------------------------------------------

MwLearner::MwLearner(int m, double eta) : eta_(eta), logw_(m, 0.0), dist_(m, 1.0 / m) {}

void MwLearner::update(const std::vector<Rational>& batch) {
  std::vector<double> raw(batch.size());
  for (std::size_t j = 0; j < batch.size(); ++j) raw[j] = batch[j].to_double();
  update_raw(raw);
}

void MwLearner::update_raw(const std::vector<double>& batch) {
  for (std::size_t j = 0; j < logw_.size(); ++j) logw_[j] += eta_ * batch[j];
  refresh();
}

void MwLearner::refresh() {
  double mx = *std::max_element(logw_.begin(), logw_.end());
  double sum = 0;
  for (std::size_t j = 0; j < logw_.size(); ++j) {
    dist_[j] = std::exp(logw_[j] - mx);
    sum += dist_[j];
  }
  for (auto& d : dist_) d /= sum;
}

SwapRegretLearner::SwapRegretLearner(int m, double eta)
    : rows_(static_cast<std::size_t>(m), MwLearner(m, eta)), dist_(m, 1.0 / m) {
  refresh();
}

void SwapRegretLearner::update(const std::vector<Rational>& batch) {
  // row i sees the batch scaled by the probability the wrapper played i
  std::vector<double> played = dist_;
  std::vector<double> scaled(batch.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    for (std::size_t j = 0; j < batch.size(); ++j) scaled[j] = played[i] * batch[j].to_double();
    rows_[i].update_raw(scaled);
  }
  refresh();
}

void SwapRegretLearner::refresh() {
  const int m = static_cast<int>(rows_.size());
  // stationary distribution of the row-stochastic matrix Q with rows
  // Q[i] = rows_[i].distribution(): solve D Q = D, sum D = 1
  std::vector<std::vector<double>> a(m, std::vector<double>(m + 1, 0.0));
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) a[j][i] = rows_[i].distribution()[j] - (i == j ? 1.0 : 0.0);
  for (int i = 0; i < m; ++i) a[m - 1][i] = 1.0;  // one equation replaced by normalization
  a[m - 1][m] = 1.0;

  for (int col = 0, row = 0; col < m && row < m; ++col) {
    int piv = row;
    for (int i = row; i < m; ++i)
      if (std::abs(a[i][col]) > std::abs(a[piv][col])) piv = i;
    if (std::abs(a[piv][col]) < 1e-13) continue;
    std::swap(a[piv], a[row]);
    for (int i = 0; i < m; ++i) {
      if (i == row) continue;
      double f = a[i][col] / a[row][col];
      for (int k = col; k <= m; ++k) a[i][k] -= f * a[row][k];
    }
    ++row;
  }
  double sum = 0;
  for (int i = 0; i < m; ++i) {
    int lead = -1;
    for (int k = 0; k < m; ++k)
      if (std::abs(a[i][k]) > 1e-13) {
        lead = k;
        break;
      }
    if (lead >= 0 && lead < m) dist_[lead] = a[i][m] / a[i][lead];
  }
  for (auto& d : dist_)
    if (!(d > 0)) d = 0;  // clamp elimination noise
  for (double d : dist_) sum += d;
  if (sum <= 0) {
    std::fill(dist_.begin(), dist_.end(), 1.0 / m);
    return;
  }
  for (auto& d : dist_) d /= sum;
}

// ---------------------------------------------------------------------------
// Runs
// ---------------------------------------------------------------------------

namespace {

struct AnyLearner {
  std::variant<int, MwLearner, SwapRegretLearner> impl{0};  // int: fixed action
  int m = 0;
  std::vector<double> fixed_dist;

  static AnyLearner make(const LearnerSpec& spec, int m, long long horizon) {
    double eta = spec.eta > 0 ? spec.eta
                              : std::sqrt(std::log(static_cast<double>(m)) /
                                          static_cast<double>(std::max<long long>(horizon, 1)));
    AnyLearner l;
    l.m = m;
    switch (spec.kind) {
      case LearnerSpec::Kind::multiplicative_weights: l.impl = MwLearner(m, eta); break;
      case LearnerSpec::Kind::swap_regret: l.impl = SwapRegretLearner(m, eta); break;
      case LearnerSpec::Kind::fixed_action:
        if (spec.fixed_action < 0 || spec.fixed_action >= m)
          throw SpecError("fixed action out of range");
        l.impl = spec.fixed_action;
        l.fixed_dist.assign(m, 0.0);
        l.fixed_dist[spec.fixed_action] = 1.0;
        break;
    }
    return l;
  }

  const std::vector<double>& distribution() {
    if (auto* mw = std::get_if<MwLearner>(&impl)) return mw->distribution();
    if (auto* sw = std::get_if<SwapRegretLearner>(&impl)) return sw->distribution();
    return fixed_dist;
  }

  void update(const std::vector<Rational>& batch) {
    if (auto* mw = std::get_if<MwLearner>(&impl)) mw->update(batch);
    else if (auto* sw = std::get_if<SwapRegretLearner>(&impl)) sw->update(batch);
  }
};

std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
  std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % bound;
}

int sample_dist(const std::vector<double>& dist, std::mt19937_64& rng) {
  double u = static_cast<double>(draw_below(rng, std::uint64_t{1} << 53)) /
             static_cast<double>(std::uint64_t{1} << 53);
  double acc = 0;
  for (std::size_t j = 0; j < dist.size(); ++j) {
    acc += dist[j];
    if (u < acc) return static_cast<int>(j);
  }
  return static_cast<int>(dist.size()) - 1;
}

void require_r_fair(const ScheduleSource& schedule, const char* op) {
  if (schedule.r_bound() < 1)
    throw SpecError(std::string(op) + ": schedule source does not certify a finite fairness "
                                      "bound r (use round robin, random fair, or a witness)");
}

}  // namespace

RegretHistory run_adversarial(const LearnerSpec& spec,
                              const std::vector<std::vector<Rational>>& profits,
                              ScheduleSource schedule) {
  if (profits.empty()) throw SpecError("empty profit sequence");
  require_r_fair(schedule, "run_adversarial");
  const int m = static_cast<int>(profits[0].size());
  AnyLearner learner = AnyLearner::make(spec, m, static_cast<long long>(profits.size()));

  RegretHistory h;
  h.m = m;
  std::vector<Rational> pending(m, Rational(0));
  for (const auto& p : profits) {
    if (static_cast<int>(p.size()) != m) throw SpecError("ragged profit sequence");
    bool active = contains(schedule.next(), 1);
    if (active) {
      learner.update(pending);
      pending.assign(m, Rational(0));
    }
    RegretHistory::Step step;
    step.activated = active;
    step.dist = learner.distribution();
    step.profit = p;
    for (int j = 0; j < m; ++j) pending[j] += p[j];
    h.steps.push_back(std::move(step));
  }
  return h;
}

LearningOutcome run_learning(const NormalFormGame& game, const std::vector<LearnerSpec>& specs,
                             ScheduleSource schedule, long long horizon, std::uint64_t seed) {
  validate_game(game);
  if (horizon < 1) throw SpecError("horizon must be >= 1");
  if (static_cast<int>(specs.size()) != game.players)
    throw SpecError("one learner spec per player required");
  if (schedule.n() != game.players) throw SpecError("schedule node count != player count");
  require_r_fair(schedule, "run_learning");

  LearningOutcome out;
  out.horizon = horizon;

  // global affine normalization of utilities into [0, 1]
  Rational umin = game.utilities.front(), umax = game.utilities.front();
  for (const auto& u : game.utilities) {
    if (u < umin) umin = u;
    if (umax < u) umax = u;
  }
  out.umin = umin;
  out.uspan = umax - umin;
  Rational span = out.uspan == Rational(0) ? Rational(1) : out.uspan;
  auto norm = [&](const Rational& u) { return (u - umin) / span; };

  std::vector<AnyLearner> learners;
  std::vector<std::vector<Rational>> pending;
  for (int i = 0; i < game.players; ++i) {
    learners.push_back(AnyLearner::make(specs[i], game.strategy_count(i), horizon));
    pending.emplace_back(game.strategy_count(i), Rational(0));
    out.histories.push_back(RegretHistory{game.strategy_count(i), {}});
  }

  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> dists(game.players);
  for (int i = 0; i < game.players; ++i) dists[i] = learners[i].distribution();

  for (long long t = 0; t < horizon; ++t) {
    NodeSet active = schedule.next();
    for (int i = 0; i < game.players; ++i) {
      if (!contains(active, i + 1)) continue;
      learners[i].update(pending[i]);
      pending[i].assign(game.strategy_count(i), Rational(0));
      dists[i] = learners[i].distribution();
    }
    Profile realized(game.players);
    for (int i = 0; i < game.players; ++i) realized[i] = sample_dist(dists[i], rng);
    out.realized.push_back(realized);
    ++out.joint_counts[realized];

    for (int i = 0; i < game.players; ++i) {
      RegretHistory::Step step;
      step.activated = contains(active, i + 1);
      step.dist = dists[i];
      step.profit.resize(game.strategy_count(i));
      Profile probe = realized;
      for (int j = 0; j < game.strategy_count(i); ++j) {
        probe[i] = j;
        step.profit[j] = norm(game.utility(probe, i));
        pending[i][j] += step.profit[j];
      }
      out.histories[i].steps.push_back(std::move(step));
    }
  }

  double span_d = span.to_double();
  for (int i = 0; i < game.players; ++i) {
    LearningOutcome::PlayerReport rep;
    double gain_norm = gain_of(out.histories[i]);
    rep.cumulative_gain = gain_norm * span_d + umin.to_double() * static_cast<double>(horizon);
    rep.avg_gain = rep.cumulative_gain / static_cast<double>(horizon);
    rep.external_regret = compute_regret(out.histories[i], RegretNotion::external) * span_d;
    rep.swap_regret = compute_regret(out.histories[i], RegretNotion::swap) * span_d;
    int m = game.strategy_count(i);
    rep.internal.assign(static_cast<std::size_t>(m) * m, 0.0);
    for (int from = 0; from < m; ++from)
      for (int to = 0; to < m; ++to)
        rep.internal[static_cast<std::size_t>(from) * m + to] =
            compute_regret(out.histories[i], RegretNotion::internal, from, to) * span_d;
    out.players.push_back(rep);
  }

  std::map<Profile, Rational> empirical;
  for (const auto& [profile, count] : out.joint_counts)
    empirical[profile] = Rational(count, horizon);
  out.ce_gap = correlated_eq_gap(empirical, game);
  return out;
}

Rational correlated_eq_gap(const std::map<Profile, Rational>& dist, const NormalFormGame& game) {
  validate_game(game);
  Rational total(0);
  for (const auto& [profile, mass] : dist) total += mass;
  if (total != Rational(1)) throw SpecError("joint distribution must sum to 1");

  Rational gap(0);
  for (int i = 0; i < game.players; ++i) {
    // deviation maps decompose per played action
    Rational player_gap(0);
    for (int a = 0; a < game.strategy_count(i); ++a) {
      Rational best(0);  // identity deviation contributes 0
      for (int b = 0; b < game.strategy_count(i); ++b) {
        Rational delta(0);
        for (const auto& [profile, mass] : dist) {
          if (profile[i] != a) continue;
          Profile probe = profile;
          probe[i] = b;
          delta += mass * (game.utility(probe, i) - game.utility(profile, i));
        }
        if (delta > best) best = delta;
      }
      player_gap += best;
    }
    if (player_gap > gap) gap = player_gap;
  }
  return gap;
}

Rational realized_swap_regret(const LearningOutcome& run, const NormalFormGame& game,
                              int player) {
  Rational total(0);
  for (int a = 0; a < game.strategy_count(player); ++a) {
    Rational best(0);
    for (int b = 0; b < game.strategy_count(player); ++b) {
      Rational delta(0);
      for (const auto& profile : run.realized) {
        if (profile[player] != a) continue;
        Profile probe = profile;
        probe[player] = b;
        delta += game.utility(probe, player) - game.utility(profile, player);
      }
      if (delta > best) best = delta;
    }
    total += best;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Minimax by square-kernel enumeration
// ---------------------------------------------------------------------------

namespace {

// Solves A x = b over rationals (square, by Gauss-Jordan); false if singular.
bool solve_rational(std::vector<std::vector<Rational>> a, std::vector<Rational> b,
                    std::vector<Rational>* x) {
  const int n = static_cast<int>(a.size());
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int i = col; i < n; ++i)
      if (a[i][col] != Rational(0)) {
        piv = i;
        break;
      }
    if (piv < 0) return false;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (int i = 0; i < n; ++i) {
      if (i == col || a[i][col] == Rational(0)) continue;
      Rational f = a[i][col] / a[col][col];
      for (int k = col; k < n; ++k) a[i][k] -= f * a[col][k];
      b[i] -= f * b[col];
    }
  }
  x->resize(n);
  for (int i = 0; i < n; ++i) (*x)[i] = b[i] / a[i][i];
  return true;
}

// Maximin value of the row player for payoff matrix u (row maximizes).
// Shapley-Snow: some optimal pair is supported on a square kernel where the
// row mix equalizes the kernel columns; enumerate all square subsystems.
bool best_row_value(const std::vector<std::vector<Rational>>& u, Rational* value) {
  const int m = static_cast<int>(u.size());
  const int n = static_cast<int>(u[0].size());
  bool have = false;
  Rational best;
  for (std::uint32_t rows = 1; rows < (1u << m); ++rows) {
    int k = std::popcount(rows);
    for (std::uint32_t cols = 1; cols < (1u << n); ++cols) {
      if (std::popcount(cols) != k) continue;
      std::vector<int> R, C;
      for (int i = 0; i < m; ++i)
        if (rows & (1u << i)) R.push_back(i);
      for (int j = 0; j < n; ++j)
        if (cols & (1u << j)) C.push_back(j);
      // unknowns: x_R (k), v; equations: sum_R x_i u[i][j] - v = 0 for j in C,
      // sum x = 1
      std::vector<std::vector<Rational>> a(k + 1, std::vector<Rational>(k + 1, Rational(0)));
      std::vector<Rational> b(k + 1, Rational(0));
      for (int jc = 0; jc < k; ++jc) {
        for (int ir = 0; ir < k; ++ir) a[jc][ir] = u[R[ir]][C[jc]];
        a[jc][k] = Rational(-1);
      }
      for (int ir = 0; ir < k; ++ir) a[k][ir] = Rational(1);
      b[k] = Rational(1);
      std::vector<Rational> sol;
      try {
        if (!solve_rational(a, b, &sol)) continue;
      } catch (const rational_overflow&) {
        continue;
      }
      bool ok = true;
      for (int ir = 0; ir < k && ok; ++ir) ok = sol[ir] >= Rational(0);
      if (!ok) continue;
      Rational v = sol[k];
      // feasibility against every column
      for (int j = 0; j < n && ok; ++j) {
        Rational col(0);
        for (int ir = 0; ir < k; ++ir) col += sol[ir] * u[R[ir]][j];
        ok = col >= v;
      }
      if (!ok) continue;
      if (!have || v > best) {
        best = v;
        have = true;
      }
    }
  }
  if (have) *value = best;
  return have;
}

}  // namespace

Rational minimax_value(const NormalFormGame& game) {
  validate_game(game);
  if (game.players != 2) throw SpecError("minimax_value needs a two-player game");
  const int m = game.strategy_count(0), n = game.strategy_count(1);
  if (m > 8 || n > 8) throw SpecError("minimax_value supports at most 8 actions per side");
  std::vector<std::vector<Rational>> u(m, std::vector<Rational>(n));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      Profile s{i, j};
      u[i][j] = game.utility(s, 0);
      if (game.utility(s, 1) != -u[i][j]) throw SpecError("game is not zero-sum");
    }

  Rational maximin;
  if (!best_row_value(u, &maximin)) throw SpecError("minimax kernel enumeration failed");

  // column player's view: minimize, i.e. maximize against -u transposed
  std::vector<std::vector<Rational>> nut(n, std::vector<Rational>(m));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < m; ++i) nut[j][i] = -u[i][j];
  Rational minimax;
  if (!best_row_value(nut, &minimax)) throw SpecError("minimax kernel enumeration failed");
  if (maximin != -minimax)
    throw SpecError("maximin and minimax disagree (duality check failed): " + maximin.str() +
                    " vs " + (-minimax).str());
  return maximin;
}

}  // namespace adyn
