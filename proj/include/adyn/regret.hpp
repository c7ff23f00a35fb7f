#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adyn/adapters.hpp"
#include "adyn/rational.hpp"
#include "adyn/schedule.hpp"

namespace adyn {

/// One learner's view of a run: per step, whether it was activated, the
/// distribution it played (frozen while idle), and the realized profit
/// vector p_t in [0,1]^m. Gains are g_t = <D_t, p_t>.
struct RegretHistory {
  int m = 0;
  struct Step {
    bool activated = false;
    std::vector<double> dist;
    std::vector<Rational> profit;
  };
  std::vector<Step> steps;
};

enum class RegretNotion { external, internal, swap };

/// external: best fixed action in hindsight minus the algorithm's gain;
/// internal(i -> j): gain from replacing every play of i by j; swap: best
/// action map, computed by per-action decomposition (and cross-checkable by
/// map enumeration for m <= 6, see swap_regret_by_enumeration).
/// Best-action sums are accumulated in exact rationals; the algorithm's own
/// gain mixes float distributions (tolerance 1e-9).
double compute_regret(const RegretHistory& h, RegretNotion notion, int from = 0, int to = 0);
double swap_regret_by_enumeration(const RegretHistory& h);  // m <= 6

// ---------------------------------------------------------------------------
// Learners
// ---------------------------------------------------------------------------

/// Multiplicative weights (Hedge) on gains: w_j *= exp(eta * batch_j).
/// Batched profits under an r-fair schedule lie in [0, r]; with
/// eta = sqrt(ln m / T) the external regret is at most 2 r sqrt(T ln m).
class MwLearner {
 public:
  MwLearner(int m, double eta);
  const std::vector<double>& distribution() const { return dist_; }
  void update(const std::vector<Rational>& batch);
  void update_raw(const std::vector<double>& batch);  // pre-scaled gains

 private:
  double eta_;
  std::vector<double> logw_;
  std::vector<double> dist_;
  void refresh();
};

/// Standard stationary-distribution wrapper turning m external-regret
/// learners into a no-swap-regret learner: play the stationary distribution
/// of the row matrix Q (row i = learner i's distribution); feed learner i the
/// batch scaled by the played probability of i.
class SwapRegretLearner {
 public:
  SwapRegretLearner(int m, double eta);
  const std::vector<double>& distribution() const { return dist_; }
  void update(const std::vector<Rational>& batch);

 private:
  std::vector<MwLearner> rows_;
  std::vector<double> dist_;
  void refresh();
};

struct LearnerSpec {
  enum class Kind { multiplicative_weights, swap_regret, fixed_action };
  Kind kind = Kind::multiplicative_weights;
  double eta = 0.0;      // 0 = sqrt(ln m / T)
  int fixed_action = 0;  // for fixed_action

  static LearnerSpec mw(double eta = 0.0) { return {Kind::multiplicative_weights, eta, 0}; }
  static LearnerSpec swap(double eta = 0.0) { return {Kind::swap_regret, eta, 0}; }
  static LearnerSpec fixed(int action) { return {Kind::fixed_action, 0.0, action}; }
};

// ---------------------------------------------------------------------------
// Runs
// ---------------------------------------------------------------------------

/// Single-learner run against a fixed profit sequence (profits in [0,1]^m)
/// under an r-fair activation schedule: idle steps freeze the distribution,
/// activations update on the exact batched profits since the last activation.
RegretHistory run_adversarial(const LearnerSpec& spec,
                              const std::vector<std::vector<Rational>>& profits,
                              ScheduleSource schedule);

struct LearningOutcome {
  long long horizon = 0;
  std::vector<RegretHistory> histories;     // per player, profits normalized to [0,1]
  std::vector<Profile> realized;            // realized pure profile per step
  std::map<Profile, long long> joint_counts;
  Rational umin, uspan;                     // normalization: p = (u - umin) / uspan

  struct PlayerReport {
    double avg_gain = 0;          // original utility units
    double cumulative_gain = 0;   // original units
    double external_regret = 0;   // original units
    double swap_regret = 0;       // original units
    std::vector<double> internal; // m x m, [from * m + to], original units
  };
  std::vector<PlayerReport> players;
  Rational ce_gap;  // of the empirical joint distribution, original units
};

/// Multi-player no-regret run of a normal-form game under an r-fair schedule
/// (the schedule must certify a finite fairness bound). Realized actions are
/// sampled from the played distributions with the given seed.
LearningOutcome run_learning(const NormalFormGame& game, const std::vector<LearnerSpec>& specs,
                             ScheduleSource schedule, long long horizon, std::uint64_t seed);

/// Maximum profitable single-player deviation under a joint distribution over
/// pure profiles; 0 gap = correlated equilibrium. Exact.
Rational correlated_eq_gap(const std::map<Profile, Rational>& dist, const NormalFormGame& game);

/// Realized (pure-play) swap regret of one player over the run; exactly
/// horizon * ce_gap contribution of that player. Exact.
Rational realized_swap_regret(const LearningOutcome& run, const NormalFormGame& game,
                              int player);

/// Exact minimax value of a finite two-player zero-sum game (<= 8 actions per
/// side) by square-kernel (Shapley-Snow) enumeration over rational linear
/// systems; maximin and minimax are computed independently and must agree.
Rational minimax_value(const NormalFormGame& game);

}  // namespace adyn
