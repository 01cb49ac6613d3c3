#include "mglab/qol_learner.hpp"

#include <algorithm>
#include <cmath>

#include "mglab/common.hpp"
#include "mglab/matrix_game.hpp"

namespace mglab {

double qol_alpha(std::int64_t t, int horizon) {
  if (t < 1) throw std::invalid_argument("qol_alpha: t must be >= 1");
  return (horizon + 1.0) / (horizon + static_cast<double>(t));
}

double qol_beta(std::int64_t t, int horizon, double iota, double bonus_c) {
  if (t < 1) throw std::invalid_argument("qol_beta: t must be >= 1");
  double h3 = static_cast<double>(horizon) * horizon * horizon;
  return bonus_c * std::sqrt(h3 * iota / static_cast<double>(t));
}

double QolHyper::iota(int horizon, int states, int actions) const {
  return std::log(static_cast<double>(horizon) * states * actions *
                  static_cast<double>(episodes) / failure_prob);
}

QolLearner::QolLearner(int horizon, std::vector<int> state_sizes,
                       std::vector<int> max_action_sizes,
                       std::vector<int> min_action_sizes, QolHyper hyper)
    : horizon_(horizon),
      state_sizes_(std::move(state_sizes)),
      max_action_sizes_(std::move(max_action_sizes)),
      min_action_sizes_(std::move(min_action_sizes)),
      hyper_(hyper) {
  if (horizon_ < 1) throw std::invalid_argument("QolLearner: horizon must be >= 1");
  if (static_cast<int>(state_sizes_.size()) < horizon_ ||
      static_cast<int>(max_action_sizes_.size()) != horizon_ ||
      static_cast<int>(min_action_sizes_.size()) != horizon_)
    throw std::invalid_argument("QolLearner: dimension lists do not match the horizon");
  max_states_ = 1;
  max_actions_ = 1;
  for (int h = 0; h < horizon_; ++h) {
    max_states_ = std::max(max_states_, state_sizes_[h]);
    max_actions_ = std::max(max_actions_, max_action_sizes_[h]);
  }
  iota_ = hyper_.iota(horizon_, max_states_, max_actions_);

  q_.resize(horizon_);
  visits_.resize(horizon_);
  value_.resize(horizon_);
  for (int h = 0; h < horizon_; ++h) {
    q_[h].assign(state_sizes_[h],
                 std::vector<std::vector<double>>(
                     max_action_sizes_[h],
                     std::vector<double>(min_action_sizes_[h], static_cast<double>(horizon_))));
    visits_[h].assign(state_sizes_[h],
                      std::vector<std::vector<std::int64_t>>(
                          max_action_sizes_[h],
                          std::vector<std::int64_t>(min_action_sizes_[h], 0)));
    value_[h].assign(state_sizes_[h], static_cast<double>(horizon_));
  }
  policy_ = MarkovPolicy::uniform(horizon_, state_sizes_, max_action_sizes_);
  min_policy_ = MarkovPolicy::uniform(horizon_, state_sizes_, min_action_sizes_);
}

QolLearner QolLearner::for_game(const MarkovGame& g, QolHyper hyper) {
  return QolLearner(g.horizon, g.state_sizes, g.max_action_sizes, g.min_action_sizes, hyper);
}

int QolLearner::act(int h, int s, Rng& rng) { return rng.sample(policy_.probs[h][s]); }

void QolLearner::observe_informed(int h, int s, int a, int b, double ret, int s_next) {
  const std::int64_t t = ++visits_[h][s][a][b];
  const double alpha = qol_alpha(t, horizon_);
  const double beta = qol_beta(t, horizon_, iota_, hyper_.bonus_c);
  const double v_next = (h + 1 < horizon_) ? value_[h + 1][s_next] : 0.0;
  q_[h][s][a][b] = (1.0 - alpha) * q_[h][s][a][b] + alpha * (ret + v_next + beta);

  MatrixGame slice{q_[h][s]};
  NashCertificate cert = solve_with_warm_start(slice, policy_.probs[h][s],
                                               min_policy_.probs[h][s], hyper_.solve_tol);
  policy_.probs[h][s] = cert.row_strategy;
  min_policy_.probs[h][s] = cert.col_strategy;

  // V is the mixed value under the refreshed pair, exactly D_{mu x nu} Q.
  double v = 0.0;
  for (int ap = 0; ap < max_action_sizes_[h]; ++ap) {
    if (policy_.probs[h][s][ap] == 0.0) continue;
    double inner = 0.0;
    for (int bp = 0; bp < min_action_sizes_[h]; ++bp)
      inner += min_policy_.probs[h][s][bp] * q_[h][s][ap][bp];
    v += policy_.probs[h][s][ap] * inner;
  }
  value_[h][s] = v;
}

nlohmann::json QolLearner::snapshot_json() const {
  return nlohmann::json{{"q", q_},
                        {"visits", visits_},
                        {"value", value_},
                        {"policy", policy_.probs},
                        {"min_policy", min_policy_.probs}};
}

}  // namespace mglab
