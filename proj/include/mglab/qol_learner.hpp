#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"
#include "mglab/learner.hpp"

namespace mglab {

double qol_alpha(std::int64_t t, int horizon);                       // (H+1)/(H+t)
double qol_beta(std::int64_t t, int horizon, double iota, double bonus_c);  // c sqrt(H^3 iota / t)

struct QolHyper {
  double bonus_c = 2.0;
  double failure_prob = 0.01;
  std::int64_t episodes = 1;
  double solve_tol = 1e-6;

  double iota(int horizon, int states, int actions) const;
};

// Optimistic Nash Q-learning for informed games: a joint-action Q table
// with a per-step equilibrium solve at the visited state. Memory scales
// with A*B, the deliberate contrast with V-OL. Rejects unknown-mode
// observations outright.
class QolLearner : public Learner {
 public:
  QolLearner(int horizon, std::vector<int> state_sizes, std::vector<int> max_action_sizes,
             std::vector<int> min_action_sizes, QolHyper hyper);

  static QolLearner for_game(const MarkovGame& g, QolHyper hyper);

  bool informed() const override { return true; }
  int act(int h, int s, Rng& rng) override;
  void observe_informed(int h, int s, int a, int b, double ret, int s_next) override;
  MarkovPolicy policy_snapshot() const override { return policy_; }
  double value_estimate(int h, int s) const override { return value_[h][s]; }
  std::vector<std::vector<double>> value_table() const override { return value_; }

  MarkovPolicy min_policy_snapshot() const { return min_policy_; }
  double q_entry(int h, int s, int a, int b) const { return q_[h][s][a][b]; }
  std::int64_t visits(int h, int s, int a, int b) const { return visits_[h][s][a][b]; }
  nlohmann::json snapshot_json() const;

 private:
  int horizon_;
  std::vector<int> state_sizes_, max_action_sizes_, min_action_sizes_;
  int max_states_, max_actions_;
  QolHyper hyper_;
  double iota_;

  std::vector<std::vector<std::vector<std::vector<double>>>> q_;        // [h][s][a][b], init H
  std::vector<std::vector<std::vector<std::vector<std::int64_t>>>> visits_;  // init 0
  std::vector<std::vector<double>> value_;  // [h][s], init H
  MarkovPolicy policy_;                     // over A, init uniform
  MarkovPolicy min_policy_;                 // over B, init uniform (not pinned by the update rule)
};

}  // namespace mglab
