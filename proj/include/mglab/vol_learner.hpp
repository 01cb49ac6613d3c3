#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "json.hpp"
#include "mglab/learner.hpp"

namespace mglab {

// Schedules. t is the post-increment visit count (t >= 1); G >= 1 controls
// how aggressively recent samples are favored.
double vol_alpha(std::int64_t t, double g_factor, int horizon);
double vol_beta(std::int64_t t, double g_factor, int horizon, int num_actions,
                double iota, double bonus_c);
double vol_eta(std::int64_t t, double g_factor, int horizon, int num_actions);

// G as a function of the planned episode count: H^-1 (K/SA)^(1/3) when
// K >= H^3 S A, else K^(1/3); >= 1 in both branches.
double choose_g_factor(std::int64_t episodes, int horizon, int states, int actions);

// Effective weights of the i-th observation after t visits:
// weights[0] = prod_{j<=t} (1-alpha_j), weights[i] = alpha_i prod_{j=i+1..t} (1-alpha_j).
// For t >= 1 the entries 1..t sum to 1.
std::vector<double> alpha_weights(std::int64_t t, double g_factor, int horizon);

// Incremental O(1)-per-step tracker of the weight diagnostics used by the
// step-size test suite; accumulates in long double.
class AlphaWeightSweep {
 public:
  AlphaWeightSweep(double g_factor, int horizon) : g_(g_factor), h_(horizon) {}

  void advance();
  std::int64_t t() const { return t_; }
  double sum() const { return static_cast<double>(sum_); }
  double sum_squares() const { return static_cast<double>(sum_sq_); }
  double sum_inv_sqrt() const { return static_cast<double>(sum_inv_sqrt_); }
  double max_weight() const { return static_cast<double>(max_w_); }
  double weight_zero() const { return static_cast<double>(alpha0_); }

 private:
  double g_;
  int h_;
  std::int64_t t_ = 0;
  long double sum_ = 0, sum_sq_ = 0, sum_inv_sqrt_ = 0, max_w_ = 0, alpha0_ = 1;
};

// Normalized exp(z - max z); exponents are clamped at -700 so every entry
// stays strictly positive.
std::vector<double> exponential_weights(const std::vector<double>& z);

struct VolHyper {
  double g_factor = 1.0;
  double bonus_c = 2.0;
  double failure_prob = 0.01;
  std::int64_t episodes = 1;
  bool clip_values = false;

  // iota = log(H * S * A * K / p), natural log.
  double iota(int horizon, int states, int actions) const;
};

// Optimistic V-learning for unknown games: value table with an exploration
// bonus plus exponential-weights policies driven by importance-weighted
// losses. State depends on (H, S, A) only; the opponent's action space
// never enters.
class VolLearner : public Learner {
 public:
  VolLearner(int horizon, std::vector<int> state_sizes, std::vector<int> action_sizes,
             VolHyper hyper);

  // Reads dimensions from the game's max-player side only.
  static VolLearner for_game(const MarkovGame& g, VolHyper hyper);

  int act(int h, int s, Rng& rng) override;
  void observe(int h, int s, int a, double ret, int s_next) override;
  MarkovPolicy policy_snapshot() const override { return policy_; }
  double value_estimate(int h, int s) const override { return value_[h][s]; }
  std::vector<std::vector<double>> value_table() const override { return value_; }

  const VolHyper& hyper() const { return hyper_; }
  std::int64_t visits(int h, int s) const { return visits_[h][s]; }
  nlohmann::json snapshot_json() const;

 private:
  int horizon_;
  std::vector<int> state_sizes_;
  std::vector<int> action_sizes_;
  int max_states_;
  int max_actions_;
  VolHyper hyper_;
  double iota_;

  std::vector<std::vector<double>> value_;              // [h][s], init H
  std::vector<std::vector<std::vector<double>>> loss_;  // [h][s][a], init 0
  std::vector<std::vector<std::int64_t>> visits_;       // [h][s], init 0
  MarkovPolicy policy_;                                 // init uniform
};

// Anytime wrapper: epoch j spans episodes [2^j, 2^{j+1}), and at each epoch
// boundary the wrapped learner is rebuilt from scratch with the epoch
// length as its planned K. Episode routing is transparent to the harness.
class DoublingLearner : public Learner {
 public:
  // factory(epoch_episodes) builds a fresh learner tuned for that length.
  using Factory = std::function<std::unique_ptr<Learner>(std::int64_t epoch_episodes)>;

  explicit DoublingLearner(Factory factory);

  bool informed() const override { return inner_->informed(); }
  void begin_episode(std::int64_t episode, int initial_state) override;
  int act(int h, int s, Rng& rng) override { return inner_->act(h, s, rng); }
  void observe(int h, int s, int a, double ret, int s_next) override {
    inner_->observe(h, s, a, ret, s_next);
  }
  void observe_informed(int h, int s, int a, int b, double ret, int s_next) override {
    inner_->observe_informed(h, s, a, b, ret, s_next);
  }
  MarkovPolicy policy_snapshot() const override { return inner_->policy_snapshot(); }
  double value_estimate(int h, int s) const override { return inner_->value_estimate(h, s); }
  std::vector<std::vector<double>> value_table() const override { return inner_->value_table(); }

  std::int64_t epoch() const { return epoch_; }

 private:
  Factory factory_;
  std::unique_ptr<Learner> inner_;
  std::int64_t epoch_ = -1;
};

// Standard V-OL doubling setup: each epoch re-tunes G for the epoch length.
DoublingLearner make_doubling_vol(int horizon, std::vector<int> state_sizes,
                                  std::vector<int> action_sizes, VolHyper base_hyper);

}  // namespace mglab
