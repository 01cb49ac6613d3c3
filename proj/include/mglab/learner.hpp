#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mglab/game.hpp"
#include "mglab/rng.hpp"

namespace mglab {

// Episodic learner for the max player. Unknown-game learners receive
// observations through observe(), whose signature has no opponent action;
// informed learners override observe_informed() and report informed().
// The harness routes on informed(), so an unknown-game run can never leak
// the opponent's action into the learner by construction.
class Learner {
 public:
  virtual ~Learner() = default;

  virtual bool informed() const { return false; }

  // episode numbers are 1-based.
  virtual void begin_episode(std::int64_t episode, int initial_state) {
    (void)episode;
    (void)initial_state;
  }

  virtual int act(int h, int s, Rng& rng) = 0;

  virtual void observe(int h, int s, int a, double ret, int s_next) {
    (void)h, (void)s, (void)a, (void)ret, (void)s_next;
    throw std::logic_error("this learner requires informed observations");
  }

  virtual void observe_informed(int h, int s, int a, int b, double ret, int s_next) {
    (void)h, (void)s, (void)a, (void)b, (void)ret, (void)s_next;
    throw std::logic_error("this learner does not accept informed observations");
  }

  // Policy at the current instant; the harness snapshots it at episode start.
  virtual MarkovPolicy policy_snapshot() const = 0;

  // Learner's value estimate at (h, s); NaN when the learner keeps none.
  virtual double value_estimate(int h, int s) const {
    (void)h, (void)s;
    return std::numeric_limits<double>::quiet_NaN();
  }

  // Full value table copy for per-episode bookkeeping; empty when none.
  virtual std::vector<std::vector<double>> value_table() const { return {}; }
};

// Plays uniformly at random and never updates.
class UniformLearner : public Learner {
 public:
  UniformLearner(int horizon, std::vector<int> state_sizes, std::vector<int> action_sizes)
      : policy_(MarkovPolicy::uniform(horizon, state_sizes, action_sizes)) {}

  int act(int h, int s, Rng& rng) override { return rng.sample(policy_.probs[h][s]); }
  void observe(int, int, int, double, int) override {}
  MarkovPolicy policy_snapshot() const override { return policy_; }

 private:
  MarkovPolicy policy_;
};

// Plays a fixed supplied policy; useful as a baseline and in oracle checks.
class FixedPolicyLearner : public Learner {
 public:
  explicit FixedPolicyLearner(MarkovPolicy policy) : policy_(std::move(policy)) {}

  int act(int h, int s, Rng& rng) override { return rng.sample(policy_.probs[h][s]); }
  void observe(int, int, int, double, int) override {}
  MarkovPolicy policy_snapshot() const override { return policy_; }

 private:
  MarkovPolicy policy_;
};

}  // namespace mglab
