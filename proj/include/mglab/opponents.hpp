#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "mglab/game.hpp"
#include "mglab/vol_learner.hpp"

namespace mglab {

// Min-player strategy. The sampler draws from current_policy(), so the
// per-episode snapshot the harness records is consistent with realized
// play by construction. Adaptive kinds receive the learner's policy only
// at episode boundaries, through begin_episode.
class Opponent {
 public:
  virtual ~Opponent() = default;

  virtual void begin_episode(std::int64_t episode, const MarkovPolicy* learner_policy) {
    (void)episode;
    (void)learner_policy;
  }

  virtual const MarkovPolicy& current_policy() const = 0;

  virtual int act(int h, int s, Rng& rng) { return rng.sample(current_policy().probs[h][s]); }

  // Unknown-game observation of the opponent's own transition: its action,
  // the max player's return (each side complements as it needs), never the
  // max player's action.
  virtual void observe(int h, int s, int own_action, double max_return, int s_next) {
    (void)h, (void)s, (void)own_action, (void)max_return, (void)s_next;
  }
};

class FixedOpponent : public Opponent {
 public:
  explicit FixedOpponent(MarkovPolicy policy) : policy_(std::move(policy)) {}
  const MarkovPolicy& current_policy() const override { return policy_; }

 private:
  MarkovPolicy policy_;
};

// Fixed opponent playing the min side of a Nash equilibrium.
std::unique_ptr<FixedOpponent> make_nash_opponent(const MarkovGame& g, double tol = 1e-9);

// Plays a pre-specified policy per episode, from an explicit list or a
// generator. Episodes are 1-based; an exhausted list is an error.
class ScriptedOpponent : public Opponent {
 public:
  explicit ScriptedOpponent(std::vector<MarkovPolicy> script);
  explicit ScriptedOpponent(std::function<MarkovPolicy(std::int64_t)> generator);

  void begin_episode(std::int64_t episode, const MarkovPolicy* learner_policy) override;
  const MarkovPolicy& current_policy() const override { return current_; }

 private:
  std::vector<MarkovPolicy> script_;
  std::function<MarkovPolicy(std::int64_t)> generator_;
  MarkovPolicy current_;
  bool primed_ = false;
};

// Recomputes the min player's exact best response to the learner's policy
// snapshot every refresh_period episodes (refresh_period <= 0: only once,
// at episode 1).
class AdaptiveBestResponseOpponent : public Opponent {
 public:
  AdaptiveBestResponseOpponent(const MarkovGame& g, std::int64_t refresh_period);

  void begin_episode(std::int64_t episode, const MarkovPolicy* learner_policy) override;
  const MarkovPolicy& current_policy() const override;

 private:
  const MarkovGame& game_;
  std::int64_t period_;
  MarkovPolicy current_;
  bool primed_ = false;
};

// Runs V-OL from the min player's seat on the role-swapped game (returns
// complemented to stay in [0,1]); it never sees the max player's action.
class SelfPlayMirrorOpponent : public Opponent {
 public:
  SelfPlayMirrorOpponent(const MarkovGame& g, VolHyper hyper);

  void begin_episode(std::int64_t episode, const MarkovPolicy* learner_policy) override;
  const MarkovPolicy& current_policy() const override { return snapshot_; }
  void observe(int h, int s, int own_action, double max_return, int s_next) override {
    mirror_.observe(h, s, own_action, 1.0 - max_return, s_next);
  }

  const VolLearner& mirror() const { return mirror_; }

 private:
  VolLearner mirror_;
  MarkovPolicy snapshot_;
};

}  // namespace mglab
