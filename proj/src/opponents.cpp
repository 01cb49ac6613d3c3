#include "mglab/opponents.hpp"

#include "mglab/common.hpp"
#include "mglab/value_oracle.hpp"

namespace mglab {

std::unique_ptr<FixedOpponent> make_nash_opponent(const MarkovGame& g, double tol) {
  return std::make_unique<FixedOpponent>(minimax_values(g, tol).min_policy);
}

ScriptedOpponent::ScriptedOpponent(std::vector<MarkovPolicy> script)
    : script_(std::move(script)) {
  if (script_.empty()) throw std::invalid_argument("ScriptedOpponent: empty script");
}

ScriptedOpponent::ScriptedOpponent(std::function<MarkovPolicy(std::int64_t)> generator)
    : generator_(std::move(generator)) {
  if (!generator_) throw std::invalid_argument("ScriptedOpponent: null generator");
}

void ScriptedOpponent::begin_episode(std::int64_t episode, const MarkovPolicy*) {
  if (generator_) {
    current_ = generator_(episode);
  } else {
    if (episode < 1 || episode > static_cast<std::int64_t>(script_.size()))
      throw std::out_of_range(strf("ScriptedOpponent: script has %zu policies, episode %lld requested",
                                   script_.size(), static_cast<long long>(episode)));
    current_ = script_[episode - 1];
  }
  primed_ = true;
}

AdaptiveBestResponseOpponent::AdaptiveBestResponseOpponent(const MarkovGame& g,
                                                           std::int64_t refresh_period)
    : game_(g), period_(refresh_period) {}

void AdaptiveBestResponseOpponent::begin_episode(std::int64_t episode,
                                                 const MarkovPolicy* learner_policy) {
  bool due = !primed_ || (period_ > 0 && (episode - 1) % period_ == 0);
  if (!due) return;
  if (learner_policy == nullptr)
    throw std::invalid_argument(
        "AdaptiveBestResponseOpponent: harness must supply the learner policy snapshot");
  current_ = min_best_response_value(game_, *learner_policy).policy;
  primed_ = true;
}

const MarkovPolicy& AdaptiveBestResponseOpponent::current_policy() const {
  if (!primed_)
    throw std::logic_error("AdaptiveBestResponseOpponent: no episode begun yet");
  return current_;
}

SelfPlayMirrorOpponent::SelfPlayMirrorOpponent(const MarkovGame& g, VolHyper hyper)
    : mirror_(g.horizon, g.state_sizes, g.min_action_sizes, hyper) {
  snapshot_ = mirror_.policy_snapshot();
}

void SelfPlayMirrorOpponent::begin_episode(std::int64_t episode, const MarkovPolicy*) {
  mirror_.begin_episode(episode, 0);
  snapshot_ = mirror_.policy_snapshot();
}

}  // namespace mglab
