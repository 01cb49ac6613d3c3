#include "mglab/vol_learner.hpp"

#include <algorithm>
#include <cmath>

#include "mglab/common.hpp"

namespace mglab {

double vol_alpha(std::int64_t t, double g_factor, int horizon) {
  if (t < 1) throw std::invalid_argument("vol_alpha: t must be >= 1");
  double gh = g_factor * horizon;
  return (gh + 1.0) / (gh + static_cast<double>(t));
}

double vol_beta(std::int64_t t, double g_factor, int horizon, int num_actions,
                double iota, double bonus_c) {
  if (t < 1) throw std::invalid_argument("vol_beta: t must be >= 1");
  double h3 = static_cast<double>(horizon) * horizon * horizon;
  return bonus_c * std::sqrt(g_factor * h3 * num_actions * iota / static_cast<double>(t));
}

double vol_eta(std::int64_t t, double g_factor, int horizon, int num_actions) {
  if (t < 1) throw std::invalid_argument("vol_eta: t must be >= 1");
  return std::sqrt(g_factor * horizon * std::log(static_cast<double>(num_actions)) /
                   (static_cast<double>(num_actions) * static_cast<double>(t)));
}

double choose_g_factor(std::int64_t episodes, int horizon, int states, int actions) {
  if (episodes < 1 || horizon < 1 || states < 1 || actions < 1)
    throw std::invalid_argument("choose_g_factor: all arguments must be >= 1");
  double k = static_cast<double>(episodes);
  double h3sa = static_cast<double>(horizon) * horizon * horizon * states * actions;
  if (k >= h3sa)
    return std::cbrt(k / (static_cast<double>(states) * actions)) / horizon;
  return std::cbrt(k);
}

std::vector<double> alpha_weights(std::int64_t t, double g_factor, int horizon) {
  if (t < 0) throw std::invalid_argument("alpha_weights: t must be >= 0");
  std::vector<double> w(static_cast<size_t>(t) + 1, 0.0);
  w[0] = 1.0;
  for (std::int64_t j = 1; j <= t; ++j) {
    double a = vol_alpha(j, g_factor, horizon);
    for (std::int64_t i = 0; i < j; ++i) w[i] *= 1.0 - a;
    w[j] = a;
  }
  return w;
}

void AlphaWeightSweep::advance() {
  ++t_;
  long double a = (static_cast<long double>(g_) * h_ + 1.0L) /
                  (static_cast<long double>(g_) * h_ + t_);
  long double keep = 1.0L - a;
  sum_ = sum_ * keep + a;
  sum_sq_ = sum_sq_ * keep * keep + a * a;
  sum_inv_sqrt_ = sum_inv_sqrt_ * keep + a / std::sqrt(static_cast<long double>(t_));
  max_w_ = std::max(max_w_ * keep, a);
  alpha0_ *= keep;
}

std::vector<double> exponential_weights(const std::vector<double>& z) {
  double zmax = *std::max_element(z.begin(), z.end());
  std::vector<double> w(z.size());
  double sum = 0.0;
  for (size_t i = 0; i < z.size(); ++i) {
    w[i] = std::exp(std::max(z[i] - zmax, -700.0));
    sum += w[i];
  }
  for (double& v : w) v /= sum;
  return w;
}

double VolHyper::iota(int horizon, int states, int actions) const {
  return std::log(static_cast<double>(horizon) * states * actions *
                  static_cast<double>(episodes) / failure_prob);
}

VolLearner::VolLearner(int horizon, std::vector<int> state_sizes,
                       std::vector<int> action_sizes, VolHyper hyper)
    : horizon_(horizon),
      state_sizes_(std::move(state_sizes)),
      action_sizes_(std::move(action_sizes)),
      hyper_(hyper) {
  if (horizon_ < 1) throw std::invalid_argument("VolLearner: horizon must be >= 1");
  if (static_cast<int>(state_sizes_.size()) < horizon_ ||
      static_cast<int>(action_sizes_.size()) != horizon_)
    throw std::invalid_argument("VolLearner: dimension lists do not match the horizon");
  if (hyper_.g_factor < 1.0)
    throw std::invalid_argument("VolLearner: G must be >= 1");
  max_states_ = 1;
  max_actions_ = 1;
  for (int h = 0; h < horizon_; ++h) {
    max_states_ = std::max(max_states_, state_sizes_[h]);
    max_actions_ = std::max(max_actions_, action_sizes_[h]);
  }
  iota_ = hyper_.iota(horizon_, max_states_, max_actions_);

  value_.resize(horizon_);
  loss_.resize(horizon_);
  visits_.resize(horizon_);
  for (int h = 0; h < horizon_; ++h) {
    value_[h].assign(state_sizes_[h], static_cast<double>(horizon_));
    loss_[h].assign(state_sizes_[h], std::vector<double>(action_sizes_[h], 0.0));
    visits_[h].assign(state_sizes_[h], 0);
  }
  policy_ = MarkovPolicy::uniform(horizon_, state_sizes_, action_sizes_);
}

VolLearner VolLearner::for_game(const MarkovGame& g, VolHyper hyper) {
  return VolLearner(g.horizon, g.state_sizes, g.max_action_sizes, hyper);
}

int VolLearner::act(int h, int s, Rng& rng) { return rng.sample(policy_.probs[h][s]); }

void VolLearner::observe(int h, int s, int a, double ret, int s_next) {
  const std::int64_t t = ++visits_[h][s];
  const double alpha = vol_alpha(t, hyper_.g_factor, horizon_);
  const double beta = vol_beta(t, hyper_.g_factor, horizon_, max_actions_, iota_, hyper_.bonus_c);
  const double eta = vol_eta(t, hyper_.g_factor, horizon_, max_actions_);

  const double v_next = (h + 1 < horizon_) ? value_[h + 1][s_next] : 0.0;
  value_[h][s] = (1.0 - alpha) * value_[h][s] + alpha * (ret + v_next + beta);
  if (hyper_.clip_values)
    value_[h][s] = std::clamp(value_[h][s], 0.0, static_cast<double>(horizon_ - h));

  const double sampled_loss =
      (horizon_ - ret - v_next) / (policy_.probs[h][s][a] + eta);
  auto& l_row = loss_[h][s];
  for (int ap = 0; ap < action_sizes_[h]; ++ap) {
    double inst = (ap == a) ? sampled_loss : 0.0;
    l_row[ap] = (1.0 - alpha) * l_row[ap] + alpha * inst;
  }

  std::vector<double> z(l_row.size());
  for (size_t ap = 0; ap < l_row.size(); ++ap) z[ap] = -eta * l_row[ap] / alpha;
  policy_.probs[h][s] = exponential_weights(z);
}

nlohmann::json VolLearner::snapshot_json() const {
  return nlohmann::json{{"value", value_},
                        {"loss", loss_},
                        {"visits", visits_},
                        {"policy", policy_.probs}};
}

DoublingLearner::DoublingLearner(Factory factory) : factory_(std::move(factory)) {
  inner_ = factory_(1);
  epoch_ = 0;
}

void DoublingLearner::begin_episode(std::int64_t episode, int initial_state) {
  // Epoch j spans episodes [2^j, 2^{j+1}).
  std::int64_t epoch = 0;
  while ((2LL << epoch) <= episode) ++epoch;
  if (epoch != epoch_) {
    epoch_ = epoch;
    inner_ = factory_(1LL << epoch);
  }
  inner_->begin_episode(episode, initial_state);
}

DoublingLearner make_doubling_vol(int horizon, std::vector<int> state_sizes,
                                  std::vector<int> action_sizes, VolHyper base_hyper) {
  int s_max = 1, a_max = 1;
  for (int h = 0; h < horizon; ++h) {
    s_max = std::max(s_max, state_sizes[h]);
    a_max = std::max(a_max, action_sizes[h]);
  }
  return DoublingLearner([=](std::int64_t epoch_episodes) {
    VolHyper hyper = base_hyper;
    hyper.episodes = epoch_episodes;
    hyper.g_factor = choose_g_factor(epoch_episodes, horizon, s_max, a_max);
    return std::make_unique<VolLearner>(horizon, state_sizes, action_sizes, hyper);
  });
}

}  // namespace mglab
