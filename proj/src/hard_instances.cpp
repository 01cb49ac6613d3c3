#include "mglab/hard_instances.hpp"

#include <algorithm>
#include <cmath>

#include "mglab/common.hpp"

namespace mglab {

namespace {

void check_spec(int depth, const std::vector<int>& x_bits, const std::vector<int>* y_bits,
                double epsilon) {
  if (depth < 1) throw std::invalid_argument("lock: depth must be >= 1");
  if (static_cast<int>(x_bits.size()) != depth)
    throw std::invalid_argument("lock: X must have one bit per layer");
  if (y_bits && static_cast<int>(y_bits->size()) != depth)
    throw std::invalid_argument("lock: Y must have one bit per layer");
  for (int v : x_bits)
    if (v != 0 && v != 1) throw std::invalid_argument("lock: X bits must be 0/1");
  if (y_bits)
    for (int v : *y_bits)
      if (v != 0 && v != 1) throw std::invalid_argument("lock: Y bits must be 0/1");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("lock: epsilon must lie in (0,1)");
}

MarkovGame lock_shell(int depth, int min_actions) {
  MarkovGame g;
  g.horizon = depth + 1;
  g.state_sizes.assign(depth + 2, 2);
  g.state_sizes.front() = 1;
  g.state_sizes.back() = 1;
  g.max_action_sizes.assign(depth + 1, 2);
  g.min_action_sizes.assign(depth + 1, min_actions);
  g.transition.resize(g.horizon);
  g.ret.resize(g.horizon);
  g.bernoulli.resize(g.horizon);
  for (int h = 0; h < g.horizon; ++h) {
    int s_count = g.state_sizes[h];
    g.transition[h].assign(
        s_count, std::vector<std::vector<Dist>>(
                     2, std::vector<Dist>(min_actions, Dist(g.state_sizes[h + 1], 0.0))));
    g.ret[h].assign(s_count, std::vector<std::vector<double>>(
                                 2, std::vector<double>(min_actions, 0.0)));
    g.bernoulli[h].assign(s_count,
                          std::vector<std::vector<std::uint8_t>>(
                              2, std::vector<std::uint8_t>(min_actions, 0)));
  }
  return g;
}

}  // namespace

MarkovGame combination_lock_mdp(const HardInstanceSpec& spec) {
  check_spec(spec.depth, spec.x_bits, &spec.y_bits, spec.epsilon);
  const int depth = spec.depth;
  MarkovGame g = lock_shell(depth, 1);

  // Initial branch: uniform over the two layer-1 parities, any action.
  for (int a = 0; a < 2; ++a) g.transition[0][0][a][0] = {0.5, 0.5};

  // Steering layers l = 1..depth-1 (transition into layer l+1).
  for (int l = 1; l < depth; ++l) {
    int y = spec.y_bits[l - 1], y_next = spec.y_bits[l];
    int correct = spec.x_bits[l - 1] ^ y;
    for (int w = 0; w < 2; ++w) {
      for (int a = 0; a < 2; ++a) {
        int next = (w == y && a == correct) ? y_next : 1 - y_next;
        g.transition[l][w][a][0][next] = 1.0;
      }
    }
  }

  // Terminal step: Bernoulli return by state parity, any action.
  for (int w = 0; w < 2; ++w) {
    for (int a = 0; a < 2; ++a) {
      g.transition[depth][w][a][0][0] = 1.0;
      g.ret[depth][w][a][0] = (w == spec.y_bits[depth - 1]) ? 0.5 + spec.epsilon
                                                            : 0.5 - spec.epsilon;
      g.bernoulli[depth][w][a][0] = 1;
    }
  }
  return g;
}

MarkovPolicy lock_optimal_policy(const HardInstanceSpec& spec) {
  check_spec(spec.depth, spec.x_bits, nullptr, spec.epsilon);
  std::vector<std::vector<int>> actions(spec.depth + 1);
  actions[0] = {0};
  for (int l = 1; l <= spec.depth; ++l)
    actions[l] = {spec.x_bits[l - 1] ^ 0, spec.x_bits[l - 1] ^ 1};
  return MarkovPolicy::deterministic(actions, std::vector<int>(spec.depth + 1, 2));
}

MarkovPolicy lock_deviating_policy(const HardInstanceSpec& spec, int deviate_layer) {
  check_spec(spec.depth, spec.x_bits, &spec.y_bits, spec.epsilon);
  if (deviate_layer < 1 || deviate_layer >= spec.depth)
    throw std::invalid_argument("lock_deviating_policy: layer must steer (1..depth-1)");
  MarkovPolicy pol = lock_optimal_policy(spec);
  int good = spec.y_bits.at(deviate_layer - 1);
  std::swap(pol.probs[deviate_layer][good][0], pol.probs[deviate_layer][good][1]);
  return pol;
}

MarkovGame hard_markov_game(int depth, const std::vector<int>& x_bits, double epsilon) {
  check_spec(depth, x_bits, nullptr, epsilon);
  MarkovGame g = lock_shell(depth, 4);

  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 4; ++b) g.transition[0][0][a][b] = {0.5, 0.5};

  for (int l = 1; l < depth; ++l) {
    for (int w = 0; w < 2; ++w) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 4; ++b) {
          bool flip;
          switch (b) {
            case 0: flip = false; break;
            case 1: flip = true; break;
            case 2: flip = (a == 1); break;
            default: flip = (a == 0); break;
          }
          g.transition[l][w][a][b][flip ? 1 - w : w] = 1.0;
        }
      }
    }
  }

  for (int w = 0; w < 2; ++w) {
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 4; ++b) {
        g.transition[depth][w][a][b][0] = 1.0;
        g.ret[depth][w][a][b] = (w == b % 2) ? 0.5 + epsilon : 0.5 - epsilon;
        g.bernoulli[depth][w][a][b] = 1;
      }
    }
  }
  return g;
}

MarkovPolicy hard_game_min_policy(int depth, const std::vector<int>& x_bits,
                                  const std::vector<int>& y_bits) {
  check_spec(depth, x_bits, &y_bits, 0.5);
  // Pick b by enumerating the four steering columns against the lock's
  // required successor map at each (layer, parity).
  auto flips = [](int a, int b) {
    switch (b) {
      case 0: return false;
      case 1: return true;
      case 2: return a == 1;
      default: return a == 0;
    }
  };
  std::vector<std::vector<int>> choice(depth + 1);
  choice[0] = {0};
  for (int l = 1; l < depth; ++l) {
    int y = y_bits[l - 1], y_next = y_bits[l];
    int correct = x_bits[l - 1] ^ y;
    choice[l].assign(2, -1);
    for (int w = 0; w < 2; ++w) {
      for (int b = 0; b < 4; ++b) {
        bool ok = true;
        for (int a = 0; a < 2; ++a) {
          int lock_next = (w == y && a == correct) ? y_next : 1 - y_next;
          int game_next = flips(a, b) ? 1 - w : w;
          if (lock_next != game_next) ok = false;
        }
        if (ok) {
          choice[l][w] = b;
          break;
        }
      }
      if (choice[l][w] < 0)
        throw std::logic_error("hard_game_min_policy: no steering action reproduces the lock");
    }
  }
  choice[depth] = {y_bits[depth - 1], y_bits[depth - 1]};
  return MarkovPolicy::deterministic(choice, std::vector<int>(depth + 1, 4));
}

double epsilon_hk(int depth, std::int64_t episodes) {
  if (depth < 1 || episodes < 1)
    throw std::invalid_argument("epsilon_hk: depth and episodes must be >= 1");
  return std::min(std::sqrt(std::ldexp(1.0, depth) / static_cast<double>(episodes)), 0.25);
}

BanditReductionResult bandit_reduction_run(Learner& learner, const std::vector<int>& x_bits,
                                           int depth, std::int64_t episodes, Rng& rng) {
  check_spec(depth, x_bits, nullptr, 0.5);
  if (learner.informed())
    throw std::invalid_argument("bandit_reduction_run: the learner must be an unknown-game learner");
  BanditReductionResult out;
  out.epsilon = epsilon_hk(depth, episodes);
  out.rewards.reserve(episodes);
  for (std::int64_t k = 1; k <= episodes; ++k) {
    std::vector<int> y(depth);
    for (int& bit : y) bit = rng.uniform_int(2);

    learner.begin_episode(k, 0);
    int a0 = learner.act(0, 0, rng);
    learner.observe(0, 0, a0, 0.0, y[0]);

    std::vector<int> actions(depth);
    for (int l = 1; l < depth; ++l) {
      actions[l - 1] = learner.act(l, y[l - 1], rng);
      learner.observe(l, y[l - 1], actions[l - 1], 0.0, y[l]);
    }
    actions[depth - 1] = learner.act(depth, y[depth - 1], rng);

    std::vector<int> arm(depth);
    bool hit = true;
    for (int i = 0; i < depth; ++i) {
      arm[i] = actions[i] ^ y[i];
      if (arm[i] != x_bits[i]) hit = false;
    }
    double p = hit ? 0.5 : 0.5 - out.epsilon;
    double reward = rng.bernoulli(p) ? 1.0 : 0.0;
    learner.observe(depth, y[depth - 1], actions[depth - 1], reward, 0);

    out.rewards.push_back(reward);
    out.arms.push_back(std::move(arm));
    out.y_draws.push_back(std::move(y));
  }
  return out;
}

namespace {

void check_behavior(int depth, const MarkovPolicy& behavior) {
  if (behavior.steps() != depth + 1)
    throw std::invalid_argument("atom enumeration: behavior policy must cover the lock shape");
}

void add_atom(AtomDistribution& dist, std::vector<int> traj, std::vector<int> acts,
              double p_outcome, double p_reward_one) {
  if (p_outcome == 0.0) return;
  OutcomeAtom one{traj, acts, 1};
  OutcomeAtom zero{std::move(traj), std::move(acts), 0};
  dist[one] += p_outcome * p_reward_one;
  dist[zero] += p_outcome * (1.0 - p_reward_one);
}

}  // namespace

AtomDistribution reduction_atom_distribution(int depth, const std::vector<int>& x_bits,
                                             double epsilon, const MarkovPolicy& behavior) {
  check_spec(depth, x_bits, nullptr, epsilon);
  check_behavior(depth, behavior);
  AtomDistribution dist;
  const int n = 1 << depth;
  for (int zc = 0; zc < n; ++zc) {
    std::vector<int> z(depth);
    for (int i = 0; i < depth; ++i) z[i] = (zc >> i) & 1;
    for (int ac = 0; ac < n; ++ac) {
      std::vector<int> a(depth);
      double p = 1.0 / n;  // the shown trajectory is the uniform Y draw
      bool hit = true;
      for (int i = 0; i < depth; ++i) {
        a[i] = (ac >> i) & 1;
        p *= behavior.probs[i + 1][z[i]][a[i]];
        if ((a[i] ^ z[i]) != x_bits[i]) hit = false;
      }
      add_atom(dist, z, a, p, hit ? 0.5 : 0.5 - epsilon);
    }
  }
  return dist;
}

AtomDistribution direct_lock_atom_distribution(int depth, const std::vector<int>& x_bits,
                                               double epsilon, const MarkovPolicy& behavior) {
  check_spec(depth, x_bits, nullptr, epsilon);
  check_behavior(depth, behavior);
  AtomDistribution dist;
  const int n = 1 << depth;
  for (int yc = 0; yc < n; ++yc) {
    std::vector<int> y(depth);
    for (int i = 0; i < depth; ++i) y[i] = (yc >> i) & 1;
    for (int z1 = 0; z1 < 2; ++z1) {
      // Enumerate action strings; the visited trajectory is determined by
      // (z1, actions) once Y is fixed.
      for (int ac = 0; ac < n; ++ac) {
        std::vector<int> a(depth), z(depth);
        double p = (1.0 / n) * 0.5;
        z[0] = z1;
        for (int i = 0; i < depth; ++i) {
          a[i] = (ac >> i) & 1;
          p *= behavior.probs[i + 1][z[i]][a[i]];
          if (i + 1 < depth) {
            bool on_path = (z[i] == y[i]) && (a[i] == (x_bits[i] ^ y[i]));
            z[i + 1] = on_path ? y[i + 1] : 1 - y[i + 1];
          }
        }
        double p_one = (z[depth - 1] == y[depth - 1]) ? 0.5 + epsilon : 0.5 - epsilon;
        add_atom(dist, z, a, p, p_one);
      }
    }
  }
  return dist;
}

}  // namespace mglab
