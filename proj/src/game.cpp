#include "mglab/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mglab/common.hpp"

namespace mglab {

namespace {
constexpr double kStochasticTol = 1e-12;
constexpr int kJointActionCap = 1 << 20;
}  // namespace

MarkovPolicy MarkovPolicy::uniform(int horizon, const std::vector<int>& state_sizes,
                                   const std::vector<int>& action_sizes) {
  MarkovPolicy p;
  p.probs.resize(horizon);
  for (int h = 0; h < horizon; ++h) {
    p.probs[h].assign(state_sizes[h], Dist(action_sizes[h], 1.0 / action_sizes[h]));
  }
  return p;
}

MarkovPolicy MarkovPolicy::deterministic(const std::vector<std::vector<int>>& actions,
                                         const std::vector<int>& action_sizes) {
  MarkovPolicy p;
  p.probs.resize(actions.size());
  for (size_t h = 0; h < actions.size(); ++h) {
    p.probs[h].resize(actions[h].size());
    for (size_t s = 0; s < actions[h].size(); ++s) {
      Dist d(action_sizes[h], 0.0);
      d.at(actions[h][s]) = 1.0;
      p.probs[h][s] = std::move(d);
    }
  }
  return p;
}

int GeneralSumGame::joint_actions_at(int h) const {
  int prod = 1;
  for (int i = 0; i < num_players; ++i) prod *= action_sizes[i][h];
  return prod;
}

std::string Violation::describe() const {
  return strf("%s at (h=%d, s=%d, a=%d, b=%d)", what.c_str(), h, s, a, b);
}

std::vector<Violation> validate_game(const MarkovGame& g) {
  std::vector<Violation> out;
  auto add = [&](std::string what, int h, int s, int a, int b) {
    out.push_back(Violation{std::move(what), h, s, a, b});
  };
  const int H = g.horizon;
  if (H < 1) {
    add("horizon must be >= 1", -1, -1, -1, -1);
    return out;
  }
  if (static_cast<int>(g.state_sizes.size()) != H + 1)
    add("state_sizes must have horizon+1 entries", -1, -1, -1, -1);
  if (static_cast<int>(g.max_action_sizes.size()) != H ||
      static_cast<int>(g.min_action_sizes.size()) != H)
    add("action size lists must have horizon entries", -1, -1, -1, -1);
  if (!out.empty()) return out;
  for (int h = 0; h <= H; ++h)
    if (g.state_sizes[h] < 1) add("state count must be >= 1", h, -1, -1, -1);
  for (int h = 0; h < H; ++h) {
    if (g.max_action_sizes[h] < 1) add("max-player action count must be >= 1", h, -1, -1, -1);
    if (g.min_action_sizes[h] < 1) add("min-player action count must be >= 1", h, -1, -1, -1);
  }
  if (!out.empty()) return out;

  if (static_cast<int>(g.transition.size()) != H || static_cast<int>(g.ret.size()) != H) {
    add("transition/return tensors must have horizon steps", -1, -1, -1, -1);
    return out;
  }
  const bool ber = g.has_bernoulli();
  if (ber && static_cast<int>(g.bernoulli.size()) != H) {
    add("bernoulli flags must cover every step when present", -1, -1, -1, -1);
    return out;
  }
  for (int h = 0; h < H; ++h) {
    const int S = g.state_sizes[h], A = g.max_action_sizes[h], B = g.min_action_sizes[h];
    const int Sn = g.state_sizes[h + 1];
    if (static_cast<int>(g.transition[h].size()) != S ||
        static_cast<int>(g.ret[h].size()) != S ||
        (ber && static_cast<int>(g.bernoulli[h].size()) != S)) {
      add("tensor state dimension mismatch", h, -1, -1, -1);
      continue;
    }
    for (int s = 0; s < S; ++s) {
      if (static_cast<int>(g.transition[h][s].size()) != A ||
          static_cast<int>(g.ret[h][s].size()) != A ||
          (ber && static_cast<int>(g.bernoulli[h][s].size()) != A)) {
        add("tensor max-action dimension mismatch", h, s, -1, -1);
        continue;
      }
      for (int a = 0; a < A; ++a) {
        if (static_cast<int>(g.transition[h][s][a].size()) != B ||
            static_cast<int>(g.ret[h][s][a].size()) != B ||
            (ber && static_cast<int>(g.bernoulli[h][s][a].size()) != B)) {
          add("tensor min-action dimension mismatch", h, s, a, -1);
          continue;
        }
        for (int b = 0; b < B; ++b) {
          const Dist& row = g.transition[h][s][a][b];
          if (static_cast<int>(row.size()) != Sn) {
            add("transition row length mismatch", h, s, a, b);
            continue;
          }
          double sum = 0.0;
          bool neg = false;
          for (double p : row) {
            if (!(p >= 0.0)) neg = true;
            sum += p;
          }
          if (neg) add("transition row has negative entry", h, s, a, b);
          if (std::abs(sum - 1.0) > kStochasticTol)
            add(strf("transition row sums to %.17g, not 1", sum), h, s, a, b);
          double r = g.ret[h][s][a][b];
          if (!(r >= 0.0 && r <= 1.0))
            add(strf("return %.17g outside [0,1]", r), h, s, a, b);
        }
      }
    }
  }
  return out;
}

std::vector<Violation> validate_policy(const MarkovPolicy& pol, int horizon,
                                       const std::vector<int>& state_sizes,
                                       const std::vector<int>& action_sizes) {
  std::vector<Violation> out;
  if (pol.steps() != horizon) {
    out.push_back(Violation{"policy must have one step per horizon step", -1, -1, -1, -1});
    return out;
  }
  for (int h = 0; h < horizon; ++h) {
    if (static_cast<int>(pol.probs[h].size()) != state_sizes[h]) {
      out.push_back(Violation{"policy state dimension mismatch", h, -1, -1, -1});
      continue;
    }
    for (int s = 0; s < state_sizes[h]; ++s) {
      const Dist& d = pol.probs[h][s];
      if (static_cast<int>(d.size()) != action_sizes[h]) {
        out.push_back(Violation{"policy action dimension mismatch", h, s, -1, -1});
        continue;
      }
      double sum = 0.0;
      bool neg = false;
      for (double p : d) {
        if (!(p >= 0.0)) neg = true;
        sum += p;
      }
      if (neg) out.push_back(Violation{"policy has negative probability", h, s, -1, -1});
      if (std::abs(sum - 1.0) > kStochasticTol)
        out.push_back(Violation{strf("policy row sums to %.17g, not 1", sum), h, s, -1, -1});
    }
  }
  return out;
}

StepOutcome sample_step(const MarkovGame& g, int h, int s, int a, int b, Rng& rng) {
  if (h < 0 || h >= g.horizon)
    throw std::out_of_range(strf("sample_step: step h=%d outside [0,%d)", h, g.horizon));
  if (s < 0 || s >= g.state_sizes[h])
    throw std::out_of_range(strf("sample_step: state s=%d outside [0,%d) at h=%d", s,
                                 g.state_sizes[h], h));
  if (a < 0 || a >= g.max_action_sizes[h])
    throw std::out_of_range(strf("sample_step: max-action a=%d outside [0,%d) at h=%d", a,
                                 g.max_action_sizes[h], h));
  if (b < 0 || b >= g.min_action_sizes[h])
    throw std::out_of_range(strf("sample_step: min-action b=%d outside [0,%d) at h=%d", b,
                                 g.min_action_sizes[h], h));
  StepOutcome out;
  out.next_state = rng.sample(g.transition[h][s][a][b]);
  double r = g.ret[h][s][a][b];
  if (g.has_bernoulli() && g.bernoulli[h][s][a][b]) {
    out.ret = rng.bernoulli(r) ? 1.0 : 0.0;
  } else {
    out.ret = r;
  }
  return out;
}

namespace {

Dist dirichlet_row(int n, Rng& rng) {
  Dist row(n);
  double sum = 0.0;
  for (double& v : row) {
    v = rng.exponential();
    sum += v;
  }
  for (double& v : row) v /= sum;
  // Renormalize exactly against FP drift so validate_game's 1e-12 check holds.
  double s2 = 0.0;
  for (double v : row) s2 += v;
  for (double& v : row) v /= s2;
  return row;
}

}  // namespace

MarkovGame random_game(int horizon, int states, int max_actions, int min_actions,
                       Rng& rng, ReturnMode mode) {
  if (horizon < 1 || states < 1 || max_actions < 1 || min_actions < 1)
    throw std::invalid_argument("random_game: all sizes must be >= 1");
  MarkovGame g;
  g.horizon = horizon;
  g.state_sizes.assign(horizon + 1, states);
  g.max_action_sizes.assign(horizon, max_actions);
  g.min_action_sizes.assign(horizon, min_actions);
  g.transition.resize(horizon);
  g.ret.resize(horizon);
  if (mode == ReturnMode::bernoulli_terminal) g.bernoulli.resize(horizon);
  for (int h = 0; h < horizon; ++h) {
    g.transition[h].resize(states);
    g.ret[h].resize(states);
    if (mode == ReturnMode::bernoulli_terminal) g.bernoulli[h].resize(states);
    for (int s = 0; s < states; ++s) {
      g.transition[h][s].resize(max_actions);
      g.ret[h][s].resize(max_actions);
      if (mode == ReturnMode::bernoulli_terminal) g.bernoulli[h][s].resize(max_actions);
      for (int a = 0; a < max_actions; ++a) {
        g.transition[h][s][a].resize(min_actions);
        g.ret[h][s][a].resize(min_actions);
        if (mode == ReturnMode::bernoulli_terminal)
          g.bernoulli[h][s][a].assign(min_actions, h == horizon - 1 ? 1 : 0);
        for (int b = 0; b < min_actions; ++b) {
          g.transition[h][s][a][b] = dirichlet_row(g.state_sizes[h + 1], rng);
          g.ret[h][s][a][b] = rng.uniform01();
        }
      }
    }
  }
  return g;
}

GeneralSumGame random_general_sum_game(int horizon, int states,
                                       const std::vector<int>& actions_per_player,
                                       Rng& rng) {
  if (horizon < 1 || states < 1 || actions_per_player.size() < 2)
    throw std::invalid_argument("random_general_sum_game: need horizon,states >= 1 and m >= 2");
  GeneralSumGame g;
  g.horizon = horizon;
  g.num_players = static_cast<int>(actions_per_player.size());
  g.state_sizes.assign(horizon + 1, states);
  g.action_sizes.resize(g.num_players);
  for (int i = 0; i < g.num_players; ++i) {
    if (actions_per_player[i] < 1)
      throw std::invalid_argument("random_general_sum_game: action sizes must be >= 1");
    g.action_sizes[i].assign(horizon, actions_per_player[i]);
  }
  g.transition.resize(horizon);
  g.returns.assign(g.num_players, {});
  for (int i = 0; i < g.num_players; ++i) g.returns[i].resize(horizon);
  for (int h = 0; h < horizon; ++h) {
    const int J = g.joint_actions_at(h);
    g.transition[h].resize(states);
    for (int i = 0; i < g.num_players; ++i) g.returns[i][h].resize(states);
    for (int s = 0; s < states; ++s) {
      g.transition[h][s].resize(J);
      for (int i = 0; i < g.num_players; ++i) g.returns[i][h][s].resize(J);
      for (int j = 0; j < J; ++j) {
        g.transition[h][s][j] = dirichlet_row(states, rng);
        for (int i = 0; i < g.num_players; ++i) g.returns[i][h][s][j] = rng.uniform01();
      }
    }
  }
  return g;
}

int JointActionCodec::size() const {
  int prod = 1;
  for (int r : radices) prod *= r;
  return prod;
}

int JointActionCodec::encode(const std::vector<int>& digits) const {
  if (digits.size() != radices.size())
    throw std::invalid_argument("JointActionCodec::encode: digit count mismatch");
  int flat = 0, stride = 1;
  for (size_t i = 0; i < radices.size(); ++i) {
    if (digits[i] < 0 || digits[i] >= radices[i])
      throw std::out_of_range(strf("JointActionCodec::encode: digit %zu out of range", i));
    flat += digits[i] * stride;
    stride *= radices[i];
  }
  return flat;
}

std::vector<int> JointActionCodec::decode(int flat) const {
  if (flat < 0 || flat >= size())
    throw std::out_of_range("JointActionCodec::decode: index out of range");
  std::vector<int> digits(radices.size());
  for (size_t i = 0; i < radices.size(); ++i) {
    digits[i] = flat % radices[i];
    flat /= radices[i];
  }
  return digits;
}

Player1View to_player1_view(const GeneralSumGame& g) {
  if (g.num_players < 2)
    throw std::invalid_argument("to_player1_view: need at least 2 players");
  Player1View view;
  view.codec.resize(g.horizon);
  MarkovGame& out = view.game;
  out.horizon = g.horizon;
  out.state_sizes = g.state_sizes;
  out.max_action_sizes.resize(g.horizon);
  out.min_action_sizes.resize(g.horizon);
  for (int h = 0; h < g.horizon; ++h) {
    out.max_action_sizes[h] = g.action_sizes[0][h];
    long long prod = 1;
    JointActionCodec codec;
    for (int i = 1; i < g.num_players; ++i) {
      prod *= g.action_sizes[i][h];
      if (prod > kJointActionCap)
        throw CapacityError(strf(
            "to_player1_view: opponent joint action space exceeds %d at step %d",
            kJointActionCap, h));
      codec.radices.push_back(g.action_sizes[i][h]);
    }
    view.codec[h] = codec;
    out.min_action_sizes[h] = static_cast<int>(prod);
  }
  out.transition.resize(g.horizon);
  out.ret.resize(g.horizon);
  for (int h = 0; h < g.horizon; ++h) {
    const int S = g.state_sizes[h];
    const int A = out.max_action_sizes[h];
    const int B = out.min_action_sizes[h];
    out.transition[h].resize(S);
    out.ret[h].resize(S);
    for (int s = 0; s < S; ++s) {
      out.transition[h][s].assign(A, std::vector<Dist>(B));
      out.ret[h][s].assign(A, std::vector<double>(B));
      for (int a = 0; a < A; ++a) {
        for (int b = 0; b < B; ++b) {
          // Player 0 is the least significant digit of the stored joint index.
          int joint = a + A * b;
          out.transition[h][s][a][b] = g.transition[h][s][joint];
          out.ret[h][s][a][b] = g.returns[0][h][s][joint];
        }
      }
    }
  }
  return view;
}

MarkovGame role_swapped(const MarkovGame& g) {
  MarkovGame out;
  out.horizon = g.horizon;
  out.state_sizes = g.state_sizes;
  out.max_action_sizes = g.min_action_sizes;
  out.min_action_sizes = g.max_action_sizes;
  out.transition.resize(g.horizon);
  out.ret.resize(g.horizon);
  if (g.has_bernoulli()) out.bernoulli.resize(g.horizon);
  for (int h = 0; h < g.horizon; ++h) {
    const int S = g.state_sizes[h];
    const int A = g.max_action_sizes[h], B = g.min_action_sizes[h];
    out.transition[h].resize(S);
    out.ret[h].resize(S);
    if (g.has_bernoulli()) out.bernoulli[h].resize(S);
    for (int s = 0; s < S; ++s) {
      out.transition[h][s].assign(B, std::vector<Dist>(A));
      out.ret[h][s].assign(B, std::vector<double>(A));
      if (g.has_bernoulli())
        out.bernoulli[h][s].assign(B, std::vector<std::uint8_t>(A));
      for (int a = 0; a < A; ++a) {
        for (int b = 0; b < B; ++b) {
          out.transition[h][s][b][a] = g.transition[h][s][a][b];
          out.ret[h][s][b][a] = 1.0 - g.ret[h][s][a][b];
          if (g.has_bernoulli()) out.bernoulli[h][s][b][a] = g.bernoulli[h][s][a][b];
        }
      }
    }
  }
  return out;
}

MarkovGame duplicate_min_actions(const MarkovGame& g, int factor) {
  if (factor < 1) throw std::invalid_argument("duplicate_min_actions: factor must be >= 1");
  MarkovGame out = g;
  for (int h = 0; h < g.horizon; ++h) {
    const int B = g.min_action_sizes[h];
    out.min_action_sizes[h] = B * factor;
    for (int s = 0; s < g.state_sizes[h]; ++s) {
      for (int a = 0; a < g.max_action_sizes[h]; ++a) {
        out.transition[h][s][a].resize(B * factor);
        out.ret[h][s][a].resize(B * factor);
        if (g.has_bernoulli()) out.bernoulli[h][s][a].resize(B * factor);
        for (int b = B; b < B * factor; ++b) {
          out.transition[h][s][a][b] = g.transition[h][s][a][b % B];
          out.ret[h][s][a][b] = g.ret[h][s][a][b % B];
          if (g.has_bernoulli()) out.bernoulli[h][s][a][b] = g.bernoulli[h][s][a][b % B];
        }
      }
    }
  }
  return out;
}

MarkovPolicy spread_policy_over_duplicates(const MarkovPolicy& pol, int factor) {
  MarkovPolicy out = pol;
  for (auto& layer : out.probs) {
    for (auto& d : layer) {
      const int B = static_cast<int>(d.size());
      Dist wide(B * factor);
      for (int b = 0; b < B * factor; ++b) wide[b] = d[b % B] / factor;
      d = std::move(wide);
    }
  }
  return out;
}

}  // namespace mglab
