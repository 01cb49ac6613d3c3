#include "mglab/value_oracle.hpp"

#include <algorithm>
#include <cmath>

#include "mglab/common.hpp"

namespace mglab {

namespace {

ValueTable zero_table(const MarkovGame& g) {
  ValueTable t;
  t.values.resize(g.horizon + 1);
  for (int h = 0; h <= g.horizon; ++h) t.values[h].assign(g.state_sizes[h], 0.0);
  return t;
}

void check_policy_dims(const MarkovGame& g, const MarkovPolicy& pol,
                       const std::vector<int>& action_sizes, const char* who) {
  if (pol.steps() != g.horizon)
    throw std::invalid_argument(strf("%s policy has %d steps, game has %d", who,
                                     pol.steps(), g.horizon));
  for (int h = 0; h < g.horizon; ++h) {
    if (static_cast<int>(pol.probs[h].size()) != g.state_sizes[h])
      throw std::invalid_argument(strf("%s policy state dimension mismatch at step %d", who, h));
    for (int s = 0; s < g.state_sizes[h]; ++s)
      if (static_cast<int>(pol.probs[h][s].size()) != action_sizes[h])
        throw std::invalid_argument(
            strf("%s policy action dimension mismatch at (h=%d, s=%d)", who, h, s));
  }
}

double expected_next(const MarkovGame& g, int h, int s, int a, int b,
                     const std::vector<double>& v_next) {
  double e = g.ret[h][s][a][b];
  const Dist& row = g.transition[h][s][a][b];
  for (size_t sp = 0; sp < row.size(); ++sp) e += row[sp] * v_next[sp];
  return e;
}

}  // namespace

MinimaxResult minimax_values(const MarkovGame& g, double tol) {
  MinimaxResult res;
  res.value = zero_table(g);
  res.max_policy.probs.resize(g.horizon);
  res.min_policy.probs.resize(g.horizon);
  for (int h = g.horizon - 1; h >= 0; --h) {
    const int S = g.state_sizes[h], A = g.max_action_sizes[h], B = g.min_action_sizes[h];
    res.max_policy.probs[h].resize(S);
    res.min_policy.probs[h].resize(S);
    for (int s = 0; s < S; ++s) {
      MatrixGame m;
      m.payoff.assign(A, std::vector<double>(B));
      for (int a = 0; a < A; ++a)
        for (int b = 0; b < B; ++b)
          m.payoff[a][b] = expected_next(g, h, s, a, b, res.value.values[h + 1]);
      NashCertificate cert = solve_zero_sum(m, tol);
      if (!cert.converged)
        throw ConvergenceError(strf(
            "minimax_values: solver gap %.3g > tol %.3g at (h=%d, s=%d)", cert.gap, tol, h, s));
      res.value.values[h][s] = cert.value;
      res.max_policy.probs[h][s] = cert.row_strategy;
      res.min_policy.probs[h][s] = cert.col_strategy;
    }
  }
  return res;
}

ValueTable evaluate_pair(const MarkovGame& g, const MarkovPolicy& mu,
                         const MarkovPolicy& nu) {
  check_policy_dims(g, mu, g.max_action_sizes, "max");
  check_policy_dims(g, nu, g.min_action_sizes, "min");
  ValueTable t = zero_table(g);
  for (int h = g.horizon - 1; h >= 0; --h) {
    for (int s = 0; s < g.state_sizes[h]; ++s) {
      double v = 0.0;
      for (int a = 0; a < g.max_action_sizes[h]; ++a) {
        double pa = mu.probs[h][s][a];
        if (pa == 0.0) continue;
        for (int b = 0; b < g.min_action_sizes[h]; ++b) {
          double pb = nu.probs[h][s][b];
          if (pb == 0.0) continue;
          v += pa * pb * expected_next(g, h, s, a, b, t.values[h + 1]);
        }
      }
      t.values[h][s] = v;
    }
  }
  return t;
}

BestResponse best_response_value(const MarkovGame& g, const MarkovPolicy& nu) {
  check_policy_dims(g, nu, g.min_action_sizes, "min");
  BestResponse res;
  res.value = zero_table(g);
  std::vector<std::vector<int>> actions(g.horizon);
  for (int h = g.horizon - 1; h >= 0; --h) {
    actions[h].assign(g.state_sizes[h], 0);
    for (int s = 0; s < g.state_sizes[h]; ++s) {
      double best = -1.0;
      int best_a = 0;
      for (int a = 0; a < g.max_action_sizes[h]; ++a) {
        double q = 0.0;
        for (int b = 0; b < g.min_action_sizes[h]; ++b) {
          double pb = nu.probs[h][s][b];
          if (pb == 0.0) continue;
          q += pb * expected_next(g, h, s, a, b, res.value.values[h + 1]);
        }
        if (a == 0 || q > best) {
          best = q;
          best_a = a;
        }
      }
      res.value.values[h][s] = best;
      actions[h][s] = best_a;
    }
  }
  res.policy = MarkovPolicy::deterministic(actions, g.max_action_sizes);
  return res;
}

BestResponse min_best_response_value(const MarkovGame& g, const MarkovPolicy& mu) {
  MarkovGame swapped = role_swapped(g);
  BestResponse br = best_response_value(swapped, mu);
  BestResponse res;
  res.policy = std::move(br.policy);
  res.value = std::move(br.value);
  for (int h = 0; h <= g.horizon; ++h)
    for (double& v : res.value.values[h]) v = (g.horizon - h) - v;
  return res;
}

namespace {

// Scratch for the hindsight search: per-episode value tables under a
// partially fixed deterministic policy, free decisions relaxed to
// episode-specific best responses.
struct HindsightSearch {
  const MarkovGame& g;
  const std::vector<MarkovPolicy>& opps;
  const std::vector<int>& inits;
  std::vector<std::pair<int, int>> decisions;  // (h, s), h ascending
  std::vector<std::vector<int>> fixed;         // [h][s], -1 = free
  double prune_eps = 0.0;
  std::int64_t nodes = 0;
  std::int64_t node_budget = 0;
  double best_total = 0.0;
  std::vector<std::vector<int>> best_actions;

  explicit HindsightSearch(const MarkovGame& game, const std::vector<MarkovPolicy>& o,
                           const std::vector<int>& i)
      : g(game), opps(o), inits(i) {}

  double episode_q(int k, int h, int s, int a, const std::vector<double>& w_next) const {
    double q = 0.0;
    const Dist& nb = opps[k].probs[h][s];
    for (int b = 0; b < g.min_action_sizes[h]; ++b) {
      if (nb[b] == 0.0) continue;
      q += nb[b] * expected_next(g, h, s, a, b, w_next);
    }
    return q;
  }

  // Upper bound: each episode best-responds independently wherever the
  // policy is not yet fixed. Exact when every decision is fixed.
  double relaxed_bound() const {
    const int K = static_cast<int>(opps.size());
    double total = 0.0;
    std::vector<std::vector<double>> w(K), w_next(K);
    for (int k = 0; k < K; ++k) w_next[k].assign(g.state_sizes[g.horizon], 0.0);
    for (int h = g.horizon - 1; h >= 0; --h) {
      for (int k = 0; k < K; ++k) w[k].assign(g.state_sizes[h], 0.0);
      for (int s = 0; s < g.state_sizes[h]; ++s) {
        int forced = fixed[h][s];
        for (int k = 0; k < K; ++k) {
          if (forced >= 0) {
            w[k][s] = episode_q(k, h, s, forced, w_next[k]);
          } else {
            double best = 0.0;
            for (int a = 0; a < g.max_action_sizes[h]; ++a) {
              double q = episode_q(k, h, s, a, w_next[k]);
              if (a == 0 || q > best) best = q;
            }
            w[k][s] = best;
          }
        }
      }
      w.swap(w_next);
    }
    for (int k = 0; k < K; ++k) total += w_next[k][inits[k]];
    return total;
  }

  // Vector-valued backward induction on the unweighted K-sum; not optimal
  // in general but a strong incumbent, and exactly optimal whenever all
  // episodes agree on every argmax.
  void greedy_incumbent() {
    const int K = static_cast<int>(opps.size());
    std::vector<std::vector<int>> actions(g.horizon);
    std::vector<std::vector<double>> w(K), w_next(K);
    for (int k = 0; k < K; ++k) w_next[k].assign(g.state_sizes[g.horizon], 0.0);
    std::vector<double> qs(K);
    for (int h = g.horizon - 1; h >= 0; --h) {
      actions[h].assign(g.state_sizes[h], 0);
      for (int k = 0; k < K; ++k) w[k].assign(g.state_sizes[h], 0.0);
      for (int s = 0; s < g.state_sizes[h]; ++s) {
        double best_sum = 0.0;
        std::vector<double> best_qs(K);
        for (int a = 0; a < g.max_action_sizes[h]; ++a) {
          double sum = 0.0;
          for (int k = 0; k < K; ++k) {
            qs[k] = episode_q(k, h, s, a, w_next[k]);
            sum += qs[k];
          }
          if (a == 0 || sum > best_sum) {
            best_sum = sum;
            best_qs = qs;
            actions[h][s] = a;
          }
        }
        for (int k = 0; k < K; ++k) w[k][s] = best_qs[k];
      }
      w.swap(w_next);
    }
    double total = 0.0;
    for (int k = 0; k < K; ++k) total += w_next[k][inits[k]];
    best_total = total;
    best_actions = std::move(actions);
  }

  void dfs(size_t idx) {
    if (++nodes > node_budget)
      throw CapacityError(strf("best_policy_in_hindsight: node budget %lld exceeded",
                               static_cast<long long>(node_budget)));
    auto [h, s] = decisions[idx];
    const int A = g.max_action_sizes[h];
    std::vector<std::pair<double, int>> children;
    children.reserve(A);
    for (int a = 0; a < A; ++a) {
      fixed[h][s] = a;
      children.emplace_back(relaxed_bound(), a);
    }
    std::stable_sort(children.begin(), children.end(),
                     [](const auto& l, const auto& r) { return l.first > r.first; });
    for (const auto& [ub, a] : children) {
      if (ub <= best_total + prune_eps) break;
      fixed[h][s] = a;
      if (idx + 1 == decisions.size()) {
        // Leaf: every decision fixed, bound is the exact total.
        best_total = ub;
        best_actions = fixed;
      } else {
        dfs(idx + 1);
      }
    }
    fixed[h][s] = -1;
  }
};

}  // namespace

HindsightResult best_policy_in_hindsight(const MarkovGame& g,
                                         const std::vector<MarkovPolicy>& opponents,
                                         const std::vector<int>& initial_states,
                                         const HindsightOptions& opts) {
  const int K = static_cast<int>(opponents.size());
  if (K < 1) throw std::invalid_argument("best_policy_in_hindsight: need at least one episode");
  if (initial_states.size() != opponents.size())
    throw std::invalid_argument("best_policy_in_hindsight: one initial state per episode required");
  for (const auto& nu : opponents) check_policy_dims(g, nu, g.min_action_sizes, "min");
  for (int s1 : initial_states)
    if (s1 < 0 || s1 >= g.state_sizes[0])
      throw std::out_of_range("best_policy_in_hindsight: initial state out of range");

  int max_states = *std::max_element(g.state_sizes.begin(), g.state_sizes.end());
  std::int64_t cells = static_cast<std::int64_t>(K) * (g.horizon + 1) * max_states;
  if (cells > opts.value_cells_cap)
    throw CapacityError(strf(
        "best_policy_in_hindsight: K*(H+1)*S = %lld exceeds the value storage cap %lld",
        static_cast<long long>(cells), static_cast<long long>(opts.value_cells_cap)));

  HindsightSearch search(g, opponents, initial_states);
  search.node_budget = opts.node_budget;
  search.fixed.resize(g.horizon);
  for (int h = 0; h < g.horizon; ++h) {
    search.fixed[h].assign(g.state_sizes[h], -1);
    for (int s = 0; s < g.state_sizes[h]; ++s) search.decisions.emplace_back(h, s);
  }
  search.greedy_incumbent();
  search.prune_eps = 1e-12 * (1.0 + std::abs(search.best_total));
  double root_ub = search.relaxed_bound();
  if (root_ub > search.best_total + search.prune_eps) search.dfs(0);

  HindsightResult res;
  res.total = search.best_total;
  res.nodes = search.nodes;
  res.policy = MarkovPolicy::deterministic(search.best_actions, g.max_action_sizes);
  return res;
}

}  // namespace mglab
