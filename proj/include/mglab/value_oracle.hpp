#pragma once

#include <cstdint>
#include <vector>

#include "mglab/game.hpp"
#include "mglab/matrix_game.hpp"

namespace mglab {

// values[h][s] for layers h = 0..horizon; the terminal layer is all zeros.
struct ValueTable {
  std::vector<std::vector<double>> values;

  double at(int h, int s) const { return values[h][s]; }
  int layers() const { return static_cast<int>(values.size()); }
};

struct MinimaxResult {
  ValueTable value;
  MarkovPolicy max_policy;
  MarkovPolicy min_policy;
};

// Backward induction h = H..1: at each (h, s) solves the matrix game
// r_h + P_h V_{h+1} to certified gap <= tol, so |V*[h][s] - truth| grows at
// most linearly in the remaining steps. Throws ConvergenceError naming
// (h, s) if a solve cannot be certified.
MinimaxResult minimax_values(const MarkovGame& g, double tol = 1e-9);

// Exact V^{mu,nu} via the Bellman recursion; Bernoulli returns enter in
// expectation.
ValueTable evaluate_pair(const MarkovGame& g, const MarkovPolicy& mu,
                         const MarkovPolicy& nu);

struct BestResponse {
  ValueTable value;
  MarkovPolicy policy;  // deterministic, lowest-index tie-break
};

// Max player's best response against a fixed min-player policy.
BestResponse best_response_value(const MarkovGame& g, const MarkovPolicy& nu);

// Min player's best response against a fixed max-player policy, computed on
// the role-swapped game. The returned table holds V^{mu, nu_dagger} in the
// original game's convention.
BestResponse min_best_response_value(const MarkovGame& g, const MarkovPolicy& mu);

struct HindsightOptions {
  std::int64_t node_budget = 1000000;
  std::int64_t value_cells_cap = 10000000;  // guards K * (H+1) * S scratch
};

struct HindsightResult {
  MarkovPolicy policy;  // deterministic
  double total = 0.0;   // sum_k V_1^{policy, nu^k}(s_1^k)
  std::int64_t nodes = 0;
};

// Best fixed Markov policy in hindsight against the opponent sequence:
// exactly maximizes sum_k V_1^{mu, nu^k}(s_1^k) over all Markov policies
// (the optimum is attained at a deterministic policy). Solved by
// depth-first branch and bound over per-(h,s) decisions: the incumbent is
// seeded by a vector-valued backward induction on the K-sum, the bound is
// the per-episode best-response relaxation, and leaves are exact. The
// search is O(K H S A B S) when the relaxation is tight at the root (in
// particular whenever one policy is simultaneously optimal against every
// nu^k); worst case is exponential and guarded by node_budget.
HindsightResult best_policy_in_hindsight(const MarkovGame& g,
                                         const std::vector<MarkovPolicy>& opponents,
                                         const std::vector<int>& initial_states,
                                         const HindsightOptions& opts = {});

}  // namespace mglab
