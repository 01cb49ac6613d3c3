#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "mglab/game.hpp"
#include "mglab/learner.hpp"

namespace mglab {

// Combination-lock family. `depth` is the number of two-state layers; the
// emitted games have horizon depth+1 (an initial branching step, depth-1
// steering steps, and a terminal step whose Bernoulli return pays
// 1/2 + eps on the good path's last state and 1/2 - eps elsewhere).
// Layer parities index states: state w at layer l is s_{w,l}.
struct HardInstanceSpec {
  int depth = 1;
  std::vector<int> x_bits;  // length depth
  std::vector<int> y_bits;  // length depth
  double epsilon = 0.25;
};

// Single-agent lock (min player has one action everywhere): the initial
// state branches uniformly, the good path follows parity y_l, staying on
// it requires action x_l XOR y_l, and wrong states absorb into the wrong
// path. Optimal value from the start is exactly 1/2.
MarkovGame combination_lock_mdp(const HardInstanceSpec& spec);

// The optimal lock policy, action x_l XOR w at state parity w.
MarkovPolicy lock_optimal_policy(const HardInstanceSpec& spec);

// Optimal everywhere except the steering layer `deviate_layer`
// (1 <= deviate_layer <= depth-1), where the good state's action flips;
// its value from the start is exactly 1/2 - eps.
MarkovPolicy lock_deviating_policy(const HardInstanceSpec& spec, int deviate_layer);

// Min-player-steered wrapper: four min actions everywhere. At steering
// steps the pair (a,b) moves parity as
//   b=0: keep; b=1: flip; b=2: keep iff a=0; b=3: keep iff a=1;
// and at the terminal step the return pays 1/2 + eps iff the state parity
// equals b mod 2. A min-player policy can therefore make the max player
// face any member of the lock family with the same X.
MarkovGame hard_markov_game(int depth, const std::vector<int>& x_bits, double epsilon);

// The deterministic min policy under which hard_markov_game is exactly the
// lock M_{X,Y,eps}, entrywise.
MarkovPolicy hard_game_min_policy(int depth, const std::vector<int>& x_bits,
                                  const std::vector<int>& y_bits);

// min{ sqrt(2^depth / episodes), 1/4 }
double epsilon_hk(int depth, std::int64_t episodes);

struct BanditReductionResult {
  double epsilon = 0.0;
  std::vector<double> rewards;            // per episode, final-step return
  std::vector<std::vector<int>> arms;     // per episode, A xor Y
  std::vector<std::vector<int>> y_draws;  // per episode
};

// Plays an episodic unknown-game learner against a 2^depth-armed bandit:
// each episode draws Y uniformly, shows the learner the forced trajectory
// (s_0, s_{y_1,1}, ..., s_{y_depth,depth}), collects its action sequence A
// at the two-state layers, pulls arm A xor Y (Ber(1/2) on arm X, else
// Ber(1/2 - eps) with eps = epsilon_hk(depth, episodes)), and relays the
// realized reward as the final-step return.
BanditReductionResult bandit_reduction_run(Learner& learner, const std::vector<int>& x_bits,
                                           int depth, std::int64_t episodes, Rng& rng);

// Joint outcome distribution over (layer parities z_1..z_depth, actions
// a_1..a_depth at the two-state layers, terminal reward bit), computed by
// exact enumeration for a stationary behavioral policy on the lock shape.
struct OutcomeAtom {
  std::vector<int> trajectory;
  std::vector<int> actions;
  int reward = 0;

  bool operator<(const OutcomeAtom& o) const {
    if (trajectory != o.trajectory) return trajectory < o.trajectory;
    if (actions != o.actions) return actions < o.actions;
    return reward < o.reward;
  }
};

using AtomDistribution = std::map<OutcomeAtom, double>;

// Law of one bandit-reduction episode.
AtomDistribution reduction_atom_distribution(int depth, const std::vector<int>& x_bits,
                                             double epsilon, const MarkovPolicy& behavior);

// Law of one direct episode in M_{X,Y,eps} with Y drawn uniformly.
AtomDistribution direct_lock_atom_distribution(int depth, const std::vector<int>& x_bits,
                                               double epsilon, const MarkovPolicy& behavior);

}  // namespace mglab
