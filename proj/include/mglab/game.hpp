#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mglab/rng.hpp"

namespace mglab {

using Dist = std::vector<double>;

// Episodic two-player zero-sum Markov game with per-step cardinalities.
// Step indices h run 0..horizon-1; state layers run 0..horizon (the last
// layer holds terminal states reached after the final step). transition
// rows are distributions over the next layer; returns lie in [0,1]. When
// bernoulli is nonempty, ret[h][s][a][b] is the success probability of a
// Bernoulli return wherever the flag is set; oracles always evaluate the
// expectation, which equals the stored value in either mode.
struct MarkovGame {
  int horizon = 0;
  std::vector<int> state_sizes;       // horizon + 1 entries
  std::vector<int> max_action_sizes;  // horizon entries
  std::vector<int> min_action_sizes;  // horizon entries
  std::vector<std::vector<std::vector<std::vector<Dist>>>> transition;  // [h][s][a][b] -> Dist
  std::vector<std::vector<std::vector<std::vector<double>>>> ret;      // [h][s][a][b]
  std::vector<std::vector<std::vector<std::vector<std::uint8_t>>>> bernoulli;  // empty or same shape as ret

  bool has_bernoulli() const { return !bernoulli.empty(); }
  int states_at(int h) const { return state_sizes[h]; }
  int max_actions_at(int h) const { return max_action_sizes[h]; }
  int min_actions_at(int h) const { return min_action_sizes[h]; }
};

// Per-step, per-state distributions over one player's actions.
struct MarkovPolicy {
  std::vector<std::vector<Dist>> probs;  // [h][s][a]

  static MarkovPolicy uniform(int horizon, const std::vector<int>& state_sizes,
                              const std::vector<int>& action_sizes);
  // Point masses given by actions[h][s], over action_sizes[h] actions per step.
  static MarkovPolicy deterministic(const std::vector<std::vector<int>>& actions,
                                    const std::vector<int>& action_sizes);

  int steps() const { return static_cast<int>(probs.size()); }
  const Dist& at(int h, int s) const { return probs[h][s]; }
};

// m-player general-sum game. Joint actions are flattened with player 0
// least significant (mixed radix over action_sizes[0][h], action_sizes[1][h], ...).
struct GeneralSumGame {
  int horizon = 0;
  int num_players = 0;
  std::vector<int> state_sizes;                // horizon + 1 entries
  std::vector<std::vector<int>> action_sizes;  // [player][h]
  std::vector<std::vector<std::vector<Dist>>> transition;            // [h][s][joint] -> Dist
  std::vector<std::vector<std::vector<std::vector<double>>>> returns;  // [player][h][s][joint]

  int joint_actions_at(int h) const;
};

// One episode as recorded by the harness. In unknown-game mode the learner
// never sees min_action; the record keeps it for the ledger and oracles.
struct EpisodeRecord {
  struct Step {
    int state = 0;
    int max_action = 0;
    int min_action = 0;
    double ret = 0.0;
    int next_state = 0;
  };
  std::int64_t episode = 0;
  int initial_state = 0;
  bool informed = false;
  std::vector<Step> steps;
};

struct Violation {
  std::string what;
  int h = -1, s = -1, a = -1, b = -1;
  std::string describe() const;
};

// Returns every invariant violation with coordinates; empty list iff valid.
std::vector<Violation> validate_game(const MarkovGame& g);

// Checks that pol is a valid policy for the given per-step dimensions.
std::vector<Violation> validate_policy(const MarkovPolicy& pol, int horizon,
                                       const std::vector<int>& state_sizes,
                                       const std::vector<int>& action_sizes);

struct StepOutcome {
  double ret = 0.0;
  int next_state = 0;
};

// Samples one environment step. Throws std::out_of_range naming the
// offending coordinate when an index is out of range.
StepOutcome sample_step(const MarkovGame& g, int h, int s, int a, int b, Rng& rng);

enum class ReturnMode { deterministic, bernoulli_terminal };

// Random valid game with Dirichlet(1,...,1) transition rows and uniform
// returns; reproducible from the stream. bernoulli_terminal flags the final
// step's returns as Bernoulli.
MarkovGame random_game(int horizon, int states, int max_actions, int min_actions,
                       Rng& rng, ReturnMode mode = ReturnMode::deterministic);

GeneralSumGame random_general_sum_game(int horizon, int states,
                                       const std::vector<int>& actions_per_player,
                                       Rng& rng);

// Mixed-radix codec for a tuple of opponent actions, first tuple element
// least significant. Round-trips exactly for all indices.
struct JointActionCodec {
  std::vector<int> radices;

  int size() const;
  int encode(const std::vector<int>& digits) const;
  std::vector<int> decode(int flat) const;
};

struct Player1View {
  MarkovGame game;
  std::vector<JointActionCodec> codec;  // per step, over players 2..m
};

// Two-player zero-sum view of a general-sum game from player 1's seat:
// opponents collapse into one min player whose action space is the product
// of theirs, returns are player 1's. Throws CapacityError when the product
// of opponent action sizes overflows the guard.
Player1View to_player1_view(const GeneralSumGame& g);

// Swaps the two players' seats: actions transpose and returns complement
// (r' = 1 - r), so values satisfy V'_h = (H - h) - V_h.
MarkovGame role_swapped(const MarkovGame& g);

// Replicates every min-player action `factor` times (column duplication);
// the induced environment is unchanged for any opponent that spreads each
// original action's mass across its copies.
MarkovGame duplicate_min_actions(const MarkovGame& g, int factor);

// Spreads pol's mass uniformly across the duplicated copies.
MarkovPolicy spread_policy_over_duplicates(const MarkovPolicy& pol, int factor);

}  // namespace mglab
