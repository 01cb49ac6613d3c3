#include <cmath>

#include "doctest.h"
#include "mglab/matrix_game.hpp"
#include "mglab/qol_learner.hpp"

using namespace mglab;

namespace {

QolLearner fresh_learner(int horizon = 2, int states = 2, int a = 2, int b = 2,
                         QolHyper hyper = {}) {
  return QolLearner(horizon, std::vector<int>(horizon + 1, states),
                    std::vector<int>(horizon, a), std::vector<int>(horizon, b), hyper);
}

}  // namespace

TEST_CASE("qol schedules") {
  CHECK(qol_alpha(1, 5) == doctest::Approx(1.0));
  CHECK(qol_alpha(3, 2) == doctest::Approx(3.0 / 5));
  CHECK(qol_beta(4, 2, 1.7, 2.0) == doctest::Approx(2.0 * std::sqrt(8 * 1.7 / 4)));
  CHECK_THROWS_AS(qol_alpha(0, 2), std::invalid_argument);
}

TEST_CASE("first visit sets Q to r + V_next + beta_1") {
  QolHyper hyper;
  QolLearner learner = fresh_learner(2, 2, 2, 2, hyper);
  double beta1 = qol_beta(1, 2, hyper.iota(2, 2, 2), hyper.bonus_c);
  learner.observe_informed(0, 0, 1, 0, 0.25, 1);
  CHECK(learner.q_entry(0, 0, 1, 0) == doctest::Approx(0.25 + 2.0 + beta1));
  CHECK(learner.visits(0, 0, 1, 0) == 1);
  CHECK(learner.visits(0, 0, 0, 0) == 0);
  // Untouched entries keep their optimistic init.
  CHECK(learner.q_entry(0, 0, 0, 1) == doctest::Approx(2.0));
}

TEST_CASE("degenerate 1x1 action spaces make V equal Q") {
  QolLearner learner = fresh_learner(2, 2, 1, 1);
  learner.observe_informed(1, 0, 0, 0, 0.75, 0);
  CHECK(learner.value_estimate(1, 0) == doctest::Approx(learner.q_entry(1, 0, 0, 0)));
}

TEST_CASE("V matches an independent solve of the Q slice") {
  QolLearner learner = fresh_learner(2, 2, 2, 3);
  Rng rng(3);
  for (int i = 0; i < 200; ++i)
    learner.observe_informed(rng.uniform_int(2), rng.uniform_int(2), rng.uniform_int(2),
                             rng.uniform_int(3), rng.uniform01(), rng.uniform_int(2));
  for (int h = 0; h < 2; ++h) {
    for (int s = 0; s < 2; ++s) {
      MatrixGame slice;
      slice.payoff.resize(2);
      for (int a = 0; a < 2; ++a)
        slice.payoff[a] = {learner.q_entry(h, s, a, 0), learner.q_entry(h, s, a, 1),
                           learner.q_entry(h, s, a, 2)};
      NashCertificate cert = solve_zero_sum(slice, 1e-10);
      // The stored V was computed from a pair with gap <= solve_tol.
      CHECK(std::abs(learner.value_estimate(h, s) - cert.value) <= 2e-6);
    }
  }
}

TEST_CASE("unknown-mode observations are a hard error") {
  QolLearner learner = fresh_learner();
  CHECK(learner.informed());
  CHECK_THROWS_AS(learner.observe(0, 0, 0, 0.5, 1), std::logic_error);
}

TEST_CASE("fresh policies are uniform and sampled faithfully") {
  QolLearner learner = fresh_learner(1, 1, 3, 2);
  Rng rng(9);
  std::vector<int> counts(3, 0);
  const int n = 60000;
  for (int i = 0; i < n; ++i) ++counts[learner.act(0, 0, rng)];
  for (int c : counts)
    CHECK(std::abs(c / static_cast<double>(n) - 1.0 / 3) <
          3 * std::sqrt((1.0 / 3) * (2.0 / 3) / n));
}

TEST_CASE("memory footprint scales with the opponent's action space") {
  QolLearner small = fresh_learner(2, 2, 2, 2);
  QolLearner big = fresh_learner(2, 2, 2, 8);
  auto count_q = [](const QolLearner& l) {
    size_t cells = 0;
    auto j = l.snapshot_json();
    for (const auto& layer : j["q"])
      for (const auto& srow : layer)
        for (const auto& arow : srow) cells += arow.size();
    return cells;
  };
  CHECK(count_q(big) == 4 * count_q(small));
}

TEST_CASE("point-mass policy acts deterministically") {
  QolLearner learner = fresh_learner(1, 1, 2, 2);
  // Make action 1 dominant: its Q row dwarfs action 0.
  for (int i = 0; i < 50; ++i) {
    learner.observe_informed(0, 0, 1, 0, 1.0, 0);
    learner.observe_informed(0, 0, 1, 1, 1.0, 0);
    learner.observe_informed(0, 0, 0, 0, 0.0, 0);
    learner.observe_informed(0, 0, 0, 1, 0.0, 0);
  }
  MarkovPolicy pol = learner.policy_snapshot();
  CHECK(pol.probs[0][0][1] > 0.999);
  Rng rng(11);
  for (int i = 0; i < 200; ++i) CHECK(learner.act(0, 0, rng) == 1);
}
