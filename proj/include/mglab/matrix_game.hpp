#pragma once

#include <utility>
#include <vector>

namespace mglab {

// Payoff matrix to the row (max) player.
struct MatrixGame {
  std::vector<std::vector<double>> payoff;

  int rows() const { return static_cast<int>(payoff.size()); }
  int cols() const { return payoff.empty() ? 0 : static_cast<int>(payoff[0].size()); }
};

// Mixed strategies with a duality-gap certificate:
//   gap = max_a (M y)_a - min_b (x^T M)_b >= 0 up to rounding,
// and |value - v*| <= gap for the true game value v*.
struct NashCertificate {
  std::vector<double> row_strategy;
  std::vector<double> col_strategy;
  double value = 0.0;
  double gap = 0.0;
  double row_guarantee = 0.0;  // min_b (x^T M)_b
  double col_guarantee = 0.0;  // max_a (M y)_a
  bool converged = false;
  long iterations = 0;
};

enum class SolveMethod {
  simplex_then_mw,        // LP first; multiplicative weights if the LP stalls
  simplex_only,
  multiplicative_weights,
};

// Certified Nash equilibrium of a zero-sum matrix game. Deterministic for
// fixed inputs (Bland pivoting / fixed MW schedule). Throws
// std::invalid_argument on non-finite entries or tol <= 0. When no method
// reaches tol within budget the best certificate is returned with
// converged=false; the result is never silently degraded.
NashCertificate solve_zero_sum(const MatrixGame& m, double tol = 1e-9,
                               SolveMethod method = SolveMethod::simplex_then_mw);

// Evaluates the duality gap of a candidate pair without solving.
NashCertificate certify_pair(const MatrixGame& m, const std::vector<double>& x,
                             const std::vector<double>& y);

// Reuses (x0, y0) when they already certify gap <= tol; solves otherwise.
NashCertificate solve_with_warm_start(const MatrixGame& m, const std::vector<double>& x0,
                                      const std::vector<double>& y0, double tol);

// argmax_a (M y)_a and its value; ties broken toward the lowest index.
std::pair<int, double> best_response_row(const MatrixGame& m, const std::vector<double>& y);

// argmin_b (x^T M)_b and its value; ties broken toward the lowest index.
std::pair<int, double> best_response_col(const MatrixGame& m, const std::vector<double>& x);

}  // namespace mglab
