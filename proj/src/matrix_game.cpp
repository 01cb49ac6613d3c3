#include "mglab/matrix_game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mglab/common.hpp"

namespace mglab {

namespace {

constexpr double kPivotEps = 1e-11;

void check_matrix(const MatrixGame& m) {
  if (m.rows() < 1 || m.cols() < 1)
    throw std::invalid_argument("matrix game must have at least one row and column");
  for (const auto& row : m.payoff) {
    if (static_cast<int>(row.size()) != m.cols())
      throw std::invalid_argument("matrix game rows must have equal length");
    for (double v : row)
      if (!std::isfinite(v))
        throw std::invalid_argument("matrix game entries must be finite");
  }
}

std::vector<double> row_payoffs(const MatrixGame& m, const std::vector<double>& y) {
  std::vector<double> out(m.rows(), 0.0);
  for (int a = 0; a < m.rows(); ++a)
    for (int b = 0; b < m.cols(); ++b) out[a] += m.payoff[a][b] * y[b];
  return out;
}

std::vector<double> col_payoffs(const MatrixGame& m, const std::vector<double>& x) {
  std::vector<double> out(m.cols(), 0.0);
  for (int a = 0; a < m.rows(); ++a)
    for (int b = 0; b < m.cols(); ++b) out[b] += m.payoff[a][b] * x[a];
  return out;
}

void normalize(std::vector<double>& v) {
  double sum = 0.0;
  for (double& p : v) {
    if (p < 0.0) p = 0.0;  // clip pivot dust
    sum += p;
  }
  if (sum <= 0.0) {
    std::fill(v.begin(), v.end(), 1.0 / v.size());
  } else {
    for (double& p : v) p /= sum;
  }
}

// Dense tableau simplex with Bland's rule for
//   maximize 1^T w  s.t.  M' w <= 1, w >= 0,
// where M' is the payoff matrix shifted entrywise to be >= 1. The optimum
// recovers both players' strategies (column player from the basis, row
// player from the slack reduced costs). Bounded by construction since
// every constraint row dominates 1^T w.
struct SimplexResult {
  bool ok = false;
  std::vector<double> x, y;
  long iterations = 0;
};

SimplexResult simplex_game(const MatrixGame& m) {
  const int A = m.rows(), B = m.cols();
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& row : m.payoff)
    for (double v : row) lo = std::min(lo, v);
  const double shift = 1.0 - lo;

  const int cols = B + A + 1;  // structural, slack, rhs
  std::vector<std::vector<double>> t(A + 1, std::vector<double>(cols, 0.0));
  for (int i = 0; i < A; ++i) {
    for (int j = 0; j < B; ++j) t[i][j] = m.payoff[i][j] + shift;
    t[i][B + i] = 1.0;
    t[i][cols - 1] = 1.0;
  }
  for (int j = 0; j < B; ++j) t[A][j] = -1.0;  // objective row, maximize 1^T w

  std::vector<int> basis(A);
  for (int i = 0; i < A; ++i) basis[i] = B + i;

  SimplexResult res;
  const long max_iters = 50L * (A + B + 10);
  for (;;) {
    int enter = -1;
    for (int j = 0; j < cols - 1; ++j) {
      if (t[A][j] < -kPivotEps) {
        enter = j;
        break;  // Bland: lowest-index improving column
      }
    }
    if (enter < 0) break;
    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < A; ++i) {
      if (t[i][enter] > kPivotEps) {
        double ratio = t[i][cols - 1] / t[i][enter];
        if (leave < 0 || ratio < best_ratio - 1e-15 ||
            (std::abs(ratio - best_ratio) <= 1e-15 && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) return res;  // unbounded: cannot happen for valid input
    if (++res.iterations > max_iters) return res;

    double piv = t[leave][enter];
    for (int j = 0; j < cols; ++j) t[leave][j] /= piv;
    for (int i = 0; i <= A; ++i) {
      if (i == leave) continue;
      double f = t[i][enter];
      if (f == 0.0) continue;
      for (int j = 0; j < cols; ++j) t[i][j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }

  std::vector<double> w(B, 0.0);
  for (int i = 0; i < A; ++i)
    if (basis[i] < B) w[basis[i]] = t[i][cols - 1];
  std::vector<double> u(A, 0.0);
  for (int i = 0; i < A; ++i) u[i] = t[A][B + i];  // duals on slack columns

  res.x = std::move(u);
  res.y = std::move(w);
  normalize(res.x);
  normalize(res.y);
  res.ok = true;
  return res;
}

NashCertificate make_certificate(const MatrixGame& m, std::vector<double> x,
                                 std::vector<double> y, double tol, long iterations) {
  NashCertificate cert;
  auto rp = row_payoffs(m, y);
  auto cp = col_payoffs(m, x);
  cert.col_guarantee = *std::max_element(rp.begin(), rp.end());
  cert.row_guarantee = *std::min_element(cp.begin(), cp.end());
  cert.gap = cert.col_guarantee - cert.row_guarantee;
  cert.value = 0.5 * (cert.col_guarantee + cert.row_guarantee);
  cert.row_strategy = std::move(x);
  cert.col_strategy = std::move(y);
  cert.converged = cert.gap <= tol;
  cert.iterations = iterations;
  return cert;
}

NashCertificate mw_self_play(const MatrixGame& m, double tol, long budget) {
  const int A = m.rows(), B = m.cols();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& row : m.payoff)
    for (double v : row) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  const double range = std::max(hi - lo, 1e-300);

  std::vector<double> logx(A, 0.0), logy(B, 0.0);
  std::vector<double> x(A, 1.0 / A), y(B, 1.0 / B);
  std::vector<double> xbar(A, 0.0), ybar(B, 0.0);
  NashCertificate best;
  best.gap = std::numeric_limits<double>::infinity();
  for (long it = 1; it <= budget; ++it) {
    auto rp = row_payoffs(m, y);
    auto cp = col_payoffs(m, x);
    for (int a = 0; a < A; ++a) xbar[a] += x[a];
    for (int b = 0; b < B; ++b) ybar[b] += y[b];
    double eta = std::sqrt(std::log(std::max(A, B) + 1.0) / it) / range;
    for (int a = 0; a < A; ++a) logx[a] += eta * rp[a];
    for (int b = 0; b < B; ++b) logy[b] -= eta * cp[b];
    double mx = *std::max_element(logx.begin(), logx.end());
    double my = *std::max_element(logy.begin(), logy.end());
    for (int a = 0; a < A; ++a) x[a] = std::exp(logx[a] - mx);
    for (int b = 0; b < B; ++b) y[b] = std::exp(logy[b] - my);
    normalize(x);
    normalize(y);
    if (it % 64 == 0 || it == budget) {
      std::vector<double> ax = xbar, ay = ybar;
      normalize(ax);
      normalize(ay);
      NashCertificate cert = make_certificate(m, ax, ay, tol, it);
      if (cert.gap < best.gap) best = cert;
      if (best.gap <= tol) break;
    }
  }
  best.converged = best.gap <= tol;
  return best;
}

}  // namespace

NashCertificate certify_pair(const MatrixGame& m, const std::vector<double>& x,
                             const std::vector<double>& y) {
  check_matrix(m);
  if (static_cast<int>(x.size()) != m.rows() || static_cast<int>(y.size()) != m.cols())
    throw std::invalid_argument("certify_pair: strategy dimension mismatch");
  return make_certificate(m, x, y, std::numeric_limits<double>::infinity(), 0);
}

NashCertificate solve_zero_sum(const MatrixGame& m, double tol, SolveMethod method) {
  check_matrix(m);
  if (!(tol > 0.0)) throw std::invalid_argument("solve_zero_sum: tol must be > 0");

  if (method != SolveMethod::multiplicative_weights) {
    SimplexResult sr = simplex_game(m);
    if (sr.ok) {
      NashCertificate cert = make_certificate(m, sr.x, sr.y, tol, sr.iterations);
      if (cert.converged || method == SolveMethod::simplex_only) return cert;
      NashCertificate mw = mw_self_play(m, tol, 200000);
      return mw.gap < cert.gap ? mw : cert;
    }
    if (method == SolveMethod::simplex_only) {
      NashCertificate cert = make_certificate(m, std::vector<double>(m.rows(), 1.0 / m.rows()),
                                              std::vector<double>(m.cols(), 1.0 / m.cols()),
                                              tol, sr.iterations);
      cert.converged = cert.gap <= tol;
      return cert;
    }
  }
  return mw_self_play(m, tol, 2000000);
}

NashCertificate solve_with_warm_start(const MatrixGame& m, const std::vector<double>& x0,
                                      const std::vector<double>& y0, double tol) {
  if (static_cast<int>(x0.size()) == m.rows() && static_cast<int>(y0.size()) == m.cols()) {
    NashCertificate warm = certify_pair(m, x0, y0);
    if (warm.gap <= tol) {
      warm.converged = true;
      return warm;
    }
  }
  return solve_zero_sum(m, tol);
}

std::pair<int, double> best_response_row(const MatrixGame& m, const std::vector<double>& y) {
  check_matrix(m);
  if (static_cast<int>(y.size()) != m.cols())
    throw std::invalid_argument(strf("best_response_row: got %zu column weights for a %dx%d game",
                                     y.size(), m.rows(), m.cols()));
  auto rp = row_payoffs(m, y);
  int arg = 0;
  for (int a = 1; a < m.rows(); ++a)
    if (rp[a] > rp[arg]) arg = a;
  return {arg, rp[arg]};
}

std::pair<int, double> best_response_col(const MatrixGame& m, const std::vector<double>& x) {
  check_matrix(m);
  if (static_cast<int>(x.size()) != m.rows())
    throw std::invalid_argument(strf("best_response_col: got %zu row weights for a %dx%d game",
                                     x.size(), m.rows(), m.cols()));
  auto cp = col_payoffs(m, x);
  int arg = 0;
  for (int b = 1; b < m.cols(); ++b)
    if (cp[b] < cp[arg]) arg = b;
  return {arg, cp[arg]};
}

}  // namespace mglab
