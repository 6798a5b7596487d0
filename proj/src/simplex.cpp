#include "cspstream/simplex.hpp"

#include <stdexcept>

namespace cspstream {

namespace {

// Dense two-phase tableau. Columns: structural vars, then artificials,
// then the rhs. One basic variable per row.
class Tableau {
 public:
  explicit Tableau(const LinearProgram& lp)
      : n_(lp.num_vars), rows_(static_cast<int>(lp.rows.size())) {
    cols_ = n_ + rows_ + 1;
    t_.assign(static_cast<size_t>(rows_), std::vector<Rational>(static_cast<size_t>(cols_)));
    basis_.resize(static_cast<size_t>(rows_));
    for (int r = 0; r < rows_; ++r) {
      const auto& row = lp.rows[static_cast<size_t>(r)];
      Rational rhs = row.rhs;
      for (const auto& [v, c] : row.terms) at(r, v) += c;
      at(r, n_ + rows_) = rhs;
      if (sgn(at(r, n_ + rows_)) < 0)
        for (int c = 0; c < cols_; ++c) at(r, c) = -at(r, c);
      at(r, n_ + r) = 1;  // artificial
      basis_[static_cast<size_t>(r)] = n_ + r;
    }
  }

  // Minimizes the sum of artificials. Returns true when it reaches zero.
  bool phase1(long* pivots) {
    // cost row: -sum of all rows (reduced costs for the artificial objective)
    cost_.assign(static_cast<size_t>(cols_), Rational(0));
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c) cost_[static_cast<size_t>(c)] -= at(r, c);
    for (int r = 0; r < rows_; ++r) cost_[static_cast<size_t>(n_ + r)] = 0;
    run(/*allow_artificial=*/false, pivots);
    if (sgn(cost_[static_cast<size_t>(cols_ - 1)]) != 0) return false;
    expel_artificials();
    return true;
  }

  void phase2(const std::vector<Rational>& objective, long* pivots) {
    // Reduced costs for maximize c.x, expressed as minimize -c.x.
    cost_.assign(static_cast<size_t>(cols_), Rational(0));
    for (int v = 0; v < n_; ++v) cost_[static_cast<size_t>(v)] = -objective[static_cast<size_t>(v)];
    for (int r = 0; r < rows_; ++r) {
      int b = basis_[static_cast<size_t>(r)];
      if (sgn(cost_[static_cast<size_t>(b)]) == 0) continue;
      Rational f = cost_[static_cast<size_t>(b)];
      for (int c = 0; c < cols_; ++c)
        if (sgn(at(r, c)) != 0) cost_[static_cast<size_t>(c)] -= f * at(r, c);
    }
    run(/*allow_artificial=*/false, pivots);
  }

  std::vector<Rational> solution() const {
    std::vector<Rational> x(static_cast<size_t>(n_), Rational(0));
    for (int r = 0; r < rows_; ++r)
      if (basis_[static_cast<size_t>(r)] < n_)
        x[static_cast<size_t>(basis_[static_cast<size_t>(r)])] = at(r, cols_ - 1);
    return x;
  }

 private:
  Rational& at(int r, int c) { return t_[static_cast<size_t>(r)][static_cast<size_t>(c)]; }
  const Rational& at(int r, int c) const { return t_[static_cast<size_t>(r)][static_cast<size_t>(c)]; }

  // Simplex loop on the current cost row (a minimization: entering columns
  // have negative reduced cost).
  void run(bool allow_artificial, long* pivots) {
    const int limit_cols = allow_artificial ? n_ + rows_ : n_;
    long degenerate_streak = 0;
    const long bland_after = 2L * (rows_ + cols_);
    for (;;) {
      bool bland = degenerate_streak >= bland_after;
      int enter = -1;
      if (bland) {
        for (int c = 0; c < limit_cols; ++c)
          if (sgn(cost_[static_cast<size_t>(c)]) < 0) {
            enter = c;
            break;
          }
      } else {
        const Rational* best = nullptr;
        for (int c = 0; c < limit_cols; ++c) {
          const Rational& rc = cost_[static_cast<size_t>(c)];
          if (sgn(rc) < 0 && (best == nullptr || rc < *best)) {
            best = &rc;
            enter = c;
          }
        }
      }
      if (enter < 0) return;  // optimal

      int leave = -1;
      Rational best_ratio;
      for (int r = 0; r < rows_; ++r) {
        if (sgn(at(r, enter)) <= 0) continue;
        Rational ratio = at(r, cols_ - 1) / at(r, enter);
        if (leave < 0 || ratio < best_ratio ||
            (ratio == best_ratio &&
             basis_[static_cast<size_t>(r)] < basis_[static_cast<size_t>(leave)])) {
          leave = r;
          best_ratio = ratio;
        }
      }
      if (leave < 0) throw std::runtime_error("simplex: unbounded LP");

      degenerate_streak = sgn(best_ratio) == 0 ? degenerate_streak + 1 : 0;
      pivot(leave, enter);
      if (pivots) ++*pivots;
    }
  }

  void pivot(int pr, int pc) {
    Rational inv = 1 / at(pr, pc);
    if (inv != 1)
      for (int c = 0; c < cols_; ++c)
        if (sgn(at(pr, c)) != 0) at(pr, c) *= inv;
    at(pr, pc) = 1;
    for (int r = 0; r < rows_; ++r) {
      if (r == pr || sgn(at(r, pc)) == 0) continue;
      Rational f = at(r, pc);
      for (int c = 0; c < cols_; ++c)
        if (sgn(at(pr, c)) != 0) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0;
    }
    if (sgn(cost_[static_cast<size_t>(pc)]) != 0) {
      Rational f = cost_[static_cast<size_t>(pc)];
      for (int c = 0; c < cols_; ++c)
        if (sgn(at(pr, c)) != 0) cost_[static_cast<size_t>(c)] -= f * at(pr, c);
      cost_[static_cast<size_t>(pc)] = 0;
    }
    basis_[static_cast<size_t>(pr)] = pc;
  }

  // After phase 1 some artificials can linger in the basis at value zero.
  // Pivot them out on any nonzero structural coefficient; rows with none
  // are redundant and harmless (the artificial stays basic at zero but is
  // never allowed to grow since it cannot re-enter and its row stays zero).
  void expel_artificials() {
    for (int r = 0; r < rows_; ++r) {
      if (basis_[static_cast<size_t>(r)] < n_) continue;
      for (int c = 0; c < n_; ++c) {
        if (sgn(at(r, c)) != 0) {
          pivot(r, c);
          break;
        }
      }
    }
  }

  int n_;
  int rows_;
  int cols_;
  std::vector<std::vector<Rational>> t_;
  std::vector<Rational> cost_;
  std::vector<int> basis_;
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp, SimplexStats* stats) {
  for (const auto& row : lp.rows)
    for (const auto& [v, c] : row.terms)
      if (v < 0 || v >= lp.num_vars) throw std::invalid_argument("LP row references unknown variable");

  Tableau tab(lp);
  long p1 = 0, p2 = 0;
  LpResult res;
  if (!tab.phase1(&p1)) {
    if (stats) stats->phase1_pivots = p1;
    return res;  // infeasible
  }
  tab.phase2(lp.objective, &p2);
  res.feasible = true;
  res.x = tab.solution();
  res.value = 0;
  for (int v = 0; v < lp.num_vars; ++v)
    res.value += lp.objective[static_cast<size_t>(v)] * res.x[static_cast<size_t>(v)];
  if (stats) {
    stats->phase1_pivots = p1;
    stats->phase2_pivots = p2;
  }
  return res;
}

LpResult solve_lp(const LinearProgram& lp) { return solve_lp(lp, nullptr); }

}  // namespace cspstream
