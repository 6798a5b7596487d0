#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "instance.hpp"
#include "simplex.hpp"

namespace cspstream {

// Optimal solution of the LP relaxation with variable marginals x and
// per-constraint tuple distributions z.
struct LpSolution {
  // x[(v, sigma)] and z[(i, tuple index)], exact rationals.
  std::map<std::pair<int32_t, int>, Rational> x;
  std::map<std::pair<int64_t, uint64_t>, Rational> z;
  Rational objective;  // in [0,1]
};

struct IntegralityGapEstimate {
  Rational alpha;
  enum class Provenance { Known, EmpiricalLowerBound } provenance;
};

constexpr int64_t default_lp_dimension_cap() { return 50'000; }

// Builds and exactly solves the relaxation:
//   maximize (1/m) sum_i sum_b f_i(b) z_{i,b}
//   s.t.     sum_sigma x_{v,sigma} = 1                          for all v
//            sum_b 1{b_j=sigma} z_{i,b} = x_{v_{i,j},sigma}      for all i,j,sigma
//            x, z >= 0
// Throws if the LP dimension exceeds the cap, and on internal solver
// failure (the LP is always feasible).
LpSolution solve_basic_lp(const Instance& I, int64_t dimension_cap = default_lp_dimension_cap());

// Exact feasibility + optimality-shape check: all four constraint
// families hold with equality, entries are nonnegative, and the stored
// objective matches the z mass. Returns an explanation on failure.
bool verify_lp_solution(const Instance& I, const LpSolution& sol, std::string* why = nullptr);

// The integral embedding of an assignment: x[v,tau(v)] = 1 and
// z[i, tuple of tau] = 1. Always feasible; objective = evaluate(I,tau).
LpSolution embed_assignment(const Instance& I, const Assignment& tau);

// Canonical per-constraint value used by the local map: solve the ball's
// relaxation, then among optimal solutions maximize the center
// constraint's own satisfied z mass. The result depends only on the
// instance up to relabeling, not on pivot order.
Rational lp_center_contribution(const Instance& I, int64_t center,
                                int64_t dimension_cap = default_lp_dimension_cap());

// Monte-Carlo lower bound on the integrality gap of a predicate family:
// the minimum of val/vallp over sampled small instances.
IntegralityGapEstimate empirical_alpha(const std::vector<Predicate>& family, int trials,
                                       int n_max, const RandomTape& tape);

// Known integrality gaps by family name (e.g. "maxdicut" -> 1/2).
// Returns false when the family is not in the table.
bool known_alpha(const std::string& family, Rational* alpha);

// Human-readable LP listing (objective + constraints) for cross-checks.
std::string dump_lp_text(const Instance& I);

// Solution as JSON with exact rationals rendered "p/q".
std::string dump_solution_json(const Instance& I, const LpSolution& sol);

}  // namespace cspstream
