#include "cspstream/basic_lp.hpp"

#include <sstream>

namespace cspstream {

namespace {

// Column layout: x vars first (v*sigma + s), then the z block of each
// constraint in order.
struct LpLayout {
  int sigma = 0;
  int64_t x_count = 0;
  std::vector<int64_t> z_offset;   // per constraint
  std::vector<uint64_t> z_size;    // sigma^arity per constraint
  int64_t total = 0;

  int64_t x_id(int32_t v, int s) const { return static_cast<int64_t>(v) * sigma + s; }
  int64_t z_id(int64_t i, uint64_t b) const { return z_offset[static_cast<size_t>(i)] + static_cast<int64_t>(b); }
};

LpLayout make_layout(const Instance& I) {
  LpLayout L;
  L.sigma = I.alphabet.size;
  L.x_count = static_cast<int64_t>(I.n) * L.sigma;
  int64_t off = L.x_count;
  for (const auto& c : I.constraints) {
    const Predicate& p = I.preds.at(c.pred);
    L.z_offset.push_back(off);
    L.z_size.push_back(p.table_size());
    off += static_cast<int64_t>(p.table_size());
  }
  L.total = off;
  return L;
}

// Symbol of position j in tuple index b for a predicate of the given arity.
int tuple_symbol(uint64_t b, int j, int arity, int sigma) {
  for (int t = arity - 1; t > j; --t) b /= static_cast<uint64_t>(sigma);
  return static_cast<int>(b % static_cast<uint64_t>(sigma));
}

LinearProgram build_lp(const Instance& I, const LpLayout& L) {
  LinearProgram lp;
  lp.num_vars = static_cast<int>(L.total);
  lp.objective.assign(static_cast<size_t>(L.total), Rational(0));

  for (size_t i = 0; i < I.constraints.size(); ++i) {
    const Predicate& p = I.preds.at(I.constraints[i].pred);
    for (uint64_t b = 0; b < p.table_size(); ++b)
      if (p.eval_index(b))
        lp.objective[static_cast<size_t>(L.z_id(static_cast<int64_t>(i), b))] = 1;
  }

  for (int32_t v = 0; v < I.n; ++v) {
    int row = lp.add_row(Rational(1));
    for (int s = 0; s < L.sigma; ++s) lp.add_term(row, static_cast<int>(L.x_id(v, s)), Rational(1));
  }

  for (size_t i = 0; i < I.constraints.size(); ++i) {
    const auto& c = I.constraints[i];
    const Predicate& p = I.preds.at(c.pred);
    const int k = p.arity();
    for (int j = 0; j < k; ++j) {
      for (int s = 0; s < L.sigma; ++s) {
        int row = lp.add_row(Rational(0));
        for (uint64_t b = 0; b < p.table_size(); ++b)
          if (tuple_symbol(b, j, k, L.sigma) == s)
            lp.add_term(row, static_cast<int>(L.z_id(static_cast<int64_t>(i), b)), Rational(1));
        lp.add_term(row, static_cast<int>(L.x_id(c.vars[static_cast<size_t>(j)], s)), Rational(-1));
      }
    }
  }
  return lp;
}

LpSolution extract_solution(const Instance& I, const LpLayout& L, const LpResult& res) {
  LpSolution sol;
  for (int32_t v = 0; v < I.n; ++v)
    for (int s = 0; s < L.sigma; ++s)
      sol.x[{v, s}] = res.x[static_cast<size_t>(L.x_id(v, s))];
  for (size_t i = 0; i < I.constraints.size(); ++i)
    for (uint64_t b = 0; b < L.z_size[i]; ++b)
      sol.z[{static_cast<int64_t>(i), b}] = res.x[static_cast<size_t>(L.z_id(static_cast<int64_t>(i), b))];
  sol.objective = res.value / I.m();
  return sol;
}

void check_dimension(const Instance& I, const LpLayout& L, int64_t cap) {
  if (I.m() == 0) throw std::invalid_argument("relaxation of an empty instance");
  if (L.total > cap) throw std::invalid_argument("LP dimension exceeds configured cap");
}

}  // namespace

LpSolution solve_basic_lp(const Instance& I, int64_t dimension_cap) {
  LpLayout L = make_layout(I);
  check_dimension(I, L, dimension_cap);
  LinearProgram lp = build_lp(I, L);
  LpResult res = solve_lp(lp);
  if (!res.feasible) throw std::runtime_error("relaxation reported infeasible: solver bug");
  return extract_solution(I, L, res);
}

Rational lp_center_contribution(const Instance& I, int64_t center, int64_t dimension_cap) {
  if (center < 0 || center >= I.m()) throw std::invalid_argument("center index out of range");
  const Predicate& pc = I.preds.at(I.constraints[static_cast<size_t>(center)].pred);
  if (pc.trivially_false()) return Rational(0);

  LpLayout L = make_layout(I);
  check_dimension(I, L, dimension_cap);
  LinearProgram lp = build_lp(I, L);
  LpResult first = solve_lp(lp);
  if (!first.feasible) throw std::runtime_error("relaxation reported infeasible: solver bug");

  // Re-optimize the center's satisfied mass over the optimal face.
  int level_row = lp.add_row(first.value);
  for (int v = 0; v < lp.num_vars; ++v)
    if (sgn(lp.objective[static_cast<size_t>(v)]) != 0)
      lp.add_term(level_row, v, lp.objective[static_cast<size_t>(v)]);

  lp.objective.assign(static_cast<size_t>(lp.num_vars), Rational(0));
  for (uint64_t b = 0; b < pc.table_size(); ++b)
    if (pc.eval_index(b)) lp.objective[static_cast<size_t>(L.z_id(center, b))] = 1;

  LpResult second = solve_lp(lp);
  if (!second.feasible) throw std::runtime_error("optimal-face re-solve infeasible: solver bug");
  return second.value;
}

bool verify_lp_solution(const Instance& I, const LpSolution& sol, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  const int sigma = I.alphabet.size;

  for (const auto& [key, val] : sol.x)
    if (sgn(val) < 0) return fail("negative x entry");
  for (const auto& [key, val] : sol.z)
    if (sgn(val) < 0) return fail("negative z entry");

  for (int32_t v = 0; v < I.n; ++v) {
    Rational sum = 0;
    for (int s = 0; s < sigma; ++s) {
      auto it = sol.x.find({v, s});
      if (it == sol.x.end()) return fail("missing x entry");
      sum += it->second;
    }
    if (sum != 1) return fail("x marginals of a variable do not sum to 1");
  }

  Rational mass = 0;
  for (size_t i = 0; i < I.constraints.size(); ++i) {
    const auto& c = I.constraints[i];
    const Predicate& p = I.preds.at(c.pred);
    const int k = p.arity();

    Rational zsum = 0;
    for (uint64_t b = 0; b < p.table_size(); ++b) {
      auto it = sol.z.find({static_cast<int64_t>(i), b});
      if (it == sol.z.end()) return fail("missing z entry");
      zsum += it->second;
      if (p.eval_index(b)) mass += it->second;
    }
    if (zsum != 1) return fail("z distribution of a constraint does not sum to 1");

    for (int j = 0; j < k; ++j) {
      for (int s = 0; s < sigma; ++s) {
        Rational marg = 0;
        for (uint64_t b = 0; b < p.table_size(); ++b)
          if (tuple_symbol(b, j, k, sigma) == s) marg += sol.z.at({static_cast<int64_t>(i), b});
        if (marg != sol.x.at({c.vars[static_cast<size_t>(j)], s}))
          return fail("z marginal disagrees with x");
      }
    }
  }
  if (mass != sol.objective * I.m()) return fail("stored objective does not match z mass");
  return true;
}

LpSolution embed_assignment(const Instance& I, const Assignment& tau) {
  if (static_cast<int32_t>(tau.size()) != I.n)
    throw std::invalid_argument("assignment length does not match variable count");
  LpSolution sol;
  for (int32_t v = 0; v < I.n; ++v)
    for (int s = 0; s < I.alphabet.size; ++s)
      sol.x[{v, s}] = Rational(tau[static_cast<size_t>(v)] == s ? 1 : 0);
  Rational mass = 0;
  for (size_t i = 0; i < I.constraints.size(); ++i) {
    const auto& c = I.constraints[i];
    const Predicate& p = I.preds.at(c.pred);
    std::vector<int32_t> buf(c.vars.size());
    for (size_t j = 0; j < c.vars.size(); ++j) buf[j] = tau[static_cast<size_t>(c.vars[j])];
    uint64_t chosen = p.tuple_index(buf.data());
    for (uint64_t b = 0; b < p.table_size(); ++b)
      sol.z[{static_cast<int64_t>(i), b}] = Rational(b == chosen ? 1 : 0);
    if (p.eval_index(chosen)) mass += 1;
  }
  sol.objective = mass / I.m();
  return sol;
}

IntegralityGapEstimate empirical_alpha(const std::vector<Predicate>& family, int trials,
                                       int n_max, const RandomTape& tape) {
  if (trials < 1) throw std::invalid_argument("empirical_alpha needs at least one trial");
  if (family.empty()) throw std::invalid_argument("empirical_alpha needs a nonempty family");

  Rational best(1);
  uint64_t draw = 0;
  auto rnd = [&](uint64_t bound) {
    return tape.uniform_int(bound, RandomTape::Ns::Subsample, 0xa1fa, draw++);
  };

  for (int t = 0; t < trials; ++t) {
    Instance I;
    I.alphabet.size = family.front().alphabet_size();
    int k_max = 0;
    for (const auto& p : family) k_max = std::max(k_max, p.arity());
    I.n = static_cast<int32_t>(2 + rnd(static_cast<uint64_t>(std::max(1, n_max - 1))));
    if (I.n < k_max) I.n = k_max;
    int64_t m = 1 + static_cast<int64_t>(rnd(static_cast<uint64_t>(2 * I.n)));
    for (int64_t i = 0; i < m; ++i) {
      const Predicate& p = family[rnd(family.size())];
      Constraint c;
      c.pred = I.preds.add(p);
      for (int j = 0; j < p.arity(); ++j)
        c.vars.push_back(static_cast<int32_t>(rnd(static_cast<uint64_t>(I.n))));
      I.constraints.push_back(std::move(c));
    }
    TrivialSplit s = split_trivial(I);
    if (s.core.m() == 0) continue;
    Rational val = brute_force_val(s.core);
    Rational lp = solve_basic_lp(s.core).objective;
    if (sgn(lp) == 0) continue;
    Rational ratio = val / lp;
    if (ratio < best) best = ratio;
  }
  return {best, IntegralityGapEstimate::Provenance::EmpiricalLowerBound};
}

bool known_alpha(const std::string& family, Rational* alpha) {
  if (family == "maxdicut") {
    *alpha = make_rational(1, 2);
    return true;
  }
  return false;
}

std::string dump_lp_text(const Instance& I) {
  std::ostringstream os;
  const int sigma = I.alphabet.size;
  os << "maximize (1/" << I.m() << ") * (";
  bool first = true;
  for (size_t i = 0; i < I.constraints.size(); ++i) {
    const Predicate& p = I.preds.at(I.constraints[i].pred);
    for (uint64_t b = 0; b < p.table_size(); ++b) {
      if (!p.eval_index(b)) continue;
      if (!first) os << " + ";
      first = false;
      os << "z[" << i << "," << b << "]";
    }
  }
  os << ")\nsubject to\n";
  for (int32_t v = 0; v < I.n; ++v) {
    for (int s = 0; s < sigma; ++s) {
      os << (s ? " + " : "  ") << "x[" << v << "," << s << "]";
    }
    os << " = 1\n";
  }
  for (size_t i = 0; i < I.constraints.size(); ++i) {
    const auto& c = I.constraints[i];
    const Predicate& p = I.preds.at(c.pred);
    for (int j = 0; j < p.arity(); ++j) {
      for (int s = 0; s < sigma; ++s) {
        os << "  ";
        bool f2 = true;
        for (uint64_t b = 0; b < p.table_size(); ++b) {
          if (tuple_symbol(b, j, p.arity(), sigma) != s) continue;
          if (!f2) os << " + ";
          f2 = false;
          os << "z[" << i << "," << b << "]";
        }
        os << " = x[" << c.vars[static_cast<size_t>(j)] << "," << s << "]\n";
      }
    }
  }
  os << "  x >= 0, z >= 0\n";
  return os.str();
}

std::string dump_solution_json(const Instance& I, const LpSolution& sol) {
  std::ostringstream os;
  os << "{\n  \"m\": " << I.m() << ",\n  \"objective\": \"" << to_frac_string(sol.objective)
     << "\",\n  \"x\": {";
  bool first = true;
  for (const auto& [key, val] : sol.x) {
    if (!first) os << ",";
    first = false;
    os << "\n    \"" << key.first << "," << key.second << "\": \"" << to_frac_string(val) << "\"";
  }
  os << "\n  },\n  \"z\": {";
  first = true;
  for (const auto& [key, val] : sol.z) {
    if (!first) os << ",";
    first = false;
    os << "\n    \"" << key.first << "," << key.second << "\": \"" << to_frac_string(val) << "\"";
  }
  os << "\n  }\n}\n";
  return os.str();
}

}  // namespace cspstream
