#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "rational.hpp"
#include "tape.hpp"

namespace cspstream {

struct Alphabet {
  int size = 2;  // symbols are 0..size-1
};

// A k-ary predicate stored as a dense truth table over all size^k tuples.
// Tuple (b_1,...,b_k) maps to index sum b_j * size^(k-j): the last
// coordinate varies fastest.
class Predicate {
 public:
  Predicate(int arity, int alphabet_size, std::vector<uint8_t> table);

  int arity() const { return arity_; }
  int alphabet_size() const { return sigma_; }
  uint64_t table_size() const { return table_.size(); }
  const std::vector<uint8_t>& table() const { return table_; }

  bool eval_index(uint64_t idx) const { return table_[idx] != 0; }
  bool eval(const int32_t* symbols) const { return eval_index(tuple_index(symbols)); }

  uint64_t tuple_index(const int32_t* symbols) const {
    uint64_t idx = 0;
    for (int j = 0; j < arity_; ++j) idx = idx * sigma_ + static_cast<uint64_t>(symbols[j]);
    return idx;
  }

  bool trivially_true() const { return trivially_true_; }
  bool trivially_false() const { return trivially_false_; }
  bool nontrivial() const { return !trivially_true_ && !trivially_false_; }

  // Fraction of tuples that satisfy the predicate.
  Rational satisfying_fraction() const;

 private:
  int arity_;
  int sigma_;
  std::vector<uint8_t> table_;
  bool trivially_true_;
  bool trivially_false_;
};

// Deduplicating store of predicates; constraints refer to entries by id.
class PredicateRegistry {
 public:
  int add(Predicate p);
  const Predicate& at(int id) const { return preds_.at(static_cast<size_t>(id)); }
  int size() const { return static_cast<int>(preds_.size()); }

 private:
  std::vector<Predicate> preds_;
  std::map<std::pair<int, std::vector<uint8_t>>, int> index_;
};

struct Constraint {
  int pred = 0;
  std::vector<int32_t> vars;  // arity entries; repeats allowed
};

// A Max-CSP instance. The constraint list order is the stream order.
struct Instance {
  int32_t n = 0;
  Alphabet alphabet;
  PredicateRegistry preds;
  std::vector<Constraint> constraints;

  int64_t m() const { return static_cast<int64_t>(constraints.size()); }
  int max_arity() const;
  const Predicate& pred_of(const Constraint& c) const { return preds.at(c.pred); }
  void validate() const;  // throws on inconsistent wiring
};

using Assignment = std::vector<int32_t>;

// Fraction of constraints satisfied by tau, as an exact rational.
Rational evaluate(const Instance& I, const Assignment& tau);

// Exact maximum of evaluate over all sigma^n assignments.
// Guarded: sigma^n must stay within brute_force_guard().
Rational brute_force_val(const Instance& I);
constexpr uint64_t brute_force_guard() { return 10'000'000; }

// Returns an optimal assignment alongside the value.
std::pair<Rational, Assignment> brute_force_opt(const Instance& I);

// Pads every constraint to arity exactly k by appending fresh dummy
// variables (one per padded position, indexed after n-1), so real-variable
// degrees are untouched and the value is preserved for any extension.
Instance pad_arity(const Instance& I, int k);

struct TrivialSplit {
  Instance core;       // the nontrivial constraints, stream order preserved
  int64_t m_true = 0;  // trivially satisfied constraints dropped
  int64_t m_false = 0; // trivially violated constraints dropped
};
TrivialSplit split_trivial(const Instance& I);

// (m0*vhat + mT) / (m0 + mT + mF)
double recombine_estimate(double vhat, int64_t m0, int64_t mT, int64_t mF);

// Keeps each constraint independently with probability p, keyed by its
// index in the tape's Subsample namespace; order preserved.
Instance subsample_constraints(const Instance& I, double p, const RandomTape& tape);

// Number of constraints adjacent to v. A constraint listing v in several
// positions still counts once.
int64_t degree(const Instance& I, int32_t v);
std::vector<int64_t> degree_profile(const Instance& I);

}  // namespace cspstream
