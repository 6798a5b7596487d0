#include "cspstream/instance.hpp"

#include <algorithm>
#include <cmath>

namespace cspstream {

namespace {

uint64_t pow_u64(uint64_t base, int exp) {
  uint64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

Predicate::Predicate(int arity, int alphabet_size, std::vector<uint8_t> table)
    : arity_(arity), sigma_(alphabet_size), table_(std::move(table)) {
  if (arity_ < 1) throw std::invalid_argument("predicate arity must be positive");
  if (sigma_ < 2) throw std::invalid_argument("alphabet size must be at least 2");
  if (table_.size() != pow_u64(static_cast<uint64_t>(sigma_), arity_))
    throw std::invalid_argument("predicate table size does not match sigma^k");
  trivially_true_ = std::all_of(table_.begin(), table_.end(), [](uint8_t b) { return b != 0; });
  trivially_false_ = std::all_of(table_.begin(), table_.end(), [](uint8_t b) { return b == 0; });
}

Rational Predicate::satisfying_fraction() const {
  long sat = static_cast<long>(std::count_if(table_.begin(), table_.end(),
                                             [](uint8_t b) { return b != 0; }));
  return make_rational(sat, static_cast<long>(table_.size()));
}

int PredicateRegistry::add(Predicate p) {
  auto key = std::make_pair(p.arity(), p.table());
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  int id = static_cast<int>(preds_.size());
  preds_.push_back(std::move(p));
  index_.emplace(std::move(key), id);
  return id;
}

int Instance::max_arity() const {
  int k = 0;
  for (const auto& c : constraints) k = std::max(k, preds.at(c.pred).arity());
  return k;
}

void Instance::validate() const {
  for (const auto& c : constraints) {
    const Predicate& p = preds.at(c.pred);
    if (static_cast<int>(c.vars.size()) != p.arity())
      throw std::invalid_argument("constraint variable count does not match predicate arity");
    if (p.alphabet_size() != alphabet.size)
      throw std::invalid_argument("predicate alphabet does not match instance alphabet");
    for (int32_t v : c.vars)
      if (v < 0 || v >= n) throw std::invalid_argument("constraint variable index out of range");
  }
}

Rational evaluate(const Instance& I, const Assignment& tau) {
  if (static_cast<int32_t>(tau.size()) != I.n)
    throw std::invalid_argument("assignment length does not match variable count");
  if (I.m() == 0) throw std::invalid_argument("evaluate on empty instance");
  for (int32_t s : tau)
    if (s < 0 || s >= I.alphabet.size) throw std::invalid_argument("assignment symbol out of range");

  long sat = 0;
  std::vector<int32_t> buf;
  for (const auto& c : I.constraints) {
    const Predicate& p = I.preds.at(c.pred);
    buf.resize(c.vars.size());
    for (size_t j = 0; j < c.vars.size(); ++j) buf[j] = tau[static_cast<size_t>(c.vars[j])];
    if (p.eval(buf.data())) ++sat;
  }
  return make_rational(sat, static_cast<long>(I.m()));
}

std::pair<Rational, Assignment> brute_force_opt(const Instance& I) {
  if (I.m() == 0) throw std::invalid_argument("brute force on empty instance");
  const uint64_t sigma = static_cast<uint64_t>(I.alphabet.size);
  double space = std::pow(static_cast<double>(sigma), static_cast<double>(I.n));
  if (space > static_cast<double>(brute_force_guard()))
    throw std::invalid_argument("instance too large for brute-force enumeration");

  // Precompute flat views of the constraints for the inner loop.
  struct Flat {
    const Predicate* pred;
    const int32_t* vars;
    int k;
  };
  std::vector<Flat> flat;
  flat.reserve(I.constraints.size());
  for (const auto& c : I.constraints)
    flat.push_back({&I.preds.at(c.pred), c.vars.data(), static_cast<int>(c.vars.size())});

  Assignment tau(static_cast<size_t>(I.n), 0);
  Assignment best_tau = tau;
  long best = -1;
  std::vector<int32_t> buf;
  const uint64_t total = pow_u64(sigma, I.n);
  for (uint64_t a = 0;; ++a) {
    long sat = 0;
    for (const auto& f : flat) {
      uint64_t idx = 0;
      for (int j = 0; j < f.k; ++j) idx = idx * sigma + static_cast<uint64_t>(tau[static_cast<size_t>(f.vars[j])]);
      if (f.pred->eval_index(idx)) ++sat;
    }
    if (sat > best) {
      best = sat;
      best_tau = tau;
    }
    if (a + 1 == total) break;
    // odometer increment, last variable fastest
    for (int32_t v = I.n - 1; v >= 0; --v) {
      if (++tau[static_cast<size_t>(v)] < I.alphabet.size) break;
      tau[static_cast<size_t>(v)] = 0;
    }
  }
  return {make_rational(best, static_cast<long>(I.m())), best_tau};
}

Rational brute_force_val(const Instance& I) { return brute_force_opt(I).first; }

Instance pad_arity(const Instance& I, int k) {
  if (I.max_arity() > k) throw std::invalid_argument("constraint arity exceeds pad target");

  Instance out;
  out.alphabet = I.alphabet;
  out.n = I.n;
  const int sigma = I.alphabet.size;

  for (const auto& c : I.constraints) {
    const Predicate& p = I.preds.at(c.pred);
    const int kp = p.arity();
    Constraint nc;
    nc.vars = c.vars;
    if (kp == k) {
      nc.pred = out.preds.add(p);
    } else {
      // Lift the table to arity k; the appended positions are ignored.
      uint64_t new_size = pow_u64(static_cast<uint64_t>(sigma), k);
      uint64_t tail = pow_u64(static_cast<uint64_t>(sigma), k - kp);
      std::vector<uint8_t> table(new_size);
      for (uint64_t idx = 0; idx < new_size; ++idx) table[idx] = p.table()[idx / tail];
      nc.pred = out.preds.add(Predicate(k, sigma, std::move(table)));
      for (int j = kp; j < k; ++j) nc.vars.push_back(out.n++);
    }
    out.constraints.push_back(std::move(nc));
  }
  return out;
}

TrivialSplit split_trivial(const Instance& I) {
  TrivialSplit s;
  s.core.n = I.n;
  s.core.alphabet = I.alphabet;
  for (const auto& c : I.constraints) {
    const Predicate& p = I.preds.at(c.pred);
    if (p.trivially_true()) {
      ++s.m_true;
    } else if (p.trivially_false()) {
      ++s.m_false;
    } else {
      Constraint nc;
      nc.pred = s.core.preds.add(p);
      nc.vars = c.vars;
      s.core.constraints.push_back(std::move(nc));
    }
  }
  return s;
}

double recombine_estimate(double vhat, int64_t m0, int64_t mT, int64_t mF) {
  if (m0 < 0 || mT < 0 || mF < 0) throw std::invalid_argument("negative constraint counts");
  int64_t m = m0 + mT + mF;
  if (m == 0) throw std::invalid_argument("recombine with all counts zero");
  return (static_cast<double>(m0) * vhat + static_cast<double>(mT)) / static_cast<double>(m);
}

Instance subsample_constraints(const Instance& I, double p, const RandomTape& tape) {
  if (!(p > 0.0) || p > 1.0) throw std::invalid_argument("subsample probability must be in (0,1]");
  Instance out;
  out.n = I.n;
  out.alphabet = I.alphabet;
  for (size_t i = 0; i < I.constraints.size(); ++i) {
    if (!tape.bernoulli(p, RandomTape::Ns::Subsample, static_cast<uint64_t>(i))) continue;
    Constraint nc;
    nc.pred = out.preds.add(I.preds.at(I.constraints[i].pred));
    nc.vars = I.constraints[i].vars;
    out.constraints.push_back(std::move(nc));
  }
  return out;
}

int64_t degree(const Instance& I, int32_t v) {
  if (v < 0 || v >= I.n) throw std::invalid_argument("variable index out of range");
  int64_t d = 0;
  for (const auto& c : I.constraints)
    if (std::find(c.vars.begin(), c.vars.end(), v) != c.vars.end()) ++d;
  return d;
}

std::vector<int64_t> degree_profile(const Instance& I) {
  std::vector<int64_t> deg(static_cast<size_t>(I.n), 0);
  std::vector<int32_t> seen;
  for (const auto& c : I.constraints) {
    seen.assign(c.vars.begin(), c.vars.end());
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    for (int32_t v : seen) ++deg[static_cast<size_t>(v)];
  }
  return deg;
}

}  // namespace cspstream
