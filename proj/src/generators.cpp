#include "cspstream/generators.hpp"

#include <algorithm>

#include "cspstream/tape.hpp"

namespace cspstream {

namespace {

Predicate xor_pred() { return Predicate(2, 2, {0, 1, 1, 0}); }
Predicate dicut_pred() { return Predicate(2, 2, {0, 0, 1, 0}); }  // satisfied by (1,0)

Predicate ksat_pred(int k, uint64_t neg_mask) {
  // Clause over k boolean literals; bit j of neg_mask negates position j.
  std::vector<uint8_t> table(static_cast<size_t>(1) << k, 0);
  for (uint64_t b = 0; b < table.size(); ++b) {
    bool sat = false;
    for (int j = 0; j < k && !sat; ++j) {
      int bit = static_cast<int>((b >> (k - 1 - j)) & 1);
      int want = (neg_mask >> j) & 1 ? 0 : 1;
      if (bit == want) sat = true;
    }
    table[b] = sat ? 1 : 0;
  }
  return Predicate(k, 2, std::move(table));
}

class GenRng {
 public:
  explicit GenRng(uint64_t seed) : tape_(seed) {}
  uint64_t next(uint64_t bound) {
    return tape_.uniform_int(bound, RandomTape::Ns::Subsample, 0x6e6e, counter_++);
  }

 private:
  RandomTape tape_;
  uint64_t counter_ = 0;
};

void pick_distinct_vars(GenRng& rng, int32_t n, int k, std::vector<int32_t>* out) {
  out->clear();
  while (static_cast<int>(out->size()) < k) {
    int32_t v = static_cast<int32_t>(rng.next(static_cast<uint64_t>(n)));
    if (std::find(out->begin(), out->end(), v) == out->end()) out->push_back(v);
  }
}

bool has_isolated(const Instance& I) {
  auto deg = degree_profile(I);
  return std::any_of(deg.begin(), deg.end(), [](int64_t d) { return d == 0; });
}

Instance generate_once(const GenSpec& spec, GenRng& rng) {
  Instance I;
  I.n = spec.n;
  I.alphabet.size = spec.family == "random" ? spec.sigma : 2;

  std::vector<int32_t> vars;
  for (int64_t i = 0; i < spec.m; ++i) {
    Constraint c;
    if (spec.family == "maxcut" || spec.family == "maxdicut") {
      pick_distinct_vars(rng, spec.n, 2, &vars);
      c.pred = I.preds.add(spec.family == "maxcut" ? xor_pred() : dicut_pred());
      c.vars = vars;
    } else if (spec.family == "ksat") {
      pick_distinct_vars(rng, spec.n, spec.k, &vars);
      uint64_t mask = rng.next(uint64_t{1} << spec.k);
      c.pred = I.preds.add(ksat_pred(spec.k, mask));
      c.vars = vars;
    } else {  // random nontrivial table
      if (spec.n >= spec.k)
        pick_distinct_vars(rng, spec.n, spec.k, &vars);
      else {
        vars.clear();
        for (int j = 0; j < spec.k; ++j)
          vars.push_back(static_cast<int32_t>(rng.next(static_cast<uint64_t>(spec.n))));
      }
      uint64_t cells = 1;
      for (int j = 0; j < spec.k; ++j) cells *= static_cast<uint64_t>(spec.sigma);
      std::vector<uint8_t> table(cells);
      for (;;) {
        bool any0 = false, any1 = false;
        for (auto& cell : table) {
          cell = static_cast<uint8_t>(rng.next(2));
          (cell ? any1 : any0) = true;
        }
        if (any0 && any1) break;
      }
      c.pred = I.preds.add(Predicate(spec.k, spec.sigma, std::move(table)));
      c.vars = vars;
    }
    I.constraints.push_back(std::move(c));
  }
  return I;
}

}  // namespace

Instance generate(const GenSpec& spec) {
  if (spec.n < 1 || spec.m < 1) throw std::invalid_argument("generator needs n >= 1 and m >= 1");
  if ((spec.family == "maxcut" || spec.family == "maxdicut") && (spec.k != 2 || spec.sigma != 2))
    throw std::invalid_argument(spec.family + " requires k = 2 and sigma = 2");
  if (spec.family == "ksat" && spec.sigma != 2)
    throw std::invalid_argument("ksat requires sigma = 2");
  if (spec.family != "random" && spec.family != "maxcut" && spec.family != "maxdicut" &&
      spec.family != "ksat")
    throw std::invalid_argument("unknown family: " + spec.family);
  if (spec.k < 1 || spec.k > spec.n)
    throw std::invalid_argument("generator needs 1 <= k <= n");

  GenRng rng(spec.seed);
  for (int attempt = 0; attempt < 200; ++attempt) {
    Instance I = generate_once(spec, rng);
    if (spec.allow_isolated || !has_isolated(I)) return I;
  }
  throw std::runtime_error(
      "could not sample an instance without isolated variables; raise m or pass allow_isolated");
}

std::vector<Predicate> family_predicates(const std::string& family, int k, int sigma) {
  std::vector<Predicate> fam;
  if (family == "maxcut") {
    fam.push_back(xor_pred());
  } else if (family == "maxdicut") {
    fam.push_back(dicut_pred());
  } else if (family == "ksat") {
    for (uint64_t mask = 0; mask < (uint64_t{1} << k); ++mask) fam.push_back(ksat_pred(k, mask));
  } else if (family == "random") {
    // All nontrivial tables would be huge; sample a spread instead.
    GenRng rng(0x7a11);
    uint64_t cells = 1;
    for (int j = 0; j < k; ++j) cells *= static_cast<uint64_t>(sigma);
    for (int t = 0; t < 32; ++t) {
      std::vector<uint8_t> table(cells);
      bool any0 = false, any1 = false;
      for (auto& cell : table) {
        cell = static_cast<uint8_t>(rng.next(2));
        (cell ? any1 : any0) = true;
      }
      if (any0 && any1) fam.emplace_back(k, sigma, std::move(table));
    }
  } else {
    throw std::invalid_argument("unknown family: " + family);
  }
  return fam;
}

}  // namespace cspstream
