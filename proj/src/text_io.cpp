#include "cspstream/text_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace cspstream {

void write_instance(std::ostream& os, const Instance& I) {
  os << "csp " << I.n << ' ' << I.m() << ' ' << I.alphabet.size << ' ' << I.max_arity() << '\n';
  for (int id = 0; id < I.preds.size(); ++id) {
    const Predicate& p = I.preds.at(id);
    os << "pred " << id << ' ';
    for (uint8_t b : p.table()) os << (b ? '1' : '0');
    os << '\n';
  }
  for (const auto& c : I.constraints) {
    os << "c " << c.pred;
    for (int32_t v : c.vars) os << ' ' << v;
    os << '\n';
  }
}

Instance read_instance(std::istream& is) {
  Instance I;
  std::string tag;
  int64_t m = 0;
  int k = 0;
  if (!(is >> tag) || tag != "csp") throw std::runtime_error("instance file: missing csp header");
  if (!(is >> I.n >> m >> I.alphabet.size >> k))
    throw std::runtime_error("instance file: malformed header");
  if (I.n < 0 || m < 0 || I.alphabet.size < 2 || k < 1)
    throw std::runtime_error("instance file: header values out of range");

  while (is >> tag) {
    if (tag == "pred") {
      int id;
      std::string bits;
      if (!(is >> id >> bits)) throw std::runtime_error("instance file: malformed pred line");
      if (id != I.preds.size()) throw std::runtime_error("instance file: pred ids must be dense and in order");
      // Recover the arity from the table length.
      int arity = 0;
      uint64_t sz = 1;
      while (sz < bits.size() && arity <= k) {
        sz *= static_cast<uint64_t>(I.alphabet.size);
        ++arity;
      }
      if (sz != bits.size() || arity < 1 || arity > k)
        throw std::runtime_error("instance file: pred table length is not sigma^arity with arity <= k");
      std::vector<uint8_t> table(bits.size());
      for (size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] != '0' && bits[i] != '1')
          throw std::runtime_error("instance file: pred table must be a 0/1 bitstring");
        table[i] = bits[i] == '1' ? 1 : 0;
      }
      I.preds.add(Predicate(arity, I.alphabet.size, std::move(table)));
    } else if (tag == "c") {
      int pred;
      if (!(is >> pred)) throw std::runtime_error("instance file: malformed constraint line");
      if (pred < 0 || pred >= I.preds.size())
        throw std::runtime_error("instance file: constraint references unknown predicate");
      Constraint c;
      c.pred = pred;
      c.vars.resize(static_cast<size_t>(I.preds.at(pred).arity()));
      for (auto& v : c.vars)
        if (!(is >> v)) throw std::runtime_error("instance file: constraint line is short");
      I.constraints.push_back(std::move(c));
    } else {
      throw std::runtime_error("instance file: unknown line tag '" + tag + "'");
    }
  }
  if (I.m() != m) throw std::runtime_error("instance file: constraint count does not match header");
  I.validate();
  return I;
}

void write_instance_file(const std::string& path, const Instance& I) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  write_instance(os, I);
}

Instance read_instance_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open for reading: " + path);
  return read_instance(is);
}

std::string to_text(const Instance& I) {
  std::ostringstream os;
  write_instance(os, I);
  return os.str();
}

Instance from_text(const std::string& text) {
  std::istringstream is(text);
  return read_instance(is);
}

}  // namespace cspstream
