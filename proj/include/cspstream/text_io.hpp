#pragma once

#include <iosfwd>
#include <string>

#include "instance.hpp"

namespace cspstream {

// Canonical text format, bit-exact on round trip:
//   csp <n> <m> <sigma> <k>
//   pred <id> <bitstring over sigma^arity tuples, last coordinate fastest>
//   c <pred-id> <v_1> ... <v_arity>          (one line per constraint, stream order)
// Predicates are listed in id order; k in the header is the maximum arity.
void write_instance(std::ostream& os, const Instance& I);
Instance read_instance(std::istream& is);

void write_instance_file(const std::string& path, const Instance& I);
Instance read_instance_file(const std::string& path);

std::string to_text(const Instance& I);
Instance from_text(const std::string& text);

}  // namespace cspstream
