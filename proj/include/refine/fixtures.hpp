#pragma once

#include "refine/grammar.hpp"
#include "refine/syntax.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace refine {

struct Fixture {
  std::string name;
  Formula formula;
};

// p -> [x]<x'>p for every character x of the alphabet.
std::vector<Fixture> grammar_a2(const CfcstSystem &s);
// <s>p -> <x>p for every production x -> s.
std::vector<Fixture> grammar_a3(const CfcstSystem &s);

// Converse closure of at most max_rules random productions over at most
// max_bases base characters, with tails of length at most 3. Same seed, same
// system.
CfcstSystem random_system(std::uint64_t seed, int max_bases = 4, int max_rules = 5);

// Instances of the DS axioms with the schematic letters ranging over
// p, q, ~p, ~q. A14 is included for k > 0.
std::vector<Fixture> ds_axioms(int k);

// Formulas that are not DS theorems for k = 0 or k >= 2. With k = 1 the
// single choice cell validates [o]p -> p and [0]p -> [*]p.
std::vector<Fixture> ds_non_theorems();

} // namespace refine
