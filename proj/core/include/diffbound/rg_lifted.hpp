#pragma once

#include "diffbound/oracle.hpp"

namespace diffbound::rg {

// Characteristic decomposition run as a total oracle algorithm: the ground
// field is reached only through the oracle, via zero-tests of coefficient
// terms in x1..xl (field sort F) and ranking-weight comparisons, which are
// linear formulas over the weight variables a1..a{(m+1)(m+n)} (sort Q). The
// first query always checks that the weights define a ranking.
//
// The input string assembles the system from templates, one per character:
//   'p'  d1(y1)^2 - 4*y1          (rational coefficients)
//   'l'  x1*d1(y1) - y1           (needs l >= 1)
//   'q'  x2*d1(y1) - x1*y1        (needs l >= 2)
//   'u'  d1(y1) and d2(y1)        (needs m >= 2)
// Weights the first query rejects halt with output "R"; unusable templates
// for the given shape halt with output "E"; blowing the internal work cap
// halts with output "C". Otherwise the output renders the decomposition as
// "<k>" plus ":<leaders>" per component.
//
// Cost: queries + work-list steps + output length.
oracle::TotalAlgorithm lifted_algorithm(int m, int n, int l);

}  // namespace diffbound::rg
