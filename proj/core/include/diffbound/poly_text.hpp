#pragma once

#include <string>

#include "diffbound/diffalg.hpp"

namespace diffbound::poly_text {

// "y[2]", "u[1,0]": one derivation order per bracket slot.
std::string var_text(const diffalg::DiffVar& v, const diffalg::DiffRing& ring);

// Infix rendering, highest monomial first. Literal rational coefficients
// print inline; symbolic ones fall back to the prefix term grammar.
std::string poly_to_text(const diffalg::DiffPoly& p,
                         const diffalg::DiffRing& ring);

// Infix grammar:
//   expr   := ['-'] term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := base ('^' nat)?
//   base   := rational | ident ('[' nat (',' nat)* ']')? | '(' expr ')'
// An ident that names an indeterminate is a derivative of it (bare = order
// zero); any other ident is a coefficient symbol of the coefficient sort.
diffalg::DiffPoly parse_poly(const std::string& input,
                             const diffalg::DiffRing& ring);

}  // namespace diffbound::poly_text
