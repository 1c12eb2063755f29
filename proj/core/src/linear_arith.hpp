#pragma once

// Linear forms over the rationals: the atom normal form of the lovs theory.
// Stored exactly; conversion back to terms clears denominators and divides
// by integer content, so printed atoms have primitive integer coefficients.
// Not installed.

#include <map>
#include <string>
#include <vector>

#include "diffbound/logic.hpp"

namespace diffbound::theory {

struct LinForm {
    std::map<std::string, BigRat, logic::NaturalLess> coef;
    BigRat cst;

    static LinForm from_term(const logic::TermPtr& t);  // throws FragmentError

    void add_scaled(const LinForm& other, const BigRat& factor);
    LinForm scaled(const BigRat& factor) const;

    BigRat coeff(const std::string& var) const;
    bool is_const() const;
    void drop_var(const std::string& var);
    void prune();  // removes zero coefficients
};

enum class LinRel { Eq0, Ne0, Gt0, Ge0 };

// Canonical atom for `form rel 0`: integer primitive coefficients, positive
// terms on one side. Eq/Ne additionally normalize the leading sign.
logic::FormulaPtr lin_to_formula(LinForm form, LinRel rel, const logic::Sort& sort);

}  // namespace diffbound::theory
