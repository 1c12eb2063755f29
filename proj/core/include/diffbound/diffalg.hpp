#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "diffbound/logic.hpp"

namespace diffbound::diffalg {

// Commuting derivation operators d1..dm as multi-indices; composition is
// componentwise addition and ord is the total degree.
struct Derivative {
    std::vector<int> idx;

    static Derivative zero(int m) { return {std::vector<int>(m, 0)}; }
    static Derivative unit(int m, int k);  // d_{k+1}, 0-based k
    static Derivative lcm(const Derivative& a, const Derivative& b);

    int ord() const;
    bool is_identity() const;
    Derivative plus(const Derivative& o) const;
    // Componentwise <=: this can be completed to o by further derivations.
    bool divides(const Derivative& o) const;
    Derivative minus(const Derivative& o) const;  // requires o.divides(*this)

    bool operator==(const Derivative& o) const { return idx == o.idx; }
    bool operator<(const Derivative& o) const { return idx < o.idx; }
};

std::string derivative_text(const Derivative& d);

// One derivative of one differential indeterminate: theta applied to y_var.
struct DiffVar {
    Derivative theta;
    int var = 0;  // 0-based indeterminate index

    bool operator==(const DiffVar& o) const {
        return var == o.var && theta == o.theta;
    }
    bool operator<(const DiffVar& o) const {
        return var != o.var ? var < o.var : theta < o.theta;
    }
};

// Power product of derivatives of indeterminates; exponents >= 1.
struct Monomial {
    std::map<DiffVar, int> exp;

    static Monomial one() { return {}; }
    static Monomial of(const DiffVar& v, int e = 1);

    bool is_one() const { return exp.empty(); }
    int deg(const DiffVar& v) const;
    Monomial times(const Monomial& o) const;
    Monomial without(const DiffVar& v) const;  // erases v entirely

    bool operator==(const Monomial& o) const { return exp == o.exp; }
    bool operator<(const Monomial& o) const { return exp < o.exp; }
};

// Ambient ring description: m derivations, n indeterminates, display names.
struct DiffRing {
    int m = 1;
    int n = 1;
    std::vector<std::string> names;  // optional; defaults y or y1..yn
    logic::Sort coeff_sort = "F";

    std::string name(int var) const;
    int var_by_name(const std::string& s) const;  // -1 if unknown
};

// How coefficient terms are treated as ground-field elements. The rational
// field answers zero tests by evaluation and kills every derivative; the
// oracle-backed field used by the lifted algorithm defers instead.
class CoeffField {
public:
    virtual ~CoeffField() = default;
    virtual bool is_zero(const logic::TermPtr& c) = 0;
    virtual logic::TermPtr derive(const logic::TermPtr& c, int k) = 0;
};

class RationalCoeffs final : public CoeffField {
public:
    bool is_zero(const logic::TermPtr& c) override;
    logic::TermPtr derive(const logic::TermPtr& c, int k) override;
};

// Sparse differential polynomial. Coefficients are terms of the ring's
// coefficient sort; rational arithmetic folds to literals, so purely
// numeric coefficients stay in normal form and symbolic ones grow terms.
// Coefficients that fold to literal zero are never stored; a symbolic
// coefficient may still be semantically zero, which only a CoeffField
// query can see.
class DiffPoly {
public:
    DiffPoly() = default;

    static DiffPoly zero();
    static DiffPoly constant(const BigRat& c, const DiffRing& ring);
    static DiffPoly coefficient(logic::TermPtr c);
    static DiffPoly variable(const DiffVar& v, const DiffRing& ring);

    bool is_syntactic_zero() const { return coeffs_.empty(); }
    // Variable-free and, after folding, a literal rational.
    bool is_ground_constant() const;
    BigRat ground_value() const;  // requires is_ground_constant

    const std::map<Monomial, logic::TermPtr>& coeffs() const { return coeffs_; }
    logic::TermPtr coeff(const Monomial& mono) const;  // literal 0 when absent

    DiffPoly plus(const DiffPoly& o) const;
    DiffPoly minus(const DiffPoly& o) const;
    DiffPoly times(const DiffPoly& o) const;
    DiffPoly negated() const;
    DiffPoly scaled(const BigRat& c) const;
    DiffPoly pow(int k) const;

    // Total derivative by d_{k+1}: Leibniz on monomials, CoeffField on
    // coefficients.
    DiffPoly derive(int k, const DiffRing& ring, CoeffField& field) const;
    DiffPoly derive(const Derivative& theta, const DiffRing& ring,
                    CoeffField& field) const;

    // All derivatives appearing syntactically, highest map order last.
    std::vector<DiffVar> support_vars() const;
    int syntactic_deg(const DiffVar& v) const;
    // this as a univariate polynomial in v: index = power, entry = the
    // coefficient differential polynomial.
    std::vector<DiffPoly> coeffs_in(const DiffVar& v) const;

    int max_order() const;   // largest ord over support, 0 for constants
    int total_degree() const;

    // When every coefficient is a literal rational, divides by the content
    // and fixes the top monomial's sign positive; any symbolic coefficient
    // makes this the identity.
    DiffPoly primitive() const;

    bool operator==(const DiffPoly& o) const;
    bool operator<(const DiffPoly& o) const;  // arbitrary fixed order

private:
    void add_term(const Monomial& mono, const logic::TermPtr& c);
    std::map<Monomial, logic::TermPtr> coeffs_;
};

}  // namespace diffbound::diffalg
