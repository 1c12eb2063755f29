#pragma once

// Sparse multivariate polynomials over the rationals: the atom normal form
// of the acf0 theory. Monomial order is the std::map order on exponent maps,
// fixed once for determinism. Not installed.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "diffbound/logic.hpp"

namespace diffbound::theory {

struct PMono {
    std::map<std::string, int, logic::NaturalLess> exp;  // var -> power >= 1
    bool operator<(const PMono& o) const { return exp < o.exp; }
    bool operator==(const PMono& o) const { return exp == o.exp; }
};

struct Poly {
    std::map<PMono, BigRat> terms;  // nonzero coefficients only

    static Poly zero() { return {}; }
    static Poly constant(const BigRat& c);
    static Poly variable(const std::string& name);
    static Poly from_term(const logic::TermPtr& t);  // throws FragmentError

    bool is_zero() const { return terms.empty(); }
    bool is_const() const;
    const BigRat& const_value() const;  // requires is_const and !is_zero

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly negated() const;
    Poly pow(int k) const;

    int degree(const std::string& var) const;
    int total_degree() const;
    // Coefficients as a univariate polynomial in `var`, index = power.
    std::vector<Poly> coeffs_in(const std::string& var) const;
    Poly leading_coeff(const std::string& var) const;
    Poly drop_leading(const std::string& var) const;
    Poly derive(const std::string& var) const;
    // Substitutes an integer for `var`.
    Poly eval_int(const std::string& var, const BigInt& value) const;

    // Divides by rational content and normalizes the sign of the leading
    // monomial to +. Identity on zero.
    Poly primitive() const;

    logic::TermPtr to_term(const logic::Sort& sort) const;
    bool operator==(const Poly& o) const { return terms == o.terms; }
    bool operator<(const Poly& o) const { return terms < o.terms; }
};

// Pseudo-remainder of f by g in `var`: lc_var(g)^k * f = q*g + r with
// deg_var(r) < deg_var(g). Requires deg_var(g) >= 1. A positive
// total_degree_cap aborts with CapExceeded before a reduction step would
// grow past it.
Poly prem(const Poly& f, const Poly& g, const std::string& var,
          int total_degree_cap = 0);

// Exact quotient, or nullopt when den does not divide num.
std::optional<Poly> divide_exact(const Poly& num, const Poly& den);

// Gcd up to a rational unit, found by integer evaluation and digit
// reconstruction. May fall back to 1 when reconstruction keeps missing, so
// callers may only rely on the result dividing both inputs.
Poly gcd_poly(const Poly& a, const Poly& b);

// A primitive polynomial with the same zero set and no repeated factors.
Poly squarefree(const Poly& p);

// Primitive squarefree factors whose zero sets union to the zero set of p,
// in a deterministic order. Best effort: factors need not be irreducible.
// Empty for constants.
std::vector<Poly> squarefree_factors(const Poly& p);

}  // namespace diffbound::theory
