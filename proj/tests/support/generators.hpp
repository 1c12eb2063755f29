#pragma once

// Seeded random instance builders shared by the unit and acceptance suites.
// Every generator takes an explicit Rng so failures replay exactly.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "diffbound/delay.hpp"
#include "diffbound/diffalg.hpp"
#include "diffbound/logic.hpp"
#include "diffbound/theory.hpp"

namespace testgen {

using namespace diffbound;

struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}

    int below(int n) { return static_cast<int>(eng() % static_cast<std::uint64_t>(n)); }
    bool flip() { return (eng() & 1) != 0; }
    int range(int lo, int hi) { return lo + below(hi - lo + 1); }

    BigRat rat(int lo, int hi, int max_den = 1) {
        int numer = range(lo, hi);
        int denom = 1 + below(max_den);
        return BigRat(numer, denom);
    }
    BigRat nonzero_rat(int lo, int hi, int max_den = 1) {
        for (;;) {
            BigRat q = rat(lo, hi, max_den);
            if (q != 0) return q;
        }
    }
    // zero with probability roughly one third, to hit degenerate branches
    BigRat spiky_rat(int lo, int hi, int max_den = 1) {
        if (below(3) == 0) return 0;
        return rat(lo, hi, max_den);
    }
};

// ---------------------------------------------------------------------------
// First-order formulas per theory fragment
// ---------------------------------------------------------------------------

struct FormulaShape {
    int max_quantifiers = 3;
    int max_free_vars = 4;
    int max_atoms = 4;
    int acf_degree = 3;
};

namespace detail {

inline logic::TermPtr pick_var(Rng& rng, const std::vector<std::string>& pool,
                               const logic::Sort& sort) {
    return logic::Term::var(pool[static_cast<std::size_t>(
                                rng.below(static_cast<int>(pool.size())))],
                            sort);
}

inline logic::TermPtr dlo_term(Rng& rng, const std::vector<std::string>& pool) {
    return pick_var(rng, pool, "O");
}

inline logic::TermPtr lovs_term(Rng& rng, const std::vector<std::string>& pool,
                                int depth) {
    using logic::Term;
    if (depth == 0 || rng.below(3) == 0) {
        if (rng.below(4) == 0) return Term::rat(rng.rat(-3, 3), "Q");
        if (rng.below(3) == 0)
            return logic::t_mul(
                {Term::rat(rng.nonzero_rat(-3, 3), "Q"), pick_var(rng, pool, "Q")});
        return pick_var(rng, pool, "Q");
    }
    switch (rng.below(3)) {
        case 0:
            return logic::t_add({lovs_term(rng, pool, depth - 1),
                                 lovs_term(rng, pool, depth - 1)});
        case 1:
            return logic::t_sub(lovs_term(rng, pool, depth - 1),
                                lovs_term(rng, pool, depth - 1));
        default:
            return logic::t_neg(lovs_term(rng, pool, depth - 1));
    }
}

// sum of monomials keeps the degree cap exact
inline logic::TermPtr acf_term(Rng& rng, const std::vector<std::string>& pool,
                               int max_degree) {
    using logic::Term;
    std::vector<logic::TermPtr> monomials;
    int count = 1 + rng.below(3);
    for (int i = 0; i < count; ++i) {
        std::vector<logic::TermPtr> factors;
        factors.push_back(Term::rat(rng.nonzero_rat(-2, 2), "F"));
        int deg = rng.below(max_degree + 1);
        for (int d = 0; d < deg; ++d) factors.push_back(pick_var(rng, pool, "F"));
        monomials.push_back(logic::t_mul(std::move(factors)));
    }
    return logic::t_add(std::move(monomials));
}

inline logic::FormulaPtr atom_for(Rng& rng, const std::string& theory,
                                  const std::vector<std::string>& pool,
                                  const FormulaShape& shape) {
    using logic::Formula;
    if (theory == "dlo") {
        auto a = dlo_term(rng, pool);
        auto b = dlo_term(rng, pool);
        return rng.flip() ? Formula::less(a, b) : Formula::eq(a, b);
    }
    if (theory == "lovs") {
        auto a = lovs_term(rng, pool, 2);
        auto b = lovs_term(rng, pool, 2);
        return rng.flip() ? Formula::less(a, b) : Formula::eq(a, b);
    }
    return Formula::eq(acf_term(rng, pool, shape.acf_degree),
                       acf_term(rng, pool, shape.acf_degree));
}

inline logic::FormulaPtr boolean_tree(Rng& rng,
                                      std::vector<logic::FormulaPtr> atoms) {
    using logic::Formula;
    while (atoms.size() > 1) {
        auto b = atoms.back();
        atoms.pop_back();
        auto a = atoms.back();
        atoms.pop_back();
        switch (rng.below(5)) {
            case 0: atoms.push_back(Formula::conj({a, b})); break;
            case 1: atoms.push_back(Formula::disj({a, b})); break;
            case 2: atoms.push_back(Formula::implies(a, b)); break;
            case 3: atoms.push_back(Formula::iff(a, b)); break;
            default: atoms.push_back(Formula::conj({Formula::neg(a), b})); break;
        }
    }
    auto f = atoms[0];
    if (rng.below(3) == 0) f = logic::Formula::neg(f);
    return f;
}

}  // namespace detail

// Random formula in the decidable fragment of the named theory. Free
// variables come from a..d, bound ones from x1..x3; quantifiers wrap the
// matrix in random order and polarity.
inline logic::FormulaPtr random_formula(Rng& rng, const std::string& theory,
                                        const FormulaShape& shape = {}) {
    logic::Sort sort = theory == "dlo" ? "O" : theory == "lovs" ? "Q" : "F";
    int nq = rng.below(shape.max_quantifiers + 1);
    int nfree = 1 + rng.below(shape.max_free_vars);
    static const char* kFree[] = {"a", "b", "c", "d"};
    std::vector<std::string> pool;
    for (int i = 0; i < nfree; ++i) pool.push_back(kFree[i]);
    for (int i = 0; i < nq; ++i) pool.push_back("x" + std::to_string(i + 1));

    std::vector<logic::FormulaPtr> atoms;
    int natoms = 1 + rng.below(shape.max_atoms);
    for (int i = 0; i < natoms; ++i)
        atoms.push_back(detail::atom_for(rng, theory, pool, shape));
    auto f = detail::boolean_tree(rng, std::move(atoms));
    for (int i = nq; i >= 1; --i) {
        std::string v = "x" + std::to_string(i);
        f = rng.flip() ? logic::Formula::exists(v, sort, f)
                       : logic::Formula::forall(v, sort, f);
    }
    return f;
}

inline std::map<std::string, BigRat> random_point(
    Rng& rng, const logic::VarSet& vars, int lo = -3, int hi = 3,
    int max_den = 2) {
    std::map<std::string, BigRat> out;
    for (const auto& [name, sort] : vars) out[name] = rng.rat(lo, hi, max_den);
    return out;
}

// ---------------------------------------------------------------------------
// Differential polynomials
// ---------------------------------------------------------------------------

struct PolyShape {
    int max_ord = 2;
    int max_deg = 3;
    int max_terms = 3;
    int coeff_range = 3;
};

inline diffalg::DiffVar random_var(Rng& rng, const diffalg::DiffRing& ring,
                                   int max_ord) {
    diffalg::Derivative theta = diffalg::Derivative::zero(ring.m);
    int budget = rng.below(max_ord + 1);
    for (int i = 0; i < budget; ++i)
        theta.idx[static_cast<std::size_t>(rng.below(ring.m))] += 1;
    return diffalg::DiffVar{theta, rng.below(ring.n)};
}

inline diffalg::DiffPoly random_poly(Rng& rng, const diffalg::DiffRing& ring,
                                     const PolyShape& shape = {}) {
    diffalg::DiffPoly acc = diffalg::DiffPoly::zero();
    int terms = 1 + rng.below(shape.max_terms);
    for (int t = 0; t < terms; ++t) {
        auto mono = diffalg::DiffPoly::constant(
            rng.nonzero_rat(-shape.coeff_range, shape.coeff_range), ring);
        int deg = rng.below(shape.max_deg + 1);
        for (int d = 0; d < deg; ++d)
            mono = mono.times(diffalg::DiffPoly::variable(
                random_var(rng, ring, shape.max_ord), ring));
        acc = acc.plus(mono);
    }
    return acc;
}

inline diffalg::DiffPoly random_nonzero_poly(Rng& rng,
                                             const diffalg::DiffRing& ring,
                                             const PolyShape& shape = {}) {
    for (;;) {
        auto p = random_poly(rng, ring, shape);
        if (!p.is_syntactic_zero()) return p;
    }
}

// ---------------------------------------------------------------------------
// Shift-derivative polynomials
// ---------------------------------------------------------------------------

struct DSShape {
    int max_sigma = 3;
    int max_theta = 1;
    int max_deg = 2;
    int max_terms = 3;
    int coeff_range = 2;
    bool allow_theta = false;
};

inline delay::DSPoly random_dspoly(Rng& rng, const delay::DelayRing& ring,
                                   const DSShape& shape = {}) {
    delay::DSPoly acc;
    int terms = 1 + rng.below(shape.max_terms);
    for (int t = 0; t < terms; ++t) {
        auto mono = delay::DSPoly::constant(
            rng.nonzero_rat(-shape.coeff_range, shape.coeff_range));
        int deg = rng.below(shape.max_deg + 1);
        for (int d = 0; d < deg; ++d) {
            delay::DSVar v;
            v.theta = diffalg::Derivative::zero(ring.m);
            if (shape.allow_theta && rng.below(4) == 0)
                v.theta.idx[static_cast<std::size_t>(rng.below(ring.m))] =
                    1 + rng.below(shape.max_theta);
            v.sigma = rng.below(shape.max_sigma + 1);
            v.var = rng.below(ring.r);
            mono = mono.times(delay::DSPoly::variable(v));
        }
        acc = acc.plus(mono);
    }
    return acc;
}

}  // namespace testgen
