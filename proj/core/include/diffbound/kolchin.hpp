#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "diffbound/rational.hpp"

namespace diffbound::kolchin {

// Integer-valued polynomial sum a_i * C(t+i, i). Canonical form trims
// trailing zero coefficients, so equality of coefficient vectors is
// equality of polynomials.
struct NumericPolynomial {
    std::vector<BigInt> coeffs;  // coeffs[i] multiplies C(t+i, i)

    static NumericPolynomial of(std::vector<BigInt> cs);
    static NumericPolynomial constant(const BigInt& c);

    int degree() const;  // -1 for the zero polynomial
    bool operator==(const NumericPolynomial& o) const {
        return coeffs == o.coeffs;
    }
};

BigInt np_norm(const NumericPolynomial& p);  // sum of |a_i|
BigInt np_eval(const NumericPolynomial& p, const BigInt& t);
// Eventual domination, decided top-down lexicographically on coefficients;
// a strict total order with equality only for identical polynomials.
int np_compare(const NumericPolynomial& a, const NumericPolynomial& b);

// Norm budget per sequence index.
using GrowthFn = std::function<BigInt(std::size_t)>;

// n + running maximum of g, hence increasing and >= n.
GrowthFn monotone_envelope(GrowthFn g);

struct ChainLenOptions {
    // abort when a budget g(i) exceeds this
    BigInt norm_ceiling = 1000000;
    // abort after this many search steps
    std::uint64_t max_steps = 1000000;
};

struct ChainLenResult {
    // exact maximum length of v0 >lex v1 >lex ... in Z>=0^dim with
    // |v_i| <= g(i); when a cap tripped, the length reached so far, which
    // is a valid lower bound
    BigInt length{0};
    bool exact = true;
};

// Depth-first search over successor vectors in descending lexicographic
// order. A chain from a lex-smaller start embeds into any lex-larger one
// by replacing its head, so the first successor dominates the rest and the
// search follows a single path.
ChainLenResult chain_len(const GrowthFn& g, int dim,
                         const ChainLenOptions& opts = {});

}  // namespace diffbound::kolchin
