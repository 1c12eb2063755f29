#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "diffbound/diffalg.hpp"
#include "diffbound/rational.hpp"

namespace diffbound::delay {

// Variable theta sigma^j y_s: a derivation multi-index, a shift power, and
// an indeterminate index. Shifts commute with derivations, so this triple
// is a canonical form.
struct DSVar {
    diffalg::Derivative theta;
    int sigma = 0;
    int var = 0;

    bool operator==(const DSVar& o) const {
        return var == o.var && sigma == o.sigma && theta == o.theta;
    }
    bool operator<(const DSVar& o) const {
        if (var != o.var) return var < o.var;
        if (sigma != o.sigma) return sigma < o.sigma;
        return theta < o.theta;
    }
};

// Ambient description: m derivations, r indeterminates, display names.
struct DelayRing {
    int m = 1;
    int r = 1;
    std::vector<std::string> names;  // optional; defaults y or y1..yr

    std::string name(int var) const;
    int var_by_name(const std::string& s) const;  // -1 if unknown
};

// Polynomial over rational constants in shift-derivative variables.
class DSPoly {
public:
    using Monomial = std::map<DSVar, int>;

    DSPoly() = default;

    static DSPoly constant(BigRat c);
    static DSPoly variable(DSVar v);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    BigRat constant_value() const;  // throws unless constant

    const std::map<Monomial, BigRat>& terms() const { return terms_; }

    DSPoly plus(const DSPoly& o) const;
    DSPoly minus(const DSPoly& o) const;
    DSPoly times(const DSPoly& o) const;
    DSPoly negated() const;
    DSPoly scaled(const BigRat& c) const;

    // every sigma index raised by i; coefficients are fixed constants
    DSPoly sigma_shift(int i) const;

    // max over occurring variables of ord(theta) + sigma; 0 when none occur
    int order() const;
    int max_sigma() const;
    std::vector<DSVar> support() const;

    bool operator==(const DSPoly& o) const { return terms_ == o.terms_; }

private:
    void add_term(Monomial mono, BigRat c);
    std::map<Monomial, BigRat> terms_;
};

// Tabulated values for derivative variables. Evaluation resolves variables
// with a nonzero derivation index here; absent entries evaluate to zero,
// or throw when `strict` is set.
struct DeltaContext {
    std::map<DSVar, BigRat> table;
    bool strict = false;

    BigRat value_of(const DSVar& v, const DelayRing& ring) const;
};

// `values` answers the shift-only variables (indeterminate, total shift).
BigRat eval_dspoly(const DSPoly& f,
                   const std::function<BigRat(int var, int sigma)>& values,
                   const DeltaContext& ctx, const DelayRing& ring);

// Text format: variables print as name[t1,..,tm;j]; parsing also accepts a
// bare name (no derivation, no shift) and name[t1,..,tm] (no shift).
std::string dsvar_text(const DSVar& v, const DelayRing& ring);
std::string dspoly_to_text(const DSPoly& f, const DelayRing& ring);
DSPoly parse_dspoly(const std::string& input, const DelayRing& ring);

// A system F over r indeterminates with shift depth h induces coordinate
// blocks of width H = r(h+1), one slot per (indeterminate, shift <= h).
// pi1 drops the highest shift slot per indeterminate, pi2 the lowest.
struct TripleSpec {
    std::vector<DSPoly> F;
    DelayRing ring;
    int r = 0;
    int h = 0;
    int H = 0;

    static TripleSpec make(std::vector<DSPoly> F, DelayRing ring);
};

std::vector<BigRat> pi1(const std::vector<BigRat>& point, const TripleSpec& spec);
std::vector<BigRat> pi2(const std::vector<BigRat>& point, const TripleSpec& spec);

// Chained-block polynomial system: ell copies of the coordinate block with
// the system instantiated on each copy and adjacent copies glued along
// pi2 = pi1. Flat variables are plain (shift-free) indeterminates of
// `flat_ring`, named <name>_<block>_<shift>, block-major.
struct WlSystem {
    int ell = 0;
    int r = 0;
    int h = 0;
    int H = 0;
    DelayRing flat_ring;
    std::vector<DSPoly> block_eqs;   // ell * |F|, block-major
    std::vector<DSPoly> gluing_eqs;  // linear differences, block order
    // flat indices equated by the gluing rows: (later block, earlier block)
    std::vector<std::pair<int, int>> gluing_pairs;

    std::size_t gluing_count() const { return gluing_eqs.size(); }
    // flat variable index of block b, indeterminate s, shift j (0-based)
    int flat_index(int b, int s, int j) const;
};

WlSystem wl_system(const std::vector<DSPoly>& F, const DelayRing& ring, int ell);

// seqs[s] lists values of sigma^t y_s for t = 0..ell-1+h; true iff every
// shift of every equation through ell-1 vanishes exactly.
bool verify_partial(const std::vector<DSPoly>& F, const DelayRing& ring,
                    const std::vector<std::vector<BigRat>>& seqs, int ell,
                    const DeltaContext& ctx = {});

// points[i] is a coordinate-block vector of length H; true iff the system
// vanishes at every point and adjacent points agree along pi2 = pi1.
bool verify_triple(const std::vector<std::vector<BigRat>>& points,
                   const TripleSpec& spec, const DeltaContext& ctx = {});

}  // namespace diffbound::delay
