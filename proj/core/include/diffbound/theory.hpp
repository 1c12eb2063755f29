#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "diffbound/logic.hpp"

namespace diffbound::theory {

struct ElimStep {
    std::string var;
    std::string method;
};

struct QEResult {
    logic::FormulaPtr formula;  // quantifier-free, equivalent to the input
    std::vector<ElimStep> trace;
};

struct TheoryOptions {
    int acf_degree_cap = 4;           // max total degree of an input atom
    int acf_working_degree_cap = 64;  // guard on intermediate pseudo-remainders
    std::size_t max_disjuncts = 1 << 20;  // DNF work cap during elimination
    bool reverse_block_order = false;  // test hook: flips the in-block order
};

class TheoryImpl;

// Value handle on an immutable theory. Sorts: dlo uses O, lovs uses Q,
// acf0 uses F. Disjoint unions require distinct sort names.
class Theory {
public:
    static Theory dlo(TheoryOptions opts = {});
    static Theory lovs(TheoryOptions opts = {});
    static Theory acf0(TheoryOptions opts = {});
    static Theory disjoint_union(const Theory& a, const Theory& b);
    // "dlo", "lovs", "acf0", or "a+b" for a disjoint union.
    static Theory by_name(const std::string& name, TheoryOptions opts = {});

    const std::string& name() const;
    const logic::Signature& signature() const;
    // The unique sort of a single-sorted theory; throws for unions.
    logic::Sort primary_sort() const;
    std::vector<logic::Sort> sorts() const;
    bool is_union() const;

    // Throws FragmentError when an atom falls outside the decidable fragment.
    void check_fragment(const logic::FormulaPtr& f) const;

    QEResult qe(const logic::FormulaPtr& f) const;
    bool decide(const logic::FormulaPtr& sentence) const;

    // Evaluation in the standard model over the rationals. Positional values
    // bind free variables in natural name order.
    bool model_eval(const logic::FormulaPtr& f, const std::vector<BigRat>& point) const;
    bool model_eval(const logic::FormulaPtr& f,
                    const std::map<std::string, BigRat>& assignment) const;

private:
    explicit Theory(std::shared_ptr<const TheoryImpl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const TheoryImpl> impl_;
};

// decide on the two-sorted disjoint union; `sentence` must be closed and each
// of its atoms lies wholly in one sort (mixed atoms cannot be built at all).
bool union_decide(const Theory& a, const Theory& b, const logic::FormulaPtr& sentence);

}  // namespace diffbound::theory
