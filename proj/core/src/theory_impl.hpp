#pragma once

// Internal interface between the QE driver and the per-theory eliminators.
// Not installed.

#include <memory>
#include <string>
#include <vector>

#include "diffbound/logic.hpp"
#include "diffbound/theory.hpp"

namespace diffbound::theory {

class TheoryImpl {
public:
    TheoryImpl(std::string name, logic::Signature sig, TheoryOptions opts)
        : name_(std::move(name)), sig_(std::move(sig)), opts_(opts) {}
    virtual ~TheoryImpl() = default;

    const std::string& name() const { return name_; }
    const logic::Signature& signature() const { return sig_; }
    const TheoryOptions& options() const { return opts_; }

    virtual bool is_union() const { return false; }
    virtual std::vector<logic::Sort> sorts() const = 0;

    // Fragment rule for one positive atom. Throws FragmentError.
    virtual void check_atom(const logic::FormulaPtr& atom) const = 0;

    // Eliminates exists `var` from a conjunction of literals (each an Atom or
    // Not(Atom), possibly not mentioning var). Returns a quantifier-free
    // formula over the remaining variables. One-line method tag for traces.
    virtual logic::FormulaPtr elim_exists_conj(
        const std::string& var, const logic::Sort& sort,
        const std::vector<logic::FormulaPtr>& lits) const = 0;
    virtual std::string method_tag() const = 0;

    // Rewrites one positive atom into a theory-canonical form (or a truth
    // constant). Syntactic variants of the same constraint defeat the cube
    // dedup in the DNF stage unless they collapse here.
    virtual logic::FormulaPtr canon_atom(const logic::FormulaPtr& atom) const {
        return atom;
    }

    // Splits one positive atom into canonical atoms whose disjunction is
    // equivalent to it (the negation is then the conjunction of the negated
    // parts). Lets a theory expose factored constraints to the DNF stage;
    // the default is no split.
    virtual std::vector<logic::FormulaPtr> atom_factors(
        const logic::FormulaPtr& atom) const {
        return {canon_atom(atom)};
    }

private:
    std::string name_;
    logic::Signature sig_;
    TheoryOptions opts_;
};

std::shared_ptr<const TheoryImpl> make_dlo_impl(TheoryOptions opts);
std::shared_ptr<const TheoryImpl> make_lovs_impl(TheoryOptions opts);
std::shared_ptr<const TheoryImpl> make_acf_impl(TheoryOptions opts);
std::shared_ptr<const TheoryImpl> make_union_impl(
    std::shared_ptr<const TheoryImpl> a, std::shared_ptr<const TheoryImpl> b);

// Sort owning an atom or negated atom (the sort of its terms).
logic::Sort literal_sort(const logic::FormulaPtr& lit);

// Positive atom under an optional negation.
const logic::FormulaPtr& literal_atom(const logic::FormulaPtr& lit);
bool literal_positive(const logic::FormulaPtr& lit);

}  // namespace diffbound::theory
