#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "diffbound/rational.hpp"

namespace diffbound::logic {

using Sort = std::string;

// Feature flags for the symbols usable on one sort. Theories publish these;
// the parser and sort checker consult them.
struct SortInfo {
    bool has_order = false;    // binary relation <
    bool has_add = false;      // + (n-ary), - (unary and binary), literal 0
    bool has_mul = false;      // unrestricted n-ary *
    bool scalar_mul = false;   // * restricted to exactly one non-literal factor
    int derivations = 0;       // unary function symbols d1..dm
};

class Signature {
public:
    Signature() = default;

    void add_sort(const Sort& s, SortInfo info);
    bool has_sort(const Sort& s) const;
    const SortInfo& info(const Sort& s) const;  // throws SortError if absent
    std::vector<Sort> sorts() const;            // name order

    // Disjoint union; throws SortError when a sort name occurs in both.
    Signature merged(const Signature& other) const;

private:
    std::map<Sort, SortInfo> sorts_;
};

// ---------------------------------------------------------------------------
// Terms: immutable trees shared by pointer. Rational literals are stored in
// coefficient-normal form (one BigRat node), not as 0/1/+/* trees; callers
// that need the signature-level spelling use expand_rational_literals.
// ---------------------------------------------------------------------------

class Term;
using TermPtr = std::shared_ptr<const Term>;

enum class TermKind { Var, Rat, Apply };

class Term {
public:
    static TermPtr var(std::string name, Sort sort);
    static TermPtr rat(BigRat value, Sort sort);
    static TermPtr apply(std::string fn, std::vector<TermPtr> args, Sort sort);

    TermKind kind() const { return kind_; }
    const std::string& name() const { return name_; }  // Var name or Apply symbol
    const Sort& sort() const { return sort_; }
    const BigRat& value() const { return value_; }
    const std::vector<TermPtr>& args() const { return args_; }

private:
    Term(TermKind k, std::string name, Sort sort, BigRat value,
         std::vector<TermPtr> args)
        : kind_(k), name_(std::move(name)), sort_(std::move(sort)),
          value_(std::move(value)), args_(std::move(args)) {}

    TermKind kind_;
    std::string name_;
    Sort sort_;
    BigRat value_;
    std::vector<TermPtr> args_;
};

// Builders that propagate sorts and fold literal-only applications.
TermPtr t_add(std::vector<TermPtr> args);
TermPtr t_sub(TermPtr a, TermPtr b);
TermPtr t_neg(TermPtr a);
TermPtr t_mul(std::vector<TermPtr> args);

bool term_equal(const TermPtr& a, const TermPtr& b);

// Rewrites every Rat node into 0/1/+/-/* applications over the same sort.
TermPtr expand_rational_literals(const TermPtr& t);

// Exact value of a variable-free +,-,* term; nullopt if a variable or an
// uninterpreted symbol (e.g. a derivation) occurs.
std::optional<BigRat> eval_ground_term(const TermPtr& t);

// ---------------------------------------------------------------------------
// Formulas
// ---------------------------------------------------------------------------

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

enum class FKind { True, False, Atom, Not, And, Or, Implies, Iff, Exists, Forall };

class Formula {
public:
    static FormulaPtr tru();
    static FormulaPtr fls();
    static FormulaPtr atom(std::string rel, std::vector<TermPtr> terms);
    static FormulaPtr eq(TermPtr a, TermPtr b);
    static FormulaPtr less(TermPtr a, TermPtr b);
    static FormulaPtr neg(FormulaPtr f);
    static FormulaPtr conj(std::vector<FormulaPtr> fs);
    static FormulaPtr disj(std::vector<FormulaPtr> fs);
    static FormulaPtr implies(FormulaPtr a, FormulaPtr b);
    static FormulaPtr iff(FormulaPtr a, FormulaPtr b);
    static FormulaPtr exists(std::string var, Sort sort, FormulaPtr body);
    static FormulaPtr forall(std::string var, Sort sort, FormulaPtr body);

    FKind kind() const { return kind_; }
    const std::string& rel() const { return rel_; }
    const std::vector<TermPtr>& terms() const { return terms_; }
    const std::vector<FormulaPtr>& children() const { return children_; }
    const FormulaPtr& child(std::size_t i) const { return children_[i]; }
    const std::string& var() const { return var_; }
    const Sort& var_sort() const { return var_sort_; }

    bool is_quantifier() const { return kind_ == FKind::Exists || kind_ == FKind::Forall; }

private:
    Formula(FKind k, std::string rel, std::vector<TermPtr> terms,
            std::vector<FormulaPtr> children, std::string var, Sort var_sort)
        : kind_(k), rel_(std::move(rel)), terms_(std::move(terms)),
          children_(std::move(children)), var_(std::move(var)),
          var_sort_(std::move(var_sort)) {}

    FKind kind_;
    std::string rel_;
    std::vector<TermPtr> terms_;
    std::vector<FormulaPtr> children_;
    std::string var_;
    Sort var_sort_;
};

// ---------------------------------------------------------------------------
// Variable utilities. Variable order everywhere is "natural": digit runs
// compare numerically, so x2 < x10. This is the positional binding order
// used by model evaluation.
// ---------------------------------------------------------------------------

bool natural_less(const std::string& a, const std::string& b);

struct NaturalLess {
    bool operator()(const std::string& a, const std::string& b) const {
        return natural_less(a, b);
    }
};

using VarSet = std::map<std::string, Sort, NaturalLess>;

VarSet term_vars(const TermPtr& t);
VarSet free_vars(const FormulaPtr& f);

// Name not present in `used`, formed from `base` by appending primes.
std::string fresh_name(const std::string& base, const std::set<std::string>& used);

// Capture-avoiding parallel substitution of terms for free variables.
FormulaPtr substitute(const FormulaPtr& f, const std::map<std::string, TermPtr>& sub);
TermPtr substitute_term(const TermPtr& t, const std::map<std::string, TermPtr>& sub);

// ---------------------------------------------------------------------------
// Structural operations
// ---------------------------------------------------------------------------

// Flattening of nested And/Or, True/False absorption (including implies/iff
// with a constant side and quantifiers over constant bodies), double-negation
// removal. Never inspects atoms semantically.
FormulaPtr simplify(const FormulaPtr& f);

// Replaces variable-free =, < atoms by their truth value in the rationals.
FormulaPtr fold_ground_atoms(const FormulaPtr& f);

// Negation normal form: no Implies/Iff, Not only directly above atoms.
FormulaPtr to_nnf(const FormulaPtr& f);

struct QuantifierStep {
    bool is_exists;
    std::string var;
    Sort sort;
};

struct PrenexFormula {
    std::vector<QuantifierStep> prefix;  // outermost first
    FormulaPtr matrix;                   // quantifier-free, NNF
    FormulaPtr to_formula() const;
};

// Prenex NNF. Bound variables are renamed apart as needed.
PrenexFormula to_prenex(const FormulaPtr& f);
FormulaPtr to_prenex_nnf(const FormulaPtr& f);

// Canonical bound-variable renaming (de Bruijn style numbering in traversal
// order); two alpha-equivalent formulas normalize to structurally equal trees.
FormulaPtr alpha_normalize(const FormulaPtr& f);
bool alpha_equal(const FormulaPtr& a, const FormulaPtr& b);
bool structural_equal(const FormulaPtr& a, const FormulaPtr& b);
std::size_t structural_hash(const FormulaPtr& f);

std::size_t formula_size(const FormulaPtr& f);
std::size_t quantifier_count(const FormulaPtr& f);

// Sort check against a signature: every symbol usable on its sort, argument
// sorts consistent. Throws SortError.
void check_sorts(const FormulaPtr& f, const Signature& sig);

}  // namespace diffbound::logic
