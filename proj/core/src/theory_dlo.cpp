#include <deque>

#include "diffbound/errors.hpp"
#include "diffbound/text.hpp"
#include "theory_impl.hpp"

namespace diffbound::theory {

using namespace diffbound::logic;

namespace {

Signature dlo_signature() {
    Signature sig;
    SortInfo info;
    info.has_order = true;
    sig.add_sort("O", info);
    return sig;
}

bool is_flat(const TermPtr& t) {
    return t->kind() == TermKind::Var || t->kind() == TermKind::Rat;
}

bool is_var(const TermPtr& t, const std::string& name) {
    return t->kind() == TermKind::Var && t->name() == name;
}

class DloImpl final : public TheoryImpl {
public:
    explicit DloImpl(TheoryOptions opts)
        : TheoryImpl("dlo", dlo_signature(), opts) {}

    std::vector<Sort> sorts() const override { return {"O"}; }
    std::string method_tag() const override { return "dense-order"; }

    void check_atom(const FormulaPtr& atom) const override {
        for (const auto& t : atom->terms())
            if (!is_flat(t))
                throw FragmentError("dlo atoms compare variables and constants only",
                                    text::print_formula(atom));
    }

    FormulaPtr elim_exists_conj(const std::string& x, const Sort& sort,
                                const std::vector<FormulaPtr>& lits) const override;

    FormulaPtr canon_atom(const FormulaPtr& atom) const override {
        const auto& ts = atom->terms();
        if (ts.size() != 2 || ts[0]->kind() != TermKind::Var ||
            ts[1]->kind() != TermKind::Var)
            return atom;
        if (ts[0]->name() == ts[1]->name())
            return atom->rel() == "=" ? Formula::tru() : Formula::fls();
        // Equality is symmetric; pin the operand order.
        if (atom->rel() == "=" && !natural_less(ts[0]->name(), ts[1]->name()))
            return Formula::eq(ts[1], ts[0]);
        return atom;
    }
};

// One fully positive cube with the target variable resolved away.
FormulaPtr resolve_positive(const std::string& x, const Sort& sort,
                            const std::vector<FormulaPtr>& cube) {
    // An equation on x lets us substitute and skip the bound analysis.
    for (std::size_t i = 0; i < cube.size(); ++i) {
        const auto& ts = cube[i]->terms();
        if (cube[i]->rel() != "=") continue;
        TermPtr image;
        if (is_var(ts[0], x) && !is_var(ts[1], x)) image = ts[1];
        else if (is_var(ts[1], x) && !is_var(ts[0], x)) image = ts[0];
        else continue;
        std::map<std::string, TermPtr> sub{{x, image}};
        std::vector<FormulaPtr> rest;
        for (std::size_t j = 0; j < cube.size(); ++j)
            if (j != i) rest.push_back(substitute(cube[j], sub));
        return Formula::conj(std::move(rest));
    }

    std::vector<TermPtr> lowers, uppers;
    std::vector<FormulaPtr> rest;
    for (const auto& lit : cube) {
        const auto& ts = lit->terms();
        bool l = is_var(ts[0], x), r = is_var(ts[1], x);
        if (lit->rel() == "=") {
            if (l && r) continue;  // x = x
            rest.push_back(lit);   // x-free: one-sided equations were substituted above
        } else {
            if (l && r) return Formula::fls();  // x < x
            if (l) uppers.push_back(ts[1]);
            else if (r) lowers.push_back(ts[0]);
            else rest.push_back(lit);
        }
    }
    // Density and lack of endpoints: a witness exists iff every lower bound
    // sits below every upper bound.
    for (const auto& s : lowers)
        for (const auto& t : uppers) {
            if (term_equal(s, t)) return Formula::fls();
            rest.push_back(Formula::less(s, t));
        }
    (void)sort;
    return Formula::conj(std::move(rest));
}

FormulaPtr DloImpl::elim_exists_conj(const std::string& x, const Sort& sort,
                                     const std::vector<FormulaPtr>& lits) const {
    // Split negated literals into positive cases first.
    std::deque<std::vector<FormulaPtr>> work{lits};
    std::vector<FormulaPtr> out;
    std::size_t budget = options().max_disjuncts;
    while (!work.empty()) {
        std::vector<FormulaPtr> cube = std::move(work.front());
        work.pop_front();
        std::size_t neg = cube.size();
        for (std::size_t i = 0; i < cube.size(); ++i)
            if (!literal_positive(cube[i])) { neg = i; break; }
        if (neg == cube.size()) {
            out.push_back(resolve_positive(x, sort, cube));
            continue;
        }
        FormulaPtr atom = literal_atom(cube[neg]);
        const auto& ts = atom->terms();
        auto branch = [&](FormulaPtr repl) {
            std::vector<FormulaPtr> next = cube;
            next[neg] = std::move(repl);
            work.push_back(std::move(next));
        };
        if (atom->rel() == "=") {
            branch(Formula::less(ts[0], ts[1]));
            branch(Formula::less(ts[1], ts[0]));
        } else {
            branch(Formula::less(ts[1], ts[0]));
            branch(Formula::eq(ts[0], ts[1]));
        }
        if (work.size() + out.size() > budget)
            throw CapExceeded("dlo case split exceeded the disjunct cap");
    }
    return Formula::disj(std::move(out));
}

}  // namespace

std::shared_ptr<const TheoryImpl> make_dlo_impl(TheoryOptions opts) {
    return std::make_shared<DloImpl>(opts);
}

}  // namespace diffbound::theory
