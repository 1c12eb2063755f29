#include <deque>

#include "diffbound/errors.hpp"
#include "diffbound/text.hpp"
#include "linear_arith.hpp"
#include "theory_impl.hpp"

namespace diffbound::theory {

using namespace diffbound::logic;

// ---------------------------------------------------------------------------
// LinForm
// ---------------------------------------------------------------------------

LinForm LinForm::from_term(const TermPtr& t) {
    switch (t->kind()) {
        case TermKind::Var: {
            LinForm f;
            f.coef[t->name()] = 1;
            return f;
        }
        case TermKind::Rat: {
            LinForm f;
            f.cst = t->value();
            return f;
        }
        case TermKind::Apply: {
            const std::string& op = t->name();
            if (op == "+") {
                LinForm f;
                for (const auto& a : t->args()) f.add_scaled(from_term(a), 1);
                return f;
            }
            if (op == "-") {
                LinForm f = from_term(t->args()[0]);
                if (t->args().size() == 1) return f.scaled(-1);
                f.add_scaled(from_term(t->args()[1]), -1);
                return f;
            }
            if (op == "*") {
                LinForm acc;
                acc.cst = 1;
                bool seen_var = false;
                for (const auto& a : t->args()) {
                    LinForm f = from_term(a);
                    if (f.is_const()) {
                        acc = acc.scaled(f.cst);
                    } else if (!seen_var) {
                        BigRat s = acc.cst;
                        acc = f.scaled(s);
                        seen_var = true;
                    } else {
                        throw FragmentError("nonlinear product",
                                            text::print_term(t));
                    }
                }
                return acc;
            }
            throw FragmentError("symbol outside the vector-space language",
                                text::print_term(t));
        }
    }
    throw FragmentError("unreachable term kind", text::print_term(t));
}

void LinForm::add_scaled(const LinForm& other, const BigRat& factor) {
    for (const auto& [v, c] : other.coef) coef[v] += c * factor;
    cst += other.cst * factor;
    prune();
}

LinForm LinForm::scaled(const BigRat& factor) const {
    LinForm f;
    for (const auto& [v, c] : coef) f.coef[v] = c * factor;
    f.cst = cst * factor;
    f.prune();
    return f;
}

BigRat LinForm::coeff(const std::string& var) const {
    auto it = coef.find(var);
    return it == coef.end() ? BigRat(0) : it->second;
}

bool LinForm::is_const() const { return coef.empty(); }

void LinForm::drop_var(const std::string& var) { coef.erase(var); }

void LinForm::prune() {
    for (auto it = coef.begin(); it != coef.end();)
        it = it->second == 0 ? coef.erase(it) : std::next(it);
}

FormulaPtr lin_to_formula(LinForm form, LinRel rel, const Sort& sort) {
    form.prune();
    if (form.is_const()) {
        bool holds = false;
        switch (rel) {
            case LinRel::Eq0: holds = form.cst == 0; break;
            case LinRel::Ne0: holds = form.cst != 0; break;
            case LinRel::Gt0: holds = form.cst > 0; break;
            case LinRel::Ge0: holds = form.cst >= 0; break;
        }
        return holds ? Formula::tru() : Formula::fls();
    }

    // Clear denominators and divide by content.
    BigInt lcm_den = 1;
    for (const auto& [v, c] : form.coef) lcm_den = lcm(lcm_den, den(c));
    lcm_den = lcm(lcm_den, den(form.cst));
    form = form.scaled(BigRat(lcm_den));
    BigInt g = 0;
    for (const auto& [v, c] : form.coef) g = gcd(g, num(c));
    g = gcd(g, num(form.cst));
    if (g > 1) form = form.scaled(BigRat(1, g));

    // Equations are sign-symmetric; pin the first coefficient positive.
    if ((rel == LinRel::Eq0 || rel == LinRel::Ne0) &&
        form.coef.begin()->second < 0)
        form = form.scaled(-1);

    auto side_term = [&](const std::vector<TermPtr>& parts) -> TermPtr {
        if (parts.empty()) return Term::rat(0, sort);
        if (parts.size() == 1) return parts[0];
        return Term::apply("+", parts, sort);
    };
    std::vector<TermPtr> pos, neg;
    for (const auto& [v, c] : form.coef) {
        BigRat a = abs(c);
        TermPtr piece = a == 1 ? Term::var(v, sort)
                               : Term::apply("*", {Term::rat(a, sort),
                                                   Term::var(v, sort)}, sort);
        (c > 0 ? pos : neg).push_back(piece);
    }
    if (form.cst > 0) pos.push_back(Term::rat(form.cst, sort));
    if (form.cst < 0) neg.push_back(Term::rat(-form.cst, sort));
    TermPtr lhs = side_term(pos), rhs = side_term(neg);

    switch (rel) {
        case LinRel::Eq0: return Formula::eq(lhs, rhs);
        case LinRel::Ne0: return Formula::neg(Formula::eq(lhs, rhs));
        case LinRel::Gt0: return Formula::less(rhs, lhs);
        case LinRel::Ge0: return Formula::neg(Formula::less(lhs, rhs));
    }
    throw Error("unreachable");
}

// ---------------------------------------------------------------------------
// Eliminator
// ---------------------------------------------------------------------------

namespace {

Signature lovs_signature() {
    Signature sig;
    SortInfo info;
    info.has_order = true;
    info.has_add = true;
    info.scalar_mul = true;
    sig.add_sort("Q", info);
    return sig;
}

struct Constraint {
    LinRel rel;
    LinForm form;
};

Constraint literal_constraint(const FormulaPtr& lit) {
    const FormulaPtr& atom = literal_atom(lit);
    bool pos = literal_positive(lit);
    LinForm l = LinForm::from_term(atom->terms()[0]);
    LinForm r = LinForm::from_term(atom->terms()[1]);
    if (atom->rel() == "=") {
        l.add_scaled(r, -1);
        return {pos ? LinRel::Eq0 : LinRel::Ne0, std::move(l)};
    }
    // a < b becomes b - a > 0; the negation weakens to a - b >= 0.
    if (pos) {
        r.add_scaled(l, -1);
        return {LinRel::Gt0, std::move(r)};
    }
    l.add_scaled(r, -1);
    return {LinRel::Ge0, std::move(l)};
}

class LovsImpl final : public TheoryImpl {
public:
    explicit LovsImpl(TheoryOptions opts)
        : TheoryImpl("lovs", lovs_signature(), opts) {}

    std::vector<Sort> sorts() const override { return {"Q"}; }
    std::string method_tag() const override { return "fourier-motzkin"; }

    void check_atom(const FormulaPtr& atom) const override {
        for (const auto& t : atom->terms()) LinForm::from_term(t);
    }

    FormulaPtr elim_exists_conj(const std::string& x, const Sort& sort,
                                const std::vector<FormulaPtr>& lits) const override;
};

// Cube of sign-definite constraints: equality pivot if possible, otherwise
// bound crossing.
FormulaPtr resolve_cube(const std::string& x, const Sort& sort,
                        std::vector<Constraint> cube) {
    std::vector<FormulaPtr> rest;

    // Equality pivot: substitute x out of every other constraint.
    for (std::size_t i = 0; i < cube.size(); ++i) {
        if (cube[i].rel != LinRel::Eq0) continue;
        BigRat c = cube[i].form.coeff(x);
        if (c == 0) continue;
        LinForm pivot = cube[i].form;
        for (std::size_t j = 0; j < cube.size(); ++j) {
            if (j == i) continue;
            BigRat cj = cube[j].form.coeff(x);
            if (cj != 0) cube[j].form.add_scaled(pivot, -cj / c);
            rest.push_back(lin_to_formula(cube[j].form, cube[j].rel, sort));
        }
        return Formula::conj(std::move(rest));
    }

    // x c + R > 0  <=>  x > -R/c (c > 0) or x < -R/c (c < 0).
    struct Bound {
        LinForm form;  // the bounding value
        bool strict;
    };
    std::vector<Bound> lowers, uppers;
    for (auto& con : cube) {
        BigRat c = con.form.coeff(x);
        if (c == 0) {
            rest.push_back(lin_to_formula(con.form, con.rel, sort));
            continue;
        }
        con.form.drop_var(x);
        LinForm b = con.form.scaled(BigRat(-1) / c);
        bool strict = con.rel == LinRel::Gt0;
        (c > 0 ? lowers : uppers).push_back({std::move(b), strict});
    }
    for (const auto& lo : lowers)
        for (const auto& up : uppers) {
            LinForm gap = up.form;
            gap.add_scaled(lo.form, -1);
            rest.push_back(lin_to_formula(
                gap, lo.strict || up.strict ? LinRel::Gt0 : LinRel::Ge0, sort));
        }
    return Formula::conj(std::move(rest));
}

FormulaPtr LovsImpl::elim_exists_conj(const std::string& x, const Sort& sort,
                                      const std::vector<FormulaPtr>& lits) const {
    std::vector<Constraint> base;
    base.reserve(lits.size());
    for (const auto& lit : lits) base.push_back(literal_constraint(lit));

    // Disequations split into two strict branches.
    std::deque<std::vector<Constraint>> work{std::move(base)};
    std::vector<FormulaPtr> out;
    while (!work.empty()) {
        std::vector<Constraint> cube = std::move(work.front());
        work.pop_front();
        std::size_t ne = cube.size();
        for (std::size_t i = 0; i < cube.size(); ++i)
            if (cube[i].rel == LinRel::Ne0 && cube[i].form.coeff(x) != 0) {
                ne = i;
                break;
            }
        if (ne == cube.size()) {
            // x-free disequations pass through resolve_cube untouched.
            out.push_back(resolve_cube(x, sort, std::move(cube)));
            continue;
        }
        std::vector<Constraint> a = cube, b = std::move(cube);
        a[ne].rel = LinRel::Gt0;
        b[ne].rel = LinRel::Gt0;
        b[ne].form = b[ne].form.scaled(-1);
        work.push_back(std::move(a));
        work.push_back(std::move(b));
        if (work.size() + out.size() > options().max_disjuncts)
            throw CapExceeded("lovs case split exceeded the disjunct cap");
    }
    return Formula::disj(std::move(out));
}

}  // namespace

std::shared_ptr<const TheoryImpl> make_lovs_impl(TheoryOptions opts) {
    return std::make_shared<LovsImpl>(opts);
}

}  // namespace diffbound::theory
