#include "diffbound/logic.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "diffbound/errors.hpp"

namespace diffbound::logic {

// ---------------------------------------------------------------------------
// Signature
// ---------------------------------------------------------------------------

void Signature::add_sort(const Sort& s, SortInfo info) {
    if (sorts_.count(s)) throw SortError("sort already declared: " + s);
    sorts_[s] = info;
}

bool Signature::has_sort(const Sort& s) const { return sorts_.count(s) != 0; }

const SortInfo& Signature::info(const Sort& s) const {
    auto it = sorts_.find(s);
    if (it == sorts_.end()) throw SortError("unknown sort: " + s);
    return it->second;
}

std::vector<Sort> Signature::sorts() const {
    std::vector<Sort> out;
    for (const auto& [name, _] : sorts_) out.push_back(name);
    return out;
}

Signature Signature::merged(const Signature& other) const {
    Signature out = *this;
    for (const auto& [name, info] : other.sorts_) {
        if (out.sorts_.count(name))
            throw SortError("sort clash in disjoint union: " + name);
        out.sorts_[name] = info;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Terms
// ---------------------------------------------------------------------------

TermPtr Term::var(std::string name, Sort sort) {
    return TermPtr(new Term(TermKind::Var, std::move(name), std::move(sort), 0, {}));
}

TermPtr Term::rat(BigRat value, Sort sort) {
    return TermPtr(new Term(TermKind::Rat, "", std::move(sort), std::move(value), {}));
}

TermPtr Term::apply(std::string fn, std::vector<TermPtr> args, Sort sort) {
    return TermPtr(new Term(TermKind::Apply, std::move(fn), std::move(sort), 0,
                            std::move(args)));
}

namespace {

Sort arg_sort(const std::vector<TermPtr>& args, const char* op) {
    if (args.empty()) throw SortError(std::string(op) + " needs arguments");
    const Sort& s = args.front()->sort();
    for (const auto& a : args)
        if (a->sort() != s) throw SortError(std::string(op) + " mixes sorts");
    return s;
}

}  // namespace

TermPtr t_add(std::vector<TermPtr> args) {
    Sort s = arg_sort(args, "+");
    std::erase_if(args, [](const TermPtr& a) {
        return a->kind() == TermKind::Rat && a->value() == 0;
    });
    if (args.empty()) return Term::rat(0, s);
    if (args.size() == 1) return args.front();
    bool all_rat = std::all_of(args.begin(), args.end(), [](const TermPtr& a) {
        return a->kind() == TermKind::Rat;
    });
    if (all_rat) {
        BigRat v = 0;
        for (const auto& a : args) v += a->value();
        return Term::rat(v, s);
    }
    return Term::apply("+", std::move(args), s);
}

TermPtr t_sub(TermPtr a, TermPtr b) {
    Sort s = arg_sort({a, b}, "-");
    if (a->kind() == TermKind::Rat && b->kind() == TermKind::Rat)
        return Term::rat(a->value() - b->value(), s);
    return Term::apply("-", {std::move(a), std::move(b)}, s);
}

TermPtr t_neg(TermPtr a) {
    Sort s = a->sort();
    if (a->kind() == TermKind::Rat) return Term::rat(-a->value(), s);
    return Term::apply("-", {std::move(a)}, s);
}

TermPtr t_mul(std::vector<TermPtr> args) {
    Sort s = arg_sort(args, "*");
    for (const auto& a : args)
        if (a->kind() == TermKind::Rat && a->value() == 0) return Term::rat(0, s);
    std::erase_if(args, [](const TermPtr& a) {
        return a->kind() == TermKind::Rat && a->value() == 1;
    });
    if (args.empty()) return Term::rat(1, s);
    if (args.size() == 1) return args.front();
    bool all_rat = std::all_of(args.begin(), args.end(), [](const TermPtr& a) {
        return a->kind() == TermKind::Rat;
    });
    if (all_rat) {
        BigRat v = 1;
        for (const auto& a : args) v *= a->value();
        return Term::rat(v, s);
    }
    return Term::apply("*", std::move(args), s);
}

bool term_equal(const TermPtr& a, const TermPtr& b) {
    if (a == b) return true;
    if (a->kind() != b->kind() || a->sort() != b->sort()) return false;
    switch (a->kind()) {
        case TermKind::Var: return a->name() == b->name();
        case TermKind::Rat: return a->value() == b->value();
        case TermKind::Apply: {
            if (a->name() != b->name() || a->args().size() != b->args().size())
                return false;
            for (std::size_t i = 0; i < a->args().size(); ++i)
                if (!term_equal(a->args()[i], b->args()[i])) return false;
            return true;
        }
    }
    return false;
}

namespace {

// 2^k as a term: iterated doubling, subtrees shared.
TermPtr power_of_two(unsigned k, const Sort& s) {
    TermPtr p = Term::rat(1, s);
    for (unsigned i = 0; i < k; ++i) p = Term::apply("+", {p, p}, s);
    return p;
}

TermPtr expand_integer(const BigInt& n, const Sort& s) {
    if (n == 0) return Term::rat(0, s);
    if (n < 0) return Term::apply("-", {expand_integer(-n, s)}, s);
    std::vector<TermPtr> parts;
    BigInt rest = n;
    unsigned bit = 0;
    while (rest > 0) {
        if ((rest & 1) != 0) parts.push_back(power_of_two(bit, s));
        rest >>= 1;
        ++bit;
    }
    if (parts.size() == 1) return parts.front();
    return Term::apply("+", std::move(parts), s);
}

}  // namespace

TermPtr expand_rational_literals(const TermPtr& t) {
    switch (t->kind()) {
        case TermKind::Var: return t;
        case TermKind::Rat: {
            const BigRat& v = t->value();
            if (v == 0 || v == 1) return t;  // the constant symbols themselves
            if (den(v) == 1) return expand_integer(num(v), t->sort());
            // Non-integral scalars stay in coefficient-normal form: the
            // signature has no division, so p/q survives as a scalar factor.
            return Term::apply("*", {Term::rat(v, t->sort()),
                                     Term::rat(1, t->sort())}, t->sort());
        }
        case TermKind::Apply: {
            std::vector<TermPtr> args;
            args.reserve(t->args().size());
            for (const auto& a : t->args()) args.push_back(expand_rational_literals(a));
            return Term::apply(t->name(), std::move(args), t->sort());
        }
    }
    return t;
}

std::optional<BigRat> eval_ground_term(const TermPtr& t) {
    switch (t->kind()) {
        case TermKind::Var: return std::nullopt;
        case TermKind::Rat: return t->value();
        case TermKind::Apply: {
            const std::string& f = t->name();
            std::vector<BigRat> vals;
            vals.reserve(t->args().size());
            for (const auto& a : t->args()) {
                auto v = eval_ground_term(a);
                if (!v) return std::nullopt;
                vals.push_back(*v);
            }
            if (f == "+") {
                BigRat r = 0;
                for (const auto& v : vals) r += v;
                return r;
            }
            if (f == "-") {
                if (vals.size() == 1) return BigRat(-vals[0]);
                if (vals.size() == 2) return BigRat(vals[0] - vals[1]);
                return std::nullopt;
            }
            if (f == "*") {
                BigRat r = 1;
                for (const auto& v : vals) r *= v;
                return r;
            }
            return std::nullopt;  // derivations etc. are uninterpreted here
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Formulas
// ---------------------------------------------------------------------------

FormulaPtr Formula::tru() {
    static FormulaPtr f(new Formula(FKind::True, "", {}, {}, "", ""));
    return f;
}

FormulaPtr Formula::fls() {
    static FormulaPtr f(new Formula(FKind::False, "", {}, {}, "", ""));
    return f;
}

FormulaPtr Formula::atom(std::string rel, std::vector<TermPtr> terms) {
    return FormulaPtr(new Formula(FKind::Atom, std::move(rel), std::move(terms),
                                  {}, "", ""));
}

FormulaPtr Formula::eq(TermPtr a, TermPtr b) {
    return atom("=", {std::move(a), std::move(b)});
}

FormulaPtr Formula::less(TermPtr a, TermPtr b) {
    return atom("<", {std::move(a), std::move(b)});
}

FormulaPtr Formula::neg(FormulaPtr f) {
    return FormulaPtr(new Formula(FKind::Not, "", {}, {std::move(f)}, "", ""));
}

FormulaPtr Formula::conj(std::vector<FormulaPtr> fs) {
    return FormulaPtr(new Formula(FKind::And, "", {}, {std::move(fs)}, "", ""));
}

FormulaPtr Formula::disj(std::vector<FormulaPtr> fs) {
    return FormulaPtr(new Formula(FKind::Or, "", {}, {std::move(fs)}, "", ""));
}

FormulaPtr Formula::implies(FormulaPtr a, FormulaPtr b) {
    return FormulaPtr(new Formula(FKind::Implies, "", {},
                                  {std::move(a), std::move(b)}, "", ""));
}

FormulaPtr Formula::iff(FormulaPtr a, FormulaPtr b) {
    return FormulaPtr(new Formula(FKind::Iff, "", {},
                                  {std::move(a), std::move(b)}, "", ""));
}

FormulaPtr Formula::exists(std::string var, Sort sort, FormulaPtr body) {
    return FormulaPtr(new Formula(FKind::Exists, "", {}, {std::move(body)},
                                  std::move(var), std::move(sort)));
}

FormulaPtr Formula::forall(std::string var, Sort sort, FormulaPtr body) {
    return FormulaPtr(new Formula(FKind::Forall, "", {}, {std::move(body)},
                                  std::move(var), std::move(sort)));
}

// ---------------------------------------------------------------------------
// Variables
// ---------------------------------------------------------------------------

bool natural_less(const std::string& a, const std::string& b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        bool da = std::isdigit(static_cast<unsigned char>(a[i]));
        bool db = std::isdigit(static_cast<unsigned char>(b[j]));
        if (da && db) {
            std::size_t i0 = i, j0 = j;
            while (i < a.size() && std::isdigit(static_cast<unsigned char>(a[i]))) ++i;
            while (j < b.size() && std::isdigit(static_cast<unsigned char>(b[j]))) ++j;
            std::string na = a.substr(i0, i - i0), nb = b.substr(j0, j - j0);
            // strip leading zeros for value compare, keep for tie-break
            auto stripped = [](const std::string& s) {
                std::size_t k = s.find_first_not_of('0');
                return k == std::string::npos ? std::string("0") : s.substr(k);
            };
            std::string va = stripped(na), vb = stripped(nb);
            if (va.size() != vb.size()) return va.size() < vb.size();
            if (va != vb) return va < vb;
            if (na != nb) return na < nb;
        } else {
            if (a[i] != b[j]) return a[i] < b[j];
            ++i;
            ++j;
        }
    }
    return a.size() - i < b.size() - j;
}

namespace {

void collect_term_vars(const TermPtr& t, VarSet& out) {
    switch (t->kind()) {
        case TermKind::Var: out.emplace(t->name(), t->sort()); break;
        case TermKind::Rat: break;
        case TermKind::Apply:
            for (const auto& a : t->args()) collect_term_vars(a, out);
            break;
    }
}

void collect_free(const FormulaPtr& f, std::set<std::string>& bound, VarSet& out) {
    switch (f->kind()) {
        case FKind::True:
        case FKind::False: return;
        case FKind::Atom: {
            VarSet vs;
            for (const auto& t : f->terms()) collect_term_vars(t, vs);
            for (const auto& [name, sort] : vs)
                if (!bound.count(name)) out.emplace(name, sort);
            return;
        }
        case FKind::Exists:
        case FKind::Forall: {
            bool inserted = bound.insert(f->var()).second;
            collect_free(f->child(0), bound, out);
            if (inserted) bound.erase(f->var());
            return;
        }
        default:
            for (const auto& c : f->children()) collect_free(c, bound, out);
            return;
    }
}

}  // namespace

VarSet term_vars(const TermPtr& t) {
    VarSet out;
    collect_term_vars(t, out);
    return out;
}

VarSet free_vars(const FormulaPtr& f) {
    VarSet out;
    std::set<std::string> bound;
    collect_free(f, bound, out);
    return out;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& used) {
    std::string name = base;
    while (used.count(name)) name += '\'';
    return name;
}

TermPtr substitute_term(const TermPtr& t, const std::map<std::string, TermPtr>& sub) {
    switch (t->kind()) {
        case TermKind::Var: {
            auto it = sub.find(t->name());
            if (it == sub.end()) return t;
            if (it->second->sort() != t->sort())
                throw SortError("substitution changes sort of " + t->name());
            return it->second;
        }
        case TermKind::Rat: return t;
        case TermKind::Apply: {
            std::vector<TermPtr> args;
            args.reserve(t->args().size());
            bool changed = false;
            for (const auto& a : t->args()) {
                args.push_back(substitute_term(a, sub));
                changed = changed || args.back() != a;
            }
            if (!changed) return t;
            return Term::apply(t->name(), std::move(args), t->sort());
        }
    }
    return t;
}

FormulaPtr substitute(const FormulaPtr& f, const std::map<std::string, TermPtr>& sub) {
    if (sub.empty()) return f;
    switch (f->kind()) {
        case FKind::True:
        case FKind::False: return f;
        case FKind::Atom: {
            std::vector<TermPtr> terms;
            terms.reserve(f->terms().size());
            for (const auto& t : f->terms()) terms.push_back(substitute_term(t, sub));
            return Formula::atom(f->rel(), std::move(terms));
        }
        case FKind::Exists:
        case FKind::Forall: {
            std::map<std::string, TermPtr> inner = sub;
            inner.erase(f->var());  // the binder shadows
            if (inner.empty()) return f;
            // Capture check: does any replacement mention the bound name?
            bool capture = false;
            for (const auto& [from, to] : inner) {
                (void)from;
                if (term_vars(to).count(f->var())) {
                    capture = true;
                    break;
                }
            }
            std::string var = f->var();
            FormulaPtr body = f->child(0);
            if (capture) {
                std::set<std::string> used;
                for (const auto& [name, _] : free_vars(body)) used.insert(name);
                for (const auto& [from, to] : inner) {
                    used.insert(from);
                    for (const auto& [name, _] : term_vars(to)) used.insert(name);
                }
                std::string renamed = fresh_name(var, used);
                body = substitute(body, {{var, Term::var(renamed, f->var_sort())}});
                var = renamed;
            }
            body = substitute(body, inner);
            return f->kind() == FKind::Exists
                       ? Formula::exists(var, f->var_sort(), body)
                       : Formula::forall(var, f->var_sort(), body);
        }
        default: {
            std::vector<FormulaPtr> kids;
            kids.reserve(f->children().size());
            for (const auto& c : f->children()) kids.push_back(substitute(c, sub));
            switch (f->kind()) {
                case FKind::Not: return Formula::neg(kids[0]);
                case FKind::And: return Formula::conj(std::move(kids));
                case FKind::Or: return Formula::disj(std::move(kids));
                case FKind::Implies: return Formula::implies(kids[0], kids[1]);
                case FKind::Iff: return Formula::iff(kids[0], kids[1]);
                default: return f;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Structural simplification
// ---------------------------------------------------------------------------

FormulaPtr simplify(const FormulaPtr& f) {
    switch (f->kind()) {
        case FKind::True:
        case FKind::False:
        case FKind::Atom: return f;
        case FKind::Not: {
            FormulaPtr c = simplify(f->child(0));
            if (c->kind() == FKind::True) return Formula::fls();
            if (c->kind() == FKind::False) return Formula::tru();
            if (c->kind() == FKind::Not) return c->child(0);
            return Formula::neg(c);
        }
        case FKind::And:
        case FKind::Or: {
            const bool is_and = f->kind() == FKind::And;
            const FKind absorb = is_and ? FKind::False : FKind::True;
            const FKind neutral = is_and ? FKind::True : FKind::False;
            std::vector<FormulaPtr> kids;
            for (const auto& c0 : f->children()) {
                FormulaPtr c = simplify(c0);
                if (c->kind() == absorb)
                    return is_and ? Formula::fls() : Formula::tru();
                if (c->kind() == neutral) continue;
                if (c->kind() == f->kind()) {
                    for (const auto& g : c->children()) kids.push_back(g);
                } else {
                    kids.push_back(c);
                }
            }
            if (kids.empty()) return is_and ? Formula::tru() : Formula::fls();
            if (kids.size() == 1) return kids.front();
            return is_and ? Formula::conj(std::move(kids))
                          : Formula::disj(std::move(kids));
        }
        case FKind::Implies: {
            FormulaPtr a = simplify(f->child(0));
            FormulaPtr b = simplify(f->child(1));
            if (a->kind() == FKind::True) return b;
            if (a->kind() == FKind::False) return Formula::tru();
            if (b->kind() == FKind::True) return Formula::tru();
            if (b->kind() == FKind::False) return simplify(Formula::neg(a));
            return Formula::implies(a, b);
        }
        case FKind::Iff: {
            FormulaPtr a = simplify(f->child(0));
            FormulaPtr b = simplify(f->child(1));
            if (a->kind() == FKind::True) return b;
            if (a->kind() == FKind::False) return simplify(Formula::neg(b));
            if (b->kind() == FKind::True) return a;
            if (b->kind() == FKind::False) return simplify(Formula::neg(a));
            return Formula::iff(a, b);
        }
        case FKind::Exists:
        case FKind::Forall: {
            FormulaPtr body = simplify(f->child(0));
            if (body->kind() == FKind::True || body->kind() == FKind::False)
                return body;  // models are nonempty
            return f->kind() == FKind::Exists
                       ? Formula::exists(f->var(), f->var_sort(), body)
                       : Formula::forall(f->var(), f->var_sort(), body);
        }
    }
    return f;
}

FormulaPtr fold_ground_atoms(const FormulaPtr& f) {
    switch (f->kind()) {
        case FKind::True:
        case FKind::False: return f;
        case FKind::Atom: {
            if (f->terms().size() == 2 && (f->rel() == "=" || f->rel() == "<")) {
                auto a = eval_ground_term(f->terms()[0]);
                auto b = eval_ground_term(f->terms()[1]);
                if (a && b) {
                    bool holds = f->rel() == "=" ? *a == *b : *a < *b;
                    return holds ? Formula::tru() : Formula::fls();
                }
            }
            return f;
        }
        case FKind::Exists:
            return Formula::exists(f->var(), f->var_sort(),
                                   fold_ground_atoms(f->child(0)));
        case FKind::Forall:
            return Formula::forall(f->var(), f->var_sort(),
                                   fold_ground_atoms(f->child(0)));
        default: {
            std::vector<FormulaPtr> kids;
            kids.reserve(f->children().size());
            for (const auto& c : f->children()) kids.push_back(fold_ground_atoms(c));
            switch (f->kind()) {
                case FKind::Not: return Formula::neg(kids[0]);
                case FKind::And: return Formula::conj(std::move(kids));
                case FKind::Or: return Formula::disj(std::move(kids));
                case FKind::Implies: return Formula::implies(kids[0], kids[1]);
                case FKind::Iff: return Formula::iff(kids[0], kids[1]);
                default: return f;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// NNF and prenex form
// ---------------------------------------------------------------------------

namespace {

FormulaPtr nnf_rec(const FormulaPtr& f, bool positive) {
    switch (f->kind()) {
        case FKind::True: return positive ? Formula::tru() : Formula::fls();
        case FKind::False: return positive ? Formula::fls() : Formula::tru();
        case FKind::Atom: return positive ? f : Formula::neg(f);
        case FKind::Not: return nnf_rec(f->child(0), !positive);
        case FKind::And:
        case FKind::Or: {
            std::vector<FormulaPtr> kids;
            kids.reserve(f->children().size());
            for (const auto& c : f->children()) kids.push_back(nnf_rec(c, positive));
            bool make_and = (f->kind() == FKind::And) == positive;
            return make_and ? Formula::conj(std::move(kids))
                            : Formula::disj(std::move(kids));
        }
        case FKind::Implies: {
            if (positive)
                return Formula::disj({nnf_rec(f->child(0), false),
                                      nnf_rec(f->child(1), true)});
            return Formula::conj({nnf_rec(f->child(0), true),
                                  nnf_rec(f->child(1), false)});
        }
        case FKind::Iff: {
            const FormulaPtr& a = f->child(0);
            const FormulaPtr& b = f->child(1);
            if (positive)
                return Formula::conj({
                    Formula::disj({nnf_rec(a, false), nnf_rec(b, true)}),
                    Formula::disj({nnf_rec(a, true), nnf_rec(b, false)})});
            return Formula::disj({
                Formula::conj({nnf_rec(a, true), nnf_rec(b, false)}),
                Formula::conj({nnf_rec(a, false), nnf_rec(b, true)})});
        }
        case FKind::Exists:
        case FKind::Forall: {
            bool make_exists = (f->kind() == FKind::Exists) == positive;
            FormulaPtr body = nnf_rec(f->child(0), positive);
            return make_exists ? Formula::exists(f->var(), f->var_sort(), body)
                               : Formula::forall(f->var(), f->var_sort(), body);
        }
    }
    return f;
}

// Pulls quantifiers of an NNF formula to the front, renaming binders apart.
PrenexFormula pull_quantifiers(const FormulaPtr& f, std::set<std::string>& used) {
    switch (f->kind()) {
        case FKind::Exists:
        case FKind::Forall: {
            std::string var = f->var();
            FormulaPtr body = f->child(0);
            if (used.count(var)) {
                std::string renamed = fresh_name(var, used);
                body = substitute(body, {{var, Term::var(renamed, f->var_sort())}});
                var = renamed;
            }
            used.insert(var);
            PrenexFormula inner = pull_quantifiers(body, used);
            inner.prefix.insert(inner.prefix.begin(),
                                {f->kind() == FKind::Exists, var, f->var_sort()});
            return inner;
        }
        case FKind::And:
        case FKind::Or: {
            PrenexFormula out;
            std::vector<FormulaPtr> matrices;
            for (const auto& c : f->children()) {
                PrenexFormula p = pull_quantifiers(c, used);
                out.prefix.insert(out.prefix.end(), p.prefix.begin(), p.prefix.end());
                matrices.push_back(p.matrix);
            }
            out.matrix = f->kind() == FKind::And ? Formula::conj(std::move(matrices))
                                                 : Formula::disj(std::move(matrices));
            return out;
        }
        default:
            return PrenexFormula{{}, f};
    }
}

}  // namespace

FormulaPtr to_nnf(const FormulaPtr& f) { return nnf_rec(simplify(f), true); }

PrenexFormula to_prenex(const FormulaPtr& f) {
    FormulaPtr g = to_nnf(f);
    std::set<std::string> used;
    for (const auto& [name, _] : free_vars(g)) used.insert(name);
    return pull_quantifiers(g, used);
}

FormulaPtr PrenexFormula::to_formula() const {
    FormulaPtr out = matrix;
    for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) {
        out = it->is_exists ? Formula::exists(it->var, it->sort, out)
                            : Formula::forall(it->var, it->sort, out);
    }
    return out;
}

FormulaPtr to_prenex_nnf(const FormulaPtr& f) { return to_prenex(f).to_formula(); }

// ---------------------------------------------------------------------------
// Alpha normalization, equality, hashing
// ---------------------------------------------------------------------------

namespace {

FormulaPtr alpha_rec(const FormulaPtr& f, std::map<std::string, TermPtr>& env,
                     std::size_t& counter) {
    switch (f->kind()) {
        case FKind::True:
        case FKind::False: return f;
        case FKind::Atom: {
            std::vector<TermPtr> terms;
            terms.reserve(f->terms().size());
            for (const auto& t : f->terms()) terms.push_back(substitute_term(t, env));
            return Formula::atom(f->rel(), std::move(terms));
        }
        case FKind::Exists:
        case FKind::Forall: {
            // '$' is outside the identifier alphabet, so canonical names
            // cannot collide with source names.
            std::string canon = "$" + std::to_string(counter++);
            auto saved = env.find(f->var());
            TermPtr old = saved == env.end() ? nullptr : saved->second;
            env[f->var()] = Term::var(canon, f->var_sort());
            FormulaPtr body = alpha_rec(f->child(0), env, counter);
            if (old)
                env[f->var()] = old;
            else
                env.erase(f->var());
            return f->kind() == FKind::Exists
                       ? Formula::exists(canon, f->var_sort(), body)
                       : Formula::forall(canon, f->var_sort(), body);
        }
        default: {
            std::vector<FormulaPtr> kids;
            kids.reserve(f->children().size());
            for (const auto& c : f->children())
                kids.push_back(alpha_rec(c, env, counter));
            switch (f->kind()) {
                case FKind::Not: return Formula::neg(kids[0]);
                case FKind::And: return Formula::conj(std::move(kids));
                case FKind::Or: return Formula::disj(std::move(kids));
                case FKind::Implies: return Formula::implies(kids[0], kids[1]);
                case FKind::Iff: return Formula::iff(kids[0], kids[1]);
                default: return f;
            }
        }
    }
}

inline void hash_mix(std::size_t& seed, std::size_t v) {
    seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

std::size_t term_hash(const TermPtr& t) {
    std::size_t h = static_cast<std::size_t>(t->kind()) * 1315423911u;
    hash_mix(h, std::hash<std::string>{}(t->sort()));
    switch (t->kind()) {
        case TermKind::Var:
            hash_mix(h, std::hash<std::string>{}(t->name()));
            break;
        case TermKind::Rat:
            hash_mix(h, std::hash<std::string>{}(to_string(t->value())));
            break;
        case TermKind::Apply:
            hash_mix(h, std::hash<std::string>{}(t->name()));
            for (const auto& a : t->args()) hash_mix(h, term_hash(a));
            break;
    }
    return h;
}

}  // namespace

FormulaPtr alpha_normalize(const FormulaPtr& f) {
    std::map<std::string, TermPtr> env;
    std::size_t counter = 0;
    return alpha_rec(f, env, counter);
}

bool structural_equal(const FormulaPtr& a, const FormulaPtr& b) {
    if (a == b) return true;
    if (a->kind() != b->kind()) return false;
    switch (a->kind()) {
        case FKind::True:
        case FKind::False: return true;
        case FKind::Atom: {
            if (a->rel() != b->rel() || a->terms().size() != b->terms().size())
                return false;
            for (std::size_t i = 0; i < a->terms().size(); ++i)
                if (!term_equal(a->terms()[i], b->terms()[i])) return false;
            return true;
        }
        case FKind::Exists:
        case FKind::Forall:
            return a->var() == b->var() && a->var_sort() == b->var_sort() &&
                   structural_equal(a->child(0), b->child(0));
        default: {
            if (a->children().size() != b->children().size()) return false;
            for (std::size_t i = 0; i < a->children().size(); ++i)
                if (!structural_equal(a->children()[i], b->children()[i]))
                    return false;
            return true;
        }
    }
}

bool alpha_equal(const FormulaPtr& a, const FormulaPtr& b) {
    return structural_equal(alpha_normalize(a), alpha_normalize(b));
}

std::size_t structural_hash(const FormulaPtr& f) {
    std::size_t h = static_cast<std::size_t>(f->kind()) * 2654435761u;
    switch (f->kind()) {
        case FKind::True:
        case FKind::False: break;
        case FKind::Atom:
            hash_mix(h, std::hash<std::string>{}(f->rel()));
            for (const auto& t : f->terms()) hash_mix(h, term_hash(t));
            break;
        case FKind::Exists:
        case FKind::Forall:
            hash_mix(h, std::hash<std::string>{}(f->var()));
            hash_mix(h, std::hash<std::string>{}(f->var_sort()));
            hash_mix(h, structural_hash(f->child(0)));
            break;
        default:
            for (const auto& c : f->children()) hash_mix(h, structural_hash(c));
            break;
    }
    return h;
}

namespace {

std::size_t term_size(const TermPtr& t) {
    std::size_t n = 1;
    for (const auto& a : t->args()) n += term_size(a);
    return n;
}

}  // namespace

std::size_t formula_size(const FormulaPtr& f) {
    std::size_t n = 1;
    for (const auto& t : f->terms()) n += term_size(t);
    for (const auto& c : f->children()) n += formula_size(c);
    return n;
}

std::size_t quantifier_count(const FormulaPtr& f) {
    std::size_t n = f->is_quantifier() ? 1 : 0;
    for (const auto& c : f->children()) n += quantifier_count(c);
    return n;
}

// ---------------------------------------------------------------------------
// Sort checking
// ---------------------------------------------------------------------------

namespace {

void check_term(const TermPtr& t, const Signature& sig) {
    const SortInfo& si = sig.info(t->sort());
    switch (t->kind()) {
        case TermKind::Var:
        case TermKind::Rat: return;
        case TermKind::Apply: {
            const std::string& f = t->name();
            for (const auto& a : t->args()) {
                if (a->sort() != t->sort())
                    throw SortError("argument sort mismatch under " + f);
                check_term(a, sig);
            }
            if (f == "+" || f == "-") {
                if (!si.has_add) throw SortError("sort " + t->sort() + " lacks +/-");
                if (f == "-" && t->args().size() > 2)
                    throw SortError("- takes 1 or 2 arguments");
                return;
            }
            if (f == "*") {
                if (si.has_mul) return;
                if (si.scalar_mul) {
                    std::size_t nonlit = 0;
                    for (const auto& a : t->args())
                        if (a->kind() != TermKind::Rat) ++nonlit;
                    if (nonlit <= 1) return;
                    throw SortError("sort " + t->sort() +
                                    " allows only scalar multiples");
                }
                throw SortError("sort " + t->sort() + " lacks *");
            }
            if (f.size() >= 2 && f[0] == 'd') {
                bool digits = true;
                for (std::size_t i = 1; i < f.size(); ++i)
                    digits = digits && std::isdigit(static_cast<unsigned char>(f[i]));
                if (digits) {
                    int k = std::stoi(f.substr(1));
                    if (k >= 1 && k <= si.derivations && t->args().size() == 1)
                        return;
                    throw SortError("derivation " + f + " not available on sort " +
                                    t->sort());
                }
            }
            throw SortError("unknown function symbol: " + f);
        }
    }
}

}  // namespace

void check_sorts(const FormulaPtr& f, const Signature& sig) {
    switch (f->kind()) {
        case FKind::True:
        case FKind::False: return;
        case FKind::Atom: {
            if (f->terms().size() != 2)
                throw SortError("relation " + f->rel() + " takes 2 arguments");
            const Sort& s = f->terms()[0]->sort();
            if (f->terms()[1]->sort() != s)
                throw SortError("relation " + f->rel() + " mixes sorts");
            if (f->rel() == "<") {
                if (!sig.info(s).has_order)
                    throw SortError("sort " + s + " has no order");
            } else if (f->rel() != "=") {
                throw SortError("unknown relation: " + f->rel());
            }
            for (const auto& t : f->terms()) check_term(t, sig);
            return;
        }
        case FKind::Exists:
        case FKind::Forall:
            if (!sig.has_sort(f->var_sort()))
                throw SortError("unknown sort in quantifier: " + f->var_sort());
            check_sorts(f->child(0), sig);
            return;
        default:
            for (const auto& c : f->children()) check_sorts(c, sig);
            return;
    }
}

}  // namespace diffbound::logic
