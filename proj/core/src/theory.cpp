#include "diffbound/theory.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>

#include "diffbound/errors.hpp"
#include "diffbound/text.hpp"
#include "theory_impl.hpp"

namespace diffbound::theory {

using namespace diffbound::logic;

const FormulaPtr& literal_atom(const FormulaPtr& lit) {
    return lit->kind() == FKind::Not ? lit->child(0) : lit;
}

bool literal_positive(const FormulaPtr& lit) { return lit->kind() != FKind::Not; }

Sort literal_sort(const FormulaPtr& lit) {
    const FormulaPtr& a = literal_atom(lit);
    if (a->kind() != FKind::Atom || a->terms().empty())
        throw Error("internal: literal expected");
    return a->terms()[0]->sort();
}

// ---------------------------------------------------------------------------
// DNF (on NNF quantifier-free input)
// ---------------------------------------------------------------------------

namespace {

using Cube = std::vector<FormulaPtr>;

// Sorts a cube by literal text, drops duplicate literals, and rejects cubes
// containing an atom together with its negation. Nested eliminations copy
// the same few literals into exponentially many cubes; keying cubes by their
// canonical text keeps the count at most 3^|alphabet|.
bool canon_cube(Cube& cube, std::string& key, std::vector<std::string>& texts) {
    std::map<std::string, FormulaPtr> lits;
    std::set<std::string> pos, negated;
    for (auto& l : cube) {
        std::string t = text::print_formula(l);
        if (l->kind() == FKind::Not)
            negated.insert(text::print_formula(l->child(0)));
        else
            pos.insert(t);
        lits.emplace(std::move(t), std::move(l));
    }
    for (const auto& n : negated)
        if (pos.count(n)) return false;
    cube.clear();
    key.clear();
    texts.clear();
    for (auto& [t, l] : lits) {
        key += t;
        key += '\n';
        texts.push_back(t);
        cube.push_back(std::move(l));
    }
    return true;
}

struct CubeSet {
    std::size_t cap;
    std::vector<Cube> cubes;
    std::vector<std::vector<std::string>> texts;
    std::set<std::string> seen;

    explicit CubeSet(std::size_t cap) : cap(cap) {}

    void add(Cube cube) {
        std::string key;
        std::vector<std::string> lits;
        if (!canon_cube(cube, key, lits)) return;
        if (!seen.insert(std::move(key)).second) return;
        cubes.push_back(std::move(cube));
        texts.push_back(std::move(lits));
        if (cubes.size() > cap) throw CapExceeded("DNF disjunct cap exceeded");
    }

    // A cube whose literal set contains another cube's is redundant in a
    // disjunction. Quadratic, so only bother while the set is small.
    void prune() {
        if (cubes.size() < 2 || cubes.size() > 512) return;
        std::vector<bool> dead(cubes.size(), false);
        for (std::size_t i = 0; i < cubes.size(); ++i) {
            if (dead[i]) continue;
            for (std::size_t j = 0; j < cubes.size(); ++j) {
                if (i == j || dead[j]) continue;
                if (texts[i].size() < texts[j].size() &&
                    std::includes(texts[j].begin(), texts[j].end(),
                                  texts[i].begin(), texts[i].end()))
                    dead[j] = true;
            }
        }
        std::size_t w = 0;
        for (std::size_t i = 0; i < cubes.size(); ++i) {
            if (dead[i]) continue;
            if (w != i) {
                cubes[w] = std::move(cubes[i]);
                texts[w] = std::move(texts[i]);
            }
            ++w;
        }
        cubes.resize(w);
        texts.resize(w);
    }
};

std::vector<Cube> to_dnf(const FormulaPtr& f, std::size_t cap) {
    switch (f->kind()) {
        case FKind::True: return {Cube{}};
        case FKind::False: return {};
        case FKind::Atom: return {Cube{f}};
        case FKind::Not: {
            if (f->child(0)->kind() != FKind::Atom)
                throw Error("internal: DNF input not in NNF");
            return {Cube{f}};
        }
        case FKind::Or: {
            CubeSet out(cap);
            for (const auto& c : f->children())
                for (auto& cube : to_dnf(c, cap)) out.add(std::move(cube));
            out.prune();
            return std::move(out.cubes);
        }
        case FKind::And: {
            std::vector<Cube> acc{Cube{}};
            for (const auto& c : f->children()) {
                auto sub = to_dnf(c, cap);
                CubeSet next(cap);
                for (const auto& left : acc) {
                    for (const auto& right : sub) {
                        Cube merged = left;
                        merged.insert(merged.end(), right.begin(),
                                      right.end());
                        next.add(std::move(merged));
                    }
                }
                next.prune();
                acc = std::move(next.cubes);
            }
            return acc;
        }
        default:
            throw Error("internal: quantifier or arrow inside DNF conversion");
    }
}

std::size_t count_var_term(const TermPtr& t, const std::string& name) {
    switch (t->kind()) {
        case TermKind::Var: return t->name() == name ? 1 : 0;
        case TermKind::Rat: return 0;
        case TermKind::Apply: {
            std::size_t n = 0;
            for (const auto& a : t->args()) n += count_var_term(a, name);
            return n;
        }
    }
    return 0;
}

std::size_t count_var(const FormulaPtr& f, const std::string& name) {
    std::size_t n = 0;
    for (const auto& t : f->terms()) n += count_var_term(t, name);
    for (const auto& c : f->children()) n += count_var(c, name);
    return n;
}

FormulaPtr tidy(const FormulaPtr& f) { return simplify(fold_ground_atoms(f)); }

FormulaPtr map_atoms(const FormulaPtr& f, const TheoryImpl& impl) {
    switch (f->kind()) {
        case FKind::True:
        case FKind::False: return f;
        case FKind::Atom: return Formula::disj(impl.atom_factors(f));
        case FKind::Not: {
            // Negations stay in NNF: a factored atom under Not becomes the
            // conjunction of the negated factors.
            const FormulaPtr& inner = f->child(0);
            if (inner->kind() == FKind::Atom) {
                std::vector<FormulaPtr> parts;
                for (auto& a : impl.atom_factors(inner))
                    parts.push_back(Formula::neg(std::move(a)));
                return Formula::conj(std::move(parts));
            }
            return Formula::neg(map_atoms(inner, impl));
        }
        case FKind::And:
        case FKind::Or: {
            std::vector<FormulaPtr> kids;
            for (const auto& c : f->children())
                kids.push_back(map_atoms(c, impl));
            return f->kind() == FKind::And ? Formula::conj(std::move(kids))
                                           : Formula::disj(std::move(kids));
        }
        case FKind::Implies:
            return Formula::implies(map_atoms(f->child(0), impl),
                                    map_atoms(f->child(1), impl));
        case FKind::Iff:
            return Formula::iff(map_atoms(f->child(0), impl),
                                map_atoms(f->child(1), impl));
        case FKind::Exists:
            return Formula::exists(f->var(), f->var_sort(),
                                   map_atoms(f->child(0), impl));
        case FKind::Forall:
            return Formula::forall(f->var(), f->var_sort(),
                                   map_atoms(f->child(0), impl));
    }
    throw Error("internal: unhandled formula kind");
}

// Exists-elimination of one variable from an NNF quantifier-free matrix.
FormulaPtr eliminate_exists(const TheoryImpl& impl, const std::string& var,
                            const Sort& sort, const FormulaPtr& matrix) {
    FormulaPtr m = tidy(map_atoms(matrix, impl));
    if (m->kind() == FKind::True || m->kind() == FKind::False) return m;
    if (!free_vars(m).count(var)) return m;
    std::vector<FormulaPtr> pieces;
    std::set<std::string> seen;
    auto cubes = to_dnf(m, impl.options().max_disjuncts);
    if (std::getenv("ACF_STATS"))
        std::fprintf(stderr, "[dnf] var=%s matrix_chars=%zu cubes=%zu\n",
                     var.c_str(), text::print_formula(m).size(), cubes.size());
    for (const auto& cube : cubes) {
        FormulaPtr piece = tidy(impl.elim_exists_conj(var, sort, cube));
        if (piece->kind() == FKind::True) return piece;
        if (piece->kind() == FKind::False) continue;
        if (seen.insert(text::print_formula(piece)).second)
            pieces.push_back(std::move(piece));
    }
    return simplify(Formula::disj(std::move(pieces)));
}

}  // namespace

// ---------------------------------------------------------------------------
// Theory facade
// ---------------------------------------------------------------------------

Theory Theory::dlo(TheoryOptions opts) { return Theory(make_dlo_impl(opts)); }
Theory Theory::lovs(TheoryOptions opts) { return Theory(make_lovs_impl(opts)); }
Theory Theory::acf0(TheoryOptions opts) { return Theory(make_acf_impl(opts)); }

Theory Theory::disjoint_union(const Theory& a, const Theory& b) {
    return Theory(make_union_impl(a.impl_, b.impl_));
}

Theory Theory::by_name(const std::string& name, TheoryOptions opts) {
    auto plus = name.find('+');
    if (plus != std::string::npos) {
        Theory a = by_name(name.substr(0, plus), opts);
        Theory b = by_name(name.substr(plus + 1), opts);
        return disjoint_union(a, b);
    }
    if (name == "dlo") return dlo(opts);
    if (name == "lovs") return lovs(opts);
    if (name == "acf0") return acf0(opts);
    throw Error("unknown theory: " + name);
}

const std::string& Theory::name() const { return impl_->name(); }
const Signature& Theory::signature() const { return impl_->signature(); }
bool Theory::is_union() const { return impl_->is_union(); }
std::vector<Sort> Theory::sorts() const { return impl_->sorts(); }

Sort Theory::primary_sort() const {
    auto s = impl_->sorts();
    if (s.size() != 1) throw Error("theory " + name() + " is not single-sorted");
    return s.front();
}

void Theory::check_fragment(const FormulaPtr& f) const {
    check_sorts(f, impl_->signature());
    // Every atom must satisfy the owning theory's atom rule.
    std::vector<FormulaPtr> stack{f};
    while (!stack.empty()) {
        FormulaPtr g = stack.back();
        stack.pop_back();
        if (g->kind() == FKind::Atom) {
            impl_->check_atom(g);
            continue;
        }
        for (const auto& c : g->children()) stack.push_back(c);
    }
}

QEResult Theory::qe(const FormulaPtr& f) const {
    check_fragment(f);
    PrenexFormula pf = to_prenex(f);
    FormulaPtr matrix = tidy(pf.matrix);
    std::vector<ElimStep> trace;
    auto prefix = pf.prefix;

    while (!prefix.empty()) {
        // Innermost maximal block of one quantifier kind.
        std::size_t end = prefix.size();
        bool exists_block = prefix[end - 1].is_exists;
        std::size_t begin = end;
        while (begin > 0 && prefix[begin - 1].is_exists == exists_block) --begin;

        std::vector<QuantifierStep> block(prefix.begin() + begin, prefix.begin() + end);
        prefix.erase(prefix.begin() + begin, prefix.end());

        while (!block.empty()) {
            // Fewest occurrences first, names as tie-break; recounted after
            // each elimination since occurrence counts shift.
            std::size_t best = 0;
            std::size_t best_count = count_var(matrix, block[0].var);
            for (std::size_t i = 1; i < block.size(); ++i) {
                std::size_t c = count_var(matrix, block[i].var);
                bool better = c < best_count ||
                              (c == best_count &&
                               natural_less(block[i].var, block[best].var));
                if (impl_->options().reverse_block_order)
                    better = c > best_count ||
                             (c == best_count &&
                              natural_less(block[best].var, block[i].var));
                if (better) {
                    best = i;
                    best_count = c;
                }
            }
            QuantifierStep step = block[best];
            block.erase(block.begin() + best);

            if (best_count == 0) {
                trace.push_back({step.var, "unused"});
                continue;
            }
            if (exists_block) {
                matrix = eliminate_exists(*impl_, step.var, step.sort, matrix);
            } else {
                FormulaPtr dual = to_nnf(Formula::neg(matrix));
                dual = eliminate_exists(*impl_, step.var, step.sort, dual);
                matrix = to_nnf(Formula::neg(dual));
            }
            matrix = tidy(matrix);
            trace.push_back({step.var, impl_->method_tag()});
        }
    }
    return {tidy(matrix), std::move(trace)};
}

bool Theory::decide(const FormulaPtr& sentence) const {
    if (!free_vars(sentence).empty())
        throw Error("decide requires a sentence without free variables");
    QEResult r = qe(sentence);
    FormulaPtr g = tidy(r.formula);
    if (g->kind() == FKind::True) return true;
    if (g->kind() == FKind::False) return false;
    throw Error("internal: decision did not reach a truth value");
}

bool Theory::model_eval(const FormulaPtr& f,
                        const std::map<std::string, BigRat>& assignment) const {
    VarSet fv = free_vars(f);
    std::map<std::string, TermPtr> sub;
    for (const auto& [name, sort] : fv) {
        auto it = assignment.find(name);
        if (it == assignment.end())
            throw Error("model_eval: no value for free variable " + name);
        sub[name] = Term::rat(it->second, sort);
    }
    return decide(substitute(f, sub));
}

bool Theory::model_eval(const FormulaPtr& f, const std::vector<BigRat>& point) const {
    VarSet fv = free_vars(f);
    if (fv.size() != point.size())
        throw Error("model_eval: point arity " + std::to_string(point.size()) +
                    " does not match " + std::to_string(fv.size()) +
                    " free variables");
    std::map<std::string, BigRat> assignment;
    std::size_t i = 0;
    for (const auto& [name, _] : fv) assignment[name] = point[i++];
    return model_eval(f, assignment);
}

bool union_decide(const Theory& a, const Theory& b, const FormulaPtr& sentence) {
    return Theory::disjoint_union(a, b).decide(sentence);
}

}  // namespace diffbound::theory
