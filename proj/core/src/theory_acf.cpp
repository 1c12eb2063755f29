#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <set>

#include "diffbound/errors.hpp"
#include "diffbound/text.hpp"
#include "poly_arith.hpp"
#include "theory_impl.hpp"

namespace diffbound::theory {

namespace {
long g_us_prem, g_us_div, g_us_gcd, g_us_sqf;
long g_n_prem, g_n_div, g_n_gcd, g_n_sqf;
struct UsTimer {
    long* slot;
    std::chrono::steady_clock::time_point t0;
    explicit UsTimer(long* s) : slot(s), t0(std::chrono::steady_clock::now()) {}
    ~UsTimer() {
        *slot += std::chrono::duration_cast<std::chrono::microseconds>(
                     std::chrono::steady_clock::now() - t0)
                     .count();
    }
};
}


using namespace diffbound::logic;

// ---------------------------------------------------------------------------
// Poly
// ---------------------------------------------------------------------------

Poly Poly::constant(const BigRat& c) {
    Poly p;
    if (c != 0) p.terms[PMono{}] = c;
    return p;
}

Poly Poly::variable(const std::string& name) {
    Poly p;
    PMono m;
    m.exp[name] = 1;
    p.terms[m] = 1;
    return p;
}

Poly Poly::from_term(const TermPtr& t) {
    switch (t->kind()) {
        case TermKind::Var: return variable(t->name());
        case TermKind::Rat: return constant(t->value());
        case TermKind::Apply: {
            const std::string& op = t->name();
            if (op == "+") {
                Poly p;
                for (const auto& a : t->args()) p = p + from_term(a);
                return p;
            }
            if (op == "-") {
                Poly p = from_term(t->args()[0]);
                if (t->args().size() == 1) return p.negated();
                return p - from_term(t->args()[1]);
            }
            if (op == "*") {
                Poly p = constant(1);
                for (const auto& a : t->args()) p = p * from_term(a);
                return p;
            }
            throw FragmentError("symbol outside the polynomial language",
                                text::print_term(t));
        }
    }
    throw FragmentError("unreachable term kind", text::print_term(t));
}

bool Poly::is_const() const {
    return terms.empty() || (terms.size() == 1 && terms.begin()->first.exp.empty());
}

const BigRat& Poly::const_value() const { return terms.begin()->second; }

Poly Poly::operator+(const Poly& o) const {
    Poly p = *this;
    for (const auto& [m, c] : o.terms) {
        auto [it, fresh] = p.terms.try_emplace(m, c);
        if (!fresh && (it->second += c) == 0) p.terms.erase(it);
    }
    return p;
}

Poly Poly::operator-(const Poly& o) const { return *this + o.negated(); }

Poly Poly::negated() const {
    Poly p = *this;
    for (auto& [m, c] : p.terms) c = -c;
    return p;
}

Poly Poly::operator*(const Poly& o) const {
    Poly p;
    for (const auto& [m1, c1] : terms)
        for (const auto& [m2, c2] : o.terms) {
            PMono m = m1;
            for (const auto& [v, e] : m2.exp) m.exp[v] += e;
            BigRat prod = c1 * c2;
            auto [it, fresh] = p.terms.try_emplace(m, prod);
            if (!fresh && (it->second += prod) == 0) p.terms.erase(it);
        }
    return p;
}

Poly Poly::pow(int k) const {
    Poly p = constant(1);
    for (int i = 0; i < k; ++i) p = p * *this;
    return p;
}

int Poly::degree(const std::string& var) const {
    int d = 0;
    for (const auto& [m, c] : terms) {
        auto it = m.exp.find(var);
        if (it != m.exp.end()) d = std::max(d, it->second);
    }
    return d;
}

int Poly::total_degree() const {
    int d = 0;
    for (const auto& [m, c] : terms) {
        int s = 0;
        for (const auto& [v, e] : m.exp) s += e;
        d = std::max(d, s);
    }
    return d;
}

std::vector<Poly> Poly::coeffs_in(const std::string& var) const {
    std::vector<Poly> out(static_cast<std::size_t>(degree(var)) + 1);
    for (const auto& [m, c] : terms) {
        PMono rest = m;
        int e = 0;
        auto it = rest.exp.find(var);
        if (it != rest.exp.end()) {
            e = it->second;
            rest.exp.erase(it);
        }
        out[static_cast<std::size_t>(e)].terms[rest] += c;
    }
    for (auto& p : out)
        for (auto it = p.terms.begin(); it != p.terms.end();)
            it = it->second == 0 ? p.terms.erase(it) : std::next(it);
    return out;
}

Poly Poly::leading_coeff(const std::string& var) const {
    auto cs = coeffs_in(var);
    return cs.empty() ? zero() : cs.back();
}

Poly Poly::drop_leading(const std::string& var) const {
    int d = degree(var);
    Poly p;
    for (const auto& [m, c] : terms) {
        auto it = m.exp.find(var);
        int e = it == m.exp.end() ? 0 : it->second;
        if (e != d) p.terms[m] = c;
    }
    return p;
}

Poly Poly::primitive() const {
    if (is_zero()) return *this;
    BigInt l = 1;
    for (const auto& [m, c] : terms) l = lcm(l, den(c));
    BigInt g = 0;
    for (const auto& [m, c] : terms) g = gcd(g, num(c) * (l / den(c)));
    BigRat scale(l, g);
    if (terms.rbegin()->second < 0) scale = -scale;
    Poly p = *this;
    for (auto& [m, c] : p.terms) c *= scale;
    return p;
}

TermPtr Poly::to_term(const Sort& sort) const {
    if (is_zero()) return Term::rat(0, sort);
    std::vector<TermPtr> monos;
    for (const auto& [m, c] : terms) {
        std::vector<TermPtr> factors;
        if (c != 1 || m.exp.empty()) factors.push_back(Term::rat(c, sort));
        for (const auto& [v, e] : m.exp)
            for (int i = 0; i < e; ++i) factors.push_back(Term::var(v, sort));
        monos.push_back(factors.size() == 1
                            ? factors[0]
                            : Term::apply("*", factors, sort));
    }
    return monos.size() == 1 ? monos[0] : Term::apply("+", monos, sort);
}

Poly Poly::derive(const std::string& var) const {
    Poly p;
    for (const auto& [m, c] : terms) {
        auto it = m.exp.find(var);
        if (it == m.exp.end()) continue;
        PMono n = m;
        int e = it->second;
        if (e == 1) n.exp.erase(var); else --n.exp[var];
        BigRat add = c * e;
        auto [pos, fresh] = p.terms.try_emplace(n, add);
        if (!fresh && (pos->second += add) == 0) p.terms.erase(pos);
    }
    return p;
}

Poly Poly::eval_int(const std::string& var, const BigInt& value) const {
    int d = degree(var);
    std::vector<BigInt> pw(static_cast<std::size_t>(d) + 1, 1);
    for (int i = 1; i <= d; ++i) pw[i] = pw[i - 1] * value;
    Poly p;
    for (const auto& [m, c] : terms) {
        PMono n = m;
        int e = 0;
        auto it = n.exp.find(var);
        if (it != n.exp.end()) {
            e = it->second;
            n.exp.erase(it);
        }
        BigRat add = c * BigRat(pw[static_cast<std::size_t>(e)]);
        auto [pos, fresh] = p.terms.try_emplace(n, add);
        if (!fresh && (pos->second += add) == 0) p.terms.erase(pos);
    }
    return p;
}

Poly prem(const Poly& f, const Poly& g, const std::string& var,
          int total_degree_cap) {
    UsTimer ut(&g_us_prem); ++g_n_prem;
    int dg = g.degree(var);
    if (dg < 1) throw Error("prem: divisor must involve the variable");
    Poly lc_g = g.leading_coeff(var);
    Poly r = f;
    while (!r.is_zero()) {
        int dr = r.degree(var);
        if (dr < dg) break;
        if (total_degree_cap > 0 &&
            r.total_degree() + lc_g.total_degree() > total_degree_cap)
            throw CapExceeded("intermediate degree exceeded the working cap");
        Poly lc_r = r.leading_coeff(var);
        Poly shift = Poly::variable(var).pow(dr - dg);
        r = lc_g * r - lc_r * shift * g;
    }
    return r;
}

std::optional<Poly> divide_exact(const Poly& num, const Poly& den) {
    UsTimer ut(&g_us_div); ++g_n_div;
    if (den.is_zero()) return std::nullopt;
    if (num.is_zero()) return Poly::zero();
    if (den.is_const()) {
        Poly q = num;
        for (auto& [m, c] : q.terms) c /= den.const_value();
        return q;
    }
    // Long division needs a monomial order compatible with multiplication;
    // the sparse map order is not one, so work over dense graded-lex keys.
    std::vector<std::string> vars;
    {
        std::set<std::string> s;
        for (const auto& [m, c] : num.terms)
            for (const auto& [v, e] : m.exp) s.insert(v);
        for (const auto& [m, c] : den.terms)
            for (const auto& [v, e] : m.exp) s.insert(v);
        vars.assign(s.begin(), s.end());
    }
    auto dense = [&](const PMono& m) {
        std::vector<int> k(vars.size() + 1, 0);
        for (std::size_t i = 0; i < vars.size(); ++i) {
            auto it = m.exp.find(vars[i]);
            if (it != m.exp.end()) {
                k[i + 1] = it->second;
                k[0] += it->second;
            }
        }
        return k;
    };
    using DKey = std::vector<int>;
    std::map<DKey, std::pair<PMono, BigRat>> r;
    for (const auto& [m, c] : num.terms)
        r.emplace(dense(m), std::make_pair(m, c));
    std::vector<std::pair<DKey, std::pair<PMono, BigRat>>> ds;
    for (const auto& [m, c] : den.terms)
        ds.emplace_back(dense(m), std::make_pair(m, c));
    std::sort(ds.begin(), ds.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    const PMono& dlead = ds.back().second.first;
    const BigRat& dcoeff = ds.back().second.second;
    Poly q;
    while (!r.empty()) {
        auto lead = std::prev(r.end());
        PMono qm = lead->second.first;
        for (const auto& [v, e] : dlead.exp) {
            auto it = qm.exp.find(v);
            if (it == qm.exp.end() || it->second < e) return std::nullopt;
            if ((it->second -= e) == 0) qm.exp.erase(it);
        }
        BigRat qc = lead->second.second / dcoeff;
        q.terms[qm] = qc;
        for (const auto& [dk, dv] : ds) {
            PMono pm = qm;
            for (const auto& [v, e] : dv.first.exp) pm.exp[v] += e;
            BigRat sub = qc * dv.second;
            auto [it, fresh] =
                r.try_emplace(dense(pm), std::make_pair(pm, BigRat(-sub)));
            if (!fresh && (it->second.second -= sub) == 0) r.erase(it);
        }
    }
    return q;
}

namespace {

BigInt int_content(const Poly& p) {
    BigInt g = 0;
    for (const auto& [m, c] : p.terms) g = gcd(g, num(c));
    return g;
}

BigInt max_abs_coeff(const Poly& p) {
    BigInt b = 0;
    for (const auto& [m, c] : p.terms) {
        BigInt a = abs(num(c));
        if (a > b) b = a;
    }
    return b;
}

// Symmetric remainder of every coefficient mod xi, in (-xi/2, xi/2].
Poly balanced_digit(const Poly& g, const BigInt& xi) {
    Poly d;
    for (const auto& [m, c] : g.terms) {
        BigInt r = num(c) % xi;
        if (2 * r > xi) r -= xi;
        else if (2 * r <= -xi) r += xi;
        if (r != 0) d.terms[m] = BigRat(r);
    }
    return d;
}

// (g - d) / xi with every coefficient divisible exactly.
Poly shift_digit(const Poly& g, const Poly& d, const BigInt& xi) {
    Poly t = g - d;
    Poly out;
    for (const auto& [m, c] : t.terms) out.terms[m] = BigRat(num(c) / xi);
    return out;
}

Poly gcd_heu(const Poly& a, const Poly& b,
             const std::vector<std::string>& vars, int depth) {
    if (vars.empty() || depth > 8)
        return Poly::constant(BigRat(gcd(int_content(a), int_content(b))));
    const std::string& v = vars.back();
    std::vector<std::string> rest(vars.begin(), std::prev(vars.end()));
    BigInt xi = 2 * std::min(max_abs_coeff(a), max_abs_coeff(b)) + 29;
    for (int attempt = 0; attempt < 6; ++attempt) {
        if (boost::multiprecision::msb(xi) > 4000) break;
        Poly g = gcd_heu(a.eval_int(v, xi), b.eval_int(v, xi), rest, depth + 1);
        Poly cand;
        int i = 0;
        while (!g.is_zero() && i <= 400) {
            Poly digit = balanced_digit(g, xi);
            if (!digit.is_zero())
                cand = cand + digit * Poly::variable(v).pow(i);
            g = shift_digit(g, digit, xi);
            ++i;
        }
        if (g.is_zero() && !cand.is_zero()) {
            cand = cand.primitive();
            if (divide_exact(a, cand) && divide_exact(b, cand)) return cand;
        }
        xi = xi * 73794 / 27011;
    }
    return Poly::constant(1);
}

}  // namespace

Poly gcd_poly(const Poly& a, const Poly& b) {
    UsTimer ut(&g_us_gcd); ++g_n_gcd;
    if (a.is_zero()) return b.primitive();
    if (b.is_zero()) return a.primitive();
    Poly pa = a.primitive();
    Poly pb = b.primitive();
    if (pa.is_const() || pb.is_const()) return Poly::constant(1);
    std::set<std::string> va, vb;
    for (const auto& [m, c] : pa.terms)
        for (const auto& [v, e] : m.exp) va.insert(v);
    for (const auto& [m, c] : pb.terms)
        for (const auto& [v, e] : m.exp) vb.insert(v);
    std::vector<std::string> shared;
    for (const auto& v : va)
        if (vb.count(v)) shared.push_back(v);
    // A common divisor only involves variables common to both inputs.
    if (shared.empty()) return Poly::constant(1);
    return gcd_heu(pa, pb, shared, 0).primitive();
}

std::vector<Poly> squarefree_factors(const Poly& p) {
    std::vector<Poly> out;
    Poly q = p.primitive();
    if (q.is_zero() || q.is_const()) return out;
    std::set<std::string, NaturalLess> vs;
    for (const auto& [m, c] : q.terms)
        for (const auto& [v, e] : m.exp) vs.insert(v);
    const std::string& v = *vs.begin();
    Poly cont = Poly::zero();
    for (const Poly& c : q.coeffs_in(v)) {
        if (c.is_zero()) continue;
        cont = gcd_poly(cont, c);
        if (cont.is_const()) break;
    }
    Poly pp = q;
    if (!cont.is_const()) {
        if (auto e = divide_exact(q, cont)) {
            pp = e->primitive();
            // The content is free of v, the primitive part is not, so the
            // two factor lists cannot overlap.
            out = squarefree_factors(cont);
        }
    }
    Poly g = gcd_poly(pp, pp.derive(v));
    if (!g.is_const())
        if (auto e = divide_exact(pp, g)) pp = e->primitive();
    out.push_back(std::move(pp));
    std::sort(out.begin(), out.end());
    return out;
}

Poly squarefree(const Poly& p) {
    UsTimer ut(&g_us_sqf); ++g_n_sqf;
    Poly q = p.primitive();
    if (q.is_zero() || q.is_const()) return q;
    Poly r = Poly::constant(1);
    for (const Poly& f : squarefree_factors(q)) r = r * f;
    return r.primitive();
}

// ---------------------------------------------------------------------------
// Eliminator for the equational fragment
// ---------------------------------------------------------------------------

namespace {

Signature acf_signature() {
    Signature sig;
    SortInfo info;
    info.has_add = true;
    info.has_mul = true;
    sig.add_sort("F", info);
    return sig;
}

class AcfImpl final : public TheoryImpl {
public:
    explicit AcfImpl(TheoryOptions opts)
        : TheoryImpl("acf0", acf_signature(), opts) {}

    std::vector<Sort> sorts() const override { return {"F"}; }
    std::string method_tag() const override { return "pseudo-remainder"; }

    void check_atom(const FormulaPtr& atom) const override {
        if (atom->rel() != "=")
            throw FragmentError("only equations are admitted over the field sort",
                                text::print_formula(atom));
        for (const auto& t : atom->terms()) {
            Poly p = Poly::from_term(t);
            if (p.total_degree() > options().acf_degree_cap)
                throw FragmentError("atom exceeds the degree cap",
                                    text::print_term(t));
        }
    }

    FormulaPtr elim_exists_conj(const std::string& x, const Sort& sort,
                                const std::vector<FormulaPtr>& lits) const override;

    FormulaPtr canon_atom(const FormulaPtr& atom) const override {
        Poly p = Poly::from_term(atom->terms()[0]) -
                 Poly::from_term(atom->terms()[1]);
        if (p.is_zero()) return Formula::tru();
        if (p.is_const()) return Formula::fls();
        const Sort& sort = atom->terms()[0]->sort();
        return Formula::eq(squarefree(p).to_term(sort), Term::rat(0, sort));
    }

    std::vector<FormulaPtr> atom_factors(const FormulaPtr& atom) const override {
        Poly p = Poly::from_term(atom->terms()[0]) -
                 Poly::from_term(atom->terms()[1]);
        if (p.is_zero()) return {Formula::tru()};
        if (p.is_const()) return {Formula::fls()};
        const Sort& sort = atom->terms()[0]->sort();
        std::vector<FormulaPtr> out;
        for (const Poly& f : squarefree_factors(p))
            out.push_back(Formula::eq(f.to_term(sort), Term::rat(0, sort)));
        return out;
    }

private:
    FormulaPtr coeffs_nonzero(const Poly& q, const std::string& x,
                              const Sort& sort) const;
    FormulaPtr elim_rec(const std::string& x, const Sort& sort,
                        std::vector<Poly> eqs, std::vector<Poly> neqs,
                        int depth) const;
    FormulaPtr elim_core(const std::string& x, const Sort& sort,
                         std::vector<Poly> eqs, std::vector<Poly> neqs,
                         int depth) const;
    void guard_degree(const Poly& p) const;

    // Branches revisit the same constraint sets constantly; the key is the
    // squarefree normal form, so hits are exact.
    mutable std::mutex cache_mu_;
    mutable std::map<std::string, FormulaPtr> elim_cache_;
};

void AcfImpl::guard_degree(const Poly& p) const {
    if (p.total_degree() > options().acf_working_degree_cap)
        throw CapExceeded("intermediate degree exceeded the working cap");
}

// q != 0 has a solution in x over an algebraically closed field iff some
// coefficient of q as a polynomial in x is nonzero.
FormulaPtr AcfImpl::coeffs_nonzero(const Poly& q, const std::string& x,
                                   const Sort& sort) const {
    std::vector<FormulaPtr> cases;
    for (const Poly& c : q.coeffs_in(x)) {
        if (c.is_zero()) continue;
        if (c.is_const()) return Formula::tru();
        cases.push_back(Formula::neg(
            Formula::eq(squarefree(c).to_term(sort), Term::rat(0, sort))));
    }
    return Formula::disj(std::move(cases));
}

FormulaPtr AcfImpl::elim_rec(const std::string& x, const Sort& sort,
                             std::vector<Poly> eqs, std::vector<Poly> neqs,
                             int depth) const {
    if (depth > 256) throw CapExceeded("elimination recursion exceeded its guard");

    // Constraints are zero sets, so each can be swapped for its squarefree
    // part; that and dedupe keep pseudo-remainder growth from compounding.
    // Disequations flatten into one entry per factor, which keeps the
    // product expansion in the terminal branch as small as possible.
    auto normalize = [&](std::vector<Poly>& ps, bool flatten) {
        std::set<std::string> seen;
        std::vector<Poly> kept;
        std::vector<std::string> keys;
        for (auto& p : ps) {
            std::vector<Poly> parts;
            if (flatten) parts = squarefree_factors(p);
            else parts.push_back(squarefree(p));
            if (parts.empty()) parts.push_back(p.primitive());
            for (auto& q : parts) {
                std::string key = text::print_term(q.to_term(sort));
                if (seen.insert(key).second) {
                    kept.push_back(std::move(q));
                    keys.push_back(std::move(key));
                }
            }
        }
        ps = std::move(kept);
        std::sort(keys.begin(), keys.end());
        std::string joined;
        for (const auto& k : keys) {
            joined += k;
            joined += '\n';
        }
        return joined;
    };
    std::string memo_key = x;
    memo_key += '\0';
    memo_key += normalize(eqs, false);
    memo_key += '\0';
    memo_key += normalize(neqs, true);
    {
        std::lock_guard<std::mutex> lock(cache_mu_);
        auto it = elim_cache_.find(memo_key);
        if (it != elim_cache_.end()) return it->second;
    }
    FormulaPtr out = elim_core(x, sort, std::move(eqs), std::move(neqs), depth);
    {
        std::lock_guard<std::mutex> lock(cache_mu_);
        if (elim_cache_.size() > 100000) elim_cache_.clear();
        elim_cache_.emplace(std::move(memo_key), out);
    }
    return out;
}

long g_acf_cores = 0;
int g_acf_maxdeg = 0;
std::size_t g_acf_maxeqs = 0;

FormulaPtr AcfImpl::elim_core(const std::string& x, const Sort& sort,
                              std::vector<Poly> eqs, std::vector<Poly> neqs,
                              int depth) const {
    ++g_acf_cores;
    g_acf_maxeqs = std::max(g_acf_maxeqs, eqs.size() + neqs.size());
    for (const auto& p0 : eqs) g_acf_maxdeg = std::max(g_acf_maxdeg, p0.total_degree());
    for (const auto& p0 : neqs) g_acf_maxdeg = std::max(g_acf_maxdeg, p0.total_degree());
    // A factored equation splits the problem: a product vanishes exactly
    // when one of its factors does, and each branch is strictly smaller.
    for (std::size_t i = 0; i < eqs.size(); ++i) {
        std::vector<Poly> parts = squarefree_factors(eqs[i]);
        if (parts.size() < 2) continue;
        std::vector<FormulaPtr> branches;
        for (const Poly& f : parts) {
            std::vector<Poly> eqs2 = eqs;
            eqs2[i] = f;
            branches.push_back(elim_rec(x, sort, std::move(eqs2), neqs,
                                        depth + 1));
        }
        return Formula::disj(std::move(branches));
    }

    std::vector<FormulaPtr> side;

    // Move x-free constraints out, drop trivial ones, catch contradictions.
    auto sweep = [&]() -> FormulaPtr {
        for (auto it = eqs.begin(); it != eqs.end();) {
            *it = it->primitive();
            if (it->is_zero()) {
                it = eqs.erase(it);
            } else if (it->is_const()) {
                return Formula::fls();
            } else if (it->degree(x) == 0) {
                side.push_back(Formula::eq(it->to_term(sort), Term::rat(0, sort)));
                it = eqs.erase(it);
            } else {
                ++it;
            }
        }
        for (auto it = neqs.begin(); it != neqs.end();) {
            *it = it->primitive();
            if (it->is_zero()) return Formula::fls();
            if (it->is_const()) {
                it = neqs.erase(it);
            } else if (it->degree(x) == 0) {
                side.push_back(Formula::neg(
                    Formula::eq(it->to_term(sort), Term::rat(0, sort))));
                it = neqs.erase(it);
            } else {
                ++it;
            }
        }
        return nullptr;
    };
    if (FormulaPtr dead = sweep()) return dead;

    if (eqs.empty()) {
        // Finitely many roots can never exhaust the field, so disequations
        // only require each to be nonzero as a polynomial in x.
        std::vector<FormulaPtr> parts = std::move(side);
        for (const Poly& q : neqs) parts.push_back(coeffs_nonzero(q, x, sort));
        return Formula::conj(std::move(parts));
    }

    // Pivot on a minimal-degree equation, favoring a constant leading
    // coefficient so the degenerate branch disappears.
    const int cap = options().acf_working_degree_cap;
    auto rank = [&](std::size_t i) {
        return std::make_pair(eqs[i].degree(x),
                              eqs[i].leading_coeff(x).is_const() ? 0 : 1);
    };
    std::size_t pi = 0;
    for (std::size_t i = 1; i < eqs.size(); ++i)
        if (rank(i) < rank(pi)) pi = i;
    Poly p = eqs[pi];
    int d = p.degree(x);
    Poly lc = p.leading_coeff(x);

    // Degenerate branch: the leading coefficient vanishes.
    FormulaPtr low;
    if (!lc.is_const()) {
        std::vector<Poly> eqs2 = eqs;
        eqs2[pi] = p.drop_leading(x);
        FormulaPtr sub = elim_rec(x, sort, std::move(eqs2), neqs, depth + 1);
        low = Formula::conj(
            {Formula::eq(squarefree(lc).to_term(sort), Term::rat(0, sort)), sub});
    }

    // Generic branch: reduce everything of degree >= d by p. Remainders are
    // constraints in their own right, so they collapse to squarefree form;
    // that is what keeps the degree growth of the remainder chain in check.
    bool reduced = false;
    std::vector<Poly> eqs2, neqs2;
    for (std::size_t i = 0; i < eqs.size(); ++i) {
        if (i == pi) continue;
        if (eqs[i].degree(x) >= d) {
            Poly r = squarefree(prem(eqs[i], p, x, cap));
            if (std::getenv("ACF_STATS") && r.total_degree() > 12)
                std::fprintf(stderr, "  [genereq] d=%d pivotdeg=%d remdeg=%d\n",
                             d, p.total_degree(), r.total_degree());
            guard_degree(r);
            eqs2.push_back(std::move(r));
            reduced = true;
        } else {
            eqs2.push_back(eqs[i]);
        }
    }
    for (const Poly& q : neqs) {
        if (q.degree(x) >= d) {
            Poly r = squarefree(prem(q, p, x, cap));
            guard_degree(r);
            neqs2.push_back(std::move(r));
            reduced = true;
        } else {
            neqs2.push_back(q);
        }
    }

    FormulaPtr high;
    if (reduced || !eqs2.empty()) {
        eqs2.push_back(p);
        high = elim_rec(x, sort, std::move(eqs2), std::move(neqs2), depth + 1);
    } else {
        // Single equation, all disequations of lower degree: p = 0 always has
        // a root here, and the disequations jointly miss finitely many values
        // unless their product Q vanishes on every root of p, i.e. p divides
        // Q^d. Q^d is reduced one factor at a time so nothing above degree
        // 2d-2 in x is ever materialized; the lc != 0 guard added below
        // makes the pseudo-division multipliers invertible.
        if (neqs2.empty()) {
            high = Formula::tru();
        } else {
            if (std::getenv("ACF_STATS")) {
                int qd = 0;
                for (const Poly& n : neqs2) qd += n.total_degree();
                std::fprintf(stderr,
                             "  [term] d=%d pdeg=%d neqs=%zu sumdeg=%d depth=%d\n",
                             d, p.total_degree(), neqs2.size(), qd, depth);
            }
            Poly q = Poly::constant(1);
            for (const Poly& n : neqs2) {
                q = q * n.primitive();
                if (q.degree(x) >= d) q = prem(q, p, x, cap);
                q = q.primitive();
                guard_degree(q);
            }
            Poly s = Poly::constant(1);
            for (int k = 0; k < d && !s.is_zero(); ++k) {
                s = s * q;
                if (s.degree(x) >= d) s = prem(s, p, x, cap);
                s = s.primitive();
                guard_degree(s);
            }
            high = coeffs_nonzero(s, x, sort);
        }
    }
    if (!lc.is_const())
        high = Formula::conj(
            {Formula::neg(
                 Formula::eq(squarefree(lc).to_term(sort), Term::rat(0, sort))),
             high});
    FormulaPtr body = low ? Formula::disj({low, high}) : high;
    side.push_back(body);
    return Formula::conj(std::move(side));
}

FormulaPtr AcfImpl::elim_exists_conj(const std::string& x, const Sort& sort,
                                     const std::vector<FormulaPtr>& lits) const {
    std::vector<Poly> eqs, neqs;
    for (const auto& lit : lits) {
        const FormulaPtr& atom = literal_atom(lit);
        Poly p = Poly::from_term(atom->terms()[0]) -
                 Poly::from_term(atom->terms()[1]);
        (literal_positive(lit) ? eqs : neqs).push_back(std::move(p));
    }
    FormulaPtr r = elim_rec(x, sort, std::move(eqs), std::move(neqs), 0);
    if (std::getenv("ACF_STATS"))
        std::fprintf(stderr,
                     "[acf] prem=%ldms/%ld div=%ldms/%ld gcd=%ldms/%ld sqf=%ldms/%ld\n",
                     g_us_prem / 1000, g_n_prem, g_us_div / 1000, g_n_div,
                     g_us_gcd / 1000, g_n_gcd, g_us_sqf / 1000, g_n_sqf);
        std::fprintf(stderr, "[acf] cores=%ld maxdeg=%d maxcons=%zu cache=%zu\n",
                     g_acf_cores, g_acf_maxdeg, g_acf_maxeqs, elim_cache_.size());
    return r;
}

}  // namespace

std::shared_ptr<const TheoryImpl> make_acf_impl(TheoryOptions opts) {
    return std::make_shared<AcfImpl>(opts);
}

}  // namespace diffbound::theory
