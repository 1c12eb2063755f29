#include "diffbound/diffalg.hpp"

#include <algorithm>

#include "diffbound/errors.hpp"
#include "diffbound/text.hpp"

namespace diffbound::diffalg {

using namespace diffbound::logic;

// ---------------------------------------------------------------------------
// Derivative
// ---------------------------------------------------------------------------

Derivative Derivative::unit(int m, int k) {
    Derivative d = zero(m);
    d.idx.at(static_cast<std::size_t>(k)) = 1;
    return d;
}

Derivative Derivative::lcm(const Derivative& a, const Derivative& b) {
    Derivative d = a;
    for (std::size_t i = 0; i < d.idx.size(); ++i)
        d.idx[i] = std::max(d.idx[i], b.idx[i]);
    return d;
}

int Derivative::ord() const {
    int s = 0;
    for (int i : idx) s += i;
    return s;
}

bool Derivative::is_identity() const { return ord() == 0; }

Derivative Derivative::plus(const Derivative& o) const {
    Derivative d = *this;
    for (std::size_t i = 0; i < d.idx.size(); ++i) d.idx[i] += o.idx[i];
    return d;
}

bool Derivative::divides(const Derivative& o) const {
    for (std::size_t i = 0; i < idx.size(); ++i)
        if (idx[i] > o.idx[i]) return false;
    return true;
}

Derivative Derivative::minus(const Derivative& o) const {
    Derivative d = *this;
    for (std::size_t i = 0; i < d.idx.size(); ++i) {
        d.idx[i] -= o.idx[i];
        if (d.idx[i] < 0) throw Error("derivative subtraction went negative");
    }
    return d;
}

std::string derivative_text(const Derivative& d) {
    std::string s;
    for (std::size_t i = 0; i < d.idx.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(d.idx[i]);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Monomial
// ---------------------------------------------------------------------------

Monomial Monomial::of(const DiffVar& v, int e) {
    Monomial m;
    if (e > 0) m.exp[v] = e;
    return m;
}

int Monomial::deg(const DiffVar& v) const {
    auto it = exp.find(v);
    return it == exp.end() ? 0 : it->second;
}

Monomial Monomial::times(const Monomial& o) const {
    Monomial m = *this;
    for (const auto& [v, e] : o.exp) m.exp[v] += e;
    return m;
}

Monomial Monomial::without(const DiffVar& v) const {
    Monomial m = *this;
    m.exp.erase(v);
    return m;
}

// ---------------------------------------------------------------------------
// DiffRing
// ---------------------------------------------------------------------------

std::string DiffRing::name(int var) const {
    if (var >= 0 && var < static_cast<int>(names.size()) && !names[var].empty())
        return names[var];
    if (n == 1) return "y";
    return "y" + std::to_string(var + 1);
}

int DiffRing::var_by_name(const std::string& s) const {
    for (int i = 0; i < n; ++i)
        if (name(i) == s) return i;
    return -1;
}

// ---------------------------------------------------------------------------
// Coefficient fields
// ---------------------------------------------------------------------------

bool RationalCoeffs::is_zero(const TermPtr& c) {
    auto v = eval_ground_term(c);
    if (!v)
        throw Error("symbolic coefficient " + text::print_term(c) +
                    " in a rational ground field");
    return *v == 0;
}

TermPtr RationalCoeffs::derive(const TermPtr& c, int) {
    auto v = eval_ground_term(c);
    if (!v)
        throw Error("symbolic coefficient " + text::print_term(c) +
                    " in a rational ground field");
    return Term::rat(0, c->sort());
}

// ---------------------------------------------------------------------------
// DiffPoly
// ---------------------------------------------------------------------------

namespace {

bool literal_zero(const TermPtr& t) {
    return t->kind() == TermKind::Rat && t->value() == 0;
}

int term_cmp(const TermPtr& a, const TermPtr& b) {
    if (a->kind() != b->kind())
        return static_cast<int>(a->kind()) < static_cast<int>(b->kind()) ? -1 : 1;
    switch (a->kind()) {
        case TermKind::Var:
            return a->name().compare(b->name());
        case TermKind::Rat:
            return a->value() == b->value() ? 0 : (a->value() < b->value() ? -1 : 1);
        case TermKind::Apply: {
            if (int c = a->name().compare(b->name())) return c;
            if (a->args().size() != b->args().size())
                return a->args().size() < b->args().size() ? -1 : 1;
            for (std::size_t i = 0; i < a->args().size(); ++i)
                if (int c = term_cmp(a->args()[i], b->args()[i])) return c;
            return 0;
        }
    }
    return 0;
}

}  // namespace

DiffPoly DiffPoly::zero() { return {}; }

DiffPoly DiffPoly::constant(const BigRat& c, const DiffRing& ring) {
    return coefficient(Term::rat(c, ring.coeff_sort));
}

DiffPoly DiffPoly::coefficient(TermPtr c) {
    DiffPoly p;
    p.add_term(Monomial::one(), c);
    return p;
}

DiffPoly DiffPoly::variable(const DiffVar& v, const DiffRing& ring) {
    DiffPoly p;
    p.add_term(Monomial::of(v), Term::rat(1, ring.coeff_sort));
    return p;
}

bool DiffPoly::is_ground_constant() const {
    if (coeffs_.empty()) return true;
    return coeffs_.size() == 1 && coeffs_.begin()->first.is_one() &&
           coeffs_.begin()->second->kind() == TermKind::Rat;
}

BigRat DiffPoly::ground_value() const {
    if (coeffs_.empty()) return 0;
    return coeffs_.begin()->second->value();
}

TermPtr DiffPoly::coeff(const Monomial& mono) const {
    auto it = coeffs_.find(mono);
    if (it != coeffs_.end()) return it->second;
    Sort sort = coeffs_.empty() ? Sort("F") : coeffs_.begin()->second->sort();
    return Term::rat(0, sort);
}

void DiffPoly::add_term(const Monomial& mono, const TermPtr& c) {
    if (literal_zero(c)) return;
    auto it = coeffs_.find(mono);
    if (it == coeffs_.end()) {
        coeffs_.emplace(mono, c);
        return;
    }
    TermPtr sum = t_add({it->second, c});
    if (literal_zero(sum)) coeffs_.erase(it);
    else it->second = sum;
}

DiffPoly DiffPoly::plus(const DiffPoly& o) const {
    DiffPoly p = *this;
    for (const auto& [m, c] : o.coeffs_) p.add_term(m, c);
    return p;
}

DiffPoly DiffPoly::minus(const DiffPoly& o) const { return plus(o.negated()); }

DiffPoly DiffPoly::negated() const { return scaled(-1); }

DiffPoly DiffPoly::scaled(const BigRat& c) const {
    if (c == 0) return zero();
    DiffPoly p;
    for (const auto& [m, t] : coeffs_)
        p.add_term(m, t_mul({Term::rat(c, t->sort()), t}));
    return p;
}

DiffPoly DiffPoly::times(const DiffPoly& o) const {
    DiffPoly p;
    for (const auto& [m1, c1] : coeffs_)
        for (const auto& [m2, c2] : o.coeffs_)
            p.add_term(m1.times(m2), t_mul({c1, c2}));
    return p;
}

DiffPoly DiffPoly::pow(int k) const {
    DiffPoly p = coefficient(Term::rat(1, coeffs_.empty()
                                              ? Sort("F")
                                              : coeffs_.begin()->second->sort()));
    for (int i = 0; i < k; ++i) p = p.times(*this);
    return p;
}

DiffPoly DiffPoly::derive(int k, const DiffRing& ring, CoeffField& field) const {
    DiffPoly out;
    for (const auto& [mono, c] : coeffs_) {
        out.add_term(mono, field.derive(c, k));
        // Leibniz over the monomial's factors.
        for (const auto& [v, e] : mono.exp) {
            DiffVar dv{v.theta.plus(Derivative::unit(ring.m, k)), v.var};
            Monomial rest = mono.without(v);
            if (e > 1) rest = rest.times(Monomial::of(v, e - 1));
            rest = rest.times(Monomial::of(dv));
            out.add_term(rest, t_mul({Term::rat(e, c->sort()), c}));
        }
    }
    return out;
}

DiffPoly DiffPoly::derive(const Derivative& theta, const DiffRing& ring,
                          CoeffField& field) const {
    DiffPoly p = *this;
    for (std::size_t k = 0; k < theta.idx.size(); ++k)
        for (int i = 0; i < theta.idx[k]; ++i)
            p = p.derive(static_cast<int>(k), ring, field);
    return p;
}

std::vector<DiffVar> DiffPoly::support_vars() const {
    std::map<DiffVar, int> seen;
    for (const auto& [m, c] : coeffs_)
        for (const auto& [v, e] : m.exp) seen[v] = 1;
    std::vector<DiffVar> out;
    for (const auto& [v, _] : seen) out.push_back(v);
    return out;
}

int DiffPoly::syntactic_deg(const DiffVar& v) const {
    int d = 0;
    for (const auto& [m, c] : coeffs_) d = std::max(d, m.deg(v));
    return d;
}

std::vector<DiffPoly> DiffPoly::coeffs_in(const DiffVar& v) const {
    std::vector<DiffPoly> out(static_cast<std::size_t>(syntactic_deg(v)) + 1);
    for (const auto& [m, c] : coeffs_)
        out[static_cast<std::size_t>(m.deg(v))].add_term(m.without(v), c);
    return out;
}

int DiffPoly::max_order() const {
    int d = 0;
    for (const auto& [m, c] : coeffs_)
        for (const auto& [v, e] : m.exp) d = std::max(d, v.theta.ord());
    return d;
}

int DiffPoly::total_degree() const {
    int d = 0;
    for (const auto& [m, c] : coeffs_) {
        int s = 0;
        for (const auto& [v, e] : m.exp) s += e;
        d = std::max(d, s);
    }
    return d;
}

DiffPoly DiffPoly::primitive() const {
    if (coeffs_.empty()) return *this;
    BigInt l = 1, g = 0;
    for (const auto& [m, c] : coeffs_) {
        if (c->kind() != TermKind::Rat) return *this;  // symbolic blocks content
        l = lcm(l, den(c->value()));
    }
    for (const auto& [m, c] : coeffs_)
        g = gcd(g, num(c->value()) * (l / den(c->value())));
    BigRat scale(l, g);
    if (coeffs_.rbegin()->second->value() < 0) scale = -scale;
    return scaled(scale);
}

bool DiffPoly::operator==(const DiffPoly& o) const {
    if (coeffs_.size() != o.coeffs_.size()) return false;
    auto it = o.coeffs_.begin();
    for (const auto& [m, c] : coeffs_) {
        if (!(m == it->first) || term_cmp(c, it->second) != 0) return false;
        ++it;
    }
    return true;
}

bool DiffPoly::operator<(const DiffPoly& o) const {
    auto a = coeffs_.begin();
    auto b = o.coeffs_.begin();
    for (; a != coeffs_.end() && b != o.coeffs_.end(); ++a, ++b) {
        if (a->first < b->first) return true;
        if (b->first < a->first) return false;
        if (int c = term_cmp(a->second, b->second)) return c < 0;
    }
    return a == coeffs_.end() && b != o.coeffs_.end();
}

}  // namespace diffbound::diffalg
