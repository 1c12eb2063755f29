#include "diffbound/delay.hpp"

#include <algorithm>
#include <cctype>

#include "diffbound/errors.hpp"

namespace diffbound::delay {

using diffalg::Derivative;

std::string DelayRing::name(int var) const {
    if (var >= 0 && var < static_cast<int>(names.size()) && !names[var].empty())
        return names[var];
    if (r == 1) return "y";
    return "y" + std::to_string(var + 1);
}

int DelayRing::var_by_name(const std::string& s) const {
    for (int i = 0; i < r; ++i)
        if (name(i) == s) return i;
    return -1;
}

DSPoly DSPoly::constant(BigRat c) {
    DSPoly p;
    p.add_term({}, std::move(c));
    return p;
}

DSPoly DSPoly::variable(DSVar v) {
    DSPoly p;
    p.add_term({{std::move(v), 1}}, 1);
    return p;
}

bool DSPoly::is_constant() const {
    return terms_.empty() ||
           (terms_.size() == 1 && terms_.begin()->first.empty());
}

BigRat DSPoly::constant_value() const {
    if (terms_.empty()) return 0;
    if (!is_constant()) throw Error("polynomial is not a constant");
    return terms_.begin()->second;
}

void DSPoly::add_term(Monomial mono, BigRat c) {
    if (c == 0) return;
    auto it = terms_.find(mono);
    if (it == terms_.end()) {
        terms_.emplace(std::move(mono), std::move(c));
        return;
    }
    it->second += c;
    if (it->second == 0) terms_.erase(it);
}

DSPoly DSPoly::plus(const DSPoly& o) const {
    DSPoly out = *this;
    for (const auto& [m, c] : o.terms_) out.add_term(m, c);
    return out;
}

DSPoly DSPoly::minus(const DSPoly& o) const {
    DSPoly out = *this;
    for (const auto& [m, c] : o.terms_) out.add_term(m, -c);
    return out;
}

DSPoly DSPoly::times(const DSPoly& o) const {
    DSPoly out;
    for (const auto& [ma, ca] : terms_) {
        for (const auto& [mb, cb] : o.terms_) {
            Monomial m = ma;
            for (const auto& [v, e] : mb) m[v] += e;
            out.add_term(std::move(m), ca * cb);
        }
    }
    return out;
}

DSPoly DSPoly::negated() const { return scaled(-1); }

DSPoly DSPoly::scaled(const BigRat& c) const {
    DSPoly out;
    if (c == 0) return out;
    for (const auto& [m, v] : terms_) out.terms_.emplace(m, v * c);
    return out;
}

DSPoly DSPoly::sigma_shift(int i) const {
    if (i < 0) throw DimensionError("negative shift");
    if (i == 0) return *this;
    DSPoly out;
    for (const auto& [m, c] : terms_) {
        Monomial shifted;
        for (const auto& [v, e] : m) {
            DSVar w = v;
            w.sigma += i;
            shifted.emplace(std::move(w), e);
        }
        out.terms_.emplace(std::move(shifted), c);
    }
    return out;
}

int DSPoly::order() const {
    int best = 0;
    for (const auto& [m, c] : terms_)
        for (const auto& [v, e] : m)
            best = std::max(best, v.theta.ord() + v.sigma);
    return best;
}

int DSPoly::max_sigma() const {
    int best = 0;
    for (const auto& [m, c] : terms_)
        for (const auto& [v, e] : m) best = std::max(best, v.sigma);
    return best;
}

std::vector<DSVar> DSPoly::support() const {
    std::vector<DSVar> out;
    for (const auto& [m, c] : terms_)
        for (const auto& [v, e] : m)
            if (std::find(out.begin(), out.end(), v) == out.end())
                out.push_back(v);
    std::sort(out.begin(), out.end());
    return out;
}

BigRat DeltaContext::value_of(const DSVar& v, const DelayRing& ring) const {
    auto it = table.find(v);
    if (it != table.end()) return it->second;
    if (strict)
        throw Error("missing derivative value for " + dsvar_text(v, ring));
    return 0;
}

BigRat eval_dspoly(const DSPoly& f,
                   const std::function<BigRat(int var, int sigma)>& values,
                   const DeltaContext& ctx, const DelayRing& ring) {
    BigRat out = 0;
    for (const auto& [m, c] : f.terms()) {
        BigRat prod = c;
        for (const auto& [v, e] : m) {
            BigRat val = v.theta.is_identity() ? values(v.var, v.sigma)
                                               : ctx.value_of(v, ring);
            for (int k = 0; k < e; ++k) prod *= val;
        }
        out += prod;
    }
    return out;
}

std::string dsvar_text(const DSVar& v, const DelayRing& ring) {
    std::string out = ring.name(v.var);
    out += '[';
    for (std::size_t k = 0; k < v.theta.idx.size(); ++k) {
        if (k) out += ',';
        out += std::to_string(v.theta.idx[k]);
    }
    out += ';';
    out += std::to_string(v.sigma);
    out += ']';
    return out;
}

namespace {

std::string monomial_text(const DSPoly::Monomial& m, const DelayRing& ring) {
    std::string out;
    for (const auto& [v, e] : m) {
        if (!out.empty()) out += '*';
        out += dsvar_text(v, ring);
        if (e > 1) out += '^' + std::to_string(e);
    }
    return out;
}

}  // namespace

std::string dspoly_to_text(const DSPoly& f, const DelayRing& ring) {
    if (f.is_zero()) return "0";
    std::string out;
    const auto& terms = f.terms();
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
        const auto& [mono, c] = *it;
        bool first = out.empty();
        bool negative = c < 0;
        if (!first) out += negative ? " - " : " + ";
        if (first && negative) out += '-';
        BigRat av = negative ? BigRat(-c) : c;
        std::string head;
        if (av != 1 || mono.empty()) head = to_string(av);
        out += head;
        if (!mono.empty()) {
            if (!head.empty()) out += '*';
            out += monomial_text(mono, ring);
        }
    }
    return out;
}

namespace {

struct Parser {
    const std::string& s;
    const DelayRing& ring;
    std::size_t pos = 0;

    void skip() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
            ++pos;
    }
    bool eat(char c) {
        skip();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos); }

    int nat() {
        skip();
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
            ++pos;
        if (pos == start) fail("expected a number");
        return std::stoi(s.substr(start, pos - start));
    }

    DSPoly expr() {
        skip();
        bool neg = eat('-');
        DSPoly acc = term();
        if (neg) acc = acc.negated();
        for (;;) {
            skip();
            if (eat('+'))
                acc = acc.plus(term());
            else if (eat('-'))
                acc = acc.minus(term());
            else
                return acc;
        }
    }

    DSPoly term() {
        DSPoly acc = factor();
        while (eat('*')) acc = acc.times(factor());
        return acc;
    }

    DSPoly factor() {
        DSPoly b = base();
        if (eat('^')) {
            int e = nat();
            DSPoly acc = DSPoly::constant(1);
            for (int k = 0; k < e; ++k) acc = acc.times(b);
            return acc;
        }
        return b;
    }

    DSPoly base() {
        skip();
        if (pos >= s.size()) fail("unexpected end of input");
        char c = s[pos];
        if (c == '(') {
            ++pos;
            DSPoly inner = expr();
            if (!eat(')')) fail("expected )");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos;
            while (pos < s.size() &&
                   (std::isdigit(static_cast<unsigned char>(s[pos])) ||
                    s[pos] == '/'))
                ++pos;
            return DSPoly::constant(
                parse_rational(s.substr(start, pos - start)));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos;
            while (pos < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[pos])) ||
                    s[pos] == '_'))
                ++pos;
            std::string name = s.substr(start, pos - start);
            int var = ring.var_by_name(name);
            if (var < 0) fail("unknown indeterminate " + name);
            DSVar v{Derivative::zero(ring.m), 0, var};
            skip();
            if (pos < s.size() && s[pos] == '[') {
                ++pos;
                for (int k = 0; k < ring.m; ++k) {
                    if (k && !eat(',')) fail("expected ,");
                    v.theta.idx[static_cast<std::size_t>(k)] = nat();
                }
                if (eat(';')) v.sigma = nat();
                if (!eat(']')) fail("expected ]");
            }
            return DSPoly::variable(v);
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

}  // namespace

DSPoly parse_dspoly(const std::string& input, const DelayRing& ring) {
    Parser p{input, ring};
    DSPoly out = p.expr();
    p.skip();
    if (p.pos != input.size()) throw ParseError("trailing input", p.pos);
    return out;
}

namespace {

void check_support(const std::vector<DSPoly>& F, const DelayRing& ring) {
    for (const auto& f : F)
        for (const auto& v : f.support()) {
            if (v.var < 0 || v.var >= ring.r)
                throw DimensionError("indeterminate index out of range");
            if (static_cast<int>(v.theta.idx.size()) != ring.m)
                throw DimensionError("derivation index arity mismatch");
        }
}

int shift_depth(const std::vector<DSPoly>& F) {
    int h = 0;
    for (const auto& f : F) h = std::max(h, f.max_sigma());
    return h;
}

}  // namespace

TripleSpec TripleSpec::make(std::vector<DSPoly> F, DelayRing ring) {
    if (ring.r < 1) throw DimensionError("need at least one indeterminate");
    check_support(F, ring);
    TripleSpec spec;
    spec.r = ring.r;
    spec.h = shift_depth(F);
    spec.H = spec.r * (spec.h + 1);
    spec.F = std::move(F);
    spec.ring = std::move(ring);
    return spec;
}

namespace {

std::vector<BigRat> drop_slot(const std::vector<BigRat>& point,
                              const TripleSpec& spec, int kept_from) {
    if (static_cast<int>(point.size()) != spec.H)
        throw DimensionError("point length does not match block width");
    std::vector<BigRat> out;
    out.reserve(static_cast<std::size_t>(spec.r) * spec.h);
    for (int s = 0; s < spec.r; ++s)
        for (int j = 0; j < spec.h; ++j)
            out.push_back(
                point[static_cast<std::size_t>(s * (spec.h + 1) + j + kept_from)]);
    return out;
}

}  // namespace

std::vector<BigRat> pi1(const std::vector<BigRat>& point,
                        const TripleSpec& spec) {
    return drop_slot(point, spec, 0);
}

std::vector<BigRat> pi2(const std::vector<BigRat>& point,
                        const TripleSpec& spec) {
    return drop_slot(point, spec, 1);
}

int WlSystem::flat_index(int b, int s, int j) const {
    return b * H + s * (h + 1) + j;
}

WlSystem wl_system(const std::vector<DSPoly>& F, const DelayRing& ring,
                   int ell) {
    if (ell < 1) throw DimensionError("need at least one block");
    check_support(F, ring);
    WlSystem wl;
    wl.ell = ell;
    wl.r = ring.r;
    wl.h = shift_depth(F);
    wl.H = wl.r * (wl.h + 1);
    wl.flat_ring.m = ring.m;
    wl.flat_ring.r = ell * wl.H;
    wl.flat_ring.names.reserve(static_cast<std::size_t>(wl.flat_ring.r));
    for (int b = 0; b < ell; ++b)
        for (int s = 0; s < wl.r; ++s)
            for (int j = 0; j <= wl.h; ++j)
                wl.flat_ring.names.push_back(ring.name(s) + "_" +
                                             std::to_string(b + 1) + "_" +
                                             std::to_string(j));

    // Shift indices become slot offsets inside each block, so block b
    // carries the b-fold shift of the system.
    for (int b = 0; b < ell; ++b) {
        for (const auto& f : F) {
            DSPoly inst;
            for (const auto& [m, c] : f.terms()) {
                DSPoly t = DSPoly::constant(c);
                for (const auto& [v, e] : m) {
                    DSVar w{v.theta, 0, wl.flat_index(b, v.var, v.sigma)};
                    for (int k = 0; k < e; ++k)
                        t = t.times(DSPoly::variable(w));
                }
                inst = inst.plus(t);
            }
            wl.block_eqs.push_back(std::move(inst));
        }
    }

    for (int b = 0; b + 1 < ell; ++b)
        for (int s = 0; s < wl.r; ++s)
            for (int j = 0; j < wl.h; ++j) {
                int later = wl.flat_index(b + 1, s, j);
                int earlier = wl.flat_index(b, s, j + 1);
                wl.gluing_pairs.emplace_back(later, earlier);
                wl.gluing_eqs.push_back(
                    DSPoly::variable(
                        DSVar{Derivative::zero(ring.m), 0, later})
                        .minus(DSPoly::variable(
                            DSVar{Derivative::zero(ring.m), 0, earlier})));
            }
    return wl;
}

bool verify_partial(const std::vector<DSPoly>& F, const DelayRing& ring,
                    const std::vector<std::vector<BigRat>>& seqs, int ell,
                    const DeltaContext& ctx) {
    if (ell < 0) throw DimensionError("negative length");
    if (ell == 0) return true;
    check_support(F, ring);
    int h = shift_depth(F);
    if (static_cast<int>(seqs.size()) != ring.r)
        throw DimensionError("expected one value sequence per indeterminate");
    for (const auto& seq : seqs)
        if (static_cast<int>(seq.size()) < ell + h)
            throw DimensionError("value sequence shorter than length + depth");
    auto values = [&](int var, int sigma) -> BigRat {
        return seqs[static_cast<std::size_t>(var)]
                   [static_cast<std::size_t>(sigma)];
    };
    for (int i = 0; i < ell; ++i)
        for (const auto& f : F)
            if (eval_dspoly(f.sigma_shift(i), values, ctx, ring) != 0)
                return false;
    return true;
}

bool verify_triple(const std::vector<std::vector<BigRat>>& points,
                   const TripleSpec& spec, const DeltaContext& ctx) {
    for (const auto& p : points)
        if (static_cast<int>(p.size()) != spec.H)
            throw DimensionError("point length does not match block width");
    // Coefficients are constants, so each shifted copy of the variety is
    // cut out by the same equations read in its own block coordinates.
    for (const auto& p : points) {
        auto values = [&](int var, int sigma) -> BigRat {
            if (sigma > spec.h)
                throw DimensionError("shift beyond block width");
            return p[static_cast<std::size_t>(var * (spec.h + 1) + sigma)];
        };
        for (const auto& f : spec.F)
            if (eval_dspoly(f, values, ctx, spec.ring) != 0) return false;
    }
    for (std::size_t i = 0; i + 1 < points.size(); ++i)
        if (pi2(points[i], spec) != pi1(points[i + 1], spec)) return false;
    return true;
}

}  // namespace diffbound::delay
