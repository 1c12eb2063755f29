#include "diffbound/poly_text.hpp"

#include <cctype>

#include "diffbound/errors.hpp"
#include "diffbound/text.hpp"

namespace diffbound::poly_text {

using namespace diffbound::diffalg;
using logic::Term;
using logic::TermKind;
using logic::TermPtr;

std::string var_text(const DiffVar& v, const DiffRing& ring) {
    std::string out = ring.name(v.var);
    out += '[';
    for (std::size_t k = 0; k < v.theta.idx.size(); ++k) {
        if (k) out += ',';
        out += std::to_string(v.theta.idx[k]);
    }
    out += ']';
    return out;
}

namespace {

std::string monomial_text(const Monomial& m, const DiffRing& ring) {
    std::string out;
    for (const auto& [v, e] : m.exp) {
        if (!out.empty()) out += '*';
        out += var_text(v, ring);
        if (e > 1) out += '^' + std::to_string(e);
    }
    return out;
}

}  // namespace

std::string poly_to_text(const DiffPoly& p, const DiffRing& ring) {
    if (p.is_syntactic_zero()) return "0";
    std::string out;
    const auto& terms = p.coeffs();
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
        const auto& [mono, c] = *it;
        bool first = out.empty();
        bool lit = c->kind() == TermKind::Rat;
        BigRat v = lit ? c->value() : BigRat(0);
        bool negative = lit && v < 0;
        if (!first) out += negative ? " - " : " + ";
        if (first && negative) out += '-';
        BigRat av = negative ? BigRat(-v) : v;
        std::string head;
        if (!lit)
            head = text::print_term(c);
        else if (av != 1 || mono.is_one())
            head = to_string(av);
        out += head;
        if (!mono.is_one()) {
            if (!head.empty()) out += '*';
            out += monomial_text(mono, ring);
        }
    }
    return out;
}

namespace {

struct Parser {
    const std::string& s;
    const DiffRing& ring;
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

    DiffPoly expr() {
        skip();
        bool neg = eat('-');
        DiffPoly acc = term();
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

    DiffPoly term() {
        DiffPoly acc = factor();
        while (eat('*')) acc = acc.times(factor());
        return acc;
    }

    DiffPoly factor() {
        DiffPoly b = base();
        if (eat('^')) {
            int e = nat();
            b = b.pow(e);
        }
        return b;
    }

    DiffPoly base() {
        skip();
        if (pos >= s.size()) fail("unexpected end of input");
        char c = s[pos];
        if (c == '(') {
            ++pos;
            DiffPoly inner = expr();
            if (!eat(')')) fail("expected )");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos;
            while (pos < s.size() &&
                   (std::isdigit(static_cast<unsigned char>(s[pos])) ||
                    s[pos] == '/'))
                ++pos;
            return DiffPoly::coefficient(Term::rat(
                parse_rational(s.substr(start, pos - start)), ring.coeff_sort));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos;
            while (pos < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[pos])) ||
                    s[pos] == '_'))
                ++pos;
            std::string name = s.substr(start, pos - start);
            int var = ring.var_by_name(name);
            skip();
            if (pos < s.size() && s[pos] == '[') {
                if (var < 0) fail("unknown indeterminate " + name);
                ++pos;
                Derivative theta = Derivative::zero(ring.m);
                for (int k = 0; k < ring.m; ++k) {
                    if (k && !eat(',')) fail("expected ,");
                    theta.idx[static_cast<std::size_t>(k)] = nat();
                }
                if (!eat(']')) fail("expected ]");
                return DiffPoly::variable(DiffVar{theta, var}, ring);
            }
            if (var >= 0)
                return DiffPoly::variable(
                    DiffVar{Derivative::zero(ring.m), var}, ring);
            return DiffPoly::coefficient(Term::var(name, ring.coeff_sort));
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

}  // namespace

DiffPoly parse_poly(const std::string& input, const DiffRing& ring) {
    Parser p{input, ring};
    DiffPoly out = p.expr();
    p.skip();
    if (p.pos != input.size()) throw ParseError("trailing input", p.pos);
    return out;
}

}  // namespace diffbound::poly_text
