#include "diffbound/text.hpp"

#include <cctype>
#include <optional>
#include <sstream>
#include <vector>

#include "diffbound/errors.hpp"

namespace diffbound::text {

using namespace diffbound::logic;

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

void print_term_rec(const TermPtr& t, std::ostream& os) {
    switch (t->kind()) {
        case TermKind::Var:
            os << t->name();
            return;
        case TermKind::Rat:
            os << to_string(t->value());
            return;
        case TermKind::Apply: {
            os << '(' << t->name();
            for (const auto& a : t->args()) {
                os << ' ';
                print_term_rec(a, os);
            }
            os << ')';
            return;
        }
    }
}

void print_formula_rec(const FormulaPtr& f, std::ostream& os) {
    switch (f->kind()) {
        case FKind::True: os << "true"; return;
        case FKind::False: os << "false"; return;
        case FKind::Atom: {
            os << '(' << f->rel();
            for (const auto& t : f->terms()) {
                os << ' ';
                print_term_rec(t, os);
            }
            os << ')';
            return;
        }
        case FKind::Not:
            os << "(not ";
            print_formula_rec(f->child(0), os);
            os << ')';
            return;
        case FKind::And:
        case FKind::Or: {
            os << (f->kind() == FKind::And ? "(and" : "(or");
            for (const auto& c : f->children()) {
                os << ' ';
                print_formula_rec(c, os);
            }
            os << ')';
            return;
        }
        case FKind::Implies:
        case FKind::Iff: {
            os << (f->kind() == FKind::Implies ? "(=> " : "(iff ");
            print_formula_rec(f->child(0), os);
            os << ' ';
            print_formula_rec(f->child(1), os);
            os << ')';
            return;
        }
        case FKind::Exists:
        case FKind::Forall:
            os << (f->kind() == FKind::Exists ? "(exists (" : "(forall (")
               << f->var() << ' ' << f->var_sort() << ") ";
            print_formula_rec(f->child(0), os);
            os << ')';
            return;
    }
}

}  // namespace

std::string print_term(const TermPtr& t) {
    std::ostringstream os;
    print_term_rec(t, os);
    return os.str();
}

std::string print_formula(const FormulaPtr& f) {
    std::ostringstream os;
    print_formula_rec(f, os);
    return os.str();
}

// ---------------------------------------------------------------------------
// Reader
// ---------------------------------------------------------------------------

namespace {

struct SExpr {
    bool is_atom = true;
    std::string atom;
    std::vector<SExpr> items;
    std::size_t pos = 0;
};

bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' ||
           c == ':';
}

struct Reader {
    const std::string& s;
    std::size_t i = 0;

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }

    SExpr read() {
        skip_ws();
        if (i >= s.size()) throw ParseError("unexpected end of input", i);
        std::size_t start = i;
        if (s[i] == '(') {
            ++i;
            SExpr node;
            node.is_atom = false;
            node.pos = start;
            while (true) {
                skip_ws();
                if (i >= s.size()) throw ParseError("missing )", i);
                if (s[i] == ')') {
                    ++i;
                    return node;
                }
                node.items.push_back(read());
            }
        }
        if (s[i] == ')') throw ParseError("unexpected )", i);
        // token: operator symbols or identifier/number
        SExpr node;
        node.pos = start;
        if (ident_start(s[i]) || std::isdigit(static_cast<unsigned char>(s[i])) ||
            s[i] == '-' || s[i] == '+') {
            ++i;
            while (i < s.size() && (ident_char(s[i]) || s[i] == '/' ||
                                    std::isdigit(static_cast<unsigned char>(s[i]))))
                ++i;
            node.atom = s.substr(start, i - start);
            return node;
        }
        // single/double char operators: = < <= * ^ =>
        if (s[i] == '=' || s[i] == '<' || s[i] == '*' || s[i] == '^') {
            ++i;
            if (i < s.size() && ((s[i - 1] == '<' && s[i] == '=') ||
                                 (s[i - 1] == '=' && s[i] == '>')))
                ++i;
            node.atom = s.substr(start, i - start);
            return node;
        }
        throw ParseError(std::string("unexpected character '") + s[i] + "'", i);
    }
};

bool is_rational_token(const std::string& t) {
    if (t.empty()) return false;
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i >= t.size() || !std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    for (; i < t.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(t[i])) && t[i] != '/')
            return false;
    return true;
}

// ---------------------------------------------------------------------------
// Elaboration: raw trees to sorted terms/formulas
// ---------------------------------------------------------------------------

struct Scope {
    const ParseContext& ctx;
    std::vector<std::pair<std::string, Sort>> bound;  // innermost last

    std::optional<Sort> var_sort(const std::string& name) const {
        for (auto it = bound.rbegin(); it != bound.rend(); ++it)
            if (it->first == name) return it->second;
        auto f = ctx.free_var_sorts.find(name);
        if (f != ctx.free_var_sorts.end()) return f->second;
        return std::nullopt;
    }
};

// Splits "x:Q" into name and sort; plain names return no sort.
std::pair<std::string, std::optional<Sort>> split_annotation(const std::string& tok,
                                                             std::size_t pos) {
    auto colon = tok.find(':');
    if (colon == std::string::npos) return {tok, std::nullopt};
    std::string name = tok.substr(0, colon);
    std::string sort = tok.substr(colon + 1);
    if (name.empty() || sort.empty())
        throw ParseError("malformed sort annotation: " + tok, pos);
    return {name, sort};
}

// First sort determinable from variables in the raw term; literals decide
// nothing.
std::optional<Sort> infer_sort(const SExpr& e, const Scope& scope) {
    if (e.is_atom) {
        if (is_rational_token(e.atom)) return std::nullopt;
        auto [name, ann] = split_annotation(e.atom, e.pos);
        if (ann) return ann;
        return scope.var_sort(name);
    }
    for (std::size_t k = 1; k < e.items.size(); ++k) {
        auto s = infer_sort(e.items[k], scope);
        if (s) return s;
    }
    return std::nullopt;
}

TermPtr build_term(const SExpr& e, const Sort& sort, Scope& scope) {
    if (e.is_atom) {
        if (is_rational_token(e.atom)) return Term::rat(parse_rational(e.atom), sort);
        auto [name, ann] = split_annotation(e.atom, e.pos);
        if (!ident_start(name[0]))
            throw ParseError("expected term, got '" + e.atom + "'", e.pos);
        Sort s = ann ? *ann : scope.var_sort(name).value_or(sort);
        if (ann && scope.var_sort(name) && *scope.var_sort(name) != *ann)
            throw ParseError("annotation conflicts with binding of " + name, e.pos);
        return Term::var(name, s);
    }
    if (e.items.empty()) throw ParseError("empty term", e.pos);
    const SExpr& head = e.items.front();
    if (!head.is_atom) throw ParseError("expected operator", head.pos);
    const std::string& op = head.atom;
    std::vector<TermPtr> args;
    for (std::size_t k = 1; k < e.items.size(); ++k)
        args.push_back(build_term(e.items[k], sort, scope));
    if (op == "+") {
        if (args.size() < 2) throw ParseError("+ needs at least 2 arguments", e.pos);
        return Term::apply("+", std::move(args), sort);
    }
    if (op == "-") {
        if (args.size() != 1 && args.size() != 2)
            throw ParseError("- needs 1 or 2 arguments", e.pos);
        return Term::apply("-", std::move(args), sort);
    }
    if (op == "*") {
        if (args.size() < 2) throw ParseError("* needs at least 2 arguments", e.pos);
        return Term::apply("*", std::move(args), sort);
    }
    if (op == "^") {
        if (args.size() != 2 || e.items[2].is_atom == false ||
            !is_rational_token(e.items[2].atom))
            throw ParseError("^ needs a term and a literal exponent", e.pos);
        BigRat k = parse_rational(e.items[2].atom);
        if (den(k) != 1 || k < 0)
            throw ParseError("exponent must be a non-negative integer", e.items[2].pos);
        if (k == 0) return Term::rat(1, sort);
        std::vector<TermPtr> factors(static_cast<std::size_t>(num(k)), args[0]);
        if (factors.size() == 1) return factors[0];
        return Term::apply("*", std::move(factors), sort);
    }
    if (op.size() >= 2 && op[0] == 'd') {
        if (args.size() != 1) throw ParseError(op + " needs 1 argument", e.pos);
        return Term::apply(op, std::move(args), sort);
    }
    throw ParseError("unknown term operator: " + op, head.pos);
}

TermPtr build_atom_side(const SExpr& e, const std::optional<Sort>& inferred,
                        Scope& scope) {
    Sort s = inferred ? *inferred : scope.ctx.default_sort;
    return build_term(e, s, scope);
}

FormulaPtr build_formula(const SExpr& e, Scope& scope) {
    if (e.is_atom) {
        if (e.atom == "true") return Formula::tru();
        if (e.atom == "false") return Formula::fls();
        throw ParseError("expected formula, got '" + e.atom + "'", e.pos);
    }
    if (e.items.empty()) throw ParseError("empty formula", e.pos);
    const SExpr& head = e.items.front();
    if (!head.is_atom) throw ParseError("expected connective", head.pos);
    const std::string& op = head.atom;
    auto arity = e.items.size() - 1;

    if (op == "=" || op == "<" || op == "<=") {
        if (arity != 2) throw ParseError(op + " needs 2 arguments", e.pos);
        std::optional<Sort> s = infer_sort(e.items[1], scope);
        if (!s) s = infer_sort(e.items[2], scope);
        TermPtr a = build_atom_side(e.items[1], s, scope);
        TermPtr b = build_atom_side(e.items[2], s, scope);
        if (op == "=") return Formula::eq(a, b);
        if (op == "<") return Formula::less(a, b);
        return Formula::neg(Formula::less(b, a));  // a <= b
    }
    if (op == "not") {
        if (arity != 1) throw ParseError("not needs 1 argument", e.pos);
        return Formula::neg(build_formula(e.items[1], scope));
    }
    if (op == "and" || op == "or") {
        std::vector<FormulaPtr> kids;
        for (std::size_t k = 1; k < e.items.size(); ++k)
            kids.push_back(build_formula(e.items[k], scope));
        if (kids.empty()) return op == "and" ? Formula::tru() : Formula::fls();
        if (kids.size() == 1) return kids.front();
        return op == "and" ? Formula::conj(std::move(kids))
                           : Formula::disj(std::move(kids));
    }
    if (op == "=>" || op == "iff") {
        if (arity != 2) throw ParseError(op + " needs 2 arguments", e.pos);
        FormulaPtr a = build_formula(e.items[1], scope);
        FormulaPtr b = build_formula(e.items[2], scope);
        return op == "=>" ? Formula::implies(a, b) : Formula::iff(a, b);
    }
    if (op == "exists" || op == "forall") {
        if (arity != 2) throw ParseError(op + " needs a binder and a body", e.pos);
        const SExpr& binder = e.items[1];
        if (binder.is_atom || binder.items.size() != 2 || !binder.items[0].is_atom ||
            !binder.items[1].is_atom)
            throw ParseError("binder must be (name SORT)", binder.pos);
        const std::string& name = binder.items[0].atom;
        const std::string& sort = binder.items[1].atom;
        if (!ident_start(name.empty() ? ' ' : name[0]))
            throw ParseError("bad variable name: " + name, binder.items[0].pos);
        if (!scope.ctx.signature.has_sort(sort))
            throw ParseError("unknown sort: " + sort, binder.items[1].pos);
        scope.bound.emplace_back(name, sort);
        FormulaPtr body = build_formula(e.items[2], scope);
        scope.bound.pop_back();
        return op == "exists" ? Formula::exists(name, sort, body)
                              : Formula::forall(name, sort, body);
    }
    throw ParseError("unknown connective: " + op, head.pos);
}

SExpr read_whole(const std::string& input) {
    Reader r{input};
    SExpr e = r.read();
    r.skip_ws();
    if (r.i != input.size())
        throw ParseError("trailing input after expression", r.i);
    return e;
}

}  // namespace

FormulaPtr parse_formula(const std::string& input, const ParseContext& ctx) {
    SExpr e = read_whole(input);
    Scope scope{ctx, {}};
    FormulaPtr f = build_formula(e, scope);
    check_sorts(f, ctx.signature);
    return f;
}

TermPtr parse_term(const std::string& input, const ParseContext& ctx) {
    SExpr e = read_whole(input);
    Scope scope{ctx, {}};
    std::optional<Sort> s = infer_sort(e, scope);
    return build_term(e, s ? *s : ctx.default_sort, scope);
}

}  // namespace diffbound::text
