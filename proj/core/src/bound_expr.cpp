#include "diffbound/bound_expr.hpp"

#include <algorithm>
#include <sstream>

#include "diffbound/errors.hpp"

namespace diffbound::kolchin {

namespace {

BoundExprPtr node(BoundExpr::Kind k, BigInt v, std::string name,
                  std::vector<BoundExprPtr> args) {
    auto e = std::make_shared<BoundExpr>();
    e->kind = k;
    e->value = std::move(v);
    e->name = std::move(name);
    e->args = std::move(args);
    return e;
}

}  // namespace

BoundExprPtr BoundExpr::lit(BigInt v) {
    return node(Kind::Lit, std::move(v), "", {});
}

BoundExprPtr BoundExpr::sym(std::string s) {
    if (s.empty()) throw Error("empty symbol name");
    return node(Kind::Sym, 0, std::move(s), {});
}

BoundExprPtr BoundExpr::add(std::vector<BoundExprPtr> xs) {
    if (xs.empty()) throw Error("sum needs at least one argument");
    if (xs.size() == 1) return xs[0];
    return node(Kind::Add, 0, "", std::move(xs));
}

BoundExprPtr BoundExpr::mul(std::vector<BoundExprPtr> xs) {
    if (xs.empty()) throw Error("product needs at least one argument");
    if (xs.size() == 1) return xs[0];
    return node(Kind::Mul, 0, "", std::move(xs));
}

BoundExprPtr BoundExpr::max(std::vector<BoundExprPtr> xs) {
    if (xs.empty()) throw Error("max needs at least one argument");
    if (xs.size() == 1) return xs[0];
    return node(Kind::Max, 0, "", std::move(xs));
}

BoundExprPtr BoundExpr::prim(std::string name, std::vector<BoundExprPtr> xs) {
    if (name.empty()) throw Error("empty primitive name");
    return node(Kind::Prim, 0, std::move(name), std::move(xs));
}

BoundExprPtr BoundExpr::compose(BoundExprPtr step, BoundExprPtr count,
                                BoundExprPtr seed) {
    return node(Kind::Compose, 0, "",
                {std::move(step), std::move(count), std::move(seed)});
}

namespace {

void render(const BoundExprPtr& e, std::ostream& os) {
    if (!e) throw Error("null bound expression");
    switch (e->kind) {
        case BoundExpr::Kind::Lit:
            os << e->value;
            return;
        case BoundExpr::Kind::Sym:
            os << e->name;
            return;
        case BoundExpr::Kind::Add:
        case BoundExpr::Kind::Mul:
        case BoundExpr::Kind::Max: {
            os << '(';
            os << (e->kind == BoundExpr::Kind::Add   ? "+"
                   : e->kind == BoundExpr::Kind::Mul ? "*"
                                                     : "max");
            for (const auto& a : e->args) {
                os << ' ';
                render(a, os);
            }
            os << ')';
            return;
        }
        case BoundExpr::Kind::Prim: {
            os << '(' << e->name;
            for (const auto& a : e->args) {
                os << ' ';
                render(a, os);
            }
            os << ')';
            return;
        }
        case BoundExpr::Kind::Compose: {
            os << "(compose ";
            render(e->args[0], os);
            os << ' ';
            render(e->args[1], os);
            os << ' ';
            render(e->args[2], os);
            os << ')';
            return;
        }
    }
    throw Error("unknown bound expression node");
}

}  // namespace

std::string bound_expr_text(const BoundExprPtr& e) {
    std::ostringstream os;
    render(e, os);
    return os.str();
}

void PrimitiveBinding::bind(std::string name, Fn fn) {
    if (name.empty()) throw Error("empty primitive name");
    fns_[std::move(name)] = std::move(fn);
}

bool PrimitiveBinding::has(const std::string& name) const {
    return fns_.count(name) != 0;
}

BigInt PrimitiveBinding::call(const std::string& name,
                              const std::vector<BigInt>& args) const {
    auto it = fns_.find(name);
    if (it == fns_.end()) throw UnboundPrimitive(name);
    BigInt out = it->second(args);
    if (out < 0)
        throw Error("primitive '" + name + "' returned a negative value");
    return out;
}

namespace {

void need_arity(const std::string& name, const std::vector<BigInt>& args,
                std::size_t k) {
    if (args.size() != k)
        throw DimensionError("primitive '" + name + "' expects " +
                             std::to_string(k) + " arguments, got " +
                             std::to_string(args.size()));
}

}  // namespace

PrimitiveBinding stub_bindings(const std::string& set) {
    PrimitiveBinding b;
    if (set == "doc") {
        b.bind("components", [](const std::vector<BigInt>& a) {
            need_arity("components", a, 2);
            return a[1];
        });
        b.bind("kolchinproj", [](const std::vector<BigInt>& a) {
            need_arity("kolchinproj", a, 1);
            return a[0];
        });
        b.bind("iter", [](const std::vector<BigInt>& a) {
            need_arity("iter", a, 2);
            return a[0] + a[1];
        });
        return b;
    }
    if (set == "sum") {
        b.bind("gustavson", [](const std::vector<BigInt>& a) {
            BigInt s = 0;
            for (const auto& x : a) s += x;
            return s;
        });
        b.bind("A", [](const std::vector<BigInt>& a) {
            need_arity("A", a, 1);
            return a[0];
        });
        return b;
    }
    if (set == "unit" || set == "zero") {
        BigInt c = set == "unit" ? 1 : 0;
        for (const char* name : {"components", "kolchinproj", "iter",
                                 "gustavson", "A", "len", "primecomp",
                                 "charset", "rg", "size"}) {
            b.bind(name, [c](const std::vector<BigInt>&) { return c; });
        }
        return b;
    }
    throw Error("unknown stub binding set: " + set);
}

PrimitiveBinding parse_binding_table(const std::string& text) {
    // Rows are exact lookup entries; anything off the table is an error,
    // so a table binding never silently extrapolates.
    auto table = std::make_shared<
        std::map<std::pair<std::string, std::vector<BigInt>>, BigInt>>();
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string> names;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream row(line);
        std::string name;
        if (!(row >> name)) continue;
        std::vector<std::string> toks;
        std::string t;
        while (row >> t) toks.push_back(t);
        if (toks.size() < 2 || toks[toks.size() - 2] != "->")
            throw Error("binding table line " + std::to_string(lineno) +
                        ": expected 'name args... -> value'");
        std::vector<BigInt> args;
        try {
            for (std::size_t i = 0; i + 2 < toks.size(); ++i)
                args.emplace_back(toks[i]);
            (*table)[{name, args}] = BigInt(toks.back());
        } catch (const std::exception&) {
            throw Error("binding table line " + std::to_string(lineno) +
                        ": bad integer");
        }
        if (std::find(names.begin(), names.end(), name) == names.end())
            names.push_back(name);
    }
    PrimitiveBinding b;
    for (const auto& name : names) {
        b.bind(name, [table, name](const std::vector<BigInt>& args) {
            auto it = table->find({name, args});
            if (it == table->end()) {
                std::ostringstream os;
                os << "no table entry for " << name << "(";
                for (std::size_t i = 0; i < args.size(); ++i) {
                    if (i) os << ", ";
                    os << args[i];
                }
                os << ")";
                throw Error(os.str());
            }
            return it->second;
        });
    }
    return b;
}

namespace {

constexpr std::size_t kComposeCap = 1000000;

BigInt eval_rec(const BoundExprPtr& e, const PrimitiveBinding& bindings,
                const std::map<std::string, BigInt>& symbols) {
    if (!e) throw Error("null bound expression");
    switch (e->kind) {
        case BoundExpr::Kind::Lit:
            return e->value;
        case BoundExpr::Kind::Sym: {
            auto it = symbols.find(e->name);
            if (it == symbols.end())
                throw Error("unbound symbol: " + e->name);
            return it->second;
        }
        case BoundExpr::Kind::Add: {
            BigInt s = 0;
            for (const auto& a : e->args) s += eval_rec(a, bindings, symbols);
            return s;
        }
        case BoundExpr::Kind::Mul: {
            BigInt s = 1;
            for (const auto& a : e->args) s *= eval_rec(a, bindings, symbols);
            return s;
        }
        case BoundExpr::Kind::Max: {
            BigInt s = eval_rec(e->args[0], bindings, symbols);
            for (std::size_t i = 1; i < e->args.size(); ++i) {
                BigInt v = eval_rec(e->args[i], bindings, symbols);
                if (v > s) s = std::move(v);
            }
            return s;
        }
        case BoundExpr::Kind::Prim: {
            std::vector<BigInt> args;
            args.reserve(e->args.size());
            for (const auto& a : e->args)
                args.push_back(eval_rec(a, bindings, symbols));
            return bindings.call(e->name, args);
        }
        case BoundExpr::Kind::Compose: {
            BigInt count = eval_rec(e->args[1], bindings, symbols);
            if (count < 0) throw Error("negative composition count");
            if (count > BigInt(kComposeCap))
                throw CapExceeded("composition count above " +
                                  std::to_string(kComposeCap));
            BigInt cur = eval_rec(e->args[2], bindings, symbols);
            auto inner = symbols;
            for (BigInt i = 0; i < count; ++i) {
                inner["_"] = cur;
                cur = eval_rec(e->args[0], bindings, inner);
            }
            return cur;
        }
    }
    throw Error("unknown bound expression node");
}

}  // namespace

BigInt eval_bound(const BoundExprPtr& e, const PrimitiveBinding& bindings,
                  const std::map<std::string, BigInt>& symbols) {
    return eval_rec(e, bindings, symbols);
}

namespace {

// max(components(n,n)+1, kolchinproj(n)) with n as a symbol
BoundExprPtr seed_expr() {
    auto n = BoundExpr::sym("n");
    return BoundExpr::max(
        {BoundExpr::add({BoundExpr::prim("components", {n, n}),
                         BoundExpr::lit(1)}),
         BoundExpr::prim("kolchinproj", {n})});
}

BoundExprPtr step_over(BoundExprPtr prev) {
    return BoundExpr::prim("iter", {BoundExpr::sym("n"), std::move(prev)});
}

constexpr std::size_t kUnrollCap = 64;

}  // namespace

PipelineResult pipeline_A(int n, const PrimitiveBinding* bindings,
                          const ChainLenOptions& opts) {
    if (n < 1) throw DimensionError("pipeline_A needs n >= 1");
    if (!bindings) {
        // Iteration count is itself a derived quantity, so the symbolic
        // form keeps it as a primitive application.
        PipelineResult res;
        res.expr = BoundExpr::compose(step_over(BoundExpr::sym("_")),
                                      BoundExpr::prim("len",
                                                      {BoundExpr::sym("n")}),
                                      seed_expr());
        return res;
    }

    BigInt bn(n);
    std::vector<BigInt> g;
    g.push_back(std::max<BigInt>(
        bindings->call("components", {bn, bn}) + 1,
        bindings->call("kolchinproj", {bn})));
    auto iterate = [&](std::size_t i) -> BigInt {
        while (g.size() <= i)
            g.push_back(bindings->call("iter", {bn, g.back()}));
        return g[i];
    };

    auto cl = chain_len(iterate, n, opts);
    if (!cl.exact)
        throw CapExceeded("chain length search hit a cap; bound not exact");
    // The chain is nonempty whenever g(0) >= 0, so length >= 1.
    BigInt len = cl.length - 1;
    if (len > BigInt(g.size()))
        throw Error("chain length exceeds computed iterates");

    PipelineResult res;
    res.value = iterate(static_cast<std::size_t>(len));
    res.iterates.assign(g.begin(),
                        g.begin() + static_cast<std::ptrdiff_t>(len) + 1);
    if (len > BigInt(kUnrollCap)) {
        res.expr = BoundExpr::compose(step_over(BoundExpr::sym("_")),
                                      BoundExpr::lit(len), seed_expr());
    } else {
        auto e = seed_expr();
        for (BigInt i = 0; i < len; ++i) e = step_over(std::move(e));
        res.expr = e;
    }
    return res;
}

PipelineResult pipeline_B(int r, int m, int s,
                          const PrimitiveBinding* bindings) {
    if (r < 0 || m < 0 || s < 0)
        throw DimensionError("pipeline_B needs r, m, s >= 0");
    auto rs = BoundExpr::sym("r");
    auto ms = BoundExpr::sym("m");
    auto ss = BoundExpr::sym("s");
    auto inner = BoundExpr::prim("A", {BoundExpr::max({rs, ms, ss})});
    auto count =
        BoundExpr::mul({rs, BoundExpr::add({inner, ss, BoundExpr::lit(1)})});
    PipelineResult res;
    res.expr = BoundExpr::prim("gustavson", {ms, count, ss, ss});
    if (bindings) {
        std::map<std::string, BigInt> symbols{
            {"r", BigInt(r)}, {"m", BigInt(m)}, {"s", BigInt(s)}};
        res.value = eval_bound(res.expr, *bindings, symbols);
    }
    return res;
}

}  // namespace diffbound::kolchin
