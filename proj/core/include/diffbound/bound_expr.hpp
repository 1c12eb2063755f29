#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "diffbound/kolchin.hpp"
#include "diffbound/rational.hpp"

namespace diffbound::kolchin {

// Symbolic bound over integer literals, named symbols, +, *, max, named
// primitive applications, and a compose node (iterated application).
// Primitive names are lowercase ("components", "kolchinproj", "iter",
// "gustavson", "len", "primecomp", "charset", "rg", "size") except the
// composed bound "A" itself; serialized text uses the same names.
struct BoundExpr;
using BoundExprPtr = std::shared_ptr<const BoundExpr>;

struct BoundExpr {
    enum class Kind { Lit, Sym, Add, Mul, Max, Prim, Compose };

    Kind kind = Kind::Lit;
    BigInt value;             // Lit
    std::string name;         // Sym, Prim
    // Compose holds {step, count, seed}: step is applied count times to
    // seed, with the symbol "_" standing for the previous iterate.
    std::vector<BoundExprPtr> args;

    static BoundExprPtr lit(BigInt v);
    static BoundExprPtr sym(std::string s);
    static BoundExprPtr add(std::vector<BoundExprPtr> xs);
    static BoundExprPtr mul(std::vector<BoundExprPtr> xs);
    static BoundExprPtr max(std::vector<BoundExprPtr> xs);
    static BoundExprPtr prim(std::string name, std::vector<BoundExprPtr> xs);
    static BoundExprPtr compose(BoundExprPtr step, BoundExprPtr count,
                                BoundExprPtr seed);
};

// Prefix text, e.g. (gustavson m (* r (+ (A (max r m s)) s 1)) s s).
std::string bound_expr_text(const BoundExprPtr& e);

// Total integer functions backing primitive applications.
class PrimitiveBinding {
public:
    using Fn = std::function<BigInt(const std::vector<BigInt>&)>;

    void bind(std::string name, Fn fn);
    bool has(const std::string& name) const;
    // Throws UnboundPrimitive for unknown names and Error when a binding
    // breaks the non-negativity contract.
    BigInt call(const std::string& name, const std::vector<BigInt>& args) const;

private:
    std::map<std::string, Fn> fns_;
};

// Named stub sets:
//   "doc":  components(a,b)=b, kolchinproj(a)=a, iter(a,d)=a+d
//   "sum":  gustavson = sum of arguments, A = identity
//   "unit": every primitive returns 1
//   "zero": every primitive returns 0
PrimitiveBinding stub_bindings(const std::string& set);

// Table rows "name a1 .. ak -> value", one per line; '#' starts a comment.
// Lookups outside the table throw Error.
PrimitiveBinding parse_binding_table(const std::string& text);

BigInt eval_bound(const BoundExprPtr& e, const PrimitiveBinding& bindings,
                  const std::map<std::string, BigInt>& symbols = {});

struct PipelineResult {
    BoundExprPtr expr;
    std::optional<BigInt> value;  // present when bindings were supplied
    // numeric seed-and-iterates trace, filled by the evaluated pipeline_A
    std::vector<BigInt> iterates;
};

// Seed max(components(n,n)+1, kolchinproj(n)) iterated by iter(n, .) as
// many times as the longest lex-decreasing chain bounded by the iterates
// allows. Without bindings the result is the compose form; with them the
// recursion is unrolled and evaluated.
PipelineResult pipeline_A(int n, const PrimitiveBinding* bindings = nullptr,
                          const ChainLenOptions& opts = {});

// gustavson(m, r*(A(max(r,m,s)) + s + 1), s, s); "A" resolves through the
// bindings, so a caller can splice in pipeline_A or any stub.
PipelineResult pipeline_B(int r, int m, int s,
                          const PrimitiveBinding* bindings = nullptr);

}  // namespace diffbound::kolchin
