#include "diffbound/kolchin.hpp"

#include <memory>

#include "diffbound/errors.hpp"

namespace diffbound::kolchin {

NumericPolynomial NumericPolynomial::of(std::vector<BigInt> cs) {
    while (!cs.empty() && cs.back() == 0) cs.pop_back();
    return {std::move(cs)};
}

NumericPolynomial NumericPolynomial::constant(const BigInt& c) {
    return of({c});
}

int NumericPolynomial::degree() const {
    return static_cast<int>(coeffs.size()) - 1;
}

BigInt np_norm(const NumericPolynomial& p) {
    BigInt s = 0;
    for (const auto& a : p.coeffs) s += abs(a);
    return s;
}

BigInt np_eval(const NumericPolynomial& p, const BigInt& t) {
    BigInt out = 0;
    for (std::size_t i = 0; i < p.coeffs.size(); ++i) {
        // C(t+i, i) = prod_{k=1..i} (t+k) / i!, an exact integer
        BigInt num = 1, den = 1;
        for (std::size_t k = 1; k <= i; ++k) {
            num *= t + BigInt(k);
            den *= BigInt(k);
        }
        out += p.coeffs[i] * (num / den);
    }
    return out;
}

int np_compare(const NumericPolynomial& a, const NumericPolynomial& b) {
    std::size_t top = std::max(a.coeffs.size(), b.coeffs.size());
    for (std::size_t i = top; i-- > 0;) {
        BigInt ca = i < a.coeffs.size() ? a.coeffs[i] : BigInt(0);
        BigInt cb = i < b.coeffs.size() ? b.coeffs[i] : BigInt(0);
        if (ca != cb) return ca < cb ? -1 : 1;
    }
    return 0;
}

GrowthFn monotone_envelope(GrowthFn g) {
    // shared running cache keeps repeated evaluation linear overall
    auto cache = std::make_shared<std::vector<BigInt>>();
    return [g = std::move(g), cache](std::size_t n) {
        while (cache->size() <= n) {
            BigInt v = g(cache->size());
            if (!cache->empty() && cache->back() > v) v = cache->back();
            cache->push_back(v);
        }
        return BigInt(n) + (*cache)[n];
    };
}

namespace {

// lex-largest w < v with |w| <= budget, if any: keep the longest possible
// prefix of v, drop the next coordinate by as little as the budget allows,
// and spend the leftover budget as early as possible
bool lex_predecessor(const std::vector<BigInt>& v, const BigInt& budget,
                     std::vector<BigInt>& out) {
    int dim = static_cast<int>(v.size());
    BigInt prefix = 0;
    for (const auto& c : v) prefix += c;
    for (int j = dim - 1; j >= 0; --j) {
        prefix -= v[static_cast<std::size_t>(j)];
        if (v[static_cast<std::size_t>(j)] == 0) continue;
        BigInt cap = budget - prefix;
        if (cap < 0) continue;
        BigInt head = v[static_cast<std::size_t>(j)] - 1;
        if (head > cap) head = cap;
        if (head < 0) continue;
        out.assign(v.begin(), v.begin() + j);
        out.push_back(head);
        BigInt rest = cap - head;
        if (j + 1 < dim) {
            out.push_back(rest);
            out.resize(static_cast<std::size_t>(dim), BigInt(0));
        }
        return true;
    }
    return false;
}

}  // namespace

ChainLenResult chain_len(const GrowthFn& g, int dim,
                         const ChainLenOptions& opts) {
    if (dim < 1) throw DimensionError("chain_len wants dim >= 1");
    ChainLenResult res;
    BigInt b0 = g(0);
    if (b0 < 0) throw Error("norm budget must be non-negative");
    if (b0 > opts.norm_ceiling) {
        res.exact = false;
        return res;
    }
    // lex-largest admissible start
    std::vector<BigInt> v(static_cast<std::size_t>(dim), BigInt(0));
    v[0] = b0;
    std::uint64_t steps = 0;
    std::size_t i = 0;
    for (;;) {
        res.length += 1;
        if (++steps > opts.max_steps) {
            res.exact = false;
            return res;
        }
        BigInt budget = g(++i);
        if (budget < 0) throw Error("norm budget must be non-negative");
        if (budget > opts.norm_ceiling) {
            res.exact = false;
            return res;
        }
        std::vector<BigInt> next;
        if (!lex_predecessor(v, budget, next)) return res;
        v = std::move(next);
    }
}

}  // namespace diffbound::kolchin
