#include <algorithm>

#include "diffbound/errors.hpp"
#include "diffbound/oracle.hpp"
#include "diffbound/rg_lifted.hpp"
#include "poly_arith.hpp"

namespace diffbound::oracle {

using namespace diffbound::logic;
using theory::Poly;

namespace {

std::vector<std::pair<std::string, Sort>> numbered_vars(std::size_t n,
                                                        const Sort& sort) {
    std::vector<std::pair<std::string, Sort>> vars;
    for (std::size_t i = 1; i <= n; ++i)
        vars.emplace_back("x" + std::to_string(i), sort);
    return vars;
}

FormulaPtr is_zero(const TermPtr& t) {
    return Formula::eq(t, Term::rat(0, t->sort()));
}

// Scans the tuple left to right; reports the first index holding a nonzero
// value, "0" if there is none. Cost: one unit per query.
TotalAlgorithm make_first_nonzero(int l) {
    if (l < 1) throw Error("first_nonzero needs arity >= 1");
    TotalAlgorithm alg;
    alg.id = "first_nonzero(" + std::to_string(l) + ")";
    alg.alphabet = "";
    alg.oracle_vars = numbered_vars(static_cast<std::size_t>(l), "Q");
    alg.resume = resumable([l](const std::string&, OracleTape& tape) -> Step {
        for (int i = 1; i <= l; ++i) {
            TermPtr xi = Term::var("x" + std::to_string(i), "Q");
            if (!tape.ask(is_zero(xi)))
                return Step::halt(std::to_string(i), tape.asked());
        }
        return Step::halt("0", tape.asked());
    });
    return alg;
}

// Same scan, but the arity comes from the input's first character. Used to
// exercise per-input bound extraction.
TotalAlgorithm make_first_nonzero_input() {
    TotalAlgorithm alg;
    alg.id = "first_nonzero_input";
    alg.alphabet = "12";
    alg.oracle_vars = numbered_vars(2, "Q");
    alg.resume = resumable([](const std::string& input, OracleTape& tape) -> Step {
        int l = input.empty() ? 1 : input[0] - '0';
        for (int i = 1; i <= l; ++i) {
            TermPtr xi = Term::var("x" + std::to_string(i), "Q");
            if (!tape.ask(is_zero(xi)))
                return Step::halt(std::to_string(i), tape.asked());
        }
        return Step::halt("0", tape.asked());
    });
    return alg;
}

// Rank of the k-by-k matrix (x1 .. x_{k*k}, row major) by column scans:
// zero-test candidate pivots, eliminate below by cross-multiplication (the
// tested-nonzero pivot factor cannot disturb later zero tests). The last
// column needs no pivot order, so its surviving entries are zero-tested as
// one compound query. Cost: one unit per query. Intermediate entries square
// in degree at each elimination step, so the theory degree cap limits k in
// practice; k = 2 stays within three queries.
TotalAlgorithm make_gauss_rank(int k) {
    if (k < 1) throw Error("gauss_rank needs a positive dimension");
    TotalAlgorithm alg;
    alg.id = "gauss_rank(" + std::to_string(k) + ")";
    alg.alphabet = "";
    alg.oracle_vars = numbered_vars(static_cast<std::size_t>(k) * k, "F");
    alg.resume = resumable([k](const std::string&, OracleTape& tape) -> Step {
        std::vector<std::vector<Poly>> m(k, std::vector<Poly>(k));
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                m[i][j] = Poly::variable("x" + std::to_string(i * k + j + 1));
        auto entry_zero = [&](const Poly& p) {
            return is_zero(p.primitive().to_term("F"));
        };
        int rank = 0;
        for (int col = 0; col + 1 < k; ++col) {
            int pivot = -1;
            for (int row = rank; row < k && pivot < 0; ++row) {
                if (m[row][col].is_zero()) continue;
                if (!tape.ask(entry_zero(m[row][col]))) pivot = row;
            }
            if (pivot < 0) continue;
            std::swap(m[rank], m[pivot]);
            for (int row = rank + 1; row < k; ++row) {
                for (int j = col + 1; j < k; ++j)
                    m[row][j] = m[rank][col] * m[row][j] -
                                m[row][col] * m[rank][j];
                m[row][col] = Poly::zero();
            }
            ++rank;
        }
        if (rank < k) {
            std::vector<FormulaPtr> all;
            for (int row = rank; row < k; ++row)
                if (!m[row][k - 1].is_zero())
                    all.push_back(entry_zero(m[row][k - 1]));
            if (!all.empty() && !tape.ask(Formula::conj(std::move(all)))) ++rank;
        }
        return Step::halt(std::to_string(rank), tape.asked());
    });
    return alg;
}

// Number of distinct roots of x1*t^2 + x2*t + x3 over an algebraically
// closed field: "0", "1", "2", or "I" when every point is a root. Two
// queries on every path; the second is chosen by the degeneracy test.
TotalAlgorithm make_quad_roots() {
    TotalAlgorithm alg;
    alg.id = "quad_roots";
    alg.alphabet = "";
    alg.oracle_vars = numbered_vars(3, "F");
    alg.resume = resumable([](const std::string&, OracleTape& tape) -> Step {
        TermPtr a = Term::var("x1", "F");
        TermPtr b = Term::var("x2", "F");
        TermPtr c = Term::var("x3", "F");
        if (tape.ask(Formula::conj({is_zero(a), is_zero(b)}))) {
            // Constant polynomial: zero everywhere or nowhere.
            bool zero = tape.ask(is_zero(c));
            return Step::halt(zero ? "I" : "0", tape.asked());
        }
        TermPtr disc = t_sub(t_mul({b, b}), t_mul({Term::rat(4, "F"), a, c}));
        bool two = tape.ask(Formula::conj(
            {Formula::neg(is_zero(a)), Formula::neg(is_zero(disc))}));
        // Otherwise the polynomial is linear or has a double root.
        return Step::halt(two ? "2" : "1", tape.asked());
    });
    return alg;
}

std::pair<std::string, std::vector<int>> parse_builtin_spec(const std::string& spec) {
    auto open = spec.find('(');
    if (open == std::string::npos) return {spec, {}};
    if (spec.back() != ')')
        throw Error("malformed algorithm spec: " + spec);
    std::string name = spec.substr(0, open);
    std::vector<int> args;
    std::string body = spec.substr(open + 1, spec.size() - open - 2);
    std::size_t pos = 0;
    while (pos < body.size()) {
        auto comma = body.find(',', pos);
        std::string item = body.substr(
            pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
            args.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw Error("bad integer '" + item + "' in algorithm spec " + spec);
        }
        pos = comma == std::string::npos ? body.size() : comma + 1;
    }
    return {std::move(name), std::move(args)};
}

void want_args(const std::string& name, const std::vector<int>& args,
               std::size_t n) {
    if (args.size() != n)
        throw Error(name + " takes " + std::to_string(n) + " parameter(s), got " +
                    std::to_string(args.size()));
}

}  // namespace

TotalAlgorithm builtin(const std::string& spec) {
    auto [name, args] = parse_builtin_spec(spec);
    if (name == "first_nonzero") {
        want_args(name, args, 1);
        return make_first_nonzero(args[0]);
    }
    if (name == "first_nonzero_input") {
        want_args(name, args, 0);
        return make_first_nonzero_input();
    }
    if (name == "gauss_rank") {
        want_args(name, args, 1);
        return make_gauss_rank(args[0]);
    }
    if (name == "quad_roots") {
        want_args(name, args, 0);
        return make_quad_roots();
    }
    if (name == "rg_lifted") {
        want_args(name, args, 3);
        return rg::lifted_algorithm(args[0], args[1], args[2]);
    }
    throw Error("unknown algorithm: " + name);
}

std::vector<std::string> builtin_names() {
    return {"first_nonzero(L)", "first_nonzero_input", "gauss_rank(K)",
            "quad_roots", "rg_lifted(M,N,L)"};
}

}  // namespace diffbound::oracle
