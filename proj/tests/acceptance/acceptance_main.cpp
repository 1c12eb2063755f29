// Release gate. Each criterion prints exactly one PASS/FAIL line; the exit
// code is the number of failures. argv[1] names the CLI binary used by the
// determinism criterion.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "diffbound/bound_expr.hpp"
#include "diffbound/delay.hpp"
#include "diffbound/extractor.hpp"
#include "diffbound/kolchin.hpp"
#include "diffbound/oracle.hpp"
#include "diffbound/poly_text.hpp"
#include "diffbound/rg.hpp"
#include "diffbound/text.hpp"
#include "diffbound/theory.hpp"

#include "support/generators.hpp"

using namespace diffbound;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

logic::FormulaPtr closure(logic::FormulaPtr f) {
    for (const auto& [name, sort] : logic::free_vars(f))
        f = logic::Formula::forall(name, sort, f);
    return f;
}

bool quantifier_free(const logic::FormulaPtr& f) {
    if (f->is_quantifier()) return false;
    for (const auto& c : f->children())
        if (!quantifier_free(c)) return false;
    return true;
}

// --------------------------------------------------------------------------
// 1. Quantifier elimination preserves truth at every rational point.
// --------------------------------------------------------------------------

Outcome criterion_qe_soundness() {
    const char* theories[] = {"dlo", "lovs", "acf0"};
    int formulas = 0, points = 0, mismatches = 0, not_qf = 0;
    for (int t = 0; t < 3; ++t) {
        auto th = theory::Theory::by_name(theories[t]);
        testgen::Rng rng(0xC1000 + static_cast<std::uint64_t>(t));
        for (int i = 0; i < 1000; ++i) {
            auto f = testgen::random_formula(rng, theories[t]);
            auto g = th.qe(f).formula;
            ++formulas;
            if (!quantifier_free(g)) {
                ++not_qf;
                continue;
            }
            auto vars = logic::free_vars(f);
            for (const auto& [name, sort] : logic::free_vars(g))
                vars.emplace(name, sort);
            for (int p = 0; p < 20; ++p) {
                auto point = testgen::random_point(rng, vars);
                ++points;
                if (th.model_eval(f, point) != th.model_eval(g, point))
                    ++mismatches;
            }
        }
    }
    std::ostringstream d;
    d << formulas << " formulas, " << points << " point checks, "
      << mismatches << " mismatches, " << not_qf
      << " results with a leftover quantifier";
    return {mismatches == 0 && not_qf == 0 && formulas == 3000, d.str()};
}

// --------------------------------------------------------------------------
// 2. Extracted bounds are proven, match the enumerated query depth, and
//    dominate sampled runs.
// --------------------------------------------------------------------------

std::size_t enumerated_depth(const oracle::TotalAlgorithm& alg) {
    // Longest run of queries over every scripted response string.
    std::size_t best = 0;
    std::vector<std::vector<bool>> work{{}};
    while (!work.empty()) {
        std::vector<bool> prefix = std::move(work.back());
        work.pop_back();
        auto step = alg.resume("", prefix);
        if (step.kind != oracle::Step::Kind::Query) continue;
        best = std::max(best, prefix.size() + 1);
        auto next = prefix;
        next.push_back(true);
        work.push_back(std::move(next));
        prefix.push_back(false);
        work.push_back(std::move(prefix));
    }
    return best;
}

Outcome criterion_extractor_soundness() {
    struct Case {
        std::string spec;
        std::size_t expected_depth;  // 0: take the enumerated value
    };
    const Case cases[] = {{"first_nonzero(1)", 1}, {"first_nonzero(2)", 2},
                          {"first_nonzero(3)", 3}, {"first_nonzero(4)", 4},
                          {"quad_roots", 2},       {"gauss_rank(2)", 0}};
    std::ostringstream d;
    bool ok = true;
    testgen::Rng rng(0xC2000);
    for (const auto& c : cases) {
        auto alg = oracle::builtin(c.spec);
        bool field = alg.oracle_vars.front().second == "F";
        auto th = theory::Theory::by_name(field ? "acf0" : "lovs");
        auto result = extractor::extract_bound(th, alg, "", {});
        std::size_t expected =
            c.expected_depth ? c.expected_depth : enumerated_depth(alg);
        if (!result.proven() || result.depth != expected) {
            ok = false;
            d << c.spec << ": status/depth off (depth " << result.depth
              << ", expected " << expected << "); ";
            continue;
        }
        if (c.spec == "gauss_rank(2)" && expected > 3) {
            ok = false;
            d << c.spec << ": enumerated depth " << expected << " > 3; ";
            continue;
        }
        int bad = 0;
        for (int s = 0; s < 500; ++s) {
            std::vector<BigRat> values;
            for (std::size_t v = 0; v < alg.oracle_vars.size(); ++v)
                values.push_back(rng.spiky_rat(-3, 3, 2));
            oracle::ModelOracle om(th, alg.oracle_vars, values);
            auto trace = oracle::run(alg, "", om);
            if (!trace.halted || trace.cost > result.bound ||
                trace.query_count() > result.depth)
                ++bad;
        }
        if (bad) {
            ok = false;
            d << c.spec << ": " << bad << "/500 runs broke the bound; ";
        } else {
            d << c.spec << ": N=" << result.bound << " depth=" << result.depth
              << "; ";
        }
    }
    return {ok, d.str()};
}

// --------------------------------------------------------------------------
// 3. Level formulas carry the intended semantics.
// --------------------------------------------------------------------------

Outcome criterion_level_semantics() {
    auto th = theory::Theory::by_name("lovs");
    auto alg = oracle::builtin("first_nonzero(2)");
    extractor::ExtractionOptions opts;
    auto l0 = extractor::root_level();
    std::vector<extractor::BranchNode> b0;
    auto [l1, b1] = extractor::build_level(th, alg, "", l0, b0, opts);
    auto [l2, b2] = extractor::build_level(th, alg, "", l1, b1, opts);
    auto [l3, b3] = extractor::build_level(th, alg, "", l2, b2, opts);

    auto x1_zero = logic::Formula::eq(logic::Term::var("x1", "Q"),
                                      logic::Term::rat(BigRat(0), "Q"));
    bool level1 = th.decide(closure(l1.psi));
    bool level2 = th.decide(closure(logic::Formula::iff(l2.psi, x1_zero)));
    bool level3 = th.decide(closure(logic::Formula::neg(l3.psi)));
    std::ostringstream d;
    d << "psi1 valid: " << level1 << ", psi2 <=> x1=0: " << level2
      << ", psi3 unsatisfiable: " << level3;
    return {level1 && level2 && level3, d.str()};
}

// --------------------------------------------------------------------------
// 4. Decomposition desk cases.
// --------------------------------------------------------------------------

Outcome criterion_decomposition() {
    diffalg::DiffRing ring{1, 1, {"y"}};
    auto rk = diffalg::ranking_by_name("orderly", 1, 1);
    diffalg::RationalCoeffs field;
    auto P = [&](const std::string& s) { return poly_text::parse_poly(s, ring); };

    auto rg = diffalg::rosenfeld_groebner({P("y[1]^2 - 4*y[0]")}, {}, rk, ring,
                                          field);
    std::ostringstream d;
    bool ok = true;
    if (rg.components.size() != 2) {
        ok = false;
        d << "singular case gave " << rg.components.size() << " systems; ";
    }
    bool inside = diffalg::member_radical(P("y[0]*(y[1]^2 - 4*y[0])"),
                                          rg.components, *rk, ring, field);
    bool outside = diffalg::member_radical(P("y[2] - 2"), rg.components, *rk,
                                           ring, field);
    std::vector<bool> per;
    for (const auto& comp : rg.components) {
        auto rec = diffalg::full_reduce(P("y[2] - 2"), comp.chain, *rk, ring,
                                        field);
        per.push_back(!diffalg::poly_nonzero(rec.remainder, field));
    }
    bool split = per.size() == 2 && per[0] && !per[1] &&
                 rg.components[0].path == std::vector<int>{0};
    if (!inside || outside || !split) {
        ok = false;
        d << "membership pattern wrong (inside=" << inside
          << " outside=" << outside << " generic/singular split=" << split
          << "); ";
    }

    diffalg::DiffRing ring2{2, 1, {"u"}};
    auto rk2 = diffalg::ranking_by_name("orderly", 2, 1);
    auto rg2 = diffalg::rosenfeld_groebner(
        {poly_text::parse_poly("u[1,0]", ring2), poly_text::parse_poly("u[0,1]", ring2)}, {}, rk2,
        ring2, field);
    if (rg2.components.size() != 1) {
        ok = false;
        d << "flat case gave " << rg2.components.size() << " systems; ";
    }

    auto rg3 = diffalg::rosenfeld_groebner({P("1")}, {}, rk, ring, field);
    if (!rg3.components.empty()) {
        ok = false;
        d << "inconsistent case gave " << rg3.components.size()
          << " systems; ";
    }
    if (ok) d << "2/1/0 systems and membership split as expected";
    return {ok, d.str()};
}

// --------------------------------------------------------------------------
// 5. The reduction certificate is an exact identity.
// --------------------------------------------------------------------------

Outcome criterion_reduction_identity() {
    testgen::Rng rng(0xC5000);
    diffalg::RationalCoeffs field;
    int failures = 0;
    for (int i = 0; i < 200; ++i) {
        int m = 1 + rng.below(2);
        int n = 1 + rng.below(2);
        diffalg::DiffRing ring{m, n, {}};
        auto rk = diffalg::ranking_by_name("orderly", m, n);
        testgen::PolyShape shape;
        shape.max_ord = 2;
        shape.max_deg = 3;
        std::vector<diffalg::DiffPoly> seed;
        int k = 1 + rng.below(2);
        for (int j = 0; j < k; ++j)
            seed.push_back(testgen::random_nonzero_poly(rng, ring, shape));
        auto chain = diffalg::autoreduce(seed, *rk, ring, field);
        auto p = testgen::random_poly(rng, ring, shape);
        auto rec = diffalg::full_reduce(p, chain, *rk, ring, field);
        auto lhs = rec.h.times(p);
        for (const auto& step : rec.steps)
            lhs = lhs.minus(step.multiplier.times(
                chain[step.element].derive(step.theta, ring, field)));
        lhs = lhs.minus(rec.remainder);
        if (diffalg::poly_nonzero(lhs, field)) ++failures;
    }
    std::ostringstream d;
    d << "200 certificates expanded, " << failures << " nonzero residues";
    return {failures == 0, d.str()};
}

// --------------------------------------------------------------------------
// 6. Search result equals brute-force enumeration.
// --------------------------------------------------------------------------

std::uint64_t brute_chain(int dim, const std::vector<int>& g) {
    // Candidates at step i: v in Z>=0^dim with |v| <= g(min(i, last)).
    std::vector<std::vector<int>> space;
    int cap = 0;
    for (int b : g) cap = std::max(cap, b);
    std::vector<int> v(static_cast<std::size_t>(dim), 0);
    std::function<void(int, int)> fill = [&](int pos, int left) {
        if (pos == dim) {
            space.push_back(v);
            return;
        }
        for (int c = 0; c <= left; ++c) {
            v[static_cast<std::size_t>(pos)] = c;
            fill(pos + 1, left - c);
        }
        v[static_cast<std::size_t>(pos)] = 0;
    };
    fill(0, cap);

    std::map<std::pair<std::size_t, std::vector<int>>, std::uint64_t> memo;
    std::function<std::uint64_t(std::size_t, const std::vector<int>*)> best =
        [&](std::size_t i, const std::vector<int>* prev) -> std::uint64_t {
        std::size_t slot = std::min(i, g.size() - 1);
        if (prev) {
            auto key = std::make_pair(slot, *prev);
            auto it = memo.find(key);
            if (it != memo.end()) return it->second;
        }
        int budget = g[slot];
        std::uint64_t out = 0;
        for (const auto& cand : space) {
            int norm = 0;
            for (int c : cand) norm += c;
            if (norm > budget) continue;
            if (prev && !std::lexicographical_compare(cand.begin(), cand.end(),
                                                      prev->begin(),
                                                      prev->end()))
                continue;
            out = std::max(out, 1 + best(i + 1, &cand));
        }
        if (prev) memo.emplace(std::make_pair(slot, *prev), out);
        return out;
    };
    return best(0, nullptr);
}

Outcome criterion_chain_oracle() {
    testgen::Rng rng(0xC6000);
    int checked = 0, wrong = 0;
    for (int dim = 1; dim <= 2; ++dim) {
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<int> g;
            for (int t = 0; t < 10; ++t) g.push_back(rng.below(4));
            kolchin::GrowthFn fn = [g](std::size_t t) {
                return BigInt(g[std::min<std::size_t>(t, g.size() - 1)]);
            };
            auto got = kolchin::chain_len(fn, dim);
            ++checked;
            if (!got.exact || got.length != BigInt(brute_chain(dim, g)))
                ++wrong;
        }
    }
    for (int c = 0; c <= 5; ++c) {
        kolchin::GrowthFn fn = [c](std::size_t) { return BigInt(c); };
        auto got = kolchin::chain_len(fn, 1);
        ++checked;
        if (!got.exact || got.length != BigInt(c + 1)) ++wrong;
    }
    std::ostringstream d;
    d << checked << " growth functions compared, " << wrong << " mismatches";
    return {wrong == 0, d.str()};
}

// --------------------------------------------------------------------------
// 7. Pipeline expansion under the documented stubs.
// --------------------------------------------------------------------------

Outcome criterion_pipelines() {
    auto doc = kolchin::stub_bindings("doc");
    auto a = kolchin::pipeline_A(1, &doc);
    bool a_ok = a.value && *a.value == BigInt(4) &&
                a.iterates ==
                    std::vector<BigInt>{BigInt(2), BigInt(3), BigInt(4)};
    auto sum = kolchin::stub_bindings("sum");
    auto b = kolchin::pipeline_B(1, 1, 1, &sum);
    bool b_ok = b.value && *b.value == BigInt(6);
    std::ostringstream d;
    d << "trace " << (a.value ? kolchin::bound_expr_text(a.expr) : std::string("-"))
      << " -> " << (a.value ? a.value->str() : std::string("-"))
      << ", elimination bound "
      << (b.value ? b.value->str() : std::string("-"));
    return {a_ok && b_ok, d.str()};
}

// --------------------------------------------------------------------------
// 8. Delay system verifiers and the block reformulation.
// --------------------------------------------------------------------------

std::vector<std::vector<BigRat>> reshape(
    const std::vector<std::vector<BigRat>>& seqs, int ell, int h) {
    int r = static_cast<int>(seqs.size());
    std::vector<std::vector<BigRat>> points(
        static_cast<std::size_t>(ell),
        std::vector<BigRat>(static_cast<std::size_t>(r * (h + 1))));
    for (int i = 0; i < ell; ++i)
        for (int s = 0; s < r; ++s)
            for (int j = 0; j <= h; ++j)
                points[static_cast<std::size_t>(i)]
                      [static_cast<std::size_t>(s * (h + 1) + j)] =
                          seqs[static_cast<std::size_t>(s)]
                              [static_cast<std::size_t>(i + j)];
    return points;
}

Outcome criterion_delay_verifiers() {
    std::ostringstream d;
    bool ok = true;

    delay::DelayRing ring{1, 1, {}};
    auto f = delay::parse_dspoly("y[0;1] - 2*y[0;0]", ring);
    std::vector<delay::DSPoly> F{f};
    bool good = delay::verify_partial(F, ring, {{BigRat(1), BigRat(2), BigRat(4)}}, 2);
    bool bad = delay::verify_partial(F, ring, {{BigRat(1), BigRat(2), BigRat(5)}}, 2);
    auto spec = delay::TripleSpec::make(F, ring);
    bool tgood = delay::verify_triple(
        {{BigRat(1), BigRat(2)}, {BigRat(2), BigRat(4)}}, spec);
    bool tbad = delay::verify_triple(
        {{BigRat(1), BigRat(2)}, {BigRat(3), BigRat(6)}}, spec);
    if (!good || bad || !tgood || tbad) {
        ok = false;
        d << "doubling example gave " << good << bad << tgood << tbad << "; ";
    }

    testgen::Rng rng(0xC8000);
    int shape_bad = 0;
    for (int t = 0; t < 50; ++t) {
        delay::DelayRing rr{1, 1 + rng.below(3), {}};
        testgen::DSShape shape;
        shape.max_sigma = 1 + rng.below(3);
        std::vector<delay::DSPoly> sys;
        int k = 1 + rng.below(3);
        for (int j = 0; j < k; ++j)
            sys.push_back(testgen::random_dspoly(rng, rr, shape));
        int ell = 2 + rng.below(4);
        auto wl = delay::wl_system(sys, rr, ell);
        if (static_cast<int>(wl.gluing_count()) != (ell - 1) * (wl.H - wl.r))
            ++shape_bad;
    }
    if (shape_bad) {
        ok = false;
        d << shape_bad << "/50 gluing counts off; ";
    }

    int agree_bad = 0, true_cases = 0;
    for (int t = 0; t < 100; ++t) {
        delay::DelayRing rr{1, 1, {}};
        std::vector<delay::DSPoly> sys;
        int ell = 1 + rng.below(4);
        std::vector<std::vector<BigRat>> seqs;
        if (t % 2 == 0) {
            // Random system against random data.
            rr.r = 1 + rng.below(2);
            testgen::DSShape shape;
            shape.max_sigma = 1 + rng.below(2);
            int k = 1 + rng.below(2);
            for (int j = 0; j < k; ++j)
                sys.push_back(testgen::random_dspoly(rng, rr, shape));
            auto sp = delay::TripleSpec::make(sys, rr);
            for (int s = 0; s < rr.r; ++s) {
                std::vector<BigRat> row;
                for (int u = 0; u < ell + sp.h; ++u)
                    row.push_back(rng.spiky_rat(-2, 2, 1));
                seqs.push_back(std::move(row));
            }
        } else {
            // A linear recurrence with an exact solution, sometimes bent.
            int k = 1 + rng.below(2);
            BigRat c = rng.nonzero_rat(-2, 2, 1);
            delay::DSVar hi{diffalg::Derivative::zero(1), k, 0};
            delay::DSVar lo{diffalg::Derivative::zero(1), 0, 0};
            sys.push_back(delay::DSPoly::variable(hi).minus(
                delay::DSPoly::variable(lo).scaled(c)));
            std::vector<BigRat> row;
            for (int u = 0; u < k; ++u) row.push_back(rng.rat(-2, 2, 1));
            for (int u = k; u < ell + k; ++u)
                row.push_back(row[static_cast<std::size_t>(u - k)] * c);
            if (rng.flip())
                row[static_cast<std::size_t>(rng.below(ell + k))] += BigRat(1);
            seqs.push_back(std::move(row));
        }
        auto sp = delay::TripleSpec::make(sys, rr);
        bool partial = delay::verify_partial(sys, rr, seqs, ell);
        bool triple = delay::verify_triple(reshape(seqs, ell, sp.h), sp);
        if (partial != triple) ++agree_bad;
        if (partial) ++true_cases;
    }
    if (agree_bad) {
        ok = false;
        d << agree_bad << "/100 reshaped instances disagree; ";
    }
    if (ok)
        d << "examples, 50 gluing counts, 100 agreements (" << true_cases
          << " solvable) all exact";
    return {ok, d.str()};
}

// --------------------------------------------------------------------------
// 9. CLI output is byte-identical across repeats and thread counts.
// --------------------------------------------------------------------------

std::string capture(const std::string& cmd, bool& ok) {
    std::string out;
    FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
    if (!pipe) {
        ok = false;
        return out;
    }
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    if (pclose(pipe) != 0) ok = false;
    return out;
}

Outcome criterion_determinism(const std::string& cli) {
    if (cli.empty())
        return {false, "no CLI binary path supplied on the command line"};
    const std::vector<std::string> cases = {
        "decide --theory dlo \"(forall (x O) (exists (y O) (< x y)))\"",
        "qe --theory lovs \"(exists (x Q) (and (< a x) (< x b)))\"",
        "qe --theory acf0 \"(exists (x F) (= (* x x) a))\"",
        "run --alg \"first_nonzero(3)\" --oracle model:lovs:0,5,7 "
        "--show-queries",
        "extract-bound --alg \"first_nonzero(2)\" --theory lovs --levels",
        "extract-bound --alg \"gauss_rank(2)\" --theory acf0",
        "extract-bound --alg \"quad_roots\" --theory acf0 --tight-max",
        "rg --m 1 --n 1 --names y \"y[1]^2 - 4*y[0]\"",
        "member --m 1 --n 1 --names y --system \"y[1]^2 - 4*y[0]\" "
        "\"y[2] - 2\"",
        "reduce --m 1 --n 1 --names y --chain \"y[1]^2 - 4*y[0]\" "
        "\"y[2] - 2\"",
        "autoreduce --m 1 --n 1 --names y \"y[1]^2 - 4*y[0]; y[1]^3\"",
        "chainlen --dim 2 --budgets 1",
        "chainlen --dim 1 --budgets 3",
        "bound-A --n 1 --stubs doc",
        "bound-B --r 1 --m 1 --s 1 --stubs sum",
        "wl --r 1 --ell 3 \"y[0;1] - 2*y[0;0]\"",
        "verify-partial --r 1 --ell 2 --seqs \"1,2,4\" \"y[0;1] - 2*y[0;0]\"",
        "verify-triple --r 1 --points \"1,2; 2,4\" \"y[0;1] - 2*y[0;0]\"",
    };
    int unstable = 0, failed = 0;
    for (const auto& c : cases) {
        std::string base = "\"" + cli + "\" --format machine " + c;
        bool ok = true;
        std::string first = capture(base, ok);
        std::string second = capture(base, ok);
        std::string one = capture(base + " --threads 1", ok);
        std::string four = capture(base + " --threads 4", ok);
        if (!ok || first.empty()) ++failed;
        if (first != second || one != four || first != one) ++unstable;
    }
    std::ostringstream d;
    d << cases.size() << " invocations, " << unstable << " unstable, "
      << failed << " failed";
    return {unstable == 0 && failed == 0, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
    std::string cli = argc > 1 ? argv[1] : "";
    int only = argc > 2 ? std::atoi(argv[2]) : 0;
    struct Row {
        const char* name;
        double budget_s;
        std::function<Outcome()> body;
    };
    const Row rows[] = {
        {"qe soundness", 60, criterion_qe_soundness},
        {"extractor soundness", 120, criterion_extractor_soundness},
        {"extractor level semantics", 5, criterion_level_semantics},
        {"decomposition desk cases", 10, criterion_decomposition},
        {"reduction identity", 60, criterion_reduction_identity},
        {"chain length oracle", 30, criterion_chain_oracle},
        {"pipeline expansion", 1, criterion_pipelines},
        {"delay verifiers", 10, criterion_delay_verifiers},
        {"CLI determinism", 0, [&] { return criterion_determinism(cli); }},
    };
    int failures = 0;
    int index = 0;
    for (const auto& row : rows) {
        ++index;
        if (only && index != only) continue;
        auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = row.body();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start)
                .count();
        bool in_budget = row.budget_s == 0 || secs < row.budget_s;
        bool pass = out.pass && in_budget;
        if (!pass) ++failures;
        std::printf("criterion %d: %s %s: %s (%.2fs", index,
                    pass ? "PASS" : "FAIL", row.name, out.detail.c_str(),
                    secs);
        if (row.budget_s > 0) std::printf(", budget %.0fs", row.budget_s);
        std::printf(")\n");
        std::fflush(stdout);
    }
    return failures;
}
