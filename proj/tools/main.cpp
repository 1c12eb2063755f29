#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "diffbound/bound_expr.hpp"
#include "diffbound/delay.hpp"
#include "diffbound/errors.hpp"
#include "diffbound/extractor.hpp"
#include "diffbound/kolchin.hpp"
#include "diffbound/oracle.hpp"
#include "diffbound/poly_text.hpp"
#include "diffbound/reduction.hpp"
#include "diffbound/rg.hpp"
#include "diffbound/text.hpp"
#include "diffbound/theory.hpp"

using nlohmann::ordered_json;
using namespace diffbound;

namespace {

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

std::string scalar_text(const ordered_json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

bool all_scalars(const ordered_json& arr) {
    for (const auto& v : arr)
        if (v.is_object() || v.is_array()) return false;
    return true;
}

// Renders exactly the fields the machine format carries, as indented
// key: value lines, so the two formats never drift apart.
void render_human(const ordered_json& j, std::ostream& os, int indent) {
    std::string pad(static_cast<std::size_t>(indent), ' ');
    for (const auto& [key, v] : j.items()) {
        if (v.is_object()) {
            os << pad << key << ":\n";
            render_human(v, os, indent + 2);
        } else if (v.is_array() && !all_scalars(v)) {
            os << pad << key << ":\n";
            for (const auto& el : v) {
                if (el.is_array() && all_scalars(el)) {
                    os << pad << "  -";
                    for (const auto& x : el) os << " " << scalar_text(x);
                    os << "\n";
                } else if (el.is_object() || el.is_array()) {
                    os << pad << "  -\n";
                    render_human(el, os, indent + 4);
                } else {
                    os << pad << "  - " << scalar_text(el) << "\n";
                }
            }
        } else if (v.is_array()) {
            os << pad << key << ":";
            if (v.empty()) os << " (none)";
            for (const auto& el : v) os << " " << scalar_text(el);
            os << "\n";
        } else {
            os << pad << key << ": " << scalar_text(v) << "\n";
        }
    }
}

void emit(const ordered_json& out, const std::string& format) {
    if (format == "machine")
        std::cout << out.dump(2) << "\n";
    else
        render_human(out, std::cout, 0);
}

// ---------------------------------------------------------------------------
// Parsing helpers
// ---------------------------------------------------------------------------

// separators inside [...] or (...) belong to the element, not the list
std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '[' || c == '(') ++depth;
        if (c == ']' || c == ')') --depth;
        if (c == sep && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    std::vector<std::string> trimmed;
    for (auto& piece : out) {
        std::size_t a = piece.find_first_not_of(" \t");
        if (a == std::string::npos) continue;
        std::size_t b = piece.find_last_not_of(" \t");
        trimmed.push_back(piece.substr(a, b - a + 1));
    }
    return trimmed;
}

std::vector<diffalg::DiffPoly> parse_polys(const std::string& s,
                                           const diffalg::DiffRing& ring) {
    std::vector<diffalg::DiffPoly> out;
    for (const auto& piece : split_list(s, ';'))
        out.push_back(poly_text::parse_poly(piece, ring));
    return out;
}

std::vector<delay::DSPoly> parse_dspolys(const std::string& s,
                                         const delay::DelayRing& ring) {
    std::vector<delay::DSPoly> out;
    for (const auto& piece : split_list(s, ';'))
        out.push_back(delay::parse_dspoly(piece, ring));
    return out;
}

std::vector<BigRat> parse_rats(const std::string& s) {
    std::vector<BigRat> out;
    for (const auto& piece : split_list(s, ','))
        out.push_back(parse_rational(piece));
    return out;
}

diffalg::DiffRing make_ring(int m, int n, const std::string& names) {
    diffalg::DiffRing ring;
    ring.m = m;
    ring.n = n;
    if (!names.empty()) ring.names = split_list(names, ',');
    if (!ring.names.empty() && static_cast<int>(ring.names.size()) != n)
        throw Error("expected " + std::to_string(n) + " names");
    return ring;
}

delay::DelayRing make_delay_ring(int m, int r, const std::string& names) {
    delay::DelayRing ring;
    ring.m = m;
    ring.r = r;
    if (!names.empty()) ring.names = split_list(names, ',');
    if (!ring.names.empty() && static_cast<int>(ring.names.size()) != r)
        throw Error("expected " + std::to_string(r) + " names");
    return ring;
}

// entries look like y[1,0;2]=3, separated by spaces
delay::DeltaContext parse_context(const std::string& s, bool strict,
                                  const delay::DelayRing& ring) {
    delay::DeltaContext ctx;
    ctx.strict = strict;
    for (const auto& entry : split_list(s, ' ')) {
        auto eq = entry.find('=');
        if (eq == std::string::npos)
            throw Error("context entry needs var=value: " + entry);
        auto lhs = delay::parse_dspoly(entry.substr(0, eq), ring);
        auto vars = lhs.support();
        if (vars.size() != 1 || lhs.terms().size() != 1 ||
            lhs.terms().begin()->first.size() != 1 ||
            lhs.terms().begin()->first.begin()->second != 1 ||
            lhs.terms().begin()->second != 1)
            throw Error("context entry must name a single variable: " + entry);
        ctx.table[vars[0]] = parse_rational(entry.substr(eq + 1));
    }
    return ctx;
}

kolchin::PrimitiveBinding load_bindings(const std::string& stubs,
                                        const std::string& table_path) {
    if (!stubs.empty() && !table_path.empty())
        throw Error("give either a stub set or a table file, not both");
    if (!table_path.empty()) {
        std::ifstream in(table_path);
        if (!in) throw Error("cannot read " + table_path);
        std::ostringstream buf;
        buf << in.rdbuf();
        return kolchin::parse_binding_table(buf.str());
    }
    return kolchin::stub_bindings(stubs);
}

std::string theta_text(const diffalg::Derivative& theta) {
    std::string out;
    for (std::size_t k = 0; k < theta.idx.size(); ++k) {
        if (k) out += ',';
        out += std::to_string(theta.idx[k]);
    }
    return out;
}

ordered_json poly_list(const std::vector<diffalg::DiffPoly>& ps,
                       const diffalg::DiffRing& ring) {
    ordered_json arr = ordered_json::array();
    for (const auto& p : ps) arr.push_back(poly_text::poly_to_text(p, ring));
    return arr;
}

text::ParseContext formula_context(const theory::Theory& th) {
    text::ParseContext ctx;
    ctx.signature = th.signature();
    if (!th.is_union()) ctx.default_sort = th.primary_sort();
    return ctx;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"computable bounds for oracle algorithms, differential "
                 "characteristic sets, and delay-system verifiers"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value configuration file")
        ->envname("DIFFBOUND_CONFIG");

    std::string format = "human";
    int threads = 1;
    app.add_option("--format", format, "output format")
        ->transform(CLI::IsMember({"human", "machine"}))
        ->capture_default_str();
    app.add_option("--threads", threads, "worker threads for extraction")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    ordered_json out;

    // -- decide ------------------------------------------------------------
    auto* cmd_decide = app.add_subcommand("decide", "decide a sentence");
    std::string de_theory = "dlo", de_formula;
    int de_degree_cap = 4;
    cmd_decide->add_option("--theory", de_theory, "dlo, lovs, acf0, or a+b")
        ->capture_default_str();
    cmd_decide->add_option("--acf-degree-cap", de_degree_cap,
                           "max atom degree accepted by acf0")
        ->capture_default_str();
    cmd_decide->add_option("formula", de_formula, "sentence text")->required();
    cmd_decide->callback([&] {
        theory::TheoryOptions topts;
        topts.acf_degree_cap = de_degree_cap;
        auto th = theory::Theory::by_name(de_theory, topts);
        auto f = text::parse_formula(de_formula, formula_context(th));
        out["command"] = "decide";
        out["theory"] = th.name();
        out["formula"] = text::print_formula(f);
        out["result"] = th.decide(f);
    });

    // -- qe ------------------------------------------------------------------
    auto* cmd_qe = app.add_subcommand("qe", "eliminate quantifiers");
    std::string qe_theory = "dlo", qe_formula;
    int qe_degree_cap = 4;
    cmd_qe->add_option("--theory", qe_theory, "dlo, lovs, acf0, or a+b")
        ->capture_default_str();
    cmd_qe->add_option("--acf-degree-cap", qe_degree_cap,
                       "max atom degree accepted by acf0")
        ->capture_default_str();
    cmd_qe->add_option("formula", qe_formula, "formula text")->required();
    cmd_qe->callback([&] {
        theory::TheoryOptions topts;
        topts.acf_degree_cap = qe_degree_cap;
        auto th = theory::Theory::by_name(qe_theory, topts);
        auto f = text::parse_formula(qe_formula, formula_context(th));
        auto res = th.qe(f);
        out["command"] = "qe";
        out["theory"] = th.name();
        out["input"] = text::print_formula(f);
        out["result"] = text::print_formula(res.formula);
        ordered_json steps = ordered_json::array();
        for (const auto& st : res.trace)
            steps.push_back({{"var", st.var}, {"method", st.method}});
        out["steps"] = steps;
    });

    // -- run -----------------------------------------------------------------
    auto* cmd_run = app.add_subcommand("run", "run an algorithm on an oracle");
    std::string run_alg, run_oracle, run_input;
    std::size_t run_max_queries = 1 << 16;
    std::uint64_t run_max_cost = std::numeric_limits<std::uint64_t>::max();
    bool run_show_queries = false;
    cmd_run->add_option("--alg", run_alg, "builtin spec, e.g. first_nonzero(2)")
        ->required();
    cmd_run->add_option("--oracle", run_oracle,
                        "model:THEORY:v1,v2,... or script:TFT")
        ->required();
    cmd_run->add_option("--input", run_input, "input word");
    cmd_run->add_option("--max-queries", run_max_queries, "query budget")
        ->capture_default_str();
    cmd_run->add_option("--max-cost", run_max_cost, "cost budget");
    cmd_run->add_flag("--show-queries", run_show_queries,
                      "include the query formulas");
    cmd_run->callback([&] {
        auto alg = oracle::builtin(run_alg);
        auto ora = oracle::parse_oracle_spec(run_oracle, alg);
        oracle::RunLimits limits;
        limits.max_queries = run_max_queries;
        limits.max_cost = run_max_cost;
        auto tr = oracle::run(alg, run_input, *ora, limits);
        out["command"] = "run";
        out["algorithm"] = alg.id;
        out["input"] = run_input;
        out["oracle"] = run_oracle;
        out["halted"] = tr.halted;
        if (!tr.halted) out["limit_reason"] = tr.limit_reason;
        out["output"] = tr.output;
        out["cost"] = tr.cost;
        out["queries"] = tr.query_count();
        std::string responses;
        for (bool b : tr.responses) responses += b ? 'T' : 'F';
        out["responses"] = responses;
        if (run_show_queries) {
            ordered_json qs = ordered_json::array();
            for (const auto& q : tr.queries)
                qs.push_back(text::print_formula(q));
            out["query_texts"] = qs;
        }
    });

    // -- extract-bound -------------------------------------------------------
    auto* cmd_extract =
        app.add_subcommand("extract-bound", "prove a uniform cost bound");
    std::string ex_theory = "lovs", ex_alg, ex_input;
    int ex_arity = -1;
    std::size_t ex_max_depth = 32;
    int ex_all_inputs = -1;
    bool ex_tight = false, ex_levels = false;
    cmd_extract->add_option("--theory", ex_theory, "oracle theory")
        ->capture_default_str();
    cmd_extract->add_option("--alg", ex_alg, "builtin name or spec")
        ->required();
    cmd_extract->add_option("--arity", ex_arity,
                            "parameter count appended to --alg");
    cmd_extract->add_option("--input", ex_input, "input word");
    cmd_extract->add_option("--all-inputs", ex_all_inputs,
                            "bound uniformly over inputs up to this length");
    cmd_extract->add_option("--max-depth", ex_max_depth, "level cap")
        ->capture_default_str();
    cmd_extract->add_flag("--tight-max", ex_tight,
                          "aggregate halted costs by max instead of sum");
    cmd_extract->add_flag("--levels", ex_levels, "include per-level formulas");
    cmd_extract->callback([&] {
        std::string spec = ex_alg;
        if (ex_arity >= 0 && spec.find('(') == std::string::npos)
            spec += "(" + std::to_string(ex_arity) + ")";
        auto th = theory::Theory::by_name(ex_theory);
        auto alg = oracle::builtin(spec);
        extractor::ExtractionOptions opts;
        opts.max_depth = ex_max_depth;
        opts.tight_max_mode = ex_tight;
        opts.threads = threads;
        opts.keep_levels = ex_levels;
        extractor::BoundResult res =
            ex_all_inputs >= 0
                ? extractor::extract_bound_all_inputs(
                      th, alg, static_cast<std::size_t>(ex_all_inputs), opts)
                : extractor::extract_bound(th, alg, ex_input, opts);
        out["command"] = "extract-bound";
        out["theory"] = th.name();
        out["algorithm"] = alg.id;
        if (ex_all_inputs >= 0)
            out["max_input_length"] = ex_all_inputs;
        else
            out["input"] = ex_input;
        out["status"] = res.proven() ? "proven" : "undetermined";
        out["depth"] = res.depth;
        if (res.proven()) {
            out["bound"] = res.bound;
            out["certificate"] = text::print_formula(res.phi);
        }
        if (ex_levels) {
            ordered_json levels = ordered_json::array();
            for (const auto& lv : res.levels) {
                ordered_json one;
                one["depth"] = lv.depth;
                one["psi"] = text::print_formula(lv.psi);
                one["q"] = lv.q ? text::print_formula(lv.q) : "";
                if (lv.n_prev) one["n"] = *lv.n_prev;
                levels.push_back(one);
            }
            out["levels"] = levels;
        }
    });

    // -- reduce ----------------------------------------------------------------
    auto* cmd_reduce =
        app.add_subcommand("reduce", "Ritt reduction modulo a chain");
    std::string rd_chain, rd_poly, rd_ranking = "orderly", rd_names;
    int rd_m = 1, rd_n = 1;
    cmd_reduce->add_option("--m", rd_m, "derivations")->capture_default_str();
    cmd_reduce->add_option("--n", rd_n, "indeterminates")->capture_default_str();
    cmd_reduce->add_option("--names", rd_names, "indeterminate names a,b,...");
    cmd_reduce->add_option("--ranking", rd_ranking, "ranking spec")
        ->capture_default_str();
    cmd_reduce->add_option("--chain", rd_chain, "polynomials p1; p2; ...")
        ->required();
    cmd_reduce->add_option("poly", rd_poly, "polynomial to reduce")->required();
    cmd_reduce->callback([&] {
        auto ring = make_ring(rd_m, rd_n, rd_names);
        auto ranking = diffalg::ranking_by_name(rd_ranking, ring.m, ring.n);
        diffalg::RationalCoeffs field;
        auto chain = parse_polys(rd_chain, ring);
        auto p = poly_text::parse_poly(rd_poly, ring);
        auto rec = diffalg::full_reduce(p, chain, *ranking, ring, field);
        out["command"] = "reduce";
        out["ranking"] = rd_ranking;
        out["chain"] = poly_list(chain, ring);
        out["input"] = poly_text::poly_to_text(p, ring);
        out["h"] = poly_text::poly_to_text(rec.h, ring);
        ordered_json steps = ordered_json::array();
        for (const auto& st : rec.steps) {
            ordered_json one;
            one["multiplier"] = poly_text::poly_to_text(st.multiplier, ring);
            one["derivative"] = theta_text(st.theta);
            one["element"] = st.element;
            steps.push_back(one);
        }
        out["steps"] = steps;
        out["remainder"] = poly_text::poly_to_text(rec.remainder, ring);
    });

    // -- autoreduce --------------------------------------------------------------
    auto* cmd_auto =
        app.add_subcommand("autoreduce", "autoreduce a polynomial set");
    std::string ar_polys, ar_ranking = "orderly", ar_names;
    int ar_m = 1, ar_n = 1;
    cmd_auto->add_option("--m", ar_m, "derivations")->capture_default_str();
    cmd_auto->add_option("--n", ar_n, "indeterminates")->capture_default_str();
    cmd_auto->add_option("--names", ar_names, "indeterminate names a,b,...");
    cmd_auto->add_option("--ranking", ar_ranking, "ranking spec")
        ->capture_default_str();
    cmd_auto->add_option("polys", ar_polys, "polynomials p1; p2; ...")
        ->required();
    cmd_auto->callback([&] {
        auto ring = make_ring(ar_m, ar_n, ar_names);
        auto ranking = diffalg::ranking_by_name(ar_ranking, ring.m, ring.n);
        diffalg::RationalCoeffs field;
        auto polys = parse_polys(ar_polys, ring);
        auto reduced = diffalg::autoreduce(polys, *ranking, ring, field);
        out["command"] = "autoreduce";
        out["ranking"] = ar_ranking;
        out["input"] = poly_list(polys, ring);
        out["result"] = poly_list(reduced, ring);
    });

    // -- rg -----------------------------------------------------------------------
    auto* cmd_rg = app.add_subcommand(
        "rg", "characteristic decomposition of a differential system");
    std::string rg_eqs, rg_ineqs, rg_ranking = "orderly", rg_names;
    int rg_m = 1, rg_n = 1;
    std::uint64_t rg_max_steps = 100000;
    cmd_rg->add_option("--m", rg_m, "derivations")->capture_default_str();
    cmd_rg->add_option("--n", rg_n, "indeterminates")->capture_default_str();
    cmd_rg->add_option("--names", rg_names, "indeterminate names a,b,...");
    cmd_rg->add_option("--ranking", rg_ranking, "ranking spec")
        ->capture_default_str();
    cmd_rg->add_option("--ineq", rg_ineqs, "inequations q1; q2; ...");
    cmd_rg->add_option("--max-steps", rg_max_steps, "work-list budget")
        ->capture_default_str();
    cmd_rg->add_option("eqs", rg_eqs, "equations p1; p2; ...")->required();
    cmd_rg->callback([&] {
        auto ring = make_ring(rg_m, rg_n, rg_names);
        auto ranking = diffalg::ranking_by_name(rg_ranking, ring.m, ring.n);
        diffalg::RationalCoeffs field;
        auto eqs = parse_polys(rg_eqs, ring);
        auto ineqs = parse_polys(rg_ineqs, ring);
        diffalg::RGOptions opts;
        opts.max_steps = rg_max_steps;
        auto res = diffalg::rosenfeld_groebner(eqs, ineqs, ranking, ring,
                                               field, opts);
        out["command"] = "rg";
        out["ranking"] = rg_ranking;
        out["equations"] = poly_list(eqs, ring);
        out["inequations"] = poly_list(ineqs, ring);
        out["steps"] = res.steps;
        out["capped"] = res.capped();
        ordered_json comps = ordered_json::array();
        for (const auto& comp : res.components) {
            ordered_json one;
            one["chain"] = poly_list(comp.chain, ring);
            one["ineqs"] = poly_list(comp.ineqs, ring);
            one["path"] = comp.path;
            comps.push_back(one);
        }
        out["components"] = comps;
    });

    // -- member ----------------------------------------------------------------
    auto* cmd_member = app.add_subcommand(
        "member", "radical membership via characteristic decomposition");
    std::string mb_system, mb_poly, mb_ranking = "orderly", mb_names;
    int mb_m = 1, mb_n = 1;
    cmd_member->add_option("--m", mb_m, "derivations")->capture_default_str();
    cmd_member->add_option("--n", mb_n, "indeterminates")->capture_default_str();
    cmd_member->add_option("--names", mb_names, "indeterminate names a,b,...");
    cmd_member->add_option("--ranking", mb_ranking, "ranking spec")
        ->capture_default_str();
    cmd_member->add_option("--system", mb_system, "equations p1; p2; ...")
        ->required();
    cmd_member->add_option("poly", mb_poly, "candidate member")->required();
    cmd_member->callback([&] {
        auto ring = make_ring(mb_m, mb_n, mb_names);
        auto ranking = diffalg::ranking_by_name(mb_ranking, ring.m, ring.n);
        diffalg::RationalCoeffs field;
        auto eqs = parse_polys(mb_system, ring);
        auto p = poly_text::parse_poly(mb_poly, ring);
        auto dec =
            diffalg::rosenfeld_groebner(eqs, {}, ranking, ring, field, {});
        out["command"] = "member";
        out["ranking"] = mb_ranking;
        out["system"] = poly_list(eqs, ring);
        out["poly"] = poly_text::poly_to_text(p, ring);
        out["components"] = dec.components.size();
        ordered_json per = ordered_json::array();
        bool all = true;
        for (const auto& comp : dec.components) {
            auto rec = diffalg::full_reduce(p, comp.chain, *ranking, ring,
                                            field);
            bool in = !diffalg::poly_nonzero(rec.remainder, field);
            per.push_back(in);
            all = all && in;
        }
        out["member"] = all;
        out["per_component"] = per;
    });

    // -- chainlen -----------------------------------------------------------------
    auto* cmd_chain = app.add_subcommand(
        "chainlen", "longest norm-bounded lex-decreasing chain");
    int cl_dim = 1;
    std::string cl_budgets;
    std::uint64_t cl_max_steps = 1000000;
    std::string cl_ceiling = "1000000";
    cmd_chain->add_option("--dim", cl_dim, "vector dimension")
        ->capture_default_str();
    cmd_chain
        ->add_option("--budgets", cl_budgets,
                     "norm budgets b0,b1,...; the last entry repeats")
        ->required();
    cmd_chain->add_option("--max-steps", cl_max_steps, "search budget")
        ->capture_default_str();
    cmd_chain->add_option("--norm-ceiling", cl_ceiling, "budget ceiling")
        ->capture_default_str();
    cmd_chain->callback([&] {
        std::vector<BigInt> budgets;
        for (const auto& piece : split_list(cl_budgets, ','))
            budgets.emplace_back(piece);
        if (budgets.empty()) throw Error("empty budget list");
        kolchin::ChainLenOptions opts;
        opts.max_steps = cl_max_steps;
        opts.norm_ceiling = BigInt(cl_ceiling);
        auto res = kolchin::chain_len(
            [&](std::size_t i) {
                return budgets[std::min(i, budgets.size() - 1)];
            },
            cl_dim, opts);
        out["command"] = "chainlen";
        out["dim"] = cl_dim;
        ordered_json bj = ordered_json::array();
        for (const auto& b : budgets) bj.push_back(to_string(b));
        out["budgets"] = bj;
        out["length"] = to_string(res.length);
        out["exact"] = res.exact;
    });

    // -- bound-A ----------------------------------------------------------------
    auto* cmd_ba =
        app.add_subcommand("bound-A", "iterated prolongation bound");
    int ba_n = 1;
    std::string ba_stubs, ba_table;
    bool ba_symbolic = false;
    cmd_ba->add_option("--n", ba_n, "dimension parameter")
        ->capture_default_str();
    cmd_ba->add_option("--stubs", ba_stubs, "doc, sum, unit, or zero");
    cmd_ba->add_option("--table", ba_table, "binding table file");
    cmd_ba->add_flag("--symbolic", ba_symbolic, "skip numeric evaluation");
    cmd_ba->callback([&] {
        out["command"] = "bound-A";
        out["n"] = ba_n;
        if (ba_symbolic || (ba_stubs.empty() && ba_table.empty())) {
            auto res = kolchin::pipeline_A(ba_n, nullptr, {});
            out["expr"] = kolchin::bound_expr_text(res.expr);
            return;
        }
        auto bindings = load_bindings(ba_stubs, ba_table);
        auto res = kolchin::pipeline_A(ba_n, &bindings, {});
        out["expr"] = kolchin::bound_expr_text(res.expr);
        out["value"] = to_string(*res.value);
        ordered_json its = ordered_json::array();
        for (const auto& v : res.iterates) its.push_back(to_string(v));
        out["iterates"] = its;
    });

    // -- bound-B ----------------------------------------------------------------
    auto* cmd_bb =
        app.add_subcommand("bound-B", "effective elimination bound");
    int bb_r = 1, bb_m = 1, bb_s = 1;
    std::string bb_stubs, bb_table;
    bool bb_symbolic = false;
    cmd_bb->add_option("--r", bb_r, "number of equations")
        ->capture_default_str();
    cmd_bb->add_option("--m", bb_m, "first substituted parameter")
        ->capture_default_str();
    cmd_bb->add_option("--s", bb_s, "order/degree parameter")
        ->capture_default_str();
    cmd_bb->add_option("--stubs", bb_stubs, "doc, sum, unit, or zero");
    cmd_bb->add_option("--table", bb_table, "binding table file");
    cmd_bb->add_flag("--symbolic", bb_symbolic, "skip numeric evaluation");
    cmd_bb->callback([&] {
        out["command"] = "bound-B";
        out["r"] = bb_r;
        out["m"] = bb_m;
        out["s"] = bb_s;
        if (bb_symbolic || (bb_stubs.empty() && bb_table.empty())) {
            auto res = kolchin::pipeline_B(bb_r, bb_m, bb_s, nullptr);
            out["expr"] = kolchin::bound_expr_text(res.expr);
            return;
        }
        auto bindings = load_bindings(bb_stubs, bb_table);
        auto res = kolchin::pipeline_B(bb_r, bb_m, bb_s, &bindings);
        out["expr"] = kolchin::bound_expr_text(res.expr);
        out["value"] = to_string(*res.value);
    });

    // -- wl ------------------------------------------------------------------------
    auto* cmd_wl =
        app.add_subcommand("wl", "chained-block system for a delay system");
    std::string wl_polys, wl_names;
    int wl_m = 1, wl_r = 1, wl_ell = 1;
    cmd_wl->add_option("--m", wl_m, "derivations")->capture_default_str();
    cmd_wl->add_option("--r", wl_r, "indeterminates")->capture_default_str();
    cmd_wl->add_option("--names", wl_names, "indeterminate names a,b,...");
    cmd_wl->add_option("--ell", wl_ell, "number of blocks")->required();
    cmd_wl->add_option("polys", wl_polys, "system f1; f2; ...")->required();
    cmd_wl->callback([&] {
        auto ring = make_delay_ring(wl_m, wl_r, wl_names);
        auto F = parse_dspolys(wl_polys, ring);
        auto wl = delay::wl_system(F, ring, wl_ell);
        out["command"] = "wl";
        out["ell"] = wl.ell;
        out["r"] = wl.r;
        out["h"] = wl.h;
        out["H"] = wl.H;
        out["gluing_count"] = wl.gluing_count();
        out["variables"] = wl.flat_ring.names;
        ordered_json eqs = ordered_json::array();
        for (const auto& f : wl.block_eqs)
            eqs.push_back(delay::dspoly_to_text(f, wl.flat_ring));
        out["block_equations"] = eqs;
        ordered_json glue = ordered_json::array();
        for (const auto& f : wl.gluing_eqs)
            glue.push_back(delay::dspoly_to_text(f, wl.flat_ring));
        out["gluing_equations"] = glue;
    });

    // -- verify-partial -------------------------------------------------------------
    auto* cmd_vp = app.add_subcommand("verify-partial",
                                      "check a partial solution pointwise");
    std::string vp_polys, vp_seqs, vp_values, vp_names;
    int vp_m = 1, vp_r = 1, vp_ell = 0;
    bool vp_strict = false;
    cmd_vp->add_option("--m", vp_m, "derivations")->capture_default_str();
    cmd_vp->add_option("--r", vp_r, "indeterminates")->capture_default_str();
    cmd_vp->add_option("--names", vp_names, "indeterminate names a,b,...");
    cmd_vp->add_option("--ell", vp_ell, "solution length")->required();
    cmd_vp
        ->add_option("--seqs", vp_seqs,
                     "value sequences, one per indeterminate: 1,2,4; 0,1,2")
        ->required();
    cmd_vp->add_option("--values", vp_values,
                       "tabulated derivative values: y[1;0]=3 y[1;1]=0");
    cmd_vp->add_flag("--strict", vp_strict,
                     "missing derivative values are errors, not zero");
    cmd_vp->add_option("polys", vp_polys, "system f1; f2; ...")->required();
    cmd_vp->callback([&] {
        auto ring = make_delay_ring(vp_m, vp_r, vp_names);
        auto F = parse_dspolys(vp_polys, ring);
        auto ctx = parse_context(vp_values, vp_strict, ring);
        std::vector<std::vector<BigRat>> seqs;
        for (const auto& piece : split_list(vp_seqs, ';'))
            seqs.push_back(parse_rats(piece));
        bool ok = delay::verify_partial(F, ring, seqs, vp_ell, ctx);
        int h = 0;
        for (const auto& f : F) h = std::max(h, f.max_sigma());
        out["command"] = "verify-partial";
        out["ell"] = vp_ell;
        out["h"] = h;
        ordered_json sj = ordered_json::array();
        for (const auto& seq : seqs) {
            ordered_json row = ordered_json::array();
            for (const auto& v : seq) row.push_back(to_string(v));
            sj.push_back(row);
        }
        out["sequences"] = sj;
        out["ok"] = ok;
    });

    // -- verify-triple ---------------------------------------------------------------
    auto* cmd_vt = app.add_subcommand("verify-triple",
                                      "check a chained block solution");
    std::string vt_polys, vt_points, vt_values, vt_names;
    int vt_m = 1, vt_r = 1;
    bool vt_strict = false;
    cmd_vt->add_option("--m", vt_m, "derivations")->capture_default_str();
    cmd_vt->add_option("--r", vt_r, "indeterminates")->capture_default_str();
    cmd_vt->add_option("--names", vt_names, "indeterminate names a,b,...");
    cmd_vt
        ->add_option("--points", vt_points,
                     "block vectors of length H: 1,2; 2,4")
        ->required();
    cmd_vt->add_option("--values", vt_values,
                       "tabulated derivative values: y[1;0]=3");
    cmd_vt->add_flag("--strict", vt_strict,
                     "missing derivative values are errors, not zero");
    cmd_vt->add_option("polys", vt_polys, "system f1; f2; ...")->required();
    cmd_vt->callback([&] {
        auto ring = make_delay_ring(vt_m, vt_r, vt_names);
        auto F = parse_dspolys(vt_polys, ring);
        auto ctx = parse_context(vt_values, vt_strict, ring);
        auto spec = delay::TripleSpec::make(F, ring);
        std::vector<std::vector<BigRat>> points;
        for (const auto& piece : split_list(vt_points, ';'))
            points.push_back(parse_rats(piece));
        bool ok = delay::verify_triple(points, spec, ctx);
        out["command"] = "verify-triple";
        out["r"] = spec.r;
        out["h"] = spec.h;
        out["H"] = spec.H;
        ordered_json pj = ordered_json::array();
        for (const auto& pt : points) {
            ordered_json row = ordered_json::array();
            for (const auto& v : pt) row.push_back(to_string(v));
            pj.push_back(row);
        }
        out["points"] = pj;
        out["ok"] = ok;
    });

    // Let --format and --threads appear after the subcommand name too.
    for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    emit(out, format);
    return 0;
}
