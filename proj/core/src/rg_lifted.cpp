#include "diffbound/rg_lifted.hpp"

#include <algorithm>
#include <map>

#include "diffbound/errors.hpp"
#include "diffbound/poly_text.hpp"
#include "diffbound/ranking.hpp"
#include "diffbound/rg.hpp"
#include "diffbound/text.hpp"

namespace diffbound::rg {

using namespace diffbound::diffalg;
using logic::Formula;
using logic::Term;
using logic::TermKind;
using logic::TermPtr;

namespace {

bool is_derivation_name(const std::string& name) {
    return name.size() >= 2 && name[0] == 'd' &&
           std::all_of(name.begin() + 1, name.end(),
                       [](char c) { return c >= '0' && c <= '9'; });
}

// Ground field whose zero tests are oracle queries "(= c 0)". Derivations
// apply formally: they distribute over + and * down to the variables and
// stack there in sorted order, so mixed derivations of one coefficient
// always print, memoize, and query identically.
class OracleCoeffs final : public CoeffField {
public:
    explicit OracleCoeffs(oracle::OracleTape& tape) : tape_(tape) {}

    bool is_zero(const TermPtr& c) override {
        if (auto v = logic::eval_ground_term(c)) return *v == 0;
        std::string key = text::print_term(c);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        bool z = tape_.ask(Formula::eq(c, Term::rat(0, c->sort())));
        memo_.emplace(std::move(key), z);
        return z;
    }

    TermPtr derive(const TermPtr& c, int k) override {
        switch (c->kind()) {
            case TermKind::Rat:
                return Term::rat(0, c->sort());
            case TermKind::Var:
                return stack(c, k);
            case TermKind::Apply: {
                const std::string& op = c->name();
                const auto& args = c->args();
                if (op == "+") {
                    std::vector<TermPtr> parts;
                    for (const auto& a : args) parts.push_back(derive(a, k));
                    return logic::t_add(std::move(parts));
                }
                if (op == "-" && args.size() == 1)
                    return logic::t_neg(derive(args[0], k));
                if (op == "-" && args.size() == 2)
                    return logic::t_sub(derive(args[0], k), derive(args[1], k));
                if (op == "*") {
                    std::vector<TermPtr> sum;
                    for (std::size_t i = 0; i < args.size(); ++i) {
                        std::vector<TermPtr> prod = args;
                        prod[i] = derive(args[i], k);
                        sum.push_back(logic::t_mul(std::move(prod)));
                    }
                    return logic::t_add(std::move(sum));
                }
                if (is_derivation_name(op)) return stack(c, k);
                throw Error("cannot derive coefficient operator " + op);
            }
        }
        throw Error("cannot derive coefficient term");
    }

private:
    // rebuilds d-chains over a variable with indices ascending inward, so
    // dj(di(x)) and di(dj(x)) coincide
    static TermPtr stack(const TermPtr& c, int k) {
        std::vector<int> chain{k + 1};
        TermPtr base = c;
        while (base->kind() == TermKind::Apply) {
            chain.push_back(std::stoi(base->name().substr(1)));
            base = base->args()[0];
        }
        std::sort(chain.begin(), chain.end());
        TermPtr out = base;
        for (int j : chain)
            out = Term::apply("d" + std::to_string(j), {out}, base->sort());
        return out;
    }

    oracle::OracleTape& tape_;
    std::map<std::string, bool> memo_;
};

// Ranking whose weight matrix lives behind the oracle as variables
// a1..a{(m+1)(m+n)}: each row's sign on the difference vector is resolved
// by at most two order queries over sort Q.
class OracleRanking final : public Ranking {
public:
    OracleRanking(int m, int n, oracle::OracleTape& tape)
        : m_(m), n_(n), tape_(tape) {}

    int compare(const DiffVar& a, const DiffVar& b) const override {
        if (a == b) return 0;
        // canonical orientation keeps compare(a,b) == -compare(b,a) no
        // matter what the oracle answers
        if (b < a) return -compare(b, a);
        std::vector<int> u(static_cast<std::size_t>(m_ + n_), 0);
        for (int k = 0; k < m_; ++k)
            u[static_cast<std::size_t>(k)] =
                a.theta.idx[static_cast<std::size_t>(k)] -
                b.theta.idx[static_cast<std::size_t>(k)];
        u[static_cast<std::size_t>(m_ + a.var)] += 1;
        u[static_cast<std::size_t>(m_ + b.var)] -= 1;
        for (int r = 0; r <= m_; ++r) {
            std::vector<TermPtr> parts;
            for (int c = 0; c < m_ + n_; ++c) {
                int uc = u[static_cast<std::size_t>(c)];
                if (uc == 0) continue;
                parts.push_back(logic::t_mul(
                    {Term::rat(uc, "Q"),
                     Term::var("a" + std::to_string(r * (m_ + n_) + c + 1),
                               "Q")}));
            }
            if (parts.empty()) continue;
            if (int sg = row_sign(logic::t_add(std::move(parts)))) return sg;
        }
        if (a.var != b.var) return a.var < b.var ? 1 : -1;
        return a.theta.idx < b.theta.idx ? -1 : 1;
    }

    std::string describe() const override { return "oracle-matrix"; }

private:
    int row_sign(TermPtr s) const {
        std::string key = text::print_term(s);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        TermPtr zero = Term::rat(0, "Q");
        int sg = 0;
        if (tape_.ask(Formula::less(zero, s)))
            sg = 1;
        else if (tape_.ask(Formula::less(s, zero)))
            sg = -1;
        memo_.emplace(std::move(key), sg);
        return sg;
    }

    int m_, n_;
    oracle::OracleTape& tape_;
    mutable std::map<std::string, int> memo_;
};

oracle::Step halt_with(const std::string& out, const oracle::OracleTape& tape,
                       std::size_t steps) {
    return oracle::Step::halt(out, tape.asked() + steps + out.size());
}

}  // namespace

oracle::TotalAlgorithm lifted_algorithm(int m, int n, int l) {
    if (m < 1 || n < 1 || l < 0)
        throw Error("lifted decomposition wants m >= 1, n >= 1, l >= 0");

    oracle::TotalAlgorithm alg;
    alg.id = "rg_lifted(" + std::to_string(m) + "," + std::to_string(n) + "," +
             std::to_string(l) + ")";
    alg.alphabet = "plqu";
    for (int i = 1; i <= l; ++i)
        alg.oracle_vars.emplace_back("x" + std::to_string(i), "F");
    for (int i = 1; i <= (m + 1) * (m + n); ++i)
        alg.oracle_vars.emplace_back("a" + std::to_string(i), "Q");

    alg.resume = oracle::resumable([m, n, l](const std::string& input,
                                             oracle::OracleTape& tape) {
        if (!tape.ask(matrix_ranking_condition(m, n)))
            return halt_with("R", tape, 0);

        DiffRing ring{m, n, {}, "F"};
        DiffVar y{Derivative::zero(m), 0};
        DiffVar y1{Derivative::unit(m, 0), 0};
        auto coeff = [&](int i) {
            return DiffPoly::coefficient(Term::var("x" + std::to_string(i), "F"));
        };

        std::vector<DiffPoly> eqs;
        for (char ch : input) {
            switch (ch) {
                case 'p':
                    eqs.push_back(DiffPoly::variable(y1, ring).pow(2).minus(
                        DiffPoly::variable(y, ring).scaled(4)));
                    break;
                case 'l':
                    if (l < 1) return halt_with("E", tape, 0);
                    eqs.push_back(coeff(1)
                                      .times(DiffPoly::variable(y1, ring))
                                      .minus(DiffPoly::variable(y, ring)));
                    break;
                case 'q':
                    if (l < 2) return halt_with("E", tape, 0);
                    eqs.push_back(
                        coeff(2)
                            .times(DiffPoly::variable(y1, ring))
                            .minus(coeff(1).times(DiffPoly::variable(y, ring))));
                    break;
                case 'u': {
                    if (m < 2) return halt_with("E", tape, 0);
                    eqs.push_back(DiffPoly::variable(y1, ring));
                    eqs.push_back(DiffPoly::variable(
                        DiffVar{Derivative::unit(m, 1), 0}, ring));
                    break;
                }
                default:
                    return halt_with("E", tape, 0);
            }
        }

        OracleCoeffs field(tape);
        auto ranking = std::make_shared<OracleRanking>(m, n, tape);
        RGOptions opts;
        opts.max_steps = 2000;
        RGResult rg;
        try {
            rg = rosenfeld_groebner(std::move(eqs), {}, ranking, ring, field,
                                    opts);
        } catch (const oracle::QuerySignal&) {
            throw;
        } catch (const Error&) {
            // adversarial answer set with no model behind it; still halt
            return halt_with("E", tape, 0);
        }
        if (rg.capped()) return halt_with("C", tape, rg.steps);

        std::string out = std::to_string(rg.components.size());
        for (const auto& comp : rg.components) {
            out += ':';
            bool first = true;
            for (const auto& g : comp.chain) {
                auto li = lead_of(g, *ranking, field);
                if (!first) out += ',';
                first = false;
                out += li ? poly_text::var_text(li->leader, ring) : "1";
            }
        }
        return halt_with(out, tape, rg.steps);
    });
    return alg;
}

}  // namespace diffbound::rg
