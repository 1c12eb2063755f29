#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "diffbound/logic.hpp"
#include "diffbound/theory.hpp"

namespace diffbound::oracle {

// One transition result: either the next query to the oracle or the final
// answer with its abstract cost (query = one unit minimum; each builtin
// documents its own accounting). Cost covers output length by contract.
struct Step {
    enum class Kind { Query, Halt };
    Kind kind;
    logic::FormulaPtr query;  // Kind::Query
    std::string output;       // Kind::Halt
    std::uint64_t cost = 0;   // Kind::Halt

    static Step ask(logic::FormulaPtr q) {
        return {Kind::Query, std::move(q), {}, 0};
    }
    static Step halt(std::string output, std::uint64_t cost) {
        return {Kind::Halt, nullptr, std::move(output), cost};
    }
};

// A deterministic program that interacts with an evaluation oracle.
// resume(input, responses) replays the whole computation under the given
// response prefix and returns the first unanswered query, or the halt if the
// run finishes first. Purity of resume is the determinism contract: whether
// an s-th query happens is a function of the first s-1 responses alone.
struct TotalAlgorithm {
    std::string id;
    std::string alphabet;  // admissible input characters; "" = empty input only
    // The oracle parameter tuple x_1..x_l: every query's free variables come
    // from this list. Sorts tie the algorithm to compatible theories.
    std::vector<std::pair<std::string, logic::Sort>> oracle_vars;
    std::function<Step(const std::string& input,
                       const std::vector<bool>& responses)> resume;

    std::size_t arity() const { return oracle_vars.size(); }
};

// Helper for writing resume bodies in direct style: ask() pops the next
// recorded response, or aborts the replay by throwing the pending query.
struct QuerySignal {
    logic::FormulaPtr query;
};

class OracleTape {
public:
    explicit OracleTape(const std::vector<bool>& responses)
        : responses_(responses) {}

    bool ask(logic::FormulaPtr q) {
        if (next_ == responses_.size()) throw QuerySignal{std::move(q)};
        return responses_[next_++];
    }
    std::size_t asked() const { return next_; }

private:
    const std::vector<bool>& responses_;
    std::size_t next_ = 0;
};

// Wraps an algorithm body written against OracleTape into a resume function.
std::function<Step(const std::string&, const std::vector<bool>&)>
resumable(std::function<Step(const std::string&, OracleTape&)> body);

// ---------------------------------------------------------------------------
// Evaluation oracles
// ---------------------------------------------------------------------------

class EvaluationOracle {
public:
    virtual ~EvaluationOracle() = default;
    virtual bool answer(const logic::FormulaPtr& query) = 0;
};

// Answers by evaluating the query at a fixed rational point of the theory's
// standard model. Point entries bind the named variables.
class ModelOracle final : public EvaluationOracle {
public:
    ModelOracle(theory::Theory th, std::map<std::string, BigRat> point)
        : theory_(std::move(th)), point_(std::move(point)) {}
    ModelOracle(theory::Theory th,
                const std::vector<std::pair<std::string, logic::Sort>>& vars,
                const std::vector<BigRat>& values);

    bool answer(const logic::FormulaPtr& query) override {
        return theory_.model_eval(query, point_);
    }
    const std::map<std::string, BigRat>& point() const { return point_; }

private:
    theory::Theory theory_;
    std::map<std::string, BigRat> point_;
};

// Plays back a fixed response prefix, then answers True forever.
class ScriptedOracle final : public EvaluationOracle {
public:
    explicit ScriptedOracle(std::vector<bool> prefix)
        : prefix_(std::move(prefix)) {}

    bool answer(const logic::FormulaPtr&) override {
        return served_ < prefix_.size() ? prefix_[served_++] : true;
    }

private:
    std::vector<bool> prefix_;
    std::size_t served_ = 0;
};

// Pass-through that counts answered queries.
class CountingOracle final : public EvaluationOracle {
public:
    explicit CountingOracle(EvaluationOracle& inner) : inner_(inner) {}

    bool answer(const logic::FormulaPtr& query) override {
        ++count_;
        return inner_.answer(query);
    }
    std::size_t count() const { return count_; }

private:
    EvaluationOracle& inner_;
    std::size_t count_ = 0;
};

// ---------------------------------------------------------------------------
// Running
// ---------------------------------------------------------------------------

struct RunLimits {
    std::size_t max_queries = 1 << 16;
    std::uint64_t max_cost = std::numeric_limits<std::uint64_t>::max();
};

// Full record of one run. A trace with halted=false is a limit report, not an
// error: the caller distinguishes budget exhaustion from malfunction.
struct Trace {
    std::vector<logic::FormulaPtr> queries;
    std::vector<bool> responses;
    std::string output;
    std::uint64_t cost = 0;
    bool halted = false;
    std::string limit_reason;  // set iff !halted

    std::size_t query_count() const { return queries.size(); }
};

// Drives alg against the oracle until it halts or a limit trips. Throws on
// inputs outside the alphabet and on cost-contract violations.
Trace run(const TotalAlgorithm& alg, const std::string& input,
          EvaluationOracle& oracle, const RunLimits& limits = {});

// ---------------------------------------------------------------------------
// Builtin algorithm library
// ---------------------------------------------------------------------------

// Parses "first_nonzero(3)", "gauss_rank(2)", "quad_roots",
// "first_nonzero_input", "rg_lifted(1,1,2)". Throws on unknown names.
TotalAlgorithm builtin(const std::string& spec);
std::vector<std::string> builtin_names();

// Oracle spec grammar: "model:THEORY:a1,a2,..." (values bind alg's oracle
// variables in order) or "script:TTFT" (prefix, then True).
std::unique_ptr<EvaluationOracle> parse_oracle_spec(const std::string& spec,
                                                    const TotalAlgorithm& alg);

}  // namespace diffbound::oracle
