#include "diffbound/oracle.hpp"

#include <sstream>

#include "diffbound/errors.hpp"
#include "diffbound/text.hpp"

namespace diffbound::oracle {

using namespace diffbound::logic;

std::function<Step(const std::string&, const std::vector<bool>&)>
resumable(std::function<Step(const std::string&, OracleTape&)> body) {
    return [body = std::move(body)](const std::string& input,
                                    const std::vector<bool>& responses) -> Step {
        OracleTape tape(responses);
        try {
            return body(input, tape);
        } catch (QuerySignal& s) {
            return Step::ask(std::move(s.query));
        }
    };
}

ModelOracle::ModelOracle(theory::Theory th,
                         const std::vector<std::pair<std::string, Sort>>& vars,
                         const std::vector<BigRat>& values)
    : theory_(std::move(th)) {
    if (vars.size() != values.size())
        throw Error("model oracle: " + std::to_string(values.size()) +
                    " values for " + std::to_string(vars.size()) + " variables");
    for (std::size_t i = 0; i < vars.size(); ++i)
        point_[vars[i].first] = values[i];
}

namespace {

void check_input(const TotalAlgorithm& alg, const std::string& input) {
    for (char c : input)
        if (alg.alphabet.find(c) == std::string::npos)
            throw Error("input character '" + std::string(1, c) +
                        "' outside the alphabet of " + alg.id);
}

void check_halt(const TotalAlgorithm& alg, const Step& step) {
    if (step.cost < step.output.size())
        throw Error(alg.id + " violated the cost contract: cost " +
                    std::to_string(step.cost) + " < output length " +
                    std::to_string(step.output.size()));
}

}  // namespace

Trace run(const TotalAlgorithm& alg, const std::string& input,
          EvaluationOracle& oracle, const RunLimits& limits) {
    check_input(alg, input);
    Trace trace;
    for (;;) {
        Step step = alg.resume(input, trace.responses);
        if (step.kind == Step::Kind::Halt) {
            check_halt(alg, step);
            if (step.cost > limits.max_cost) {
                trace.limit_reason = "cost limit exceeded";
                return trace;
            }
            trace.output = std::move(step.output);
            trace.cost = step.cost;
            trace.halted = true;
            return trace;
        }
        if (trace.queries.size() >= limits.max_queries) {
            trace.limit_reason = "query limit exceeded";
            return trace;
        }
        trace.queries.push_back(step.query);
        trace.responses.push_back(oracle.answer(step.query));
    }
}

std::unique_ptr<EvaluationOracle> parse_oracle_spec(const std::string& spec,
                                                    const TotalAlgorithm& alg) {
    auto colon = spec.find(':');
    std::string kind = spec.substr(0, colon == std::string::npos ? spec.size() : colon);
    if (kind == "script") {
        std::vector<bool> prefix;
        if (colon != std::string::npos)
            for (char c : spec.substr(colon + 1)) {
                if (c == 'T' || c == 't') prefix.push_back(true);
                else if (c == 'F' || c == 'f') prefix.push_back(false);
                else throw Error("scripted oracle wants T/F characters, got '" +
                                 std::string(1, c) + "'");
            }
        return std::make_unique<ScriptedOracle>(std::move(prefix));
    }
    if (kind == "model") {
        if (colon == std::string::npos)
            throw Error("model oracle spec: model:THEORY:v1,v2,...");
        auto colon2 = spec.find(':', colon + 1);
        std::string theory_name = spec.substr(
            colon + 1, colon2 == std::string::npos ? std::string::npos
                                                   : colon2 - colon - 1);
        std::vector<BigRat> values;
        if (colon2 != std::string::npos) {
            std::stringstream ss(spec.substr(colon2 + 1));
            std::string item;
            while (std::getline(ss, item, ','))
                values.push_back(parse_rational(item));
        }
        theory::Theory th = theory::Theory::by_name(theory_name);
        return std::make_unique<ModelOracle>(std::move(th), alg.oracle_vars,
                                             values);
    }
    throw Error("unknown oracle spec kind: " + kind);
}

}  // namespace diffbound::oracle
