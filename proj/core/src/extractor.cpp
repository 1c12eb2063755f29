#include "diffbound/extractor.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <thread>

#include "diffbound/errors.hpp"
#include "diffbound/text.hpp"

namespace diffbound::extractor {

using namespace diffbound::logic;

namespace {

std::string prefix_text(const std::vector<bool>& prefix) {
    std::string s;
    for (bool b : prefix) s += b ? 'T' : 'F';
    return s;
}

FormulaPtr close(const FormulaPtr& f, bool universally) {
    FormulaPtr out = f;
    VarSet fv = free_vars(f);
    // Innermost binder gets the last name; order is irrelevant to decide.
    for (auto it = fv.rbegin(); it != fv.rend(); ++it)
        out = universally ? Formula::forall(it->first, it->second, out)
                          : Formula::exists(it->first, it->second, out);
    return out;
}

// Deterministic fan-out: results land by index, so the merge order never
// depends on scheduling.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& body) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::size_t width = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(width);
    for (std::size_t w = 0; w < width; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = next++; i < count; i = next++) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace

LevelSummary root_level() {
    return {0, Formula::tru(), Formula::tru(), std::nullopt};
}

std::pair<LevelSummary, std::vector<BranchNode>> build_level(
    const theory::Theory& th, const oracle::TotalAlgorithm& alg,
    const std::string& input, const LevelSummary& prev,
    const std::vector<BranchNode>& prev_branches, const ExtractionOptions& opts) {
    // Candidate prefixes: the two extensions of every queried branch; the
    // root expands to the single empty prefix.
    std::vector<BranchNode> nodes;
    if (prev.depth == 0) {
        nodes.push_back({{}, Formula::tru(), BranchNode::Status::Queried,
                         nullptr, 0});
    } else {
        for (const auto& parent : prev_branches) {
            if (parent.status != BranchNode::Status::Queried) continue;
            for (bool bit : {false, true}) {
                std::vector<bool> prefix = parent.prefix;
                prefix.push_back(bit);
                FormulaPtr pinned = bit ? prev.q : Formula::neg(prev.q);
                nodes.push_back({std::move(prefix),
                                 simplify(Formula::conj({parent.psi, pinned})),
                                 BranchNode::Status::Queried, nullptr, 0});
            }
        }
    }

    parallel_for(nodes.size(), opts.threads, [&](std::size_t i) {
        BranchNode& node = nodes[i];
        if (opts.prune_unsat && !th.decide(close(node.psi, false))) {
            node.status = BranchNode::Status::PrunedUnsat;
            return;
        }
        if (node.prefix.size() >= opts.run_limits.max_queries)
            throw Error("query limit exceeded while extending prefix " +
                        prefix_text(node.prefix));
        oracle::Step step = alg.resume(input, node.prefix);
        if (step.kind == oracle::Step::Kind::Query) {
            node.status = BranchNode::Status::Queried;
            node.query = step.query;
        } else {
            if (step.cost < step.output.size())
                throw Error(alg.id + " violated the cost contract on prefix " +
                            prefix_text(node.prefix));
            if (step.cost > opts.run_limits.max_cost)
                throw Error("cost limit exceeded on prefix " +
                            prefix_text(node.prefix));
            node.status = BranchNode::Status::Halted;
            node.cost = step.cost;
        }
    });

    LevelSummary level;
    level.depth = prev.depth + 1;
    std::vector<FormulaPtr> psi_parts, q_parts;
    std::uint64_t halted = 0;
    bool any_halted = false;
    for (const auto& node : nodes) {
        switch (node.status) {
            case BranchNode::Status::Queried:
                psi_parts.push_back(node.psi);
                q_parts.push_back(Formula::implies(node.psi, node.query));
                break;
            case BranchNode::Status::Halted:
                halted = opts.tight_max_mode ? std::max(halted, node.cost)
                                             : halted + node.cost;
                any_halted = true;
                break;
            case BranchNode::Status::PrunedUnsat:
                break;
        }
    }
    (void)any_halted;
    level.psi = psi_parts.empty() ? Formula::fls()
                                  : simplify(Formula::disj(std::move(psi_parts)));
    level.q = q_parts.empty() ? Formula::tru()
                              : simplify(Formula::conj(std::move(q_parts)));
    level.n_prev = prev.n_prev ? std::max(*prev.n_prev, halted) : halted;
    return {std::move(level), std::move(nodes)};
}

BoundResult extract_bound(const theory::Theory& th,
                          const oracle::TotalAlgorithm& alg,
                          const std::string& input,
                          const ExtractionOptions& opts) {
    LevelSummary level = root_level();
    std::vector<BranchNode> branches;
    std::vector<LevelSummary> kept;
    for (std::size_t depth = 0; depth <= opts.max_depth; ++depth) {
        auto [next, next_branches] =
            build_level(th, alg, input, level, branches, opts);
        if (opts.keep_levels) kept.push_back(next);
        FormulaPtr phi = simplify(Formula::neg(next.psi));
        if (th.decide(close(phi, true))) {
            BoundResult result{BoundResult::Status::Proven, *next.n_prev, depth,
                               phi, std::move(kept)};
            return result;
        }
        level = std::move(next);
        branches = std::move(next_branches);
    }
    return {BoundResult::Status::Undetermined, 0, opts.max_depth, nullptr,
            std::move(kept)};
}

BoundResult extract_bound_all_inputs(const theory::Theory& th,
                                     const oracle::TotalAlgorithm& alg,
                                     std::size_t max_len,
                                     const ExtractionOptions& opts) {
    if (alg.alphabet.empty() && max_len > 0)
        throw Error(alg.id + " has an empty alphabet; only length 0 works");
    std::vector<std::string> inputs{""};
    std::size_t start = 0;
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::size_t end = inputs.size();
        for (std::size_t i = start; i < end; ++i)
            for (char c : alg.alphabet) inputs.push_back(inputs[i] + c);
        start = end;
    }

    BoundResult best{BoundResult::Status::Proven, 0, 0, Formula::tru(), {}};
    std::vector<FormulaPtr> certificates;
    for (const auto& input : inputs) {
        BoundResult one = extract_bound(th, alg, input, opts);
        if (!one.proven()) return one;
        best.bound = std::max(best.bound, one.bound);
        best.depth = std::max(best.depth, one.depth);
        certificates.push_back(one.phi);
    }
    best.phi = simplify(Formula::conj(std::move(certificates)));
    return best;
}

}  // namespace diffbound::extractor
