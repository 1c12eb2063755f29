#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "diffbound/logic.hpp"
#include "diffbound/oracle.hpp"
#include "diffbound/theory.hpp"

namespace diffbound::extractor {

// One response prefix in the query tree at a given level, together with the
// formula describing the oracle parameters that realize it.
struct BranchNode {
    std::vector<bool> prefix;
    logic::FormulaPtr psi;
    enum class Status { PrunedUnsat, Queried, Halted };
    Status status;
    logic::FormulaPtr query;  // Queried
    std::uint64_t cost = 0;   // Halted
};

// Aggregates of level s: psi holds at a point iff the algorithm run against
// that point performs at least s queries; q gives the s-th response wherever
// psi holds; n_prev is the running cost bound over all halted branches so
// far (empty only at depth 0, standing in for "minus infinity").
struct LevelSummary {
    std::size_t depth = 0;
    logic::FormulaPtr psi;
    logic::FormulaPtr q;
    std::optional<std::uint64_t> n_prev;
};

struct ExtractionOptions {
    std::size_t max_depth = 32;
    bool prune_unsat = true;
    // The cost recursion sums halted branches per level by default; this
    // replaces the sum with a max, which is tighter but departs from the
    // construction being reproduced.
    bool tight_max_mode = false;
    oracle::RunLimits run_limits;
    int threads = 1;
    bool keep_levels = false;
};

struct BoundResult {
    enum class Status { Proven, Undetermined };
    Status status;
    std::uint64_t bound = 0;   // Proven: uniform cost bound N
    std::size_t depth = 0;     // Proven: query-count bound; else depth reached
    logic::FormulaPtr phi;     // Proven: the certificate, valid everywhere
    std::vector<LevelSummary> levels;  // populated when keep_levels

    bool proven() const { return status == Status::Proven; }
};

LevelSummary root_level();

// Expands every satisfiable one-bit extension of the previous level's
// Queried branches, replaying the algorithm under each scripted prefix.
std::pair<LevelSummary, std::vector<BranchNode>> build_level(
    const theory::Theory& th, const oracle::TotalAlgorithm& alg,
    const std::string& input, const LevelSummary& prev,
    const std::vector<BranchNode>& prev_branches,
    const ExtractionOptions& opts = {});

// Iterative deepening until some level's psi is refutable everywhere; the
// cost accumulated by then bounds every model-oracle run of alg on input.
BoundResult extract_bound(const theory::Theory& th,
                          const oracle::TotalAlgorithm& alg,
                          const std::string& input,
                          const ExtractionOptions& opts = {});

// Bound uniform over every input of length <= max_len: the pointwise maximum
// of per-input bounds, Undetermined as soon as any input is.
BoundResult extract_bound_all_inputs(const theory::Theory& th,
                                     const oracle::TotalAlgorithm& alg,
                                     std::size_t max_len,
                                     const ExtractionOptions& opts = {});

}  // namespace diffbound::extractor
