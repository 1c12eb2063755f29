#pragma once

#include <optional>
#include <vector>

#include "diffbound/diffalg.hpp"
#include "diffbound/ranking.hpp"

namespace diffbound::diffalg {

// Leader and its degree. Zero tests go through the CoeffField, so a term
// whose coefficient merely looks symbolic but vanishes in the field never
// contributes a leader.
struct LeadInfo {
    DiffVar leader;
    int deg = 0;
};

bool poly_nonzero(const DiffPoly& p, CoeffField& field);

// Copy of p without the terms whose coefficient the field reports zero.
DiffPoly semantic_prune(const DiffPoly& p, const DiffRing& ring,
                        CoeffField& field);

// Highest power of v with a nonvanishing coefficient, 0 when v is absent.
int semantic_deg(const DiffPoly& p, const DiffVar& v, CoeffField& field);

// Empty for zero and for ground elements.
std::optional<LeadInfo> lead_of(const DiffPoly& p, const Ranking& ranking,
                                CoeffField& field);

DiffPoly initial_of(const DiffPoly& p, const Ranking& ranking,
                    CoeffField& field);
// Formal derivative with respect to the leader.
DiffPoly separant_of(const DiffPoly& p, const Ranking& ranking,
                     const DiffRing& ring, CoeffField& field);

// Compares (leader, degree) pairs; ground elements rank below everything.
int rank_compare(const DiffPoly& a, const DiffPoly& b, const Ranking& ranking,
                 CoeffField& field);

// Compares two finite sets elementwise after sorting each by rank. The
// first strict difference decides; when one sorted list is a prefix of the
// other, the longer set is the lower one.
int set_rank_compare(const std::vector<DiffPoly>& a,
                     const std::vector<DiffPoly>& b, const Ranking& ranking,
                     CoeffField& field);

// p has no proper derivative of g's leader and carries the leader itself
// only below g's degree. Ground g reduces nothing.
bool is_reduced(const DiffPoly& p, const DiffPoly& g, const Ranking& ranking,
                CoeffField& field);
bool is_reduced_all(const DiffPoly& p, const std::vector<DiffPoly>& chain,
                    const Ranking& ranking, CoeffField& field);

struct ReductionStep {
    DiffPoly multiplier;
    Derivative theta;
    std::size_t element = 0;
};

// Certificate of one full reduction:
//   h * p  =  sum_k multiplier_k * theta_k(chain[element_k])  +  remainder
// with h a product of initials and separants of chain elements.
struct ReductionRecord {
    DiffPoly h;
    std::vector<ReductionStep> steps;
    DiffPoly remainder;
};

// Ritt reduction of p modulo the chain: removes proper derivatives of the
// leaders first, then lowers leader degrees by pseudo-division. The
// remainder is reduced with respect to every chain element.
ReductionRecord full_reduce(const DiffPoly& p,
                            const std::vector<DiffPoly>& chain,
                            const Ranking& ranking, const DiffRing& ring,
                            CoeffField& field);

// Largest subset kept pairwise reduced: repeatedly sorts by rank, keeps a
// greedy reduced chain, reduces the rest against it and reinserts nonzero
// remainders until the pass changes nothing.
std::vector<DiffPoly> autoreduce(std::vector<DiffPoly> elems,
                                 const Ranking& ranking, const DiffRing& ring,
                                 CoeffField& field);

}  // namespace diffbound::diffalg
