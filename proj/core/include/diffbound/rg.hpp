#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "diffbound/reduction.hpp"

namespace diffbound::diffalg {

// One regular component of a decomposition: an autoreduced chain in
// ascending rank together with the nonconstant initials and separants whose
// nonvanishing the component assumes.
struct CharSystem {
    std::vector<DiffPoly> chain;
    std::vector<DiffPoly> ineqs;
    // split history from the root, main 0 / initial 1 / separant 2;
    // components come back sorted by this
    std::vector<int> path;
};

struct RGOptions {
    std::size_t max_steps = 100000;
    // skip delta pairs whose leader derivatives have disjoint support
    bool coprime_skip = false;
};

struct RGResult {
    enum class Status { Done, CapExceeded };
    Status status = Status::Done;
    std::vector<CharSystem> components;
    std::size_t steps = 0;

    bool capped() const { return status == Status::CapExceeded; }
};

// Cross-derivative compatibility condition of two elements whose leaders
// derive the same indeterminate.
DiffPoly delta_poly(const DiffPoly& f, const DiffPoly& g,
                    const Ranking& ranking, const DiffRing& ring,
                    CoeffField& field);

// Splits eqs = 0, ineqs != 0 into regular components. Inconsistent branches
// are dropped; an empty component list means the system has no solutions.
RGResult rosenfeld_groebner(std::vector<DiffPoly> eqs,
                            std::vector<DiffPoly> ineqs,
                            const RankingPtr& ranking, const DiffRing& ring,
                            CoeffField& field, const RGOptions& opts = {});

// f vanishes on every solution of the decomposition, i.e. its full
// reduction modulo each component's chain is zero.
bool member_radical(const DiffPoly& f, const std::vector<CharSystem>& systems,
                    const Ranking& ranking, const DiffRing& ring,
                    CoeffField& field);

}  // namespace diffbound::diffalg
