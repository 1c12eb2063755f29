#pragma once

#include <memory>
#include <string>
#include <vector>

#include "diffbound/diffalg.hpp"

namespace diffbound::diffalg {

// Strict total order on derivatives of indeterminates satisfying the ranking
// axioms: d(v) > v, and v > w implies d(v) > d(w) for every derivation d.
class Ranking {
public:
    virtual ~Ranking() = default;
    // strcmp convention; zero only on equal arguments
    virtual int compare(const DiffVar& a, const DiffVar& b) const = 0;
    virtual std::string describe() const = 0;

    bool less(const DiffVar& a, const DiffVar& b) const { return compare(a, b) < 0; }
};

using RankingPtr = std::shared_ptr<const Ranking>;

// Total order first, then the indeterminate priority list, then the
// multi-index in the given derivation priority order. Empty lists mean
// 1,2,...; entries are 1-based.
RankingPtr orderly_ranking(int m, int n, std::vector<int> var_priority = {},
                           std::vector<int> deriv_priority = {});

// Earlier blocks of indeterminates rank strictly above later ones; orderly
// comparison inside a block. Blocks hold 1-based indeterminate numbers and
// must partition 1..n.
RankingPtr elimination_ranking(int m, int n, std::vector<std::vector<int>> blocks,
                               std::vector<int> deriv_priority = {});

// Weight rows applied lexicographically to the vector (multi-index,
// indeterminate indicator); remaining ties fall back to the indeterminate
// priority list and then the raw multi-index. W must be (m+1) rows of
// (m+n) rationals. Construction checks the ranking condition by evaluating
// the first-order weight formula over the vector-space theory and throws
// when it fails.
RankingPtr matrix_ranking(int m, int n, std::vector<std::vector<BigRat>> weights,
                          std::vector<int> var_priority = {});

// That condition as a formula in the weight variables a1..a{(m+1)*(m+n)}
// (row major) over sort Q: each derivation's column image is
// lexicographically positive.
logic::FormulaPtr matrix_ranking_condition(int m, int n);

// Parses "orderly", "orderly;d=2,1;v=1,2", "elim;blocks=1|2",
// "matrix;w=1,1,0/0,1,0;v=1,2".
RankingPtr ranking_by_name(const std::string& spec, int m, int n);

}  // namespace diffbound::diffalg
