#include "diffbound/rg.hpp"

#include <algorithm>

#include "diffbound/errors.hpp"

namespace diffbound::diffalg {

namespace {

struct Item {
    std::vector<DiffPoly> eqs;
    std::vector<DiffPoly> ineqs;
    std::vector<DiffPoly> chain;
    std::vector<std::pair<DiffPoly, DiffPoly>> pairs;
    std::vector<int> path;
};

bool disjoint_support(const Derivative& a, const Derivative& b) {
    for (std::size_t k = 0; k < a.idx.size(); ++k)
        if (a.idx[k] > 0 && b.idx[k] > 0) return false;
    return true;
}

}  // namespace

DiffPoly delta_poly(const DiffPoly& f, const DiffPoly& g,
                    const Ranking& ranking, const DiffRing& ring,
                    CoeffField& field) {
    auto lf = lead_of(f, ranking, field);
    auto lg = lead_of(g, ranking, field);
    if (!lf || !lg || lf->leader.var != lg->leader.var)
        throw Error("delta pair needs leaders of one indeterminate");
    Derivative top = Derivative::lcm(lf->leader.theta, lg->leader.theta);
    DiffPoly df = f.derive(top.minus(lf->leader.theta), ring, field);
    DiffPoly dg = g.derive(top.minus(lg->leader.theta), ring, field);
    DiffPoly sf = separant_of(f, ranking, ring, field);
    DiffPoly sg = separant_of(g, ranking, ring, field);
    return sg.times(df).minus(sf.times(dg));
}

RGResult rosenfeld_groebner(std::vector<DiffPoly> eqs,
                            std::vector<DiffPoly> ineqs,
                            const RankingPtr& ranking, const DiffRing& ring,
                            CoeffField& field, const RGOptions& opts) {
    const Ranking& rk = *ranking;
    RGResult res;
    std::vector<Item> work;
    work.push_back(Item{std::move(eqs), std::move(ineqs), {}, {}, {}});

    auto rank_less = [&](const DiffPoly& a, const DiffPoly& b) {
        int c = rank_compare(a, b, rk, field);
        return c != 0 ? c < 0 : a < b;
    };

    while (!work.empty()) {
        if (res.steps >= opts.max_steps) {
            res.status = RGResult::Status::CapExceeded;
            return res;
        }
        ++res.steps;
        Item it = std::move(work.back());
        work.pop_back();

        if (!it.eqs.empty()) {
            auto pick = std::min_element(it.eqs.begin(), it.eqs.end(), rank_less);
            DiffPoly e = *pick;
            it.eqs.erase(pick);

            DiffPoly r = semantic_prune(
                full_reduce(e, it.chain, rk, ring, field).remainder, ring,
                field);
            if (r.is_syntactic_zero()) {
                work.push_back(std::move(it));
                continue;
            }
            if (r.support_vars().empty()) continue;  // nonzero constant

            auto li = lead_of(r, rk, field);
            DiffPoly init =
                semantic_prune(initial_of(r, rk, field), ring, field);
            bool split_init = !init.support_vars().empty();
            bool split_sep = li->deg > 1;

            if (split_init) {
                // the vanishing-initial case restarts with the rest of r
                Item side;
                side.eqs = it.eqs;
                side.eqs.insert(side.eqs.end(), it.chain.begin(),
                                it.chain.end());
                side.eqs.push_back(init);
                side.eqs.push_back(r.minus(init.times(
                    DiffPoly::variable(li->leader, ring).pow(li->deg))));
                side.ineqs = it.ineqs;
                side.path = it.path;
                side.path.push_back(1);
                work.push_back(std::move(side));
            }
            if (split_sep) {
                DiffPoly sep = separant_of(r, rk, ring, field);
                Item side;
                side.eqs = it.eqs;
                side.eqs.insert(side.eqs.end(), it.chain.begin(),
                                it.chain.end());
                side.eqs.push_back(r);
                side.eqs.push_back(sep);
                side.ineqs = it.ineqs;
                side.path = it.path;
                side.path.push_back(2);
                work.push_back(std::move(side));
                it.ineqs.push_back(sep);
            }
            if (split_init) it.ineqs.push_back(init);
            if (split_init || split_sep) it.path.push_back(0);

            DiffPoly rp = r.primitive();
            std::vector<DiffPoly> kept;
            for (auto& g : it.chain) {
                if (is_reduced(g, rp, rk, field))
                    kept.push_back(std::move(g));
                else
                    it.eqs.push_back(std::move(g));
            }
            auto lr = lead_of(rp, rk, field);
            for (const auto& g : kept) {
                auto lg = lead_of(g, rk, field);
                if (lg && lg->leader.var == lr->leader.var &&
                    !lg->leader.theta.divides(lr->leader.theta) &&
                    !lr->leader.theta.divides(lg->leader.theta))
                    it.pairs.emplace_back(g, rp);
            }
            kept.push_back(std::move(rp));
            it.chain = std::move(kept);
            work.push_back(std::move(it));
            continue;
        }

        if (!it.pairs.empty()) {
            auto pr = it.pairs.front();
            it.pairs.erase(it.pairs.begin());
            auto lf = lead_of(pr.first, rk, field);
            auto lg = lead_of(pr.second, rk, field);
            bool skip = opts.coprime_skip && lf && lg &&
                        disjoint_support(lf->leader.theta, lg->leader.theta);
            if (!skip) {
                DiffPoly d = delta_poly(pr.first, pr.second, rk, ring, field);
                DiffPoly rem = semantic_prune(
                    full_reduce(d, it.chain, rk, ring, field).remainder, ring,
                    field);
                if (!rem.is_syntactic_zero()) it.eqs.push_back(rem);
            }
            work.push_back(std::move(it));
            continue;
        }

        // completion: the accumulated inequations must stay nonzero
        bool consistent = true;
        for (const auto& q : it.ineqs) {
            DiffPoly rem = full_reduce(q, it.chain, rk, ring, field).remainder;
            if (!poly_nonzero(rem, field)) {
                consistent = false;
                break;
            }
        }
        if (!consistent) continue;

        CharSystem cs;
        cs.chain = it.chain;
        // selection sort: stays well defined under comparator-breaking
        // oracle answers, and chains are short
        for (std::size_t i = 0; i + 1 < cs.chain.size(); ++i)
            std::iter_swap(cs.chain.begin() + static_cast<std::ptrdiff_t>(i),
                           std::min_element(cs.chain.begin() +
                                                static_cast<std::ptrdiff_t>(i),
                                            cs.chain.end(), rank_less));
        for (const auto& g : cs.chain) {
            for (DiffPoly h : {initial_of(g, rk, field),
                               separant_of(g, rk, ring, field)}) {
                h = semantic_prune(h, ring, field);
                if (h.support_vars().empty()) continue;
                cs.ineqs.push_back(h.primitive());
            }
        }
        std::sort(cs.ineqs.begin(), cs.ineqs.end());
        cs.ineqs.erase(std::unique(cs.ineqs.begin(), cs.ineqs.end()),
                       cs.ineqs.end());
        cs.path = it.path;
        res.components.push_back(std::move(cs));
    }

    std::sort(res.components.begin(), res.components.end(),
              [](const CharSystem& a, const CharSystem& b) {
                  return a.path < b.path;
              });
    return res;
}

bool member_radical(const DiffPoly& f, const std::vector<CharSystem>& systems,
                    const Ranking& ranking, const DiffRing& ring,
                    CoeffField& field) {
    for (const auto& cs : systems) {
        DiffPoly rem =
            full_reduce(f, cs.chain, ranking, ring, field).remainder;
        if (poly_nonzero(rem, field)) return false;
    }
    return true;
}

}  // namespace diffbound::diffalg
