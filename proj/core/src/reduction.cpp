#include "diffbound/reduction.hpp"

#include <algorithm>

#include "diffbound/errors.hpp"

namespace diffbound::diffalg {

bool poly_nonzero(const DiffPoly& p, CoeffField& field) {
    for (const auto& [mono, c] : p.coeffs())
        if (!field.is_zero(c)) return true;
    return false;
}

DiffPoly semantic_prune(const DiffPoly& p, const DiffRing& ring,
                        CoeffField& field) {
    DiffPoly out;
    for (const auto& [mono, c] : p.coeffs()) {
        if (field.is_zero(c)) continue;
        DiffPoly t = DiffPoly::coefficient(c);
        for (const auto& [v, e] : mono.exp)
            t = t.times(DiffPoly::variable(v, ring).pow(e));
        out = out.plus(t);
    }
    return out;
}

int semantic_deg(const DiffPoly& p, const DiffVar& v, CoeffField& field) {
    auto cs = p.coeffs_in(v);
    for (int e = static_cast<int>(cs.size()) - 1; e >= 1; --e)
        if (poly_nonzero(cs[static_cast<std::size_t>(e)], field)) return e;
    return 0;
}

std::optional<LeadInfo> lead_of(const DiffPoly& p, const Ranking& ranking,
                                CoeffField& field) {
    // max scans instead of a sort: oracle-backed rankings may answer
    // adversarially, and a scan stays well defined where a sort would not
    auto vars = p.support_vars();
    while (!vars.empty()) {
        auto it = std::max_element(
            vars.begin(), vars.end(),
            [&](const DiffVar& a, const DiffVar& b) { return ranking.less(a, b); });
        int d = semantic_deg(p, *it, field);
        if (d >= 1) return LeadInfo{*it, d};
        vars.erase(it);
    }
    return std::nullopt;
}

DiffPoly initial_of(const DiffPoly& p, const Ranking& ranking,
                    CoeffField& field) {
    auto li = lead_of(p, ranking, field);
    if (!li) throw Error("ground element has no initial");
    return p.coeffs_in(li->leader)[static_cast<std::size_t>(li->deg)];
}

DiffPoly separant_of(const DiffPoly& p, const Ranking& ranking,
                     const DiffRing& ring, CoeffField& field) {
    auto li = lead_of(p, ranking, field);
    if (!li) throw Error("ground element has no separant");
    auto cs = p.coeffs_in(li->leader);
    DiffPoly vp = DiffPoly::variable(li->leader, ring);
    DiffPoly sep;
    for (int e = 1; e <= li->deg; ++e)
        sep = sep.plus(
            cs[static_cast<std::size_t>(e)].scaled(e).times(vp.pow(e - 1)));
    return sep;
}

int rank_compare(const DiffPoly& a, const DiffPoly& b, const Ranking& ranking,
                 CoeffField& field) {
    auto la = lead_of(a, ranking, field);
    auto lb = lead_of(b, ranking, field);
    if (!la && !lb) return 0;
    if (!la) return -1;
    if (!lb) return 1;
    if (int c = ranking.compare(la->leader, lb->leader)) return c;
    return la->deg == lb->deg ? 0 : (la->deg < lb->deg ? -1 : 1);
}

int set_rank_compare(const std::vector<DiffPoly>& a,
                     const std::vector<DiffPoly>& b, const Ranking& ranking,
                     CoeffField& field) {
    auto sorted = [&](std::vector<DiffPoly> v) {
        std::sort(v.begin(), v.end(), [&](const DiffPoly& x, const DiffPoly& y) {
            int c = rank_compare(x, y, ranking, field);
            return c != 0 ? c < 0 : x < y;
        });
        return v;
    };
    auto sa = sorted(a);
    auto sb = sorted(b);
    std::size_t k = std::min(sa.size(), sb.size());
    for (std::size_t i = 0; i < k; ++i)
        if (int c = rank_compare(sa[i], sb[i], ranking, field)) return c;
    if (sa.size() == sb.size()) return 0;
    // exhausting the shorter set first leaves the longer set lower
    return sa.size() > sb.size() ? -1 : 1;
}

bool is_reduced(const DiffPoly& p, const DiffPoly& g, const Ranking& ranking,
                CoeffField& field) {
    auto lg = lead_of(g, ranking, field);
    if (!lg) return true;
    for (const auto& w : p.support_vars()) {
        if (w.var != lg->leader.var || !lg->leader.theta.divides(w.theta))
            continue;
        if (w == lg->leader) {
            if (semantic_deg(p, w, field) >= lg->deg) return false;
        } else if (semantic_deg(p, w, field) >= 1) {
            return false;
        }
    }
    return true;
}

bool is_reduced_all(const DiffPoly& p, const std::vector<DiffPoly>& chain,
                    const Ranking& ranking, CoeffField& field) {
    for (const auto& g : chain)
        if (!is_reduced(p, g, ranking, field)) return false;
    return true;
}

namespace {

// powers 0..upto-1 of v reassembled into a polynomial
DiffPoly from_coeffs(const std::vector<DiffPoly>& cs, const DiffVar& v,
                     const DiffRing& ring, int upto) {
    DiffPoly out;
    DiffPoly vp = DiffPoly::variable(v, ring);
    int top = std::min<int>(upto, static_cast<int>(cs.size()));
    for (int i = 0; i < top; ++i)
        out = out.plus(cs[static_cast<std::size_t>(i)].times(vp.pow(i)));
    return out;
}

struct Offender {
    DiffVar w;
    bool proper = false;
    std::size_t j = 0;
    DiffVar leader;
    int deg = 0;
};

// Highest derivative first; for the same derivative, eliminating it via a
// proper prolongation beats lowering its degree, closer prolongations beat
// distant ones, and lower pseudo-division degrees beat higher ones.
bool prefer(const Offender& a, const Offender& b, const Ranking& ranking) {
    if (int c = ranking.compare(a.w, b.w)) return c > 0;
    if (a.proper != b.proper) return a.proper;
    if (a.proper) {
        if (int c = ranking.compare(a.leader, b.leader)) return c > 0;
        return a.j < b.j;
    }
    if (a.deg != b.deg) return a.deg < b.deg;
    return a.j < b.j;
}

}  // namespace

ReductionRecord full_reduce(const DiffPoly& p,
                            const std::vector<DiffPoly>& chain,
                            const Ranking& ranking, const DiffRing& ring,
                            CoeffField& field) {
    ReductionRecord rec;
    rec.h = DiffPoly::constant(1, ring);
    rec.remainder = p;

    std::vector<std::optional<LeadInfo>> leads;
    leads.reserve(chain.size());
    for (const auto& g : chain) leads.push_back(lead_of(g, ranking, field));

    auto scale = [&rec](const DiffPoly& f) {
        rec.h = rec.h.times(f);
        for (auto& st : rec.steps) st.multiplier = st.multiplier.times(f);
    };

    for (;;) {
        rec.remainder = semantic_prune(rec.remainder, ring, field);

        std::optional<Offender> best;
        for (const auto& w : rec.remainder.support_vars()) {
            for (std::size_t j = 0; j < chain.size(); ++j) {
                if (!leads[j]) continue;
                const DiffVar& u = leads[j]->leader;
                if (w.var != u.var || !u.theta.divides(w.theta)) continue;
                bool proper = !(w == u);
                if (!proper && rec.remainder.syntactic_deg(w) < leads[j]->deg)
                    continue;
                Offender cand{w, proper, j, u, leads[j]->deg};
                if (!best || prefer(cand, *best, ranking)) best = cand;
            }
        }
        if (!best) break;

        Derivative theta = Derivative::zero(ring.m);
        DiffPoly g = chain[best->j];
        if (best->proper) {
            theta = best->w.theta.minus(best->leader.theta);
            g = g.derive(theta, ring, field);
        }
        g = semantic_prune(g, ring, field);
        auto gcs = g.coeffs_in(best->w);
        int dg = static_cast<int>(gcs.size()) - 1;
        if (dg < 1) throw Error("reducer lost its leader");
        const DiffPoly& init = gcs[static_cast<std::size_t>(dg)];
        DiffPoly gtail = from_coeffs(gcs, best->w, ring, dg);

        for (;;) {
            auto rcs = rec.remainder.coeffs_in(best->w);
            int e = static_cast<int>(rcs.size()) - 1;
            if (e < dg) break;
            DiffPoly cf = rcs[static_cast<std::size_t>(e)];
            DiffPoly mult =
                cf.times(DiffPoly::variable(best->w, ring).pow(e - dg));
            scale(init);
            rec.steps.push_back({mult, theta, best->j});
            DiffPoly tail = from_coeffs(rcs, best->w, ring, e);
            rec.remainder =
                semantic_prune(init.times(tail).minus(mult.times(gtail)),
                               ring, field);
        }
    }
    return rec;
}

std::vector<DiffPoly> autoreduce(std::vector<DiffPoly> elems,
                                 const Ranking& ranking, const DiffRing& ring,
                                 CoeffField& field) {
    auto less = [&](const DiffPoly& a, const DiffPoly& b) {
        int c = rank_compare(a, b, ranking, field);
        return c != 0 ? c < 0 : a < b;
    };
    // rank descent bounds the passes; the cap only catches regressions
    for (int pass = 0; pass < 100000; ++pass) {
        std::vector<DiffPoly> live;
        for (const auto& p : elems) {
            DiffPoly q = semantic_prune(p, ring, field);
            if (!q.is_syntactic_zero()) live.push_back(q);
        }
        std::sort(live.begin(), live.end(), less);
        live.erase(std::unique(live.begin(), live.end()), live.end());

        std::vector<DiffPoly> chain, rest;
        for (const auto& p : live)
            (is_reduced_all(p, chain, ranking, field) ? chain : rest)
                .push_back(p);
        if (rest.empty()) return chain;

        elems = chain;
        for (const auto& p : rest) {
            DiffPoly r = full_reduce(p, chain, ranking, ring, field).remainder;
            if (poly_nonzero(r, field)) elems.push_back(r);
        }
    }
    throw Error("autoreduction failed to stabilize");
}

}  // namespace diffbound::diffalg
