#include "diffbound/ranking.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "diffbound/errors.hpp"
#include "diffbound/theory.hpp"

namespace diffbound::diffalg {

using namespace diffbound::logic;

namespace {

std::vector<int> identity_order(int n) {
    std::vector<int> v(static_cast<std::size_t>(n));
    std::iota(v.begin(), v.end(), 1);
    return v;
}

void check_permutation(const std::vector<int>& order, int n, const char* what) {
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    if (order.size() != static_cast<std::size_t>(n))
        throw Error(std::string(what) + " priority must list all indices once");
    for (int v : order) {
        if (v < 1 || v > n || seen[static_cast<std::size_t>(v - 1)])
            throw Error(std::string(what) + " priority must list all indices once");
        seen[static_cast<std::size_t>(v - 1)] = true;
    }
}

// position of each index in the priority list; smaller = higher rank
std::vector<int> positions(const std::vector<int>& order) {
    std::vector<int> pos(order.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        pos[static_cast<std::size_t>(order[i] - 1)] = static_cast<int>(i);
    return pos;
}

int cmp_int(int a, int b) { return a == b ? 0 : (a < b ? -1 : 1); }

// idx compared position by position in derivation priority order
int cmp_idx(const std::vector<int>& a, const std::vector<int>& b,
            const std::vector<int>& deriv_priority) {
    for (int d : deriv_priority)
        if (int c = cmp_int(a[static_cast<std::size_t>(d - 1)],
                            b[static_cast<std::size_t>(d - 1)]))
            return c;
    return 0;
}

class OrderlyRanking final : public Ranking {
public:
    OrderlyRanking(int m, int n, std::vector<int> vp, std::vector<int> dp)
        : m_(m), n_(n), vp_(std::move(vp)), dp_(std::move(dp)),
          vpos_(positions(vp_)) {}

    int compare(const DiffVar& a, const DiffVar& b) const override {
        if (int c = cmp_int(a.theta.ord(), b.theta.ord())) return c;
        // higher priority position = higher rank
        if (int c = cmp_int(vpos_[static_cast<std::size_t>(b.var)],
                            vpos_[static_cast<std::size_t>(a.var)]))
            return c;
        return cmp_idx(a.theta.idx, b.theta.idx, dp_);
    }

    std::string describe() const override { return "orderly"; }

private:
    int m_, n_;
    std::vector<int> vp_, dp_;
    std::vector<int> vpos_;
};

class EliminationRanking final : public Ranking {
public:
    EliminationRanking(int m, int n, std::vector<std::vector<int>> blocks,
                       std::vector<int> dp)
        : inner_(m, n, identity_order(n), dp),
          block_of_(static_cast<std::size_t>(n), -1) {
        int b = 0;
        for (const auto& block : blocks) {
            for (int v : block) {
                if (v < 1 || v > n || block_of_[static_cast<std::size_t>(v - 1)] >= 0)
                    throw Error("elimination blocks must partition the indeterminates");
                block_of_[static_cast<std::size_t>(v - 1)] = b;
            }
            ++b;
        }
        for (int v : block_of_)
            if (v < 0)
                throw Error("elimination blocks must partition the indeterminates");
    }

    int compare(const DiffVar& a, const DiffVar& b) const override {
        // earlier block ranks higher than everything in later blocks
        int ba = block_of_[static_cast<std::size_t>(a.var)];
        int bb = block_of_[static_cast<std::size_t>(b.var)];
        if (ba != bb) return ba < bb ? 1 : -1;
        return inner_.compare(a, b);
    }

    std::string describe() const override { return "elimination"; }

private:
    OrderlyRanking inner_;
    std::vector<int> block_of_;
};

class MatrixRanking final : public Ranking {
public:
    MatrixRanking(int m, int n, std::vector<std::vector<BigRat>> w,
                  std::vector<int> vp)
        : m_(m), n_(n), w_(std::move(w)), vp_(std::move(vp)),
          vpos_(positions(vp_)), dp_(identity_order(m)) {}

    int compare(const DiffVar& a, const DiffVar& b) const override {
        // weight rows applied to the difference vector, lexicographically
        for (const auto& row : w_) {
            BigRat s = 0;
            for (int k = 0; k < m_; ++k)
                s += row[static_cast<std::size_t>(k)] *
                     (a.theta.idx[static_cast<std::size_t>(k)] -
                      b.theta.idx[static_cast<std::size_t>(k)]);
            if (a.var != b.var) {
                s += row[static_cast<std::size_t>(m_ + a.var)];
                s -= row[static_cast<std::size_t>(m_ + b.var)];
            }
            if (s != 0) return s > 0 ? 1 : -1;
        }
        if (int c = cmp_int(vpos_[static_cast<std::size_t>(b.var)],
                            vpos_[static_cast<std::size_t>(a.var)]))
            return c;
        return cmp_idx(a.theta.idx, b.theta.idx, dp_);
    }

    std::string describe() const override { return "matrix"; }

private:
    int m_, n_;
    std::vector<std::vector<BigRat>> w_;
    std::vector<int> vp_;
    std::vector<int> vpos_;
    std::vector<int> dp_;
};

}  // namespace

RankingPtr orderly_ranking(int m, int n, std::vector<int> var_priority,
                           std::vector<int> deriv_priority) {
    if (var_priority.empty()) var_priority = identity_order(n);
    if (deriv_priority.empty()) deriv_priority = identity_order(m);
    check_permutation(var_priority, n, "indeterminate");
    check_permutation(deriv_priority, m, "derivation");
    return std::make_shared<OrderlyRanking>(m, n, std::move(var_priority),
                                            std::move(deriv_priority));
}

RankingPtr elimination_ranking(int m, int n, std::vector<std::vector<int>> blocks,
                               std::vector<int> deriv_priority) {
    if (deriv_priority.empty()) deriv_priority = identity_order(m);
    check_permutation(deriv_priority, m, "derivation");
    return std::make_shared<EliminationRanking>(m, n, std::move(blocks),
                                                std::move(deriv_priority));
}

logic::FormulaPtr matrix_ranking_condition(int m, int n) {
    auto entry = [&](int r, int c) {
        return Term::var("a" + std::to_string(r * (m + n) + c + 1), "Q");
    };
    std::vector<FormulaPtr> per_derivation;
    for (int k = 0; k < m; ++k) {
        // column k image is lexicographically positive
        std::vector<FormulaPtr> cases;
        for (int r = 0; r <= m; ++r) {
            std::vector<FormulaPtr> conj;
            for (int p = 0; p < r; ++p)
                conj.push_back(Formula::eq(entry(p, k), Term::rat(0, "Q")));
            conj.push_back(Formula::less(Term::rat(0, "Q"), entry(r, k)));
            cases.push_back(Formula::conj(std::move(conj)));
        }
        per_derivation.push_back(Formula::disj(std::move(cases)));
    }
    return Formula::conj(std::move(per_derivation));
}

RankingPtr matrix_ranking(int m, int n, std::vector<std::vector<BigRat>> weights,
                          std::vector<int> var_priority) {
    if (weights.size() != static_cast<std::size_t>(m + 1))
        throw Error("matrix ranking wants " + std::to_string(m + 1) + " rows");
    for (const auto& row : weights)
        if (row.size() != static_cast<std::size_t>(m + n))
            throw Error("matrix ranking wants rows of width " +
                        std::to_string(m + n));
    if (var_priority.empty()) var_priority = identity_order(n);
    check_permutation(var_priority, n, "indeterminate");

    std::map<std::string, BigRat> point;
    for (int r = 0; r <= m; ++r)
        for (int c = 0; c < m + n; ++c)
            point["a" + std::to_string(r * (m + n) + c + 1)] =
                weights[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    theory::Theory lovs = theory::Theory::lovs();
    if (!lovs.model_eval(matrix_ranking_condition(m, n), point))
        throw Error("weight matrix does not define a ranking");
    return std::make_shared<MatrixRanking>(m, n, std::move(weights),
                                           std::move(var_priority));
}

namespace {

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    return out;
}

std::vector<BigRat> parse_rat_list(const std::string& s) {
    std::vector<BigRat> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
    return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

}  // namespace

RankingPtr ranking_by_name(const std::string& spec, int m, int n) {
    auto parts = split(spec, ';');
    if (parts.empty()) throw Error("empty ranking spec");
    std::string kind = parts[0];
    std::map<std::string, std::string> kv;
    for (std::size_t i = 1; i < parts.size(); ++i) {
        auto eq = parts[i].find('=');
        if (eq == std::string::npos)
            throw Error("ranking option needs key=value: " + parts[i]);
        kv[parts[i].substr(0, eq)] = parts[i].substr(eq + 1);
    }
    std::vector<int> vp, dp;
    if (kv.count("v")) vp = parse_int_list(kv["v"]);
    if (kv.count("d")) dp = parse_int_list(kv["d"]);
    if (kind == "orderly") return orderly_ranking(m, n, vp, dp);
    if (kind == "elim") {
        if (!kv.count("blocks")) throw Error("elim ranking needs blocks=...");
        std::vector<std::vector<int>> blocks;
        for (const auto& b : split(kv["blocks"], '|'))
            blocks.push_back(parse_int_list(b));
        return elimination_ranking(m, n, std::move(blocks), dp);
    }
    if (kind == "matrix") {
        if (!kv.count("w")) throw Error("matrix ranking needs w=row/row/...");
        std::vector<std::vector<BigRat>> rows;
        for (const auto& r : split(kv["w"], '/')) rows.push_back(parse_rat_list(r));
        return matrix_ranking(m, n, std::move(rows), vp);
    }
    throw Error("unknown ranking kind: " + kind);
}

}  // namespace diffbound::diffalg
