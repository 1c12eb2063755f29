#include <algorithm>

#include "diffbound/errors.hpp"
#include "theory_impl.hpp"

namespace diffbound::theory {

using namespace diffbound::logic;

namespace {

class UnionImpl final : public TheoryImpl {
public:
    UnionImpl(std::shared_ptr<const TheoryImpl> a,
              std::shared_ptr<const TheoryImpl> b)
        : TheoryImpl(a->name() + "+" + b->name(),
                     a->signature().merged(b->signature()),
                     a->options()),
          a_(std::move(a)),
          b_(std::move(b)) {
        for (const auto& s : a_->sorts())
            for (const auto& t : b_->sorts())
                if (s == t)
                    throw Error("disjoint union requires distinct sorts, got " + s +
                                " twice");
    }

    bool is_union() const override { return true; }

    std::vector<Sort> sorts() const override {
        std::vector<Sort> out = a_->sorts();
        auto more = b_->sorts();
        out.insert(out.end(), more.begin(), more.end());
        return out;
    }

    std::string method_tag() const override { return "sort-dispatch"; }

    void check_atom(const FormulaPtr& atom) const override {
        side_of(atom->terms()[0]->sort())->check_atom(atom);
    }

    FormulaPtr canon_atom(const FormulaPtr& atom) const override {
        return side_of(atom->terms()[0]->sort())->canon_atom(atom);
    }

    // Literals are single-sorted, so a conjunction splits cleanly: the block
    // in the variable's sort is eliminated by that component, the rest rides
    // along untouched.
    FormulaPtr elim_exists_conj(const std::string& x, const Sort& sort,
                                const std::vector<FormulaPtr>& lits) const override {
        std::vector<FormulaPtr> mine, other;
        for (const auto& lit : lits)
            (literal_sort(lit) == sort ? mine : other).push_back(lit);
        FormulaPtr core = side_of(sort)->elim_exists_conj(x, sort, mine);
        if (other.empty()) return core;
        other.push_back(core);
        return Formula::conj(std::move(other));
    }

private:
    const TheoryImpl* side_of(const Sort& s) const {
        auto a_sorts = a_->sorts();
        if (std::find(a_sorts.begin(), a_sorts.end(), s) != a_sorts.end())
            return a_.get();
        auto b_sorts = b_->sorts();
        if (std::find(b_sorts.begin(), b_sorts.end(), s) != b_sorts.end())
            return b_.get();
        throw Error("sort " + s + " belongs to neither side of the union");
    }

    std::shared_ptr<const TheoryImpl> a_, b_;
};

}  // namespace

std::shared_ptr<const TheoryImpl> make_union_impl(
    std::shared_ptr<const TheoryImpl> a, std::shared_ptr<const TheoryImpl> b) {
    return std::make_shared<UnionImpl>(std::move(a), std::move(b));
}

}  // namespace diffbound::theory
