// Dense factors over discrete variables and the factor algebra:
// multiplication, the general combination operator for factors sharing
// convergent variables, summation, and restriction.
#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "cive/base_op.hpp"
#include "cive/types.hpp"

namespace cive {

// Maps each convergent variable to its base combination operator.  The
// general combination operator convolves exactly the shared scope
// variables that appear here; everything else aligns pointwise.
class ConvergentContext {
public:
    ConvergentContext() = default;

    void set(VarId v, BaseCombinationOp op) { ops_.insert_or_assign(v, std::move(op)); }
    const BaseCombinationOp* find(VarId v) const {
        auto it = ops_.find(v);
        return it == ops_.end() ? nullptr : &it->second;
    }
    bool contains(VarId v) const { return ops_.count(v) != 0; }
    std::size_t size() const { return ops_.size(); }
    const std::map<VarId, BaseCombinationOp>& ops() const { return ops_; }

private:
    std::map<VarId, BaseCombinationOp> ops_;
};

// A dense real-valued table over an ordered variable scope.  The scope is
// kept sorted by variable id; values are row-major with the last scope
// variable varying fastest.  Factors are immutable values: every
// operation returns a new factor.
class Factor {
public:
    enum class Tag { homogeneous, heterogeneous };

    // Scalar factor (empty scope, one cell).
    explicit Factor(double value = 1.0, Tag tag = Tag::homogeneous);

    // `scope` must be strictly ascending; `values.size()` must equal the
    // product of the cardinalities.
    Factor(std::vector<VarId> scope, std::vector<int> cardinalities,
           std::vector<double> values, Tag tag);

    const std::vector<VarId>& scope() const { return scope_; }
    const std::vector<int>& cardinalities() const { return cards_; }
    const std::vector<double>& values() const { return values_; }
    Tag tag() const { return tag_; }

    bool has_variable(VarId v) const;
    int position_of(VarId v) const;  // -1 if absent
    int cardinality_of(VarId v) const;

    // Number of cells: the product of the scope cardinalities.
    std::size_t size() const { return values_.size(); }

    double operator[](std::size_t i) const { return values_[i]; }

    // Cell lookup by a full scope assignment (one value index per scope
    // variable, in scope order).
    double at(std::span<const int> assignment) const;
    std::size_t linear_index(std::span<const int> assignment) const;

    double sum() const;

    // Renames scope variables via `rename`, re-sorts the scope, and
    // permutes values accordingly.  New ids must stay distinct.
    Factor relabeled(const std::function<VarId(VarId)>& rename) const;

    // Prints scope and values (17 significant digits, row-major).
    // `name_of` resolves ids for display; defaults to v<id>.
    void dump(std::ostream& os,
              const std::function<std::string(VarId)>& name_of = nullptr) const;

private:
    std::vector<VarId> scope_;
    std::vector<int> cards_;
    std::vector<double> values_;
    Tag tag_;
};

// Pointwise product over the scope union.  Homogeneous iff both operands
// are homogeneous.
Factor multiply(const Factor& f, const Factor& g);

// The general combination operator.  For every shared scope variable
// registered in `ctx`, output cells accumulate over all pairs of operand
// values merged by that variable's base op; all other variables align
// pointwise.  With no shared convergent variable this reduces to
// multiplication.  The result is heterogeneous.
Factor combine_general(const Factor& f, const Factor& g, const ConvergentContext& ctx);

// Sums `v` out of the scope.  Tag is preserved.
Factor sum_out(const Factor& f, VarId v);

// Fixes `v` to `value`.  With `drop`, the variable leaves the scope and
// only the matching slice survives; without it, the variable keeps its
// cardinality and all non-matching cells become zero.
Factor restrict_factor(const Factor& f, VarId v, int value, bool drop);

}  // namespace cive
