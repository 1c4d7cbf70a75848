// Base combination operators: the associative commutative operators that
// merge independent contributions to a convergent variable (OR, AND, MAX,
// saturating sum, or an arbitrary user table).
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cive/types.hpp"

namespace cive {

class BaseCombinationOp {
public:
    enum class Kind { logical_or, logical_and, max_value, saturating_sum, custom };

    static BaseCombinationOp logical_or() { return BaseCombinationOp(Kind::logical_or); }
    static BaseCombinationOp logical_and() { return BaseCombinationOp(Kind::logical_and); }
    static BaseCombinationOp max_value() { return BaseCombinationOp(Kind::max_value); }
    static BaseCombinationOp saturating_sum() { return BaseCombinationOp(Kind::saturating_sum); }
    static BaseCombinationOp custom(std::vector<std::vector<int>> table);

    Kind kind() const { return kind_; }

    // Combines two value indices of a variable with `cardinality` values.
    // Inputs must be in [0, cardinality).
    int apply(int a, int b, int cardinality) const;

    // Checks the operator against a concrete cardinality: domain
    // restrictions (OR/AND need two values), table shape and range, and
    // exhaustive commutativity/associativity for custom tables.  Returns
    // human-readable violations; empty means valid.
    std::vector<std::string> check(int cardinality) const;

    const std::vector<std::vector<int>>& custom_table() const { return table_; }

    // Wire names used by the network file format: or|and|max|sum|custom.
    std::string name() const;
    static std::optional<BaseCombinationOp> from_name(const std::string& name);

    bool operator==(const BaseCombinationOp& other) const {
        return kind_ == other.kind_ && table_ == other.table_;
    }

private:
    explicit BaseCombinationOp(Kind kind) : kind_(kind) {}

    Kind kind_;
    std::vector<std::vector<int>> table_;  // custom only; table_[a][b]
};

}  // namespace cive
