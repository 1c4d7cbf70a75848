#include "cive/base_op.hpp"

#include <algorithm>

namespace cive {

BaseCombinationOp BaseCombinationOp::custom(std::vector<std::vector<int>> table) {
    BaseCombinationOp op(Kind::custom);
    op.table_ = std::move(table);
    return op;
}

int BaseCombinationOp::apply(int a, int b, int cardinality) const {
    switch (kind_) {
    case Kind::logical_or:
        return a | b;
    case Kind::logical_and:
        return a & b;
    case Kind::max_value:
        return std::max(a, b);
    case Kind::saturating_sum:
        return std::min(a + b, cardinality - 1);
    case Kind::custom:
        return table_[a][b];
    }
    return 0;  // unreachable
}

std::vector<std::string> BaseCombinationOp::check(int cardinality) const {
    std::vector<std::string> violations;
    const int d = cardinality;

    if ((kind_ == Kind::logical_or || kind_ == Kind::logical_and) && d != 2) {
        violations.push_back("base op " + name() + " requires cardinality 2, got " +
                             std::to_string(d));
        return violations;
    }

    if (kind_ == Kind::custom) {
        if (static_cast<int>(table_.size()) != d) {
            violations.push_back("custom base op table must be " + std::to_string(d) + "x" +
                                 std::to_string(d));
            return violations;
        }
        for (const auto& row : table_) {
            if (static_cast<int>(row.size()) != d) {
                violations.push_back("custom base op table must be square");
                return violations;
            }
            for (int v : row) {
                if (v < 0 || v >= d) {
                    violations.push_back("custom base op table entry " + std::to_string(v) +
                                         " out of range [0," + std::to_string(d) + ")");
                    return violations;
                }
            }
        }
    }

    // Exhaustive check over the full value set; cardinalities are small.
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
            if (apply(a, b, d) != apply(b, a, d)) {
                violations.push_back("base op not commutative at (" + std::to_string(a) + "," +
                                     std::to_string(b) + ")");
                return violations;
            }
        }
    }
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
            for (int c = 0; c < d; ++c) {
                if (apply(apply(a, b, d), c, d) != apply(a, apply(b, c, d), d)) {
                    violations.push_back("base op not associative at (" + std::to_string(a) +
                                         "," + std::to_string(b) + "," + std::to_string(c) +
                                         ")");
                    return violations;
                }
            }
        }
    }
    return violations;
}

std::string BaseCombinationOp::name() const {
    switch (kind_) {
    case Kind::logical_or: return "or";
    case Kind::logical_and: return "and";
    case Kind::max_value: return "max";
    case Kind::saturating_sum: return "sum";
    case Kind::custom: return "custom";
    }
    return "?";
}

std::optional<BaseCombinationOp> BaseCombinationOp::from_name(const std::string& name) {
    if (name == "or") return logical_or();
    if (name == "and") return logical_and();
    if (name == "max") return max_value();
    if (name == "sum") return saturating_sum();
    if (name == "custom") return custom({});
    return std::nullopt;
}

}  // namespace cive
