// Discrete Bayesian networks with two conditional-probability forms: plain
// tables and causal-independence models (independent per-cause
// contributions merged by a base combination operator).
#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cive/base_op.hpp"
#include "cive/factor.hpp"
#include "cive/types.hpp"

namespace cive {

struct Variable {
    VarId id = kNoVar;
    std::string name;
    int cardinality = 0;
    VarKind kind = VarKind::regular;
    std::optional<VarId> deputy_of;  // set iff kind == deputy

    bool operator==(const Variable&) const = default;
};

// P(child | parents) as a dense table: probs indexed row-major over the
// parent configuration (parents in listed order, last parent fastest)
// with the child value varying fastest of all.
struct TableCPD {
    VarId child = kNoVar;
    std::vector<VarId> parents;
    std::vector<double> probs;

    bool operator==(const TableCPD&) const = default;
};

// One independent cause: table[beta][alpha] is the probability that the
// parent at value beta contributes value alpha to the child.
struct Contribution {
    VarId parent = kNoVar;
    std::vector<std::vector<double>> table;

    bool operator==(const Contribution&) const = default;
};

// Causal-independence CPD of a convergent child: the child value is the
// base-op merge of one contribution per parent, plus an optional
// parentless leak distribution treated as an extra contribution.
struct CausalCPD {
    VarId child = kNoVar;
    BaseCombinationOp op = BaseCombinationOp::max_value();
    std::vector<Contribution> contributions;
    std::optional<std::vector<double>> leak;

    bool operator==(const CausalCPD&) const = default;
};

using CPD = std::variant<TableCPD, CausalCPD>;

struct Query {
    std::vector<VarId> targets;
    std::vector<std::pair<VarId, int>> evidence;  // (variable, value index)
};

class Network {
public:
    VarId add_variable(std::string name, int cardinality, VarKind kind = VarKind::regular,
                       std::optional<VarId> deputy_of = std::nullopt);
    void set_cpd(CPD cpd);  // keyed by the child id; marks causal children convergent

    std::size_t variable_count() const { return vars_.size(); }
    const std::vector<Variable>& variables() const { return vars_; }
    const Variable& variable(VarId v) const { return vars_.at(static_cast<std::size_t>(v)); }
    int cardinality(VarId v) const { return variable(v).cardinality; }

    bool has_cpd(VarId v) const { return cpds_.at(static_cast<std::size_t>(v)).has_value(); }
    const CPD& cpd(VarId v) const { return *cpds_.at(static_cast<std::size_t>(v)); }

    // kNoVar when the name is unknown.
    VarId find(const std::string& name) const;

    std::vector<VarId> parents_of(VarId v) const;
    std::vector<std::vector<VarId>> children() const;  // adjacency child lists

    // Base ops of all convergent variables; parameterizes the general
    // combination operator for this network.
    ConvergentContext context() const;

    bool operator==(const Network&) const = default;

private:
    std::vector<Variable> vars_;
    std::vector<std::optional<CPD>> cpds_;
};

// Structural and numeric checks over every invariant the types promise
// (DAG-ness, distribution normalization, base-op laws, deputy wiring).
// Violations are data, not exceptions; empty means the network is valid.
std::vector<std::string> validate(const Network& net);

// Parent-before-child order, ties broken by ascending id.  Throws
// StructureError on a cycle.
std::vector<VarId> topological_order(const Network& net);

// Checks query variables exist, are distinct, are not deputies, and that
// evidence values are in range.  Throws UsageError.
void validate_query(const Network& net, const Query& query);

// Multiplies out a causal CPD into the equivalent plain table
// P(child | parents): the fold of the contribution factors (and leak)
// under the child's functional combination operator.
TableCPD expand_causal_cpd(const CausalCPD& cpd, const ConvergentContext& ctx);

// Factor views of CPDs (scope sorted by id, values permuted accordingly).
Factor factor_of_table_cpd(const Network& net, const TableCPD& cpd);
Factor factor_of_contribution(const Network& net, VarId child, const Contribution& c);
Factor factor_of_leak(const Network& net, VarId child, const std::vector<double>& leak);

}  // namespace cive
