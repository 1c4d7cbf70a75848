#include "cive/oracle.hpp"

#include <algorithm>
#include <cstdint>


namespace cive {

JointTable joint_enumeration(const Network& net, std::size_t cell_bound) {
    std::uint64_t cells = 1;
    for (const auto& v : net.variables())
        cells = saturating_mul(cells, static_cast<std::uint64_t>(v.cardinality));
    if (cells > cell_bound)
        throw ResourceBoundError("joint state space has " + std::to_string(cells) +
                                 " cells, above the bound of " + std::to_string(cell_bound));

    ConvergentContext ctx = net.context();
    JointTable joint;
    for (const auto& v : net.variables()) {
        if (!net.has_cpd(v.id)) continue;
        const CPD& cpd = net.cpd(v.id);
        Factor f = std::holds_alternative<TableCPD>(cpd)
                       ? factor_of_table_cpd(net, std::get<TableCPD>(cpd))
                       : factor_of_table_cpd(
                             net, expand_causal_cpd(std::get<CausalCPD>(cpd), ctx));
        joint.table = multiply(joint.table, f);
    }
    return joint;
}

Factor oracle_query_from_joint(const JointTable& joint, const Query& query) {
    Factor f = joint.table;
    for (const auto& [v, val] : query.evidence) f = restrict_factor(f, v, val, true);
    std::vector<VarId> targets = query.targets;
    std::sort(targets.begin(), targets.end());
    for (VarId v : std::vector<VarId>(f.scope()))
        if (!std::binary_search(targets.begin(), targets.end(), v)) f = sum_out(f, v);
    return f;
}

Factor oracle_query(const Network& net, const Query& query, std::size_t cell_bound) {
    validate_query(net, query);
    return oracle_query_from_joint(joint_enumeration(net, cell_bound), query);
}

}  // namespace cive
