#include "cive/network.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace cive {

namespace {
constexpr double kDistributionTolerance = 1e-9;
}

VarId Network::add_variable(std::string name, int cardinality, VarKind kind,
                            std::optional<VarId> deputy_of) {
    Variable v;
    v.id = static_cast<VarId>(vars_.size());
    v.name = std::move(name);
    v.cardinality = cardinality;
    v.kind = kind;
    v.deputy_of = deputy_of;
    vars_.push_back(std::move(v));
    cpds_.emplace_back();
    return vars_.back().id;
}

void Network::set_cpd(CPD cpd) {
    VarId child = std::visit([](const auto& c) { return c.child; }, cpd);
    if (child < 0 || static_cast<std::size_t>(child) >= vars_.size())
        throw UsageError("set_cpd: unknown child variable id " + std::to_string(child));
    if (std::holds_alternative<CausalCPD>(cpd)) {
        vars_[static_cast<std::size_t>(child)].kind = VarKind::convergent;
    } else if (vars_[static_cast<std::size_t>(child)].kind == VarKind::convergent) {
        vars_[static_cast<std::size_t>(child)].kind = VarKind::regular;
    }
    cpds_[static_cast<std::size_t>(child)] = std::move(cpd);
}

VarId Network::find(const std::string& name) const {
    for (const auto& v : vars_)
        if (v.name == name) return v.id;
    return kNoVar;
}

std::vector<VarId> Network::parents_of(VarId v) const {
    if (!has_cpd(v)) return {};
    const CPD& c = cpd(v);
    if (const auto* t = std::get_if<TableCPD>(&c)) return t->parents;
    const auto& causal = std::get<CausalCPD>(c);
    std::vector<VarId> out;
    out.reserve(causal.contributions.size());
    for (const auto& contrib : causal.contributions) out.push_back(contrib.parent);
    return out;
}

std::vector<std::vector<VarId>> Network::children() const {
    std::vector<std::vector<VarId>> out(vars_.size());
    for (const auto& v : vars_) {
        for (VarId p : parents_of(v.id))
            if (p >= 0 && static_cast<std::size_t>(p) < vars_.size())
                out[static_cast<std::size_t>(p)].push_back(v.id);
    }
    return out;
}

ConvergentContext Network::context() const {
    ConvergentContext ctx;
    for (const auto& v : vars_) {
        if (v.kind != VarKind::convergent || !has_cpd(v.id)) continue;
        if (const auto* c = std::get_if<CausalCPD>(&cpd(v.id))) ctx.set(v.id, c->op);
    }
    return ctx;
}

namespace {

void validate_table_cpd(const Network& net, const TableCPD& t,
                        std::vector<std::string>& out) {
    const std::string who = "cpd of '" + net.variable(t.child).name + "'";
    std::set<VarId> seen;
    std::size_t config_count = 1;
    for (VarId p : t.parents) {
        if (p < 0 || static_cast<std::size_t>(p) >= net.variable_count()) {
            out.push_back(who + ": parent id out of range");
            return;
        }
        if (p == t.child) out.push_back(who + ": child listed among its own parents");
        if (!seen.insert(p).second) out.push_back(who + ": duplicate parent");
        config_count *= static_cast<std::size_t>(net.cardinality(p));
    }
    const int d = net.cardinality(t.child);
    if (t.probs.size() != config_count * static_cast<std::size_t>(d)) {
        out.push_back(who + ": table has " + std::to_string(t.probs.size()) +
                      " entries, expected " + std::to_string(config_count * d));
        return;
    }
    for (std::size_t cfg = 0; cfg < config_count; ++cfg) {
        double s = 0.0;
        bool negative = false;
        for (int a = 0; a < d; ++a) {
            double p = t.probs[cfg * d + a];
            if (!(p >= 0.0) || !std::isfinite(p)) negative = true;
            s += p;
        }
        if (negative) {
            out.push_back(who + ": negative or non-finite probability");
            return;
        }
        if (std::abs(s - 1.0) > kDistributionTolerance) {
            out.push_back(who + ": column for parent configuration " + std::to_string(cfg) +
                          " sums to " + std::to_string(s) + ", not 1");
            return;
        }
    }
}

void validate_causal_cpd(const Network& net, const CausalCPD& c,
                         std::vector<std::string>& out) {
    const std::string who = "causal cpd of '" + net.variable(c.child).name + "'";
    const int d = net.cardinality(c.child);

    for (const auto& v : c.op.check(d)) out.push_back(who + ": " + v);

    if (c.contributions.empty()) out.push_back(who + ": no contributions");
    std::set<VarId> seen;
    for (const auto& contrib : c.contributions) {
        if (contrib.parent < 0 ||
            static_cast<std::size_t>(contrib.parent) >= net.variable_count()) {
            out.push_back(who + ": contribution parent id out of range");
            continue;
        }
        if (contrib.parent == c.child) out.push_back(who + ": contribution from itself");
        if (!seen.insert(contrib.parent).second) out.push_back(who + ": duplicate parent");
        const std::string pname = net.variable(contrib.parent).name;
        if (static_cast<int>(contrib.table.size()) != net.cardinality(contrib.parent)) {
            out.push_back(who + ": contribution from '" + pname + "' has " +
                          std::to_string(contrib.table.size()) + " rows, expected " +
                          std::to_string(net.cardinality(contrib.parent)));
            continue;
        }
        for (std::size_t beta = 0; beta < contrib.table.size(); ++beta) {
            const auto& row = contrib.table[beta];
            if (static_cast<int>(row.size()) != d) {
                out.push_back(who + ": contribution from '" + pname +
                              "' row has wrong width");
                break;
            }
            double s = 0.0;
            bool bad = false;
            for (double p : row) {
                if (!(p >= 0.0 && p <= 1.0) || !std::isfinite(p)) bad = true;
                s += p;
            }
            if (bad) {
                out.push_back(who + ": contribution from '" + pname +
                              "' has entry outside [0,1]");
                break;
            }
            if (std::abs(s - 1.0) > kDistributionTolerance) {
                out.push_back(who + ": contribution not a distribution (parent '" + pname +
                              "' value " + std::to_string(beta) + " sums to " +
                              std::to_string(s) + ")");
                break;
            }
        }
    }
    if (c.leak) {
        if (static_cast<int>(c.leak->size()) != d) {
            out.push_back(who + ": leak has wrong length");
        } else {
            double s = 0.0;
            for (double p : *c.leak) s += p;
            if (std::abs(s - 1.0) > kDistributionTolerance)
                out.push_back(who + ": leak not a distribution");
        }
    }
}

}  // namespace

std::vector<std::string> validate(const Network& net) {
    std::vector<std::string> out;

    std::unordered_set<std::string> names;
    for (const auto& v : net.variables()) {
        if (v.cardinality < 1)
            out.push_back("variable '" + v.name + "' has cardinality " +
                          std::to_string(v.cardinality));
        if (!names.insert(v.name).second)
            out.push_back("duplicate variable name '" + v.name + "'");
        if ((v.kind == VarKind::deputy) != v.deputy_of.has_value())
            out.push_back("variable '" + v.name + "': deputy kind and deputy_of disagree");
        if (v.deputy_of) {
            if (*v.deputy_of < 0 ||
                static_cast<std::size_t>(*v.deputy_of) >= net.variable_count()) {
                out.push_back("variable '" + v.name + "': deputy_of out of range");
            } else {
                const Variable& conv = net.variable(*v.deputy_of);
                if (conv.kind != VarKind::convergent)
                    out.push_back("variable '" + v.name +
                                  "' deputizes a non-convergent variable");
                if (conv.cardinality != v.cardinality)
                    out.push_back("deputy '" + v.name +
                                  "' cardinality differs from its convergent variable");
            }
        }
    }

    for (const auto& v : net.variables()) {
        if (!net.has_cpd(v.id)) {
            out.push_back("variable '" + v.name + "' has no cpd");
            continue;
        }
        const CPD& c = net.cpd(v.id);
        if (const auto* t = std::get_if<TableCPD>(&c)) {
            if (v.kind == VarKind::convergent)
                out.push_back("variable '" + v.name +
                              "' is convergent but has a table cpd");
            validate_table_cpd(net, *t, out);
        } else {
            if (v.kind != VarKind::convergent)
                out.push_back("variable '" + v.name +
                              "' has a causal cpd but is not convergent");
            validate_causal_cpd(net, std::get<CausalCPD>(c), out);
        }
    }

    try {
        topological_order(net);
    } catch (const StructureError&) {
        out.push_back("not a DAG: parent/child arcs contain a directed cycle");
    }
    return out;
}

std::vector<VarId> topological_order(const Network& net) {
    const std::size_t n = net.variable_count();
    std::vector<int> pending(n, 0);
    auto kids = net.children();
    for (const auto& v : net.variables())
        pending[static_cast<std::size_t>(v.id)] =
            static_cast<int>(net.parents_of(v.id).size());

    std::priority_queue<VarId, std::vector<VarId>, std::greater<VarId>> ready;
    for (std::size_t i = 0; i < n; ++i)
        if (pending[i] == 0) ready.push(static_cast<VarId>(i));

    std::vector<VarId> order;
    order.reserve(n);
    while (!ready.empty()) {
        VarId v = ready.top();
        ready.pop();
        order.push_back(v);
        for (VarId c : kids[static_cast<std::size_t>(v)])
            if (--pending[static_cast<std::size_t>(c)] == 0) ready.push(c);
    }
    if (order.size() != n) throw StructureError("cycle detected in network arcs");
    return order;
}

void validate_query(const Network& net, const Query& query) {
    std::set<VarId> seen;
    auto check_var = [&](VarId v, const char* role) {
        if (v < 0 || static_cast<std::size_t>(v) >= net.variable_count())
            throw UsageError(std::string(role) + " references unknown variable id " +
                             std::to_string(v));
        if (net.variable(v).kind == VarKind::deputy)
            throw UsageError(std::string(role) + " references deputy variable '" +
                             net.variable(v).name + "'; deputies are internal");
        if (!seen.insert(v).second)
            throw UsageError("variable '" + net.variable(v).name +
                             "' appears twice in the query");
    };
    for (VarId t : query.targets) check_var(t, "target");
    for (const auto& [v, val] : query.evidence) {
        check_var(v, "evidence");
        if (val < 0 || val >= net.cardinality(v))
            throw UsageError("evidence value " + std::to_string(val) +
                             " out of range for variable '" + net.variable(v).name + "'");
    }
}

namespace {

Factor contribution_factor(VarId child, int child_card, VarId parent, int parent_card,
                           const std::vector<std::vector<double>>& table,
                           Factor::Tag tag) {
    if (child == parent) throw UsageError("contribution parent equals child");
    std::vector<VarId> scope;
    std::vector<int> cards;
    std::vector<double> vals(static_cast<std::size_t>(child_card) *
                             static_cast<std::size_t>(parent_card));
    if (child < parent) {
        scope = {child, parent};
        cards = {child_card, parent_card};
        for (int a = 0; a < child_card; ++a)
            for (int b = 0; b < parent_card; ++b)
                vals[static_cast<std::size_t>(a) * parent_card + b] = table[b][a];
    } else {
        scope = {parent, child};
        cards = {parent_card, child_card};
        for (int b = 0; b < parent_card; ++b)
            for (int a = 0; a < child_card; ++a)
                vals[static_cast<std::size_t>(b) * child_card + a] = table[b][a];
    }
    return Factor(std::move(scope), std::move(cards), std::move(vals), tag);
}

}  // namespace

TableCPD expand_causal_cpd(const CausalCPD& cpd, const ConvergentContext& ctx) {
    if (!ctx.contains(cpd.child))
        throw UsageError("context has no base op for the convergent child");
    if (cpd.contributions.empty() && !cpd.leak)
        throw UsageError("causal cpd has nothing to combine");

    const int child_card = cpd.leak ? static_cast<int>(cpd.leak->size())
                                    : static_cast<int>(cpd.contributions[0].table[0].size());

    // Restrict the context to the child: contribution parents may
    // themselves be convergent, but within one CPD they are plain
    // conditioning variables.
    ConvergentContext child_ctx;
    child_ctx.set(cpd.child, *ctx.find(cpd.child));

    std::optional<Factor> acc;
    for (const auto& contrib : cpd.contributions) {
        Factor fi = contribution_factor(cpd.child, child_card, contrib.parent,
                                        static_cast<int>(contrib.table.size()),
                                        contrib.table, Factor::Tag::heterogeneous);
        acc = acc ? combine_general(*acc, fi, child_ctx) : fi;
    }
    if (cpd.leak) {
        Factor leak({cpd.child}, {child_card}, *cpd.leak, Factor::Tag::heterogeneous);
        acc = acc ? combine_general(*acc, leak, child_ctx) : leak;
    }

    // Repackage into table layout: parents in contribution order, last
    // parent fastest, child value fastest of all.
    TableCPD out;
    out.child = cpd.child;
    std::vector<int> parent_cards;
    for (const auto& contrib : cpd.contributions) {
        out.parents.push_back(contrib.parent);
        parent_cards.push_back(static_cast<int>(contrib.table.size()));
    }
    std::size_t config_count = 1;
    for (int c : parent_cards) config_count *= static_cast<std::size_t>(c);
    out.probs.resize(config_count * static_cast<std::size_t>(child_card));

    std::vector<int> parent_vals(out.parents.size(), 0);
    std::vector<int> assignment(acc->scope().size());
    for (std::size_t cfg = 0; cfg < config_count; ++cfg) {
        for (int a = 0; a < child_card; ++a) {
            for (std::size_t i = 0; i < acc->scope().size(); ++i) {
                VarId v = acc->scope()[i];
                if (v == cpd.child) {
                    assignment[i] = a;
                } else {
                    auto it = std::find(out.parents.begin(), out.parents.end(), v);
                    assignment[i] = parent_vals[static_cast<std::size_t>(
                        it - out.parents.begin())];
                }
            }
            out.probs[cfg * static_cast<std::size_t>(child_card) + a] = acc->at(assignment);
        }
        for (int i = static_cast<int>(parent_vals.size()) - 1; i >= 0; --i) {
            if (++parent_vals[static_cast<std::size_t>(i)] <
                parent_cards[static_cast<std::size_t>(i)])
                break;
            parent_vals[static_cast<std::size_t>(i)] = 0;
        }
    }
    return out;
}

Factor factor_of_table_cpd(const Network& net, const TableCPD& cpd) {
    std::vector<VarId> scope = cpd.parents;
    scope.push_back(cpd.child);
    std::sort(scope.begin(), scope.end());
    std::vector<int> cards;
    cards.reserve(scope.size());
    for (VarId v : scope) cards.push_back(net.cardinality(v));

    Factor out(scope, cards, std::vector<double>(cpd.probs.size(), 0.0),
               Factor::Tag::homogeneous);
    // Walk the table layout (parents in listed order, child fastest) and
    // scatter into the sorted-scope layout.
    const int d = net.cardinality(cpd.child);
    std::vector<int> parent_vals(cpd.parents.size(), 0);
    std::vector<int> assignment(scope.size());
    std::vector<double> vals(cpd.probs.size());
    std::size_t config_count = cpd.probs.size() / static_cast<std::size_t>(d);
    for (std::size_t cfg = 0; cfg < config_count; ++cfg) {
        for (int a = 0; a < d; ++a) {
            for (std::size_t i = 0; i < scope.size(); ++i) {
                VarId v = scope[i];
                if (v == cpd.child) {
                    assignment[i] = a;
                } else {
                    auto it = std::find(cpd.parents.begin(), cpd.parents.end(), v);
                    assignment[i] =
                        parent_vals[static_cast<std::size_t>(it - cpd.parents.begin())];
                }
            }
            vals[out.linear_index(assignment)] =
                cpd.probs[cfg * static_cast<std::size_t>(d) + a];
        }
        for (int i = static_cast<int>(parent_vals.size()) - 1; i >= 0; --i) {
            if (++parent_vals[static_cast<std::size_t>(i)] <
                net.cardinality(cpd.parents[static_cast<std::size_t>(i)]))
                break;
            parent_vals[static_cast<std::size_t>(i)] = 0;
        }
    }
    return Factor(std::move(scope), std::move(cards), std::move(vals),
                  Factor::Tag::homogeneous);
}

Factor factor_of_contribution(const Network& net, VarId child, const Contribution& c) {
    return contribution_factor(child, net.cardinality(child), c.parent,
                               net.cardinality(c.parent), c.table,
                               Factor::Tag::heterogeneous);
}

Factor factor_of_leak(const Network& net, VarId child, const std::vector<double>& leak) {
    return Factor({child}, {net.cardinality(child)}, leak, Factor::Tag::heterogeneous);
}

}  // namespace cive
