#include "cive/transform.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

namespace cive {

namespace {

// Remaps every variable reference in a CPD through `to_new`.
CPD remap_cpd(const CPD& cpd, const std::vector<VarId>& to_new) {
    if (const auto* t = std::get_if<TableCPD>(&cpd)) {
        TableCPD out = *t;
        out.child = to_new[static_cast<std::size_t>(t->child)];
        for (auto& p : out.parents) p = to_new[static_cast<std::size_t>(p)];
        return out;
    }
    CausalCPD out = std::get<CausalCPD>(cpd);
    out.child = to_new[static_cast<std::size_t>(out.child)];
    for (auto& c : out.contributions) c.parent = to_new[static_cast<std::size_t>(c.parent)];
    return out;
}

}  // namespace

Network prune_irrelevant(const Network& net, const Query& query) {
    validate_query(net, query);

    // Ancestral closure of X union Y; everything else is barren for
    // P(X, Y=Y0).
    std::vector<char> keep(net.variable_count(), 0);
    std::vector<VarId> stack;
    auto mark = [&](VarId v) {
        if (!keep[static_cast<std::size_t>(v)]) {
            keep[static_cast<std::size_t>(v)] = 1;
            stack.push_back(v);
        }
    };
    for (VarId t : query.targets) mark(t);
    for (const auto& [v, val] : query.evidence) mark(v);
    while (!stack.empty()) {
        VarId v = stack.back();
        stack.pop_back();
        for (VarId p : net.parents_of(v)) mark(p);
    }

    std::vector<VarId> to_new(net.variable_count(), kNoVar);
    Network out;
    for (const auto& v : net.variables()) {
        if (!keep[static_cast<std::size_t>(v.id)]) continue;
        to_new[static_cast<std::size_t>(v.id)] =
            out.add_variable(v.name, v.cardinality, v.kind, v.deputy_of);
    }
    for (const auto& v : net.variables()) {
        if (!keep[static_cast<std::size_t>(v.id)] || !net.has_cpd(v.id)) continue;
        out.set_cpd(remap_cpd(net.cpd(v.id), to_new));
    }
    return out;
}

Network depute(const Network& net) {
    Network out = net;

    std::vector<VarId> convergents;
    for (const auto& v : net.variables())
        if (v.kind == VarKind::convergent) convergents.push_back(v.id);

    // Deputies first, so re-parenting below can point at them.
    std::unordered_map<VarId, VarId> deputy_of;
    for (VarId e : convergents) {
        std::string name = net.variable(e).name + "'";
        while (out.find(name) != kNoVar) name += "'";
        deputy_of[e] =
            out.add_variable(std::move(name), net.cardinality(e), VarKind::deputy, e);
    }

    // Children of e become children of e'.
    for (const auto& v : net.variables()) {
        if (!net.has_cpd(v.id)) continue;
        CPD cpd = net.cpd(v.id);
        bool touched = false;
        if (auto* t = std::get_if<TableCPD>(&cpd)) {
            for (auto& p : t->parents) {
                auto it = deputy_of.find(p);
                if (it != deputy_of.end()) {
                    p = it->second;
                    touched = true;
                }
            }
        } else {
            for (auto& c : std::get<CausalCPD>(cpd).contributions) {
                auto it = deputy_of.find(c.parent);
                if (it != deputy_of.end()) {
                    c.parent = it->second;
                    touched = true;
                }
            }
        }
        if (touched) out.set_cpd(std::move(cpd));
    }

    // The deputing function P(e'|e): identity over the shared value set.
    for (VarId e : convergents) {
        const int d = net.cardinality(e);
        TableCPD identity;
        identity.child = deputy_of[e];
        identity.parents = {e};
        identity.probs.assign(static_cast<std::size_t>(d) * d, 0.0);
        for (int a = 0; a < d; ++a)
            identity.probs[static_cast<std::size_t>(a) * d + a] = 1.0;
        out.set_cpd(std::move(identity));
    }
    return out;
}

void build_factor_lists(const Network& net, std::vector<Factor>& heterogeneous,
                        std::vector<Factor>& homogeneous) {
    heterogeneous.clear();
    homogeneous.clear();
    for (const auto& v : net.variables()) {
        if (!net.has_cpd(v.id)) continue;
        const CPD& cpd = net.cpd(v.id);
        if (const auto* t = std::get_if<TableCPD>(&cpd)) {
            homogeneous.push_back(factor_of_table_cpd(net, *t));
        } else {
            const auto& causal = std::get<CausalCPD>(cpd);
            for (const auto& c : causal.contributions)
                heterogeneous.push_back(factor_of_contribution(net, v.id, c));
            if (causal.leak)
                heterogeneous.push_back(factor_of_leak(net, v.id, *causal.leak));
        }
    }
}

PreparedQuery prepare_query(const Network& net, const Query& query) {
    validate_query(net, query);

    PreparedQuery pq;
    Network pruned = prune_irrelevant(net, query);
    pq.net = depute(pruned);
    pq.ctx = pq.net.context();
    build_factor_lists(pq.net, pq.heterogeneous, pq.homogeneous);

    // Ids moved twice: original -> pruned (by name) -> deputed (stable
    // prefix).  Track the way back for relabeling answers.
    pq.source_id.assign(pq.net.variable_count(), kNoVar);
    for (const auto& v : pq.net.variables()) {
        const std::string& name =
            v.kind == VarKind::deputy ? pq.net.variable(*v.deputy_of).name : v.name;
        pq.source_id[static_cast<std::size_t>(v.id)] = net.find(name);
    }

    // Replace convergent targets by their deputies.
    auto deputy_lookup = [&](VarId e) {
        for (const auto& v : pq.net.variables())
            if (v.deputy_of && *v.deputy_of == e) return v.id;
        return kNoVar;
    };
    for (VarId t : query.targets) {
        VarId local = pq.net.find(net.variable(t).name);
        if (pq.net.variable(local).kind == VarKind::convergent) local = deputy_lookup(local);
        pq.targets.push_back(local);
    }

    // Observed regular variables collapse to a single value everywhere;
    // observed convergent variables keep their full value range until
    // they are eliminated.
    std::set<VarId> dropped;
    for (const auto& [v, val] : query.evidence) {
        VarId local = pq.net.find(net.variable(v).name);
        if (pq.net.variable(local).kind == VarKind::convergent) {
            pq.convergent_evidence.emplace_back(local, val);
        } else {
            pq.regular_evidence.emplace_back(local, val);
            dropped.insert(local);
            for (auto* list : {&pq.heterogeneous, &pq.homogeneous})
                for (auto& f : *list)
                    if (f.has_variable(local)) f = restrict_factor(f, local, val, true);
        }
    }

    std::set<VarId> excluded(pq.targets.begin(), pq.targets.end());
    for (const auto& v : pq.net.variables())
        if (!excluded.count(v.id) && !dropped.count(v.id)) pq.to_eliminate.push_back(v.id);
    return pq;
}

VePrepared prepare_ve(const Network& net, const Query& query) {
    validate_query(net, query);

    VePrepared vp;
    vp.net = prune_irrelevant(net, query);
    ConvergentContext ctx = vp.net.context();

    // Expand every causal CPD into its plain table.
    for (const auto& v : std::vector<Variable>(vp.net.variables())) {
        if (!vp.net.has_cpd(v.id)) continue;
        if (const auto* c = std::get_if<CausalCPD>(&vp.net.cpd(v.id)))
            vp.net.set_cpd(expand_causal_cpd(*c, ctx));
    }

    vp.source_id.assign(vp.net.variable_count(), kNoVar);
    for (const auto& v : vp.net.variables())
        vp.source_id[static_cast<std::size_t>(v.id)] = net.find(v.name);

    for (const auto& v : vp.net.variables())
        if (vp.net.has_cpd(v.id))
            vp.factors.push_back(
                factor_of_table_cpd(vp.net, std::get<TableCPD>(vp.net.cpd(v.id))));

    for (VarId t : query.targets) vp.targets.push_back(vp.net.find(net.variable(t).name));

    // With tables only, every observation restricts up front.
    std::set<VarId> excluded(vp.targets.begin(), vp.targets.end());
    for (const auto& [v, val] : query.evidence) {
        VarId local = vp.net.find(net.variable(v).name);
        excluded.insert(local);
        for (auto& f : vp.factors)
            if (f.has_variable(local)) f = restrict_factor(f, local, val, true);
    }
    for (const auto& v : vp.net.variables())
        if (!excluded.count(v.id)) vp.to_eliminate.push_back(v.id);
    return vp;
}

}  // namespace cive
