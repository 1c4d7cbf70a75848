#include "cive/engine.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "cive/oracle.hpp"

namespace cive {

namespace {

// Live factor store with a variable -> factor index so each elimination
// step retrieves exactly the factors that mention the variable.
class FactorPool {
public:
    void add(Factor f) {
        int id = static_cast<int>(factors_.size());
        for (VarId v : f.scope()) buckets_[v].push_back(id);
        factors_.push_back(std::move(f));
        alive_.push_back(1);
    }

    // Alive factors mentioning z, in creation order; marks them consumed.
    std::vector<int> take(VarId z) {
        std::vector<int> out;
        auto it = buckets_.find(z);
        if (it == buckets_.end()) return out;
        for (int id : it->second) {
            if (!alive_[static_cast<std::size_t>(id)]) continue;
            alive_[static_cast<std::size_t>(id)] = 0;
            out.push_back(id);
        }
        return out;
    }

    const Factor& factor(int id) const { return factors_[static_cast<std::size_t>(id)]; }

    std::vector<int> alive_ids() const {
        std::vector<int> out;
        for (std::size_t i = 0; i < factors_.size(); ++i)
            if (alive_[i]) out.push_back(static_cast<int>(i));
        return out;
    }

private:
    std::vector<Factor> factors_;
    std::vector<char> alive_;
    std::map<VarId, std::vector<int>> buckets_;
};

Factor relabel_answer(const Factor& f, const std::vector<VarId>& source_id) {
    return f.relabeled([&](VarId v) { return source_id[static_cast<std::size_t>(v)]; });
}

InferenceResult finish(Factor answer, const std::vector<VarId>& source_id,
                       CostReport cost, std::vector<std::string> warnings) {
    InferenceResult res;
    res.answer = relabel_answer(answer, source_id);
    res.evidence_probability = res.answer.sum();
    res.cost = std::move(cost);
    res.warnings = std::move(warnings);
    return res;
}

}  // namespace

InferenceResult ici_query(const PreparedQuery& prepared, const EliminationOrdering& ordering) {
    if (!is_legitimate(ordering, prepared.to_eliminate, constraints_of(prepared)))
        throw UsageError("elimination ordering is not legitimate for this query");

    std::map<VarId, int> observed(prepared.convergent_evidence.begin(),
                                  prepared.convergent_evidence.end());

    FactorPool het, hom;
    for (const auto& f : prepared.heterogeneous) het.add(f);
    for (const auto& f : prepared.homogeneous) hom.add(f);

    CostReport report;
    std::vector<std::string> warnings;

    for (VarId z : ordering) {
        std::vector<int> ks = het.take(z);
        std::vector<int> ms = hom.take(z);
        if (ks.empty() && ms.empty()) {
            warnings.push_back("variable '" + prepared.net.variable(z).name +
                               "' appears in no live factor; skipped");
            continue;
        }

        std::uint64_t created = 0;
        auto track = [&](const Factor& f) {
            created = std::max(created, static_cast<std::uint64_t>(f.size()));
        };

        std::optional<Factor> f;
        for (int id : ks) {
            f = f ? combine_general(*f, het.factor(id), prepared.ctx) : het.factor(id);
            if (ks.size() > 1) track(*f);
        }
        std::optional<Factor> g;
        for (int id : ms) {
            g = g ? multiply(*g, hom.factor(id)) : hom.factor(id);
            if (ms.size() > 1) track(*g);
        }
        Factor combined = (f && g) ? multiply(*f, *g) : (f ? std::move(*f) : std::move(*g));
        if (f && g) track(combined);

        auto ev = observed.find(z);
        Factor h = (ev != observed.end()) ? restrict_factor(combined, z, ev->second, true)
                                          : sum_out(combined, z);
        track(h);
        report.steps.push_back({z, created});

        // Results with a heterogeneous ingredient stay heterogeneous.
        if (ks.empty())
            hom.add(std::move(h));
        else
            het.add(std::move(h));
    }

    std::optional<Factor> f;
    for (int id : het.alive_ids())
        f = f ? combine_general(*f, het.factor(id), prepared.ctx) : het.factor(id);
    std::optional<Factor> g;
    for (int id : hom.alive_ids()) g = g ? multiply(*g, hom.factor(id)) : hom.factor(id);

    Factor answer = (f && g) ? multiply(*f, *g)
                             : (f ? std::move(*f) : (g ? std::move(*g) : Factor(1.0)));
    report.steps.push_back({kNoVar, static_cast<std::uint64_t>(answer.size())});
    for (const auto& s : report.steps)
        report.max_size = std::max(report.max_size, s.created_size);

    return finish(std::move(answer), prepared.source_id, std::move(report),
                  std::move(warnings));
}

InferenceResult ve_query(const VePrepared& prepared, const EliminationOrdering& ordering) {
    if (!is_legitimate(ordering, prepared.to_eliminate, constraints_of(prepared)))
        throw UsageError("elimination ordering does not cover the query's variables");

    FactorPool pool;
    for (const auto& f : prepared.factors) pool.add(f);

    CostReport report;
    std::vector<std::string> warnings;

    for (VarId z : ordering) {
        std::vector<int> ids = pool.take(z);
        if (ids.empty()) {
            warnings.push_back("variable '" + prepared.net.variable(z).name +
                               "' appears in no live factor; skipped");
            continue;
        }
        std::uint64_t created = 0;
        std::optional<Factor> g;
        for (int id : ids) {
            g = g ? multiply(*g, pool.factor(id)) : pool.factor(id);
            if (ids.size() > 1)
                created = std::max(created, static_cast<std::uint64_t>(g->size()));
        }
        Factor h = sum_out(*g, z);
        created = std::max(created, static_cast<std::uint64_t>(h.size()));
        report.steps.push_back({z, created});
        pool.add(std::move(h));
    }

    std::optional<Factor> g;
    for (int id : pool.alive_ids()) g = g ? multiply(*g, pool.factor(id)) : pool.factor(id);
    Factor answer = g ? std::move(*g) : Factor(1.0);
    report.steps.push_back({kNoVar, static_cast<std::uint64_t>(answer.size())});
    for (const auto& s : report.steps)
        report.max_size = std::max(report.max_size, s.created_size);

    return finish(std::move(answer), prepared.source_id, std::move(report),
                  std::move(warnings));
}

Factor posterior(const InferenceResult& result) {
    const double z = result.evidence_probability;
    if (z == 0.0)
        throw ImpossibleEvidenceError("evidence has probability zero");
    std::vector<double> values = result.answer.values();
    for (double& v : values) v /= z;
    return Factor(result.answer.scope(), result.answer.cardinalities(), std::move(values),
                  result.answer.tag());
}

EliminationOrdering choose_ordering(const PreparedQuery& pq, Heuristic h) {
    InteractionGraph graph = build_interaction_graph(pq);
    OrderingConstraints cons = constraints_of(pq);
    return h == Heuristic::mcs ? order_max_cardinality(graph, cons)
                               : order_min_deficiency(graph, cons);
}

EliminationOrdering choose_ordering(const VePrepared& vp, Heuristic h) {
    InteractionGraph graph = build_interaction_graph(vp);
    OrderingConstraints cons = constraints_of(vp);
    return h == Heuristic::mcs ? order_max_cardinality(graph, cons)
                               : order_min_deficiency(graph, cons);
}

InferenceResult answer_query(const Network& net, const Query& query, EngineKind engine,
                             Heuristic heuristic) {
    switch (engine) {
    case EngineKind::ici: {
        PreparedQuery pq = prepare_query(net, query);
        return ici_query(pq, choose_ordering(pq, heuristic));
    }
    case EngineKind::ve: {
        VePrepared vp = prepare_ve(net, query);
        return ve_query(vp, choose_ordering(vp, heuristic));
    }
    case EngineKind::oracle: {
        JointTable joint = joint_enumeration(net);
        InferenceResult res;
        res.answer = oracle_query_from_joint(joint, query);
        res.evidence_probability = res.answer.sum();
        res.cost.max_size = static_cast<std::uint64_t>(joint.table.size());
        res.cost.steps.push_back({kNoVar, res.cost.max_size});
        return res;
    }
    }
    throw UsageError("unknown engine");
}

}  // namespace cive
