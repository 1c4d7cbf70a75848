#include "cive/ordering.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <limits>

namespace cive {

namespace {

inline void set_bit(std::vector<std::uint64_t>& row, int i) {
    row[static_cast<std::size_t>(i) >> 6] |= std::uint64_t{1} << (i & 63);
}
inline void clear_bit(std::vector<std::uint64_t>& row, int i) {
    row[static_cast<std::size_t>(i) >> 6] &= ~(std::uint64_t{1} << (i & 63));
}
inline bool test_bit(const std::vector<std::uint64_t>& row, int i) {
    return (row[static_cast<std::size_t>(i) >> 6] >> (i & 63)) & 1;
}

template <typename Fn>
void for_each_bit(const std::vector<std::uint64_t>& row, Fn&& fn) {
    for (std::size_t w = 0; w < row.size(); ++w) {
        std::uint64_t bits = row[w];
        while (bits) {
            int b = std::countr_zero(bits);
            fn(static_cast<int>(w * 64) + b);
            bits &= bits - 1;
        }
    }
}

}  // namespace

InteractionGraph::InteractionGraph(std::vector<VarId> vars) : vars_(std::move(vars)) {
    std::sort(vars_.begin(), vars_.end());
    vars_.erase(std::unique(vars_.begin(), vars_.end()), vars_.end());
    for (std::size_t i = 0; i < vars_.size(); ++i)
        index_[vars_[i]] = static_cast<int>(i);
    words_ = (vars_.size() + 63) / 64;
    adj_.assign(vars_.size(), std::vector<std::uint64_t>(words_, 0));
}

void InteractionGraph::add_clique(std::span<const VarId> vars) {
    for (VarId u : vars) {
        int iu = index_of(u);
        for (VarId v : vars) {
            if (u == v) continue;
            set_bit(adj_[static_cast<std::size_t>(iu)], index_of(v));
        }
    }
}

int InteractionGraph::index_of(VarId v) const {
    auto it = index_.find(v);
    if (it == index_.end())
        throw UsageError("variable " + std::to_string(v) + " not in interaction graph");
    return it->second;
}

bool InteractionGraph::adjacent(VarId u, VarId v) const {
    return test_bit(adj_[static_cast<std::size_t>(index_of(u))], index_of(v));
}

std::vector<VarId> InteractionGraph::neighbors(VarId v) const {
    std::vector<VarId> out;
    for_each_bit(adj_[static_cast<std::size_t>(index_of(v))],
                 [&](int i) { out.push_back(vars_[static_cast<std::size_t>(i)]); });
    return out;
}

namespace {

InteractionGraph graph_from(const std::vector<const std::vector<Factor>*>& lists,
                            const Network& net) {
    std::vector<VarId> vars;
    for (const auto& v : net.variables()) vars.push_back(v.id);
    InteractionGraph g(std::move(vars));
    for (const auto* list : lists)
        for (const auto& f : *list) g.add_clique(f.scope());
    return g;
}

}  // namespace

InteractionGraph build_interaction_graph(const PreparedQuery& pq) {
    return graph_from({&pq.heterogeneous, &pq.homogeneous}, pq.net);
}

InteractionGraph build_interaction_graph(const VePrepared& vp) {
    return graph_from({&vp.factors}, vp.net);
}

OrderingConstraints constraints_of(const PreparedQuery& pq) {
    OrderingConstraints c;
    c.keep.insert(pq.targets.begin(), pq.targets.end());
    for (const auto& [v, val] : pq.regular_evidence) c.keep.insert(v);
    for (const auto& v : pq.net.variables())
        if (v.deputy_of) c.deputy_of_convergent[*v.deputy_of] = v.id;
    return c;
}

OrderingConstraints constraints_of(const VePrepared& vp) {
    OrderingConstraints c;
    c.keep.insert(vp.targets.begin(), vp.targets.end());
    for (const auto& v : vp.net.variables()) {
        bool eliminable = std::binary_search(vp.to_eliminate.begin(), vp.to_eliminate.end(),
                                             v.id);
        if (!eliminable) c.keep.insert(v.id);
    }
    return c;
}

namespace {

// Shared greedy-selection state over the compact graph index.
struct GreedyState {
    const InteractionGraph& g;
    const OrderingConstraints& cons;
    int n;
    std::vector<char> eliminable;  // candidates for the ordering
    std::vector<char> placed;      // numbered (MCS) or eliminated (mindef)
    std::vector<int> blocker;      // index that must be placed first, or -1

    GreedyState(const InteractionGraph& graph, const OrderingConstraints& constraints,
                bool deputy_waits_for_convergent)
        : g(graph), cons(constraints), n(static_cast<int>(graph.vars().size())),
          eliminable(static_cast<std::size_t>(n), 0),
          placed(static_cast<std::size_t>(n), 0),
          blocker(static_cast<std::size_t>(n), -1) {
        for (int i = 0; i < n; ++i)
            eliminable[static_cast<std::size_t>(i)] =
                cons.keep.count(g.vars()[static_cast<std::size_t>(i)]) ? 0 : 1;
        for (const auto& [conv, dep] : cons.deputy_of_convergent) {
            auto it_c = std::lower_bound(g.vars().begin(), g.vars().end(), conv);
            auto it_d = std::lower_bound(g.vars().begin(), g.vars().end(), dep);
            if (it_c == g.vars().end() || *it_c != conv) continue;
            if (it_d == g.vars().end() || *it_d != dep) continue;
            int ic = static_cast<int>(it_c - g.vars().begin());
            int id = static_cast<int>(it_d - g.vars().begin());
            if (!eliminable[static_cast<std::size_t>(ic)] ||
                !eliminable[static_cast<std::size_t>(id)])
                continue;
            if (deputy_waits_for_convergent)
                blocker[static_cast<std::size_t>(id)] = ic;
            else
                blocker[static_cast<std::size_t>(ic)] = id;
        }
    }

    bool eligible(int i) const {
        if (!eliminable[static_cast<std::size_t>(i)] || placed[static_cast<std::size_t>(i)])
            return false;
        int b = blocker[static_cast<std::size_t>(i)];
        return b < 0 || placed[static_cast<std::size_t>(b)];
    }
};

}  // namespace

EliminationOrdering order_max_cardinality(const InteractionGraph& graph,
                                          const OrderingConstraints& constraints) {
    // The ordering is the reverse of the numbering, so a deputy is
    // numbered before its convergent variable.
    GreedyState st(graph, constraints, /*deputy_waits_for_convergent=*/false);
    const int n = st.n;

    // Kept variables (targets) count as numbered from the start.
    std::vector<int> count(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
        if (st.eliminable[static_cast<std::size_t>(i)]) continue;
        st.placed[static_cast<std::size_t>(i)] = 1;
        for_each_bit(graph.row(i), [&](int j) { ++count[static_cast<std::size_t>(j)]; });
    }

    std::vector<VarId> numbering;
    int remaining = 0;
    for (int i = 0; i < n; ++i)
        if (st.eliminable[static_cast<std::size_t>(i)]) ++remaining;

    while (remaining > 0) {
        int best = -1;
        for (int i = 0; i < n; ++i) {
            if (!st.eligible(i)) continue;
            if (best < 0 || count[static_cast<std::size_t>(i)] >
                                count[static_cast<std::size_t>(best)])
                best = i;
        }
        assert(best >= 0);
        st.placed[static_cast<std::size_t>(best)] = 1;
        numbering.push_back(graph.vars()[static_cast<std::size_t>(best)]);
        for_each_bit(graph.row(best), [&](int j) { ++count[static_cast<std::size_t>(j)]; });
        --remaining;
    }

    std::reverse(numbering.begin(), numbering.end());
    return numbering;
}

EliminationOrdering order_min_deficiency(const InteractionGraph& graph,
                                         const OrderingConstraints& constraints) {
    GreedyState st(graph, constraints, /*deputy_waits_for_convergent=*/true);
    const int n = st.n;
    const std::size_t words = graph.word_count();

    // Working adjacency, mutated as fill edges appear.
    std::vector<std::vector<std::uint64_t>> adj(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) adj[static_cast<std::size_t>(i)] = graph.row(i);
    std::vector<std::uint64_t> remaining(words, 0);
    for (int i = 0; i < n; ++i) set_bit(remaining, i);

    auto deficiency = [&](int v) {
        // Non-adjacent pairs among the remaining neighbors of v.
        std::vector<std::uint64_t> nb(words);
        for (std::size_t w = 0; w < words; ++w)
            nb[w] = adj[static_cast<std::size_t>(v)][w] & remaining[w];
        long total = 0;
        for_each_bit(nb, [&](int u) {
            long missing = 0;
            for (std::size_t w = 0; w < words; ++w)
                missing += std::popcount(nb[w] & ~adj[static_cast<std::size_t>(u)][w]);
            missing -= 1;  // u itself is in nb but not in adj[u]
            total += missing;
        });
        return total / 2;
    };

    std::vector<long> score(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i)
        if (st.eliminable[static_cast<std::size_t>(i)]) score[static_cast<std::size_t>(i)] = deficiency(i);

    EliminationOrdering order;
    int left = 0;
    for (int i = 0; i < n; ++i)
        if (st.eliminable[static_cast<std::size_t>(i)]) ++left;

    while (left > 0) {
        int best = -1;
        for (int i = 0; i < n; ++i) {
            if (!st.eligible(i)) continue;
            if (best < 0 ||
                score[static_cast<std::size_t>(i)] < score[static_cast<std::size_t>(best)])
                best = i;
        }
        assert(best >= 0);
        st.placed[static_cast<std::size_t>(best)] = 1;
        order.push_back(graph.vars()[static_cast<std::size_t>(best)]);
        --left;

        // Remove the vertex, connect its remaining neighbors pairwise,
        // and refresh the scores the surgery may have changed: the
        // neighbors themselves plus common neighbors of each fill edge.
        clear_bit(remaining, best);
        std::vector<std::uint64_t> nb(words);
        for (std::size_t w = 0; w < words; ++w)
            nb[w] = adj[static_cast<std::size_t>(best)][w] & remaining[w];

        std::vector<std::uint64_t> dirty = nb;
        std::vector<std::pair<int, int>> fill;
        for_each_bit(nb, [&](int u) {
            for_each_bit(nb, [&](int w2) {
                if (w2 <= u) return;
                if (!test_bit(adj[static_cast<std::size_t>(u)], w2))
                    fill.emplace_back(u, w2);
            });
        });
        for_each_bit(nb, [&](int u) {
            for (std::size_t w = 0; w < words; ++w)
                adj[static_cast<std::size_t>(u)][w] |= nb[w];
            clear_bit(adj[static_cast<std::size_t>(u)], u);
            clear_bit(adj[static_cast<std::size_t>(u)], best);
        });
        for (auto [u, w2] : fill) {
            for (std::size_t w = 0; w < words; ++w)
                dirty[w] |= adj[static_cast<std::size_t>(u)][w] &
                            adj[static_cast<std::size_t>(w2)][w] & remaining[w];
        }
        for_each_bit(dirty, [&](int u) {
            if (st.eliminable[static_cast<std::size_t>(u)] &&
                !st.placed[static_cast<std::size_t>(u)])
                score[static_cast<std::size_t>(u)] = deficiency(u);
        });
    }
    return order;
}

bool is_legitimate(const EliminationOrdering& order, const std::vector<VarId>& to_eliminate,
                   const OrderingConstraints& constraints) {
    std::vector<VarId> sorted_order = order;
    std::sort(sorted_order.begin(), sorted_order.end());
    std::vector<VarId> sorted_elim = to_eliminate;
    std::sort(sorted_elim.begin(), sorted_elim.end());
    if (sorted_order != sorted_elim) return false;

    std::map<VarId, std::size_t> pos;
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    for (const auto& [conv, dep] : constraints.deputy_of_convergent) {
        auto pd = pos.find(dep);
        if (pd == pos.end()) continue;  // deputy not eliminated here
        auto pc = pos.find(conv);
        if (pc == pos.end()) return false;  // deputy eliminated but convergent never is
        if (pc->second > pd->second) return false;
    }
    return true;
}

namespace {

// Scope-only mirror of the elimination engines; sizes via saturating
// products of cardinalities.
struct SymbolicRun {
    const Network& net;
    std::vector<std::vector<VarId>> scopes;
    std::vector<char> heterogeneous;
    std::vector<char> alive;
    std::unordered_map<VarId, std::vector<int>> buckets;

    explicit SymbolicRun(const Network& n) : net(n) {}

    void add(std::vector<VarId> scope, bool het) {
        int id = static_cast<int>(scopes.size());
        for (VarId v : scope) buckets[v].push_back(id);
        scopes.push_back(std::move(scope));
        heterogeneous.push_back(het ? 1 : 0);
        alive.push_back(1);
    }

    std::uint64_t size_of(const std::vector<VarId>& scope) const {
        std::uint64_t s = 1;
        for (VarId v : scope)
            s = saturating_mul(s, static_cast<std::uint64_t>(net.cardinality(v)));
        return s;
    }

    CostReport run(const EliminationOrdering& ordering) {
        CostReport report;
        for (VarId z : ordering) {
            std::vector<int> gathered;
            auto it = buckets.find(z);
            if (it != buckets.end())
                for (int id : it->second)
                    if (alive[static_cast<std::size_t>(id)]) gathered.push_back(id);
            if (gathered.empty()) continue;

            std::vector<VarId> merged;
            bool any_het = false;
            for (int id : gathered) {
                std::vector<VarId> next;
                std::set_union(merged.begin(), merged.end(),
                               scopes[static_cast<std::size_t>(id)].begin(),
                               scopes[static_cast<std::size_t>(id)].end(),
                               std::back_inserter(next));
                merged = std::move(next);
                if (heterogeneous[static_cast<std::size_t>(id)]) any_het = true;
                alive[static_cast<std::size_t>(id)] = 0;
            }
            std::vector<VarId> reduced;
            for (VarId v : merged)
                if (v != z) reduced.push_back(v);

            // A lone factor is never combined; only the reduced result
            // materializes.
            std::uint64_t created =
                gathered.size() >= 2 ? size_of(merged) : size_of(reduced);
            report.steps.push_back({z, created});
            add(std::move(reduced), any_het);
        }

        std::vector<VarId> final_scope;
        for (std::size_t id = 0; id < scopes.size(); ++id) {
            if (!alive[id]) continue;
            std::vector<VarId> next;
            std::set_union(final_scope.begin(), final_scope.end(), scopes[id].begin(),
                           scopes[id].end(), std::back_inserter(next));
            final_scope = std::move(next);
        }
        report.steps.push_back({kNoVar, size_of(final_scope)});

        for (const auto& s : report.steps)
            report.max_size = std::max(report.max_size, s.created_size);
        return report;
    }
};

void check_ordering(const EliminationOrdering& ordering,
                    const std::vector<VarId>& to_eliminate,
                    const OrderingConstraints& cons) {
    if (!is_legitimate(ordering, to_eliminate, cons))
        throw UsageError("elimination ordering is not legitimate for this query");
}

}  // namespace

CostReport estimate_cost(const PreparedQuery& pq, const EliminationOrdering& ordering) {
    check_ordering(ordering, pq.to_eliminate, constraints_of(pq));
    SymbolicRun run(pq.net);
    for (const auto& f : pq.heterogeneous) run.add(f.scope(), true);
    for (const auto& f : pq.homogeneous) run.add(f.scope(), false);
    return run.run(ordering);
}

CostReport estimate_cost(const VePrepared& vp, const EliminationOrdering& ordering) {
    check_ordering(ordering, vp.to_eliminate, constraints_of(vp));
    SymbolicRun run(vp.net);
    for (const auto& f : vp.factors) run.add(f.scope(), false);
    return run.run(ordering);
}

}  // namespace cive
