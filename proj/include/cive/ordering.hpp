// Elimination orderings.  Both heuristics enforce the legitimacy
// constraint (a convergent variable is summed out before its deputy)
// through eligibility filtering inside the greedy loop, and break ties by
// ascending variable id so results are reproducible.
#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <unordered_map>
#include <vector>

#include "cive/transform.hpp"

namespace cive {

using EliminationOrdering = std::vector<VarId>;

// Undirected co-occurrence graph of the live factors: u-v iff some factor
// mentions both.  Backed by bitset rows over a compact index.
class InteractionGraph {
public:
    explicit InteractionGraph(std::vector<VarId> vars);

    void add_clique(std::span<const VarId> vars);

    const std::vector<VarId>& vars() const { return vars_; }
    bool adjacent(VarId u, VarId v) const;
    std::vector<VarId> neighbors(VarId v) const;

    int index_of(VarId v) const;
    std::size_t word_count() const { return words_; }
    const std::vector<std::uint64_t>& row(int idx) const { return adj_[idx]; }

private:
    std::vector<VarId> vars_;  // sorted ascending
    std::unordered_map<VarId, int> index_;
    std::size_t words_;
    std::vector<std::vector<std::uint64_t>> adj_;
};

struct OrderingConstraints {
    std::set<VarId> keep;                          // never eliminated (targets)
    std::map<VarId, VarId> deputy_of_convergent;   // convergent -> deputy
};

InteractionGraph build_interaction_graph(const PreparedQuery& pq);
InteractionGraph build_interaction_graph(const VePrepared& vp);
OrderingConstraints constraints_of(const PreparedQuery& pq);
OrderingConstraints constraints_of(const VePrepared& vp);

// Maximum cardinality search: number vertices greedily by the count of
// already-numbered neighbors (targets count as pre-numbered) and return
// the reverse of the numbering.  A convergent variable only becomes
// numberable once its deputy is numbered, which lands it earlier in the
// reversed ordering.
EliminationOrdering order_max_cardinality(const InteractionGraph& graph,
                                          const OrderingConstraints& constraints);

// Minimum deficiency: repeatedly eliminate the eligible variable whose
// uneliminated neighbors need the fewest fill-in edges, then connect
// those neighbors pairwise.  A deputy becomes eligible once its
// convergent variable has been eliminated.
EliminationOrdering order_min_deficiency(const InteractionGraph& graph,
                                         const OrderingConstraints& constraints);

// True iff `order` covers exactly the eliminable variables and every
// convergent variable precedes its deputy.
bool is_legitimate(const EliminationOrdering& order, const std::vector<VarId>& to_eliminate,
                   const OrderingConstraints& constraints);

struct CostReport {
    struct Step {
        VarId variable;              // kNoVar for the final assembly
        std::uint64_t created_size;  // largest factor created by this step
    };
    std::uint64_t max_size = 0;
    std::vector<Step> steps;
};

// Simulates the elimination run on scopes only and reports the size of
// every factor it would create.  Sizes saturate at 2^64-1.
CostReport estimate_cost(const PreparedQuery& pq, const EliminationOrdering& ordering);
CostReport estimate_cost(const VePrepared& vp, const EliminationOrdering& ordering);

}  // namespace cive
