// Random network/query generation and cost-distribution sweeps: per
// variable (marginal queries) and per random k-observation query, for
// both engines.  Costs come from the symbolic estimator, never from
// numeric runs, so expensive queries are measured rather than executed.
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cive/engine.hpp"

namespace cive {

struct GeneratorSpec {
    int nodes = 10;
    int max_parents = 3;
    int card_min = 2;
    int card_max = 2;
    double fraction_convergent = 0.4;
    std::vector<BaseCombinationOp> ops = {BaseCombinationOp::logical_or(),
                                          BaseCombinationOp::max_value()};
    double leak_fraction = 0.5;  // chance a convergent node gets a leak term
    std::uint64_t seed = 0;
};

// Random DAG over a shuffled topological order; deterministic per seed.
// Generated networks always pass validate().
Network generate_network(const GeneratorSpec& spec);

// 200 nodes, cardinalities 2-4, ~60% convergent with MAX, fan-in up to 8.
// An analog of a large multilevel multivalued diagnostic network, not a
// reproduction of any particular one.
GeneratorSpec cpsc_like_preset(std::uint64_t seed);

// One uniform random target plus `observations` distinct observed
// variables with uniform random values.
Query random_query(const Network& net, int observations, std::mt19937_64& rng);

// Cumulative cost distribution: (cost, number of queries with cost <=
// that value), sorted ascending; the last count is the population size.
struct CostDistribution {
    std::vector<std::pair<std::uint64_t, std::size_t>> points;

    static CostDistribution of(std::vector<std::uint64_t> costs);
    std::size_t population() const;
    std::uint64_t max_cost() const;
    std::uint64_t median_cost() const;
    double mean_cost() const;
    double fraction_at_or_below(std::uint64_t threshold) const;
    std::string to_csv() const;  // header "cost,cnv"
};

struct VariableCostSweep {
    CostDistribution ici;
    CostDistribution ve;
};

// Symbolic cost of every variable's zero-observation marginal, under both
// engines.
VariableCostSweep run_variable_cost_sweep(const Network& net, Heuristic heuristic);

// Symbolic ICI cost of `n_queries` random k-observation queries.
// Per-query randomness derives from (seed, query index), so results are
// identical however the work is scheduled.
CostDistribution run_query_cost_sweep(const Network& net, int k, int n_queries,
                                      Heuristic heuristic, std::uint64_t seed, int jobs = 1);

// The raw per-query costs behind run_query_cost_sweep, index-aligned with
// the generated queries.
std::vector<std::uint64_t> query_sweep_costs(const Network& net, int k, int n_queries,
                                             Heuristic heuristic, std::uint64_t seed,
                                             int jobs = 1);

Query sweep_query(const Network& net, int k, std::uint64_t seed, int index);

void write_csv(const CostDistribution& dist, const std::string& path);

}  // namespace cive
