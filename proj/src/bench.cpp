#include "cive/bench.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <thread>

namespace cive {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

std::vector<double> random_distribution(std::mt19937_64& rng, int d) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::vector<double> out(static_cast<std::size_t>(d));
    double s = 0.0;
    for (double& v : out) s += (v = u(rng));
    for (double& v : out) v /= s;
    return out;
}

void check_spec(const GeneratorSpec& spec) {
    if (spec.nodes < 1) throw UsageError("generator: need at least one node");
    if (spec.max_parents < 0 || spec.max_parents >= spec.nodes)
        throw UsageError("generator: max_parents must be in [0, nodes)");
    if (spec.card_min < 1 || spec.card_min > spec.card_max)
        throw UsageError("generator: bad cardinality range");
    if (spec.fraction_convergent < 0.0 || spec.fraction_convergent > 1.0)
        throw UsageError("generator: fraction_convergent must be in [0,1]");
    if (spec.fraction_convergent > 0.0 && spec.ops.empty())
        throw UsageError("generator: empty base-op palette");
}

}  // namespace

Network generate_network(const GeneratorSpec& spec) {
    check_spec(spec);
    std::mt19937_64 rng(spec.seed);

    // Random topological order: ids are a shuffle of the positions.
    const int n = spec.nodes;
    std::vector<VarId> id_at(static_cast<std::size_t>(n));
    std::iota(id_at.begin(), id_at.end(), 0);
    std::shuffle(id_at.begin(), id_at.end(), rng);

    std::vector<int> cards(static_cast<std::size_t>(n), 0);
    Network net;
    for (int i = 0; i < n; ++i) net.add_variable("n" + std::to_string(i), 1);

    struct Plan {
        bool convergent = false;
        BaseCombinationOp op = BaseCombinationOp::max_value();
        std::vector<VarId> parents;
    };
    std::vector<Plan> plans(static_cast<std::size_t>(n));

    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (int pos = 0; pos < n; ++pos) {
        VarId id = id_at[static_cast<std::size_t>(pos)];
        Plan& plan = plans[static_cast<std::size_t>(id)];
        const int avail = std::min(spec.max_parents, pos);

        plan.convergent = avail > 0 && coin(rng) < spec.fraction_convergent;
        int n_parents = plan.convergent ? uniform_int(rng, 1, avail)
                                        : (avail > 0 ? uniform_int(rng, 0, avail) : 0);

        std::vector<int> pool(static_cast<std::size_t>(pos));
        std::iota(pool.begin(), pool.end(), 0);
        std::shuffle(pool.begin(), pool.end(), rng);
        for (int i = 0; i < n_parents; ++i)
            plan.parents.push_back(id_at[static_cast<std::size_t>(pool[static_cast<std::size_t>(i)])]);
        std::sort(plan.parents.begin(), plan.parents.end());

        int card;
        if (plan.convergent) {
            plan.op = spec.ops[static_cast<std::size_t>(
                uniform_int(rng, 0, static_cast<int>(spec.ops.size()) - 1))];
            const bool binary_only =
                plan.op.kind() == BaseCombinationOp::Kind::logical_or ||
                plan.op.kind() == BaseCombinationOp::Kind::logical_and;
            if (binary_only) {
                if (spec.card_min > 2 || spec.card_max < 2)
                    throw UsageError("generator: op '" + plan.op.name() +
                                     "' needs cardinality 2, outside the configured range");
                card = 2;
            } else {
                card = uniform_int(rng, std::max(spec.card_min, 2), std::max(spec.card_max, 2));
            }
        } else {
            card = uniform_int(rng, spec.card_min, spec.card_max);
        }
        cards[static_cast<std::size_t>(id)] = card;
    }

    // Rebuild with the known cardinalities (ids unchanged).
    net = Network();
    for (int i = 0; i < n; ++i)
        net.add_variable("n" + std::to_string(i), cards[static_cast<std::size_t>(i)]);

    for (int pos = 0; pos < n; ++pos) {
        VarId id = id_at[static_cast<std::size_t>(pos)];
        const Plan& plan = plans[static_cast<std::size_t>(id)];
        const int d = cards[static_cast<std::size_t>(id)];
        if (plan.convergent) {
            CausalCPD cpd;
            cpd.child = id;
            cpd.op = plan.op;
            for (VarId p : plan.parents) {
                Contribution c;
                c.parent = p;
                for (int beta = 0; beta < cards[static_cast<std::size_t>(p)]; ++beta)
                    c.table.push_back(random_distribution(rng, d));
                cpd.contributions.push_back(std::move(c));
            }
            if (coin(rng) < spec.leak_fraction) cpd.leak = random_distribution(rng, d);
            net.set_cpd(std::move(cpd));
        } else {
            TableCPD cpd;
            cpd.child = id;
            cpd.parents = plan.parents;
            std::size_t configs = 1;
            for (VarId p : plan.parents)
                configs *= static_cast<std::size_t>(cards[static_cast<std::size_t>(p)]);
            for (std::size_t cfg = 0; cfg < configs; ++cfg) {
                auto col = random_distribution(rng, d);
                cpd.probs.insert(cpd.probs.end(), col.begin(), col.end());
            }
            net.set_cpd(std::move(cpd));
        }
    }
    return net;
}

GeneratorSpec cpsc_like_preset(std::uint64_t seed) {
    GeneratorSpec spec;
    spec.nodes = 200;
    spec.max_parents = 8;
    spec.card_min = 2;
    spec.card_max = 4;
    spec.fraction_convergent = 0.6;
    spec.ops = {BaseCombinationOp::max_value()};
    spec.leak_fraction = 0.3;
    spec.seed = seed;
    return spec;
}

Query random_query(const Network& net, int observations, std::mt19937_64& rng) {
    const int n = static_cast<int>(net.variable_count());
    if (observations >= n)
        throw UsageError("query wants " + std::to_string(observations) +
                         " observations but the network has only " + std::to_string(n) +
                         " variables");
    std::vector<VarId> ids(static_cast<std::size_t>(n));
    std::iota(ids.begin(), ids.end(), 0);
    std::shuffle(ids.begin(), ids.end(), rng);

    Query q;
    q.targets = {ids[0]};
    for (int i = 0; i < observations; ++i) {
        VarId v = ids[static_cast<std::size_t>(i) + 1];
        q.evidence.emplace_back(v, uniform_int(rng, 0, net.cardinality(v) - 1));
    }
    return q;
}

CostDistribution CostDistribution::of(std::vector<std::uint64_t> costs) {
    std::sort(costs.begin(), costs.end());
    CostDistribution dist;
    for (std::size_t i = 0; i < costs.size(); ++i) {
        if (!dist.points.empty() && dist.points.back().first == costs[i]) {
            ++dist.points.back().second;
        } else {
            dist.points.emplace_back(costs[i], i + 1);
        }
    }
    return dist;
}

std::size_t CostDistribution::population() const {
    return points.empty() ? 0 : points.back().second;
}

std::uint64_t CostDistribution::max_cost() const {
    return points.empty() ? 0 : points.back().first;
}

std::uint64_t CostDistribution::median_cost() const {
    const std::size_t half = (population() + 1) / 2;
    for (const auto& [cost, cnv] : points)
        if (cnv >= half) return cost;
    return 0;
}

double CostDistribution::mean_cost() const {
    if (points.empty()) return 0.0;
    double total = 0.0;
    std::size_t prev = 0;
    for (const auto& [cost, cnv] : points) {
        total += static_cast<double>(cost) * static_cast<double>(cnv - prev);
        prev = cnv;
    }
    return total / static_cast<double>(population());
}

double CostDistribution::fraction_at_or_below(std::uint64_t threshold) const {
    if (points.empty()) return 0.0;
    std::size_t count = 0;
    for (const auto& [cost, cnv] : points)
        if (cost <= threshold) count = cnv;
    return static_cast<double>(count) / static_cast<double>(population());
}

std::string CostDistribution::to_csv() const {
    std::string out = "cost,cnv\n";
    for (const auto& [cost, cnv] : points)
        out += std::to_string(cost) + "," + std::to_string(cnv) + "\n";
    return out;
}

VariableCostSweep run_variable_cost_sweep(const Network& net, Heuristic heuristic) {
    std::vector<std::uint64_t> ici_costs, ve_costs;
    for (const auto& v : net.variables()) {
        Query q;
        q.targets = {v.id};
        PreparedQuery pq = prepare_query(net, q);
        ici_costs.push_back(estimate_cost(pq, choose_ordering(pq, heuristic)).max_size);
        VePrepared vp = prepare_ve(net, q);
        ve_costs.push_back(estimate_cost(vp, choose_ordering(vp, heuristic)).max_size);
    }
    return {CostDistribution::of(std::move(ici_costs)), CostDistribution::of(std::move(ve_costs))};
}

Query sweep_query(const Network& net, int k, std::uint64_t seed, int index) {
    // Per-query stream keyed on (seed, index): scheduling cannot change it.
    std::mt19937_64 rng(splitmix64(seed + 0x9E3779B97F4A7C15ull *
                                              (static_cast<std::uint64_t>(index) + 1)));
    return random_query(net, k, rng);
}

std::vector<std::uint64_t> query_sweep_costs(const Network& net, int k, int n_queries,
                                             Heuristic heuristic, std::uint64_t seed,
                                             int jobs) {
    if (k >= static_cast<int>(net.variable_count()))
        throw UsageError("k must be smaller than the variable count");
    if (n_queries < 0) throw UsageError("negative query count");

    std::vector<std::uint64_t> costs(static_cast<std::size_t>(n_queries), 0);
    auto work = [&](int begin, int step) {
        for (int i = begin; i < n_queries; i += step) {
            Query q = sweep_query(net, k, seed, i);
            PreparedQuery pq = prepare_query(net, q);
            costs[static_cast<std::size_t>(i)] =
                estimate_cost(pq, choose_ordering(pq, heuristic)).max_size;
        }
    };

    jobs = std::max(1, jobs);
    if (jobs == 1 || n_queries < 2) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(work, t, jobs);
        for (auto& th : pool) th.join();
    }
    return costs;
}

CostDistribution run_query_cost_sweep(const Network& net, int k, int n_queries,
                                      Heuristic heuristic, std::uint64_t seed, int jobs) {
    return CostDistribution::of(query_sweep_costs(net, k, n_queries, heuristic, seed, jobs));
}

void write_csv(const CostDistribution& dist, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write " + path);
    out << dist.to_csv();
}

}  // namespace cive
