#include "test_support.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace cive::testing {

Fig1 make_fig1() {
    Fig1 f;
    Network& net = f.net;
    f.a = net.add_variable("a", 2);
    f.b = net.add_variable("b", 2);
    f.c = net.add_variable("c", 2);
    f.e1 = net.add_variable("e1", 2);
    f.e2 = net.add_variable("e2", 2);
    f.e3 = net.add_variable("e3", 2);
    f.y = net.add_variable("y", 2);

    net.set_cpd(TableCPD{f.a, {}, {0.7, 0.3}});
    net.set_cpd(TableCPD{f.b, {}, {0.4, 0.6}});
    net.set_cpd(TableCPD{f.c, {}, {0.8, 0.2}});

    auto noisy_or = [](VarId child, std::vector<std::pair<VarId, double>> causes) {
        CausalCPD cpd;
        cpd.child = child;
        cpd.op = BaseCombinationOp::logical_or();
        for (auto [parent, strength] : causes)
            cpd.contributions.push_back(
                {parent, {{1.0, 0.0}, {1.0 - strength, strength}}});
        return cpd;
    };
    net.set_cpd(noisy_or(f.e1, {{f.a, 0.8}, {f.b, 0.9}}));
    net.set_cpd(noisy_or(f.e2, {{f.a, 0.7}, {f.b, 0.5}, {f.c, 0.6}}));
    net.set_cpd(noisy_or(f.e3, {{f.e1, 0.75}, {f.e2, 0.65}}));

    net.set_cpd(TableCPD{f.y, {f.e3}, {0.9, 0.1, 0.15, 0.85}});
    return f;
}

namespace {

std::vector<VarId> scope_union(const Factor& f, const Factor& g) {
    std::set<VarId> s(f.scope().begin(), f.scope().end());
    s.insert(g.scope().begin(), g.scope().end());
    return {s.begin(), s.end()};
}

int card_in(const Factor& f, const Factor& g, VarId v) {
    return f.has_variable(v) ? f.cardinality_of(v) : g.cardinality_of(v);
}

// Projects a union-scope assignment onto one factor's scope.
std::vector<int> project(const std::vector<VarId>& scope, const std::vector<int>& vals,
                         const Factor& onto) {
    std::vector<int> out;
    for (VarId v : onto.scope()) {
        auto it = std::find(scope.begin(), scope.end(), v);
        out.push_back(vals[static_cast<std::size_t>(it - scope.begin())]);
    }
    return out;
}

}  // namespace

Factor combine_single_direct(const Factor& f, const Factor& g, VarId e,
                             const BaseCombinationOp& op) {
    std::vector<VarId> scope = scope_union(f, g);
    std::vector<int> cards;
    for (VarId v : scope) cards.push_back(card_in(f, g, v));
    const int de = card_in(f, g, e);
    const std::size_t epos = static_cast<std::size_t>(
        std::find(scope.begin(), scope.end(), e) - scope.begin());

    std::size_t n = 1;
    for (int c : cards) n *= static_cast<std::size_t>(c);
    std::vector<double> out(n, 0.0);

    std::vector<int> vals(scope.size(), 0);
    for (std::size_t lin = 0; lin < n; ++lin) {
        const int alpha = vals[epos];
        double acc = 0.0;
        for (int a1 = 0; a1 < de; ++a1) {
            for (int a2 = 0; a2 < de; ++a2) {
                if (op.apply(a1, a2, de) != alpha) continue;
                std::vector<int> v1 = vals, v2 = vals;
                v1[epos] = a1;
                v2[epos] = a2;
                acc += f.at(project(scope, v1, f)) * g.at(project(scope, v2, g));
            }
        }
        out[lin] = acc;
        for (int i = static_cast<int>(scope.size()) - 1; i >= 0; --i) {
            if (++vals[static_cast<std::size_t>(i)] < cards[static_cast<std::size_t>(i)]) break;
            vals[static_cast<std::size_t>(i)] = 0;
        }
    }
    return Factor(std::move(scope), std::move(cards), std::move(out),
                  Factor::Tag::heterogeneous);
}

std::vector<double> expand_by_enumeration(const Network& net, const CausalCPD& cpd) {
    const int d = net.cardinality(cpd.child);
    const std::size_t m = cpd.contributions.size();
    const bool leak = cpd.leak.has_value();
    const std::size_t terms = m + (leak ? 1 : 0);

    std::vector<int> parent_cards;
    std::size_t configs = 1;
    for (const auto& c : cpd.contributions) {
        parent_cards.push_back(net.cardinality(c.parent));
        configs *= static_cast<std::size_t>(net.cardinality(c.parent));
    }

    std::vector<double> probs(configs * static_cast<std::size_t>(d), 0.0);
    std::vector<int> parent_vals(m, 0);
    for (std::size_t cfg = 0; cfg < configs; ++cfg) {
        // Enumerate every joint contribution tuple and bin it by the
        // base-op fold of its values.
        std::vector<int> tuple(terms, 0);
        while (true) {
            double p = 1.0;
            for (std::size_t i = 0; i < m; ++i)
                p *= cpd.contributions[i]
                         .table[static_cast<std::size_t>(parent_vals[i])]
                         [static_cast<std::size_t>(tuple[i])];
            if (leak) p *= (*cpd.leak)[static_cast<std::size_t>(tuple[m])];

            int merged = tuple[0];
            for (std::size_t i = 1; i < terms; ++i)
                merged = cpd.op.apply(merged, tuple[i], d);
            probs[cfg * static_cast<std::size_t>(d) + static_cast<std::size_t>(merged)] += p;

            int i = static_cast<int>(terms) - 1;
            for (; i >= 0; --i) {
                if (++tuple[static_cast<std::size_t>(i)] < d) break;
                tuple[static_cast<std::size_t>(i)] = 0;
            }
            if (i < 0) break;
        }
        for (int i = static_cast<int>(m) - 1; i >= 0; --i) {
            if (++parent_vals[static_cast<std::size_t>(i)] <
                parent_cards[static_cast<std::size_t>(i)])
                break;
            parent_vals[static_cast<std::size_t>(i)] = 0;
        }
    }
    return probs;
}

Factor random_factor(const std::vector<VarId>& pool, const std::vector<int>& cards,
                     const std::vector<VarId>& must_have, std::mt19937_64& rng,
                     Factor::Tag tag) {
    std::set<VarId> chosen(must_have.begin(), must_have.end());
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (VarId v : pool)
        if (coin(rng) < 0.5) chosen.insert(v);

    std::vector<VarId> scope(chosen.begin(), chosen.end());
    std::vector<int> fc;
    std::size_t n = 1;
    for (VarId v : scope) {
        auto it = std::find(pool.begin(), pool.end(), v);
        int c = cards[static_cast<std::size_t>(it - pool.begin())];
        fc.push_back(c);
        n *= static_cast<std::size_t>(c);
    }
    std::uniform_real_distribution<double> u(0.01, 1.0);
    std::vector<double> vals(n);
    for (double& v : vals) v = u(rng);
    return Factor(std::move(scope), std::move(fc), std::move(vals), tag);
}

double max_diff(const Factor& f, const Factor& g) {
    if (f.scope() != g.scope() || f.size() != g.size())
        return std::numeric_limits<double>::infinity();
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        m = std::max(m, std::abs(f[i] - g[i]));
    return m;
}

GeneratorSpec small_suite_spec(std::uint64_t seed) {
    GeneratorSpec spec;
    spec.nodes = 6 + static_cast<int>(seed % 9);  // 6..14
    spec.max_parents = 3;
    spec.card_min = 2;
    spec.card_max = 3;
    spec.fraction_convergent = 0.4;
    spec.ops = {BaseCombinationOp::logical_or(), BaseCombinationOp::max_value()};
    spec.leak_fraction = 0.5;
    spec.seed = seed;
    return spec;
}

}  // namespace cive::testing
