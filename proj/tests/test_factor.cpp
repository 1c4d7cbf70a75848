#include <doctest.h>

#include <random>

#include "cive/factor.hpp"
#include "test_support.hpp"

using namespace cive;
using namespace cive::testing;

namespace {

Factor over(std::vector<VarId> scope, std::vector<int> cards, std::vector<double> vals,
            Factor::Tag tag = Factor::Tag::homogeneous) {
    return Factor(std::move(scope), std::move(cards), std::move(vals), tag);
}

ConvergentContext or_ctx(std::initializer_list<VarId> vars) {
    ConvergentContext ctx;
    for (VarId v : vars) ctx.set(v, BaseCombinationOp::logical_or());
    return ctx;
}

}  // namespace

TEST_CASE("multiply: elementwise, broadcast, union scope") {
    Factor f = over({0}, {2}, {0.3, 0.7});
    Factor g = over({0}, {2}, {0.5, 0.5});
    Factor fg = multiply(f, g);
    CHECK(fg.values() == std::vector<double>{0.15, 0.35});
    CHECK(fg.tag() == Factor::Tag::homogeneous);

    Factor scalar(2.0);
    Factor fs = multiply(f, scalar);
    CHECK(fs.values() == std::vector<double>{0.6, 1.4});

    Factor ab = over({0, 1}, {2, 2}, std::vector<double>(4, 1.0));
    Factor bc = over({1, 2}, {2, 2}, std::vector<double>(4, 1.0));
    Factor abc = multiply(ab, bc);
    CHECK(abc.scope() == std::vector<VarId>{0, 1, 2});
    CHECK(abc.size() == 8);
    for (double v : abc.values()) CHECK(v == 1.0);
}

TEST_CASE("multiply aligns shared variables") {
    // f(a,b), g(b): g must broadcast along a but track b.
    Factor f = over({0, 1}, {2, 3}, {1, 2, 3, 4, 5, 6});
    Factor g = over({1}, {3}, {10, 100, 1000});
    Factor fg = multiply(f, g);
    CHECK(fg.values() == std::vector<double>{10, 200, 3000, 40, 500, 6000});
}

TEST_CASE("combine_general on one shared binary OR variable") {
    VarId e = 0;
    Factor f = over({e}, {2}, {0.7, 0.3}, Factor::Tag::heterogeneous);
    Factor g = over({e}, {2}, {0.6, 0.4}, Factor::Tag::heterogeneous);
    Factor fg = combine_general(f, g, or_ctx({e}));
    CHECK(fg[0] == doctest::Approx(0.42).epsilon(1e-14));
    CHECK(fg[1] == doctest::Approx(0.58).epsilon(1e-14));
    CHECK(fg.tag() == Factor::Tag::heterogeneous);
}

TEST_CASE("combine_general on one shared MAX variable of cardinality 3") {
    // All nine value pairs, binned by max:
    //   0: .5*.4                                (= 0.20)
    //   1: .5*.4 + .3*.4 + .3*.4                (= 0.44)
    //   2: .5*.2 + .3*.2 + .2*(.4+.4+.2)        (= 0.36)
    VarId e = 0;
    ConvergentContext ctx;
    ctx.set(e, BaseCombinationOp::max_value());
    Factor f = over({e}, {3}, {0.5, 0.3, 0.2}, Factor::Tag::heterogeneous);
    Factor g = over({e}, {3}, {0.4, 0.4, 0.2}, Factor::Tag::heterogeneous);
    Factor fg = combine_general(f, g, ctx);
    CHECK(fg[0] == doctest::Approx(0.20).epsilon(1e-14));
    CHECK(fg[1] == doctest::Approx(0.44).epsilon(1e-14));
    CHECK(fg[2] == doctest::Approx(0.36).epsilon(1e-14));
    CHECK(fg[0] + fg[1] + fg[2] == doctest::Approx(1.0).epsilon(1e-14));

    Factor direct = combine_single_direct(f, g, e, BaseCombinationOp::max_value());
    CHECK(max_diff(fg, direct) <= 1e-15);
}

TEST_CASE("combine_general with no shared convergent variable is multiplication") {
    // f11(e1, a) and f21(e2, a): e1 and e2 are convergent but unshared,
    // a is shared but regular, so the combination is a plain product.
    VarId a = 0, e1 = 1, e2 = 2;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.01, 1.0);
    std::vector<double> v1(4), v2(4);
    for (auto* v : {&v1, &v2})
        for (double& x : *v) x = u(rng);
    Factor f11 = over({a, e1}, {2, 2}, v1, Factor::Tag::heterogeneous);
    Factor f21 = over({a, e2}, {2, 2}, v2, Factor::Tag::heterogeneous);

    Factor combined = combine_general(f11, f21, or_ctx({e1, e2}));
    Factor product = multiply(f11, f21);
    CHECK(combined.scope() == std::vector<VarId>{a, e1, e2});
    CHECK(combined.values() == product.values());  // exact
}

TEST_CASE("sum_out") {
    Factor f = over({0}, {2}, {0.3, 0.7});
    Factor s = sum_out(f, 0);
    CHECK(s.scope().empty());
    CHECK(s[0] == doctest::Approx(1.0).epsilon(1e-15));

    Factor ones = over({0, 1}, {2, 2}, std::vector<double>(4, 1.0));
    Factor sb = sum_out(ones, 1);
    CHECK(sb.values() == std::vector<double>{2.0, 2.0});

    // Deputing function: rows of the identity sum to 1.
    Factor ident = over({0, 1}, {2, 2}, {1, 0, 0, 1});
    Factor se = sum_out(ident, 1);
    CHECK(se.values() == std::vector<double>{1.0, 1.0});

    CHECK_THROWS_AS(sum_out(f, 5), UsageError);
}

TEST_CASE("restrict with and without drop") {
    Factor f = over({0, 1}, {2, 2}, {1, 2, 3, 4});
    Factor row0 = restrict_factor(f, 0, 0, true);
    CHECK(row0.scope() == std::vector<VarId>{1});
    CHECK(row0.values() == std::vector<double>{1, 2});

    Factor e = over({0}, {2}, {0.42, 0.58});
    Factor masked = restrict_factor(e, 0, 1, false);
    CHECK(masked.scope() == std::vector<VarId>{0});
    CHECK(masked.values() == std::vector<double>{0.0, 0.58});

    // restrict-keep then sum equals restrict-drop.
    Factor keep = restrict_factor(f, 1, 1, false);
    Factor dropped = restrict_factor(f, 1, 1, true);
    CHECK(max_diff(sum_out(keep, 1), dropped) == 0.0);

    CHECK_THROWS_AS(restrict_factor(f, 0, 3, true), UsageError);
}

TEST_CASE("general combination is commutative and associative") {
    // Pools of 5 variables; 0 and 1 convergent (OR and MAX), the rest
    // regular.  Membership of each variable in each operand is random,
    // so shared convergent sets of size 0, 1, and 2 all occur.
    std::vector<VarId> pool = {0, 1, 2, 3, 4};
    std::vector<int> cards = {2, 3, 2, 3, 2};
    ConvergentContext ctx;
    ctx.set(0, BaseCombinationOp::logical_or());
    ctx.set(1, BaseCombinationOp::max_value());

    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        Factor f = random_factor(pool, cards, {}, rng);
        Factor g = random_factor(pool, cards, {}, rng);
        Factor h = random_factor(pool, cards, {}, rng);

        CHECK(max_diff(combine_general(f, g, ctx), combine_general(g, f, ctx)) <= 1e-12);

        Factor left = combine_general(combine_general(f, g, ctx), h, ctx);
        Factor right = combine_general(f, combine_general(g, h, ctx), ctx);
        CHECK(max_diff(left, right) <= 1e-12);
    }
}

TEST_CASE("one shared convergent variable matches the direct reference") {
    std::vector<VarId> pool = {1, 2, 3};
    std::vector<int> cards = {3, 2, 2};
    ConvergentContext ctx;
    ctx.set(1, BaseCombinationOp::max_value());

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        Factor f = random_factor(pool, cards, {1}, rng);
        Factor g = random_factor(pool, cards, {1}, rng);
        Factor viaop = combine_general(f, g, ctx);
        Factor direct = combine_single_direct(f, g, 1, BaseCombinationOp::max_value());
        CHECK(max_diff(viaop, direct) <= 1e-12);
    }
}

TEST_CASE("multiply laws and sum/multiply interchange") {
    std::vector<VarId> pool = {0, 1, 2, 3};
    std::vector<int> cards = {2, 3, 2, 2};
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        Factor f = random_factor(pool, cards, {}, rng, Factor::Tag::homogeneous);
        Factor g = random_factor(pool, cards, {}, rng, Factor::Tag::homogeneous);
        Factor h = random_factor(pool, cards, {}, rng, Factor::Tag::homogeneous);

        CHECK(max_diff(multiply(f, g), multiply(g, f)) <= 1e-12);
        CHECK(max_diff(multiply(multiply(f, g), h), multiply(f, multiply(g, h))) <= 1e-12);
    }

    // sum_v (f * g) = (sum_v f) * g when v is not in g's scope.
    for (int trial = 0; trial < 100; ++trial) {
        Factor f = random_factor(pool, cards, {0}, rng, Factor::Tag::homogeneous);
        Factor g = random_factor({1, 2, 3}, {3, 2, 2}, {}, rng, Factor::Tag::homogeneous);
        Factor lhs = sum_out(multiply(f, g), 0);
        Factor rhs = multiply(sum_out(f, 0), g);
        CHECK(max_diff(lhs, rhs) <= 1e-12);
    }
}

TEST_CASE("tag bookkeeping") {
    Factor hom = over({0}, {2}, {1, 1}, Factor::Tag::homogeneous);
    Factor het = over({0}, {2}, {1, 1}, Factor::Tag::heterogeneous);
    CHECK(multiply(hom, hom).tag() == Factor::Tag::homogeneous);
    CHECK(multiply(hom, het).tag() == Factor::Tag::heterogeneous);
    CHECK(sum_out(het, 0).tag() == Factor::Tag::heterogeneous);
    CHECK(restrict_factor(hom, 0, 0, true).tag() == Factor::Tag::homogeneous);
}

TEST_CASE("factor construction guards") {
    CHECK_THROWS_AS(over({1, 0}, {2, 2}, std::vector<double>(4, 0)), UsageError);
    CHECK_THROWS_AS(over({0}, {2}, {1, 2, 3}), UsageError);
    CHECK_THROWS_AS(over({0, 0}, {2, 2}, std::vector<double>(4, 0)), UsageError);
}

TEST_CASE("relabeled permutes values to the new sorted order") {
    Factor f = over({0, 1}, {2, 3}, {1, 2, 3, 4, 5, 6});
    // 0 -> 9, 1 -> 4: new scope {4, 9}, values transposed.
    Factor r = f.relabeled([](VarId v) { return v == 0 ? 9 : 4; });
    CHECK(r.scope() == std::vector<VarId>{4, 9});
    CHECK(r.cardinalities() == std::vector<int>{3, 2});
    CHECK(r.values() == std::vector<double>{1, 4, 2, 5, 3, 6});
}
