// Shared helpers for the test suites: the running example network, and
// independent reference implementations used to cross-check the library
// (these deliberately avoid the library's combination/elimination code).
#pragma once

#include <random>
#include <vector>

#include "cive/bench.hpp"
#include "cive/network.hpp"

namespace cive::testing {

// The example network used throughout: three roots a, b, c; convergent
// e1 <- {a,b}, e2 <- {a,b,c}, e3 <- {e1,e2} (all noisy-OR, binary); one
// table leaf y <- e3.
struct Fig1 {
    Network net;
    VarId a, b, c, e1, e2, e3, y;
};
Fig1 make_fig1();

// Reference implementation of the single-variable functional combination:
//   (f op g)(e=alpha, rest) = sum over alpha1 op alpha2 = alpha of
//                             f(e=alpha1, ...) g(e=alpha2, ...)
// computed cell by cell with no stride tricks and no shared code with
// combine_general.
Factor combine_single_direct(const Factor& f, const Factor& g, VarId e,
                             const BaseCombinationOp& op);

// Reference expansion of a causal CPD by enumerating every tuple of
// contribution values and binning by the base-op fold.
// Probabilities are in table layout (parents in listed order, child value
// fastest), like TableCPD::probs.
std::vector<double> expand_by_enumeration(const Network& net, const CausalCPD& cpd);

// Random factor whose scope is a random subset of `pool` (forced to
// include `must_have`), with cardinalities from `cards` and values in
// (0, 1].
Factor random_factor(const std::vector<VarId>& pool, const std::vector<int>& cards,
                     const std::vector<VarId>& must_have, std::mt19937_64& rng,
                     Factor::Tag tag = Factor::Tag::heterogeneous);

// Max elementwise difference; requires identical scopes.
double max_diff(const Factor& f, const Factor& g);

// Generator preset for the randomized correctness suites: up to 14
// variables, cardinalities <= 3, ~40% convergent with OR/MAX ops.
GeneratorSpec small_suite_spec(std::uint64_t seed);

}  // namespace cive::testing
