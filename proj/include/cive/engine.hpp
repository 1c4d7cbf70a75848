// Query answering: the causal-independence elimination procedure over the
// two factor lists, and the classical variable-elimination baseline over
// the expanded factorization.
#pragma once

#include <string>
#include <vector>

#include "cive/ordering.hpp"
#include "cive/transform.hpp"

namespace cive {

enum class EngineKind { ici, ve, oracle };
enum class Heuristic { mcs, mindef };

struct InferenceResult {
    // P(X, Y=Y0) over the caller's variable ids (deputies relabeled back).
    Factor answer{1.0};
    double evidence_probability = 0.0;  // sum over the answer
    CostReport cost;                    // sizes actually materialized
    std::vector<std::string> warnings;
};

// Eliminates the prepared query's variables in `ordering`: per variable,
// the heterogeneous factors that mention it are merged with the general
// combination operator, the homogeneous ones by multiplication, the two
// results multiplied, and the variable summed out (or fixed, for an
// observed convergent variable).  The remainder is assembled the same way.
InferenceResult ici_query(const PreparedQuery& prepared, const EliminationOrdering& ordering);

// Classical variable elimination over the table-only factorization.
InferenceResult ve_query(const VePrepared& prepared, const EliminationOrdering& ordering);

// P(X | Y=Y0): the answer normalized by the evidence probability.
// Throws ImpossibleEvidenceError when P(Y=Y0) = 0.
Factor posterior(const InferenceResult& result);

// Prepare + order + run in one call; EngineKind::oracle routes to the
// brute-force enumerator.
InferenceResult answer_query(const Network& net, const Query& query, EngineKind engine,
                             Heuristic heuristic = Heuristic::mindef);

EliminationOrdering choose_ordering(const PreparedQuery& pq, Heuristic h);
EliminationOrdering choose_ordering(const VePrepared& vp, Heuristic h);

}  // namespace cive
