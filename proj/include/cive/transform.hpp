// Query-time network rewrites: irrelevance pruning, deputation of
// convergent variables, evidence preprocessing, and target substitution.
#pragma once

#include <vector>

#include "cive/network.hpp"

namespace cive {

// Everything the elimination engine needs, with all rewrites applied.
// Variable ids refer to the rewritten network; `source_id` maps them back
// to the caller's network (deputies map to their convergent variable's
// original id).
struct PreparedQuery {
    Network net;                    // pruned + deputed
    std::vector<VarId> targets;     // convergent targets replaced by deputies
    std::vector<std::pair<VarId, int>> regular_evidence;     // restricted away up front
    std::vector<std::pair<VarId, int>> convergent_evidence;  // deferred to elimination
    std::vector<Factor> heterogeneous;  // contribution factors of surviving convergents
    std::vector<Factor> homogeneous;    // tables, priors, deputing functions
    std::vector<VarId> to_eliminate;    // ascending; excludes targets + regular evidence
    ConvergentContext ctx;
    std::vector<VarId> source_id;       // per rewritten id
};

// The homogeneous-baseline analog: causal CPDs expanded to tables, all
// evidence restricted away up front.
struct VePrepared {
    Network net;  // pruned, tables only
    std::vector<VarId> targets;
    std::vector<Factor> factors;
    std::vector<VarId> to_eliminate;
    std::vector<VarId> source_id;
};

// Subnetwork relevant to P(X, Y=Y0): barren leaves removed to fixpoint,
// i.e. the ancestral closure of X union Y.  Ids are re-packed; names are
// preserved.
Network prune_irrelevant(const Network& net, const Query& query);

// Adds a deputy e' for every convergent variable e, re-parents e's
// children onto e', and ties the pair with the identity table P(e'|e).
Network depute(const Network& net);

// Factor lists denoted by a deputed network: one heterogeneous factor per
// contribution (and leak), one homogeneous factor per table CPD
// including priors and deputing functions.
void build_factor_lists(const Network& net, std::vector<Factor>& heterogeneous,
                        std::vector<Factor>& homogeneous);

PreparedQuery prepare_query(const Network& net, const Query& query);

VePrepared prepare_ve(const Network& net, const Query& query);

}  // namespace cive
