// Brute-force ground truth by full joint enumeration.  Deliberately
// shares only the low-level factor kernel with the engines: no
// deputation, no elimination scheduling, no factor lists.
#pragma once

#include <cstddef>

#include "cive/network.hpp"

namespace cive {

inline constexpr std::size_t kDefaultOracleCellBound = std::size_t{1} << 24;

// Full joint probability over every variable of the network.
struct JointTable {
    Factor table{1.0};
};

// Expands causal CPDs to plain tables and multiplies everything back
// together.  Refuses (ResourceBoundError) when the state space exceeds
// `cell_bound`.
JointTable joint_enumeration(const Network& net,
                             std::size_t cell_bound = kDefaultOracleCellBound);

// P(X, Y=Y0) by definition: restrict the joint to the evidence and sum
// out everything outside the targets.
Factor oracle_query(const Network& net, const Query& query,
                    std::size_t cell_bound = kDefaultOracleCellBound);

Factor oracle_query_from_joint(const JointTable& joint, const Query& query);

}  // namespace cive
