#pragma once

// Independent checkers used by the tests: brute-force verification that a
// plan preserves the code and its MDS property, access-cost audits against
// the regime bounds, and an exhaustive partition-objective search.

#include <cstdint>
#include <vector>

#include "ccode/bounds.hpp"
#include "ccode/framework.hpp"

namespace ccode {

// Re-encodes random messages through the plan and checks the result against
// a direct final-code encoding. Returns false on the first mismatch.
bool verify_preservation(const ConvertibleCodeSpec& spec, const ConversionPlan& plan,
                         std::size_t trials, std::uint64_t seed);

// Erasure-decodes a random message from every k-subset of coordinates.
// Throws work_budget_error when C(n,k) exceeds the budget.
bool verify_mds_exhaustive(const MdsCode& code, const Field& f, std::uint64_t seed,
                           std::size_t budget = 1u << 20);

// Erasure-decodes every k-subset of every final stripe produced by the plan
// and checks the message is recovered. Throws work_budget_error if the
// number of subsets exceeds the budget.
bool verify_mds_exhaustive(const ConvertibleCodeSpec& spec, const ConversionPlan& plan,
                           std::size_t trials, std::uint64_t seed,
                           std::size_t budget = 1u << 20);

struct AccessAudit {
    AccessReport report;
    BoundBreakdown bound;
};

// Computes the plan's access cost, checks it against the regime bound
// (throws plan_inconsistency_error if the plan beats the bound), and fills
// in the default-approach comparison.
AccessAudit audit_access(const ConvertibleCodeSpec& spec, const ConversionPlan& plan);

// Exhaustive search over all valid partition pairs (as contingency tables)
// for the maximum of sum_i max{max_j |P_i ^ Q_j| - r_f, 0}. Only feasible
// for small message lengths.
std::size_t brute_force_partition_objective(const ConversionParams& params);

} // namespace ccode
