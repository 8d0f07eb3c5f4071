#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ccode/bounds.hpp"
#include "ccode/framework.hpp"

#include <json.hpp>

namespace ccode {

struct payload_corruption_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A convertible-code instance with the construction metadata the planners
/// need. For k_i < k_f the final parity block is a slot-scaled copy of the
/// initial one, P_F[(s,l)][t] = multipliers(s,t) * P_I[l][t]; multipliers is
/// empty for the projection/fallback constructions.
struct ConversionDesign {
    ConvertibleCodeSpec spec;
    GfMatrix multipliers; // one row per final-stripe slot, one column per t < r_f
};

/// Construct a compatible (initial, final) code pair plus optimal partitions
/// for arbitrary parameters. k_i < k_f runs a seeded multiplier search
/// (widening GF(2^8) to GF(2^16) if it fails); k_i >= k_f projects the final
/// code out of the initial one. When `initial` is given it is adopted as-is
/// (it must be systematic MDS with the right shape) and no field widening
/// happens.
ConversionDesign design_conversion(const ConversionParams& params, const Field& field,
                                   std::uint64_t seed, const MdsCode* initial = nullptr);

// ---------------------------------------------------------------------------
// Pure split / merge regimes

/// Split-regime planner (k_i = s*k_f). The spec's final code must be the
/// projection of the initial generator onto the first k_f rows and columns
/// [0,k_f) u [k_i, k_i+r_f); all systematic nodes stay unchanged.
ConversionPlan plan_split(const ConvertibleCodeSpec& spec);

struct MergePlanResult {
    ConversionDesign design;
    ConversionPlan plan;
};

/// Merge-regime planner (k_f = s*k_i): constructs the compatible code pair
/// and the plan reading r_f parities per initial stripe.
MergePlanResult plan_merge(const ConversionParams& params, const Field& field,
                           std::uint64_t seed);

// ---------------------------------------------------------------------------
// Generalized split / merge (unequal stripe sizes)

struct GenSplitResult {
    MdsCode final_code;                                  // parent [n_f, kf_star]
    std::vector<std::vector<std::size_t>> final_layout;  // positions per final stripe
    std::vector<MdsCode> final_codes;                    // per-stripe shortenings
    ConversionPlan plan;
};

GenSplitResult plan_generalized_split(const MdsCode& initial_code,
                                      const std::vector<std::size_t>& final_sizes,
                                      std::size_t n_f, const Field& field);

struct GenMergeResult {
    MdsCode parent_initial;                // [n_i, ki_star]
    std::vector<MdsCode> initial_codes;    // per-stripe shortenings
    MdsCode final_code;                    // [n_f, k_f]
    std::vector<std::vector<std::size_t>> initial_layout; // positions per stripe
    GfMatrix multipliers; // one row per initial stripe, one column per t < r_f
    const Field* field;
    ConversionPlan plan;
};

GenMergeResult plan_generalized_merge(const std::vector<std::size_t>& initial_sizes,
                                      std::size_t n_i, std::size_t n_f,
                                      const Field& field, std::uint64_t seed);

// ---------------------------------------------------------------------------
// General regime

struct IntermediatePiece {
    std::size_t source_stripe;          // initial stripe index
    std::vector<std::size_t> locals;    // positions within that stripe
    bool via_parity;                    // built by interference elimination
};

struct StripeGroup {
    std::size_t final_stripe;
    std::vector<std::size_t> whole_initial;
    std::vector<IntermediatePiece> tail;
};

/// Structure of a general-regime conversion: a split phase producing
/// intermediate stripes and a merge phase assembling the groups.
struct GeneralPlanTree {
    std::string regime; // "degenerate", "merge-like", "split-like", "default"
    std::vector<StripeGroup> groups;
    std::vector<std::size_t> intermediate_sizes;
};

nlohmann::json tree_to_json(const GeneralPlanTree& tree);

struct GeneralPlanResult {
    GeneralPlanTree tree;
    ConversionPlan plan;
};

/// Three-case general planner. Requires a design from design_conversion
/// (partitions from optimal_partitions); with allow_any_partitions the
/// caller takes responsibility and only the >= bound audit applies.
GeneralPlanResult plan_general(const ConversionDesign& design,
                               bool allow_any_partitions = false);

// ---------------------------------------------------------------------------
// Execution

struct ExecutionResult {
    std::vector<std::vector<Elem>> final_payloads;
    std::vector<NodeRef> touched; // read touch-log, equals the plan read set
};

/// Apply a plan to one set of initial stripe payloads (one symbol per node).
/// When `spec` is given and a read stripe has all its systematic symbols in
/// the read set, read parities are cross-checked against recomputation and
/// payload_corruption_error is thrown on mismatch.
ExecutionResult execute(const ConversionPlan& plan,
                        const std::vector<std::vector<Elem>>& initial_payloads,
                        const Field& field,
                        const ConvertibleCodeSpec* spec = nullptr);

/// Encode a length-M message into initial stripes / final stripes.
std::vector<std::vector<Elem>> encode_initial(const ConvertibleCodeSpec& spec,
                                              std::span<const Elem> message);
std::vector<std::vector<Elem>> encode_final(const ConvertibleCodeSpec& spec,
                                            std::span<const Elem> message);

} // namespace ccode
