#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccode/codes.hpp"
#include "ccode/galois.hpp"

#include <json.hpp>

namespace ccode {

struct regime_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct plan_inconsistency_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Initial/final code parameters and the derived per-conversion quantities.
struct ConversionParams {
    std::size_t n_i, k_i, n_f, k_f;

    ConversionParams(std::size_t ni, std::size_t ki, std::size_t nf, std::size_t kf)
        : n_i(ni), k_i(ki), n_f(nf), k_f(kf) {
        if (ki < 1 || ni <= ki || kf < 1 || nf <= kf)
            throw parameter_error("degenerate parameters: need n > k >= 1 on both sides");
    }

    std::size_t r_i() const { return n_i - k_i; }
    std::size_t r_f() const { return n_f - k_f; }
    std::size_t message_len() const { return std::lcm(k_i, k_f); }
    std::size_t initial_stripes() const { return message_len() / k_i; }
    std::size_t final_stripes() const { return message_len() / k_f; }
};

/// Ordered index sets over [0, M): position u of set i is the message
/// coordinate encoded by systematic node u of stripe i.
struct PartitionPair {
    std::vector<std::vector<std::size_t>> initial_sets;
    std::vector<std::vector<std::size_t>> final_sets;

    /// Throws plan_inconsistency_error unless both sides partition [0, M).
    void validate(std::size_t message_len) const;
};

/// Trivial contiguous partitions on both sides.
PartitionPair contiguous_partitions(const ConversionParams& p);

struct ConvertibleCodeSpec {
    ConversionParams params;
    PartitionPair partitions;
    MdsCode initial_code;
    MdsCode final_code;
    const Field* field;
};

struct NodeRef {
    std::size_t stripe = 0;
    std::size_t node = 0;
    auto operator<=>(const NodeRef&) const = default;
};

/// Encoding vector over the full message: the generator column of a node,
/// embedded into [0, M) through its stripe's partition set.
std::vector<Elem> encoding_vector(const MdsCode& code,
                                  const std::vector<std::size_t>& partition_set,
                                  std::size_t node, std::size_t message_len,
                                  const Field& f);

struct UnchangedMapping {
    NodeRef from; // initial grid
    NodeRef to;   // final grid
};

struct NewNode {
    NodeRef at;               // final grid
    std::vector<Elem> coeffs; // one coefficient per read_set entry, in order
};

/// A conversion procedure in explicit form: the node taxonomy plus, for each
/// new node, the fixed linear combination of the read access set.
struct ConversionPlan {
    std::vector<std::size_t> initial_stripe_sizes; // node count per initial stripe
    std::vector<std::size_t> final_stripe_sizes;   // node count per final stripe
    std::vector<UnchangedMapping> unchanged;
    std::vector<NodeRef> retired;
    std::vector<NodeRef> read_set; // sorted, set semantics
    std::vector<NewNode> new_nodes;
};

struct AccessReport {
    std::size_t reads = 0;
    std::size_t writes = 0;
    std::size_t total = 0;
    std::size_t bound = 0;
    std::size_t default_total = 0;
    std::size_t default_reads = 0;
    double savings = 0.0;
    bool optimal = false;
};

struct ClassifySummary {
    std::size_t unchanged = 0;
    std::size_t retired = 0;
    std::size_t new_count = 0;
    std::vector<std::size_t> unchanged_per_final_stripe;
};

/// Validates the covering invariants (unchanged+retired = initial grid,
/// unchanged+new = final grid) and returns the taxonomy counts.
ClassifySummary classify(const ConversionPlan& plan);

/// reads/writes/total for a plan; bound and default fields left unset.
AccessReport access_cost(const ConversionPlan& plan);

/// The read-everything/re-encode-everything baseline: M reads, all final
/// nodes written. Degenerates to the all-unchanged zero-cost plan when the
/// final code is a column prefix of the initial code (k_i == k_f).
ConversionPlan default_plan(const ConvertibleCodeSpec& spec);

nlohmann::json plan_to_json(const ConversionPlan& plan);
ConversionPlan plan_from_json(const nlohmann::json& j);
nlohmann::json report_to_json(const AccessReport& r);

} // namespace ccode
