#pragma once

#include <cstddef>
#include <vector>

#include "ccode/framework.hpp"

namespace ccode {

struct BoundBreakdown {
    std::size_t reads = 0;
    std::size_t writes = 0;
    std::size_t total = 0;
};

/// |I_i ∩ F_j| for a partition pair, with row maxima.
struct IntersectionMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<std::size_t> entries; // row-major

    std::size_t at(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }
    std::vector<std::size_t> row_maxima() const;
};

IntersectionMatrix intersection_matrix(const PartitionPair& partitions,
                                       std::size_t message_len);

/// The objective s = sum_i max{M*_i - r_f, 0}; larger s means a smaller
/// read bound.
std::size_t partition_objective(const IntersectionMatrix& m, std::size_t r_f);

/// Merge regime (k_f = s*k_i, s >= 2): total >= r_f + s*min{k_i, r_f};
/// r_i < r_f forces reads of s*k_i.
BoundBreakdown merge_bound(const ConversionParams& p);

/// Split regime (k_i = s*k_f, s >= 2).
BoundBreakdown split_bound(const ConversionParams& p);

/// Generalized split: reads >= k_i - max{kf_star - r_f, 0}.
std::size_t gen_split_bound(std::size_t k_i, const std::vector<std::size_t>& final_sizes,
                            std::size_t r_f);

/// Generalized merge: per-initial-stripe read minima.
std::vector<std::size_t> gen_merge_bound(const std::vector<std::size_t>& initial_sizes,
                                         std::size_t r_i, std::size_t r_f);

/// General regime (k_i != k_f). Writes are the minimum final-parities count
/// so total matches the achievable optimum.
BoundBreakdown general_bound(const ConversionParams& p);

/// Regime-matching bound for any parameters (merge/split/general; degenerate
/// k_i == k_f handled as 0 / M+extra-parity writes).
BoundBreakdown regime_bound(const ConversionParams& p);

struct OptimalPartitions {
    PartitionPair partitions;
    IntersectionMatrix intersections;
};

/// Partitions realizing the minimizing intersection profile of the general
/// bound: initial sets contiguous, final sets assembled from whole initial
/// blocks plus remainder pieces of size at most k_f mod k_i (k_i < k_f) or
/// contiguous sub-blocks (k_i > k_f).
OptimalPartitions optimal_partitions(const ConversionParams& p);

} // namespace ccode
