#include "ccode/bounds.hpp"

#include <algorithm>

namespace ccode {

std::vector<std::size_t> IntersectionMatrix::row_maxima() const {
    std::vector<std::size_t> out(rows, 0);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) out[i] = std::max(out[i], at(i, j));
    return out;
}

IntersectionMatrix intersection_matrix(const PartitionPair& partitions,
                                       std::size_t message_len) {
    IntersectionMatrix m;
    m.rows = partitions.initial_sets.size();
    m.cols = partitions.final_sets.size();
    m.entries.assign(m.rows * m.cols, 0);
    std::vector<std::size_t> final_of(message_len, 0);
    for (std::size_t j = 0; j < m.cols; ++j)
        for (std::size_t p : partitions.final_sets[j]) final_of[p] = j;
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t p : partitions.initial_sets[i])
            m.entries[i * m.cols + final_of[p]]++;
    return m;
}

std::size_t partition_objective(const IntersectionMatrix& m, std::size_t r_f) {
    std::size_t s = 0;
    for (std::size_t v : m.row_maxima()) s += (v > r_f) ? v - r_f : 0;
    return s;
}

BoundBreakdown merge_bound(const ConversionParams& p) {
    if (p.k_f % p.k_i != 0 || p.k_f / p.k_i < 2)
        throw regime_error("merge regime needs k_f = s*k_i with integer s >= 2");
    const std::size_t s = p.k_f / p.k_i;
    BoundBreakdown b;
    b.reads = (p.r_i() >= p.r_f()) ? s * std::min(p.k_i, p.r_f()) : s * p.k_i;
    b.writes = p.r_f();
    b.total = b.reads + b.writes;
    return b;
}

BoundBreakdown split_bound(const ConversionParams& p) {
    if (p.k_i % p.k_f != 0 || p.k_i / p.k_f < 2)
        throw regime_error("split regime needs k_i = s*k_f with integer s >= 2");
    const std::size_t s = p.k_i / p.k_f;
    BoundBreakdown b;
    b.reads = (p.r_i() >= p.r_f()) ? (s - 1) * p.k_f + std::min(p.r_f(), p.k_f)
                                   : s * p.k_f;
    b.writes = s * p.r_f();
    b.total = b.reads + b.writes;
    return b;
}

std::size_t gen_split_bound(std::size_t k_i, const std::vector<std::size_t>& final_sizes,
                            std::size_t r_f) {
    std::size_t sum = 0, kf_star = 0;
    for (std::size_t v : final_sizes) {
        if (v == 0) throw parameter_error("gen_split_bound: sizes must be positive");
        sum += v;
        kf_star = std::max(kf_star, v);
    }
    if (sum != k_i) throw parameter_error("gen_split_bound: sizes must sum to k_i");
    // A single final stripe is not a split; nothing forces any reads.
    if (final_sizes.size() == 1) return 0;
    return k_i - ((kf_star > r_f) ? kf_star - r_f : 0);
}

std::vector<std::size_t> gen_merge_bound(const std::vector<std::size_t>& initial_sizes,
                                         std::size_t r_i, std::size_t r_f) {
    std::vector<std::size_t> out;
    out.reserve(initial_sizes.size());
    for (std::size_t v : initial_sizes) {
        if (v == 0) throw parameter_error("gen_merge_bound: sizes must be positive");
        out.push_back(r_i < r_f ? v : std::min(v, r_f));
    }
    return out;
}

BoundBreakdown general_bound(const ConversionParams& p) {
    if (p.k_i == p.k_f)
        throw regime_error("general bound needs k_i != k_f");
    BoundBreakdown b;
    b.writes = p.final_stripes() * p.r_f();
    if (p.r_i() >= p.r_f() && p.r_f() < std::min(p.k_i, p.k_f)) {
        const std::size_t m = p.initial_stripes() % p.final_stripes();
        const std::size_t rho = p.k_f % p.k_i;
        b.reads = p.initial_stripes() * p.r_f() +
                  m * (p.k_i - std::max(rho, p.r_f()));
    } else {
        b.reads = p.message_len();
    }
    b.total = b.reads + b.writes;
    return b;
}

BoundBreakdown regime_bound(const ConversionParams& p) {
    if (p.k_i == p.k_f) {
        BoundBreakdown b;
        if (p.r_i() >= p.r_f()) return b;
        b.reads = p.message_len();
        b.writes = p.final_stripes() * (p.r_f() - p.r_i());
        b.total = b.reads + b.writes;
        return b;
    }
    if (p.k_f % p.k_i == 0 && p.k_f / p.k_i >= 2) return merge_bound(p);
    if (p.k_i % p.k_f == 0 && p.k_i / p.k_f >= 2) return split_bound(p);
    return general_bound(p);
}

OptimalPartitions optimal_partitions(const ConversionParams& p) {
    if (p.k_i == p.k_f) throw regime_error("optimal_partitions needs k_i != k_f");
    const std::size_t si = p.initial_stripes(), sf = p.final_stripes();

    OptimalPartitions out;
    for (std::size_t i = 0; i < si; ++i) {
        std::vector<std::size_t> s(p.k_i);
        std::iota(s.begin(), s.end(), i * p.k_i);
        out.partitions.initial_sets.push_back(std::move(s));
    }

    if (p.k_i < p.k_f) {
        // Final set j = b whole initial blocks + a tail of size rho. The
        // first m tails take one remainder stripe's leading rho positions
        // whole (those positions are the ones a planner leaves unread); the
        // rest consume the remainder stripes' trailing positions in order.
        const std::size_t b = p.k_f / p.k_i;
        const std::size_t rho = p.k_f % p.k_i;
        const std::size_t m = si % sf;
        std::vector<std::size_t> stream;
        for (std::size_t c = sf * b; c < si; ++c)
            for (std::size_t l = rho; l < p.k_i; ++l) stream.push_back(c * p.k_i + l);
        std::size_t consumed = 0;
        for (std::size_t j = 0; j < sf; ++j) {
            std::vector<std::size_t> fset;
            fset.reserve(p.k_f);
            for (std::size_t w = 0; w < b; ++w) {
                const std::size_t stripe = j * b + w;
                for (std::size_t l = 0; l < p.k_i; ++l) fset.push_back(stripe * p.k_i + l);
            }
            if (rho > 0) {
                if (j < m) {
                    const std::size_t c = sf * b + j;
                    for (std::size_t l = 0; l < rho; ++l) fset.push_back(c * p.k_i + l);
                } else {
                    for (std::size_t l = 0; l < rho; ++l) fset.push_back(stream[consumed++]);
                }
            }
            out.partitions.final_sets.push_back(std::move(fset));
        }
    } else {
        // k_i > k_f: every initial stripe is cut into contiguous k_f-pieces;
        // the leftover tails are concatenated into the remaining final sets.
        const std::size_t d = p.k_i / p.k_f;
        const std::size_t rho = p.k_i % p.k_f;
        for (std::size_t i = 0; i < si; ++i)
            for (std::size_t t = 0; t < d; ++t) {
                std::vector<std::size_t> fset(p.k_f);
                std::iota(fset.begin(), fset.end(), i * p.k_i + t * p.k_f);
                out.partitions.final_sets.push_back(std::move(fset));
            }
        std::vector<std::size_t> stream;
        for (std::size_t i = 0; i < si; ++i)
            for (std::size_t l = d * p.k_f; l < p.k_i; ++l) stream.push_back(i * p.k_i + l);
        for (std::size_t off = 0; off + p.k_f <= stream.size(); off += p.k_f)
            out.partitions.final_sets.emplace_back(stream.begin() + off,
                                                   stream.begin() + off + p.k_f);
        (void)rho;
    }

    out.partitions.validate(p.message_len());
    out.intersections = intersection_matrix(out.partitions, p.message_len());
    return out;
}

} // namespace ccode
