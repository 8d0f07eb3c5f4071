#include "ccode/oracle.hpp"

#include <algorithm>
#include <random>

#include "ccode/conversions.hpp"

namespace ccode {

namespace {

std::vector<Elem> random_message(std::mt19937_64& rng, const Field& f, std::size_t len) {
    std::vector<Elem> m(len);
    for (auto& e : m) e = static_cast<Elem>(rng() % f.order());
    return m;
}

} // namespace

bool verify_preservation(const ConvertibleCodeSpec& spec, const ConversionPlan& plan,
                         std::size_t trials, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (std::size_t t = 0; t < trials; ++t) {
        auto msg = random_message(rng, *spec.field, spec.params.message_len());
        auto initial = encode_initial(spec, msg);
        auto got = execute(plan, initial, *spec.field, &spec).final_payloads;
        auto want = encode_final(spec, msg);
        if (got != want) return false;
    }
    return true;
}

bool verify_mds_exhaustive(const MdsCode& code, const Field& f, std::uint64_t seed,
                           std::size_t budget) {
    if (binomial(code.n, code.k) > budget)
        throw work_budget_error("erasure-decode enumeration exceeds budget");
    std::mt19937_64 rng(seed);
    auto msg = random_message(rng, f, code.k);
    auto word = code.encode(msg, f);
    bool ok = true;
    for_each_combination(code.n, code.k, [&](std::span<const std::size_t> pos) {
        std::vector<std::size_t> positions(pos.begin(), pos.end());
        std::vector<Elem> values(code.k);
        for (std::size_t u = 0; u < code.k; ++u) values[u] = word[pos[u]];
        try {
            if (code.decode(positions, values, f) != msg) ok = false;
        } catch (const singular_matrix_error&) {
            ok = false;
        }
        return ok;
    });
    return ok;
}

bool verify_mds_exhaustive(const ConvertibleCodeSpec& spec, const ConversionPlan& plan,
                           std::size_t trials, std::uint64_t seed, std::size_t budget) {
    const auto& p = spec.params;
    std::size_t subsets = p.final_stripes() * binomial(p.n_f, p.k_f) * trials;
    if (subsets > budget)
        throw work_budget_error("erasure-decode enumeration exceeds budget");

    std::mt19937_64 rng(seed);
    for (std::size_t t = 0; t < trials; ++t) {
        auto msg = random_message(rng, *spec.field, p.message_len());
        auto initial = encode_initial(spec, msg);
        auto finals = execute(plan, initial, *spec.field, &spec).final_payloads;
        bool ok = true;
        for (std::size_t j = 0; j < finals.size() && ok; ++j) {
            for_each_combination(p.n_f, p.k_f, [&](std::span<const std::size_t> pos) {
                std::vector<std::size_t> positions(pos.begin(), pos.end());
                std::vector<Elem> values(p.k_f);
                for (std::size_t u = 0; u < p.k_f; ++u) values[u] = finals[j][pos[u]];
                auto decoded =
                    spec.final_code.decode(positions, values, *spec.field);
                for (std::size_t u = 0; u < p.k_f; ++u)
                    if (decoded[u] != msg[spec.partitions.final_sets[j][u]]) ok = false;
                return ok;
            });
        }
        if (!ok) return false;
    }
    return true;
}

AccessAudit audit_access(const ConvertibleCodeSpec& spec, const ConversionPlan& plan) {
    AccessAudit audit;
    audit.report = access_cost(plan);
    audit.bound = regime_bound(spec.params);
    audit.report.bound = audit.bound.total;
    if (audit.report.total < audit.bound.total)
        throw plan_inconsistency_error("plan claims to beat the access-cost lower bound");

    auto def = access_cost(default_plan(spec));
    audit.report.default_total = def.total;
    audit.report.default_reads = def.reads;
    audit.report.savings =
        def.reads == 0 ? 0.0
                       : 1.0 - static_cast<double>(audit.report.reads) /
                                   static_cast<double>(def.reads);
    audit.report.optimal = audit.report.total == audit.bound.total;
    return audit;
}

namespace {

// DFS over contingency tables with row sums k_i and column sums k_f. Every
// such table is realizable by some partition pair, and the objective only
// depends on the table.
struct TableSearch {
    std::size_t rows, k_i, r_f;
    std::vector<std::size_t> col_left;
    std::size_t best = 0;

    void row_start(std::size_t row, std::size_t acc) {
        if (row == rows) {
            best = std::max(best, acc);
            return;
        }
        cell(row, 0, k_i, 0, acc);
    }

    void cell(std::size_t row, std::size_t col, std::size_t row_left,
              std::size_t row_max, std::size_t acc) {
        if (col == col_left.size()) {
            if (row_left == 0)
                row_start(row + 1, acc + (row_max > r_f ? row_max - r_f : 0));
            return;
        }
        std::size_t cap = std::min(row_left, col_left[col]);
        for (std::size_t v = 0; v <= cap; ++v) {
            col_left[col] -= v;
            cell(row, col + 1, row_left - v, std::max(row_max, v), acc);
            col_left[col] += v;
        }
    }
};

} // namespace

std::size_t brute_force_partition_objective(const ConversionParams& params) {
    if (params.message_len() > 12)
        throw work_budget_error("brute-force partition search limited to M <= 12");
    TableSearch s{params.initial_stripes(), params.k_i, params.r_f(),
                  std::vector<std::size_t>(params.final_stripes(), params.k_f)};
    s.row_start(0, 0);
    return s.best;
}

} // namespace ccode
