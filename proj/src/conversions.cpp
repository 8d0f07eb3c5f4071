#include "ccode/conversions.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <numeric>
#include <random>
#include <set>

namespace ccode {

namespace {

// Accumulates sparse coefficient rows against a fixed read set.
class PlanBuilder {
public:
    explicit PlanBuilder(ConversionPlan& plan) : plan_(plan) {}

    void set_read_set(std::vector<NodeRef> reads) {
        std::sort(reads.begin(), reads.end());
        reads.erase(std::unique(reads.begin(), reads.end()), reads.end());
        plan_.read_set = std::move(reads);
        for (std::size_t i = 0; i < plan_.read_set.size(); ++i)
            index_[plan_.read_set[i]] = i;
    }

    void new_node(NodeRef at, const std::map<NodeRef, Elem>& coeffs) {
        NewNode nn;
        nn.at = at;
        nn.coeffs.assign(plan_.read_set.size(), 0);
        for (const auto& [ref, c] : coeffs) {
            auto it = index_.find(ref);
            if (it == index_.end())
                throw plan_inconsistency_error("coefficient references a node outside D");
            nn.coeffs[it->second] ^= c;
        }
        plan_.new_nodes.push_back(std::move(nn));
    }

private:
    ConversionPlan& plan_;
    std::map<NodeRef, std::size_t> index_;
};

MdsCode systematic_from_parity(std::size_t k, const GfMatrix& parity) {
    MdsCode c;
    c.k = k;
    c.n = k + parity.cols();
    c.generator = GfMatrix(k, c.n);
    for (std::size_t i = 0; i < k; ++i) c.generator(i, i) = 1;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < parity.cols(); ++j)
            c.generator(i, k + j) = parity(i, j);
    return c;
}

struct ScaledFamily {
    GfMatrix multipliers; // slot_sizes.size() x r_f
    MdsCode final;        // [sum(slots)+r_f, sum(slots)]
};

// Search for slot multipliers making the scaled final code MDS: row (s,l)
// of the final parity block is multipliers(s,t) * P_I[l][t]. Each such final
// parity is then computable from per-slot initial parities of the same index.
std::optional<ScaledFamily> search_multipliers(const MdsCode& initial,
                                               const std::vector<std::size_t>& slot_sizes,
                                               std::size_t r_f, const Field& field,
                                               std::mt19937_64& rng,
                                               std::size_t attempts) {
    std::size_t k_f = 0;
    for (std::size_t s : slot_sizes) {
        if (s == 0 || s > initial.k)
            throw parameter_error("slot sizes must be in [1, k_i]");
        k_f += s;
    }
    if (r_f > initial.r()) throw parameter_error("scaled family needs r_f <= r_i");

    for (std::size_t a = 0; a < attempts; ++a) {
        GfMatrix lambda(slot_sizes.size(), r_f);
        for (std::size_t s = 0; s < slot_sizes.size(); ++s)
            for (std::size_t t = 0; t < r_f; ++t)
                lambda(s, t) = static_cast<Elem>(1 + rng() % (field.order() - 1));

        GfMatrix pf(k_f, r_f);
        std::size_t row = 0;
        for (std::size_t s = 0; s < slot_sizes.size(); ++s)
            for (std::size_t l = 0; l < slot_sizes[s]; ++l, ++row)
                for (std::size_t t = 0; t < r_f; ++t)
                    pf(row, t) =
                        field.mul(lambda(s, t), initial.generator(l, initial.k + t));

        MdsCode final_code = systematic_from_parity(k_f, pf);
        if (is_mds(final_code, field))
            return ScaledFamily{std::move(lambda), std::move(final_code)};
    }
    return std::nullopt;
}

MdsCode projection_final(const MdsCode& initial, std::size_t k_f, std::size_t r_f) {
    GfMatrix p(k_f, r_f);
    for (std::size_t i = 0; i < k_f; ++i)
        for (std::size_t t = 0; t < r_f; ++t) p(i, t) = initial.generator(i, initial.k + t);
    return systematic_from_parity(k_f, p);
}

bool is_systematic(const MdsCode& c) {
    for (std::size_t i = 0; i < c.k; ++i)
        for (std::size_t j = 0; j < c.k; ++j)
            if (c.generator(i, j) != (i == j ? 1 : 0)) return false;
    return true;
}

// position -> (final stripe, row) lookup
std::vector<std::pair<std::size_t, std::size_t>>
final_position_map(const PartitionPair& parts, std::size_t message_len) {
    std::vector<std::pair<std::size_t, std::size_t>> out(message_len);
    for (std::size_t j = 0; j < parts.final_sets.size(); ++j)
        for (std::size_t u = 0; u < parts.final_sets[j].size(); ++u)
            out[parts.final_sets[j][u]] = {j, u};
    return out;
}

// Default approach with systematic reuse: read all data, keep every
// systematic node unchanged, write only the final parities.
ConversionPlan fallback_plan(const ConvertibleCodeSpec& spec) {
    const auto& p = spec.params;
    ConversionPlan plan;
    plan.initial_stripe_sizes.assign(p.initial_stripes(), p.n_i);
    plan.final_stripe_sizes.assign(p.final_stripes(), p.n_f);
    PlanBuilder b(plan);

    std::vector<NodeRef> reads;
    std::vector<NodeRef> holder(p.message_len());
    auto fmap = final_position_map(spec.partitions, p.message_len());
    for (std::size_t s = 0; s < p.initial_stripes(); ++s) {
        for (std::size_t l = 0; l < p.k_i; ++l) {
            NodeRef ref{s, l};
            reads.push_back(ref);
            std::size_t pos = spec.partitions.initial_sets[s][l];
            holder[pos] = ref;
            auto [j, u] = fmap[pos];
            plan.unchanged.push_back({ref, {j, u}});
        }
        for (std::size_t t = 0; t < p.r_i(); ++t) plan.retired.push_back({s, p.k_i + t});
    }
    b.set_read_set(std::move(reads));
    for (std::size_t j = 0; j < p.final_stripes(); ++j)
        for (std::size_t t = 0; t < p.r_f(); ++t) {
            std::map<NodeRef, Elem> coeffs;
            for (std::size_t u = 0; u < p.k_f; ++u) {
                Elem g = spec.final_code.generator(u, p.k_f + t);
                if (g) coeffs[holder[spec.partitions.final_sets[j][u]]] ^= g;
            }
            b.new_node({j, p.k_f + t}, coeffs);
        }
    return plan;
}

bool same_partitions(const PartitionPair& a, const PartitionPair& b) {
    return a.initial_sets == b.initial_sets && a.final_sets == b.final_sets;
}

} // namespace

namespace {

// Extend an [n,k] systematic code with `extra` further MDS parity columns
// by seeded search.
MdsCode extend_parities(const MdsCode& base, std::size_t extra, const Field& field,
                        std::mt19937_64& rng) {
    const std::size_t attempts = 400;
    for (std::size_t a = 0; a < attempts; ++a) {
        GfMatrix p(base.k, base.r() + extra);
        for (std::size_t i = 0; i < base.k; ++i) {
            for (std::size_t t = 0; t < base.r(); ++t)
                p(i, t) = base.generator(i, base.k + t);
            for (std::size_t t = base.r(); t < p.cols(); ++t)
                p(i, t) = static_cast<Elem>(1 + rng() % (field.order() - 1));
        }
        MdsCode c = systematic_from_parity(base.k, p);
        if (is_mds(c, field)) return c;
    }
    throw construction_error("no MDS parity extension found within the search budget");
}

MdsCode checked_initial(const ConversionParams& params, const Field& field,
                        std::uint64_t seed, const MdsCode* preset) {
    if (!preset) return make_systematic_mds(params.n_i, params.k_i, field, seed);
    if (preset->n != params.n_i || preset->k != params.k_i)
        throw parameter_error("preset initial code has the wrong shape");
    if (!is_systematic(*preset))
        throw parameter_error("preset initial code must be systematic");
    return *preset;
}

} // namespace

ConversionDesign design_conversion(const ConversionParams& params, const Field& field,
                                   std::uint64_t seed, const MdsCode* initial) {
    ConversionDesign d{{params, {}, {}, {}, &field}, {}};
    const std::size_t k_i = params.k_i, k_f = params.k_f;
    const std::size_t r_i = params.r_i(), r_f = params.r_f();
    std::mt19937_64 rng(seed ^ 0xc3a5c85c97cb3127ull);

    d.spec.initial_code = checked_initial(params, field, seed, initial);
    d.spec.partitions = k_i == k_f ? contiguous_partitions(params)
                                   : optimal_partitions(params).partitions;

    if (k_i >= k_f) {
        if (r_f <= r_i)
            d.spec.final_code = projection_final(d.spec.initial_code, k_f, r_f);
        else if (k_i == k_f)
            d.spec.final_code =
                extend_parities(d.spec.initial_code, r_f - r_i, field, rng);
        else
            d.spec.final_code = make_systematic_mds(params.n_f, k_f, field, seed + 1);
        return d;
    }

    // k_i < k_f
    if (r_i >= r_f && r_f < k_i) {
        const std::size_t rho = k_f % k_i;
        std::vector<std::size_t> slots(k_f / k_i, k_i);
        if (rho > 0) slots.push_back(rho);
        auto fam = search_multipliers(d.spec.initial_code, slots, r_f, field, rng, 400);
        if (!fam && !initial && field == Field::gf256())
            return design_conversion(params, Field::gf65536(), seed, nullptr);
        if (!fam)
            throw construction_error("no MDS multiplier family found within the budget");
        d.spec.final_code = std::move(fam->final);
        d.multipliers = std::move(fam->multipliers);
    } else {
        d.spec.final_code = make_systematic_mds(params.n_f, k_f, field, seed + 1);
    }
    return d;
}

ConversionPlan plan_split(const ConvertibleCodeSpec& spec) {
    const auto& p = spec.params;
    if (p.k_i % p.k_f != 0 || p.k_i / p.k_f < 2)
        throw regime_error("plan_split needs k_i = s*k_f with integer s >= 2");
    if (!is_systematic(spec.initial_code))
        throw parameter_error("plan_split needs a systematic initial code");
    const std::size_t s = p.k_i / p.k_f;
    const std::size_t k_i = p.k_i, k_f = p.k_f, r_i = p.r_i(), r_f = p.r_f();

    ConversionPlan plan;
    plan.initial_stripe_sizes = {p.n_i};
    plan.final_stripe_sizes.assign(s, p.n_f);
    PlanBuilder b(plan);

    if (r_f > std::min(r_i, k_f)) {
        // Trivial: nothing beats the default approach.
        ConvertibleCodeSpec tmp = spec;
        tmp.partitions = contiguous_partitions(p);
        return fallback_plan(tmp);
    }
    // Final code must be the projection onto the first k_f rows, columns
    // [0,k_f) and [k_i, k_i + r_f).
    MdsCode expected = projection_final(spec.initial_code, k_f, r_f);
    if (spec.final_code.generator != expected.generator)
        throw parameter_error("plan_split: final code is not the prescribed projection");

    for (std::size_t l = 0; l < k_i; ++l)
        plan.unchanged.push_back({{0, l}, {l / k_f, l % k_f}});
    for (std::size_t t = 0; t < r_i; ++t) plan.retired.push_back({0, k_i + t});

    std::vector<NodeRef> reads;
    for (std::size_t l = k_f; l < k_i; ++l) reads.push_back({0, l}); // U
    for (std::size_t t = 0; t < r_f; ++t) reads.push_back({0, k_i + t}); // R
    b.set_read_set(std::move(reads));

    const auto& gi = spec.initial_code.generator;
    for (std::size_t t = 0; t < r_f; ++t) {
        // Stripe 0: retired parity with interference from the other final
        // stripes removed via the read unchanged nodes.
        std::map<NodeRef, Elem> coeffs;
        coeffs[{0, k_i + t}] = 1;
        for (std::size_t l = k_f; l < k_i; ++l) coeffs[{0, l}] ^= gi(l, k_i + t);
        b.new_node({0, k_f + t}, coeffs);
    }
    for (std::size_t i = 1; i < s; ++i)
        for (std::size_t t = 0; t < r_f; ++t) {
            std::map<NodeRef, Elem> coeffs;
            for (std::size_t u = 0; u < k_f; ++u)
                coeffs[{0, i * k_f + u}] ^= gi(u, k_i + t);
            b.new_node({i, k_f + t}, coeffs);
        }
    return plan;
}

GenSplitResult plan_generalized_split(const MdsCode& initial_code,
                                      const std::vector<std::size_t>& final_sizes,
                                      std::size_t n_f, const Field& field) {
    const std::size_t k_i = initial_code.k;
    const std::size_t r_i = initial_code.r();
    if (!is_systematic(initial_code))
        throw parameter_error("generalized split needs a systematic initial code");
    std::size_t sum = 0, kf_star = 0, argmax = 0;
    for (std::size_t i = 0; i < final_sizes.size(); ++i) {
        if (final_sizes[i] == 0) throw parameter_error("final sizes must be positive");
        sum += final_sizes[i];
        if (final_sizes[i] > kf_star) {
            kf_star = final_sizes[i];
            argmax = i;
        }
    }
    if (sum != k_i) throw parameter_error("final sizes must sum to k_i");
    if (n_f <= kf_star) throw parameter_error("need n_f > max final size");
    const std::size_t r_f = n_f - kf_star;

    GenSplitResult res;
    // Layout: the largest final stripe owns the leading positions, the rest
    // follow in list order.
    res.final_layout.resize(final_sizes.size());
    {
        std::vector<std::size_t> first(kf_star);
        std::iota(first.begin(), first.end(), 0);
        res.final_layout[argmax] = std::move(first);
        std::size_t off = kf_star;
        for (std::size_t i = 0; i < final_sizes.size(); ++i) {
            if (i == argmax) continue;
            std::vector<std::size_t> v(final_sizes[i]);
            std::iota(v.begin(), v.end(), off);
            off += final_sizes[i];
            res.final_layout[i] = std::move(v);
        }
    }

    res.plan.initial_stripe_sizes = {initial_code.n};
    for (std::size_t sz : final_sizes) res.plan.final_stripe_sizes.push_back(sz + r_f);
    PlanBuilder b(res.plan);

    // Single final stripe, no growth: an identity-like relabeling.
    if (final_sizes.size() == 1 && n_f <= initial_code.n) {
        res.final_code = projection_final(initial_code, k_i, r_f);
        res.final_codes = {res.final_code};
        for (std::size_t j = 0; j < n_f; ++j) res.plan.unchanged.push_back({{0, j}, {0, j}});
        for (std::size_t j = n_f; j < initial_code.n; ++j) res.plan.retired.push_back({0, j});
        return res;
    }

    const bool nontrivial = r_f <= r_i && r_f < kf_star;
    if (r_f <= r_i)
        res.final_code = projection_final(initial_code, kf_star, r_f);
    else
        res.final_code = make_systematic_mds(n_f, kf_star, field, 0x9e3779b97f4a7c15ull);
    for (std::size_t sz : final_sizes)
        res.final_codes.push_back(projection_final(res.final_code, sz, r_f));

    for (std::size_t i = 0; i < final_sizes.size(); ++i)
        for (std::size_t u = 0; u < final_sizes[i]; ++u)
            res.plan.unchanged.push_back({{0, res.final_layout[i][u]}, {i, u}});
    for (std::size_t t = 0; t < r_i; ++t) res.plan.retired.push_back({0, k_i + t});

    const auto& gi = initial_code.generator;
    std::vector<NodeRef> reads;
    if (nontrivial) {
        for (std::size_t l = kf_star; l < k_i; ++l) reads.push_back({0, l});
        for (std::size_t t = 0; t < r_f; ++t) reads.push_back({0, k_i + t});
    } else {
        for (std::size_t l = 0; l < k_i; ++l) reads.push_back({0, l});
    }
    b.set_read_set(std::move(reads));

    for (std::size_t i = 0; i < final_sizes.size(); ++i) {
        for (std::size_t t = 0; t < r_f; ++t) {
            std::map<NodeRef, Elem> coeffs;
            if (nontrivial && i == argmax) {
                coeffs[{0, k_i + t}] = 1;
                for (std::size_t l = kf_star; l < k_i; ++l)
                    coeffs[{0, l}] ^= gi(l, k_i + t);
            } else {
                const auto& pgen = res.final_code.generator;
                for (std::size_t u = 0; u < final_sizes[i]; ++u)
                    coeffs[{0, res.final_layout[i][u]}] ^= pgen(u, kf_star + t);
            }
            b.new_node({i, final_sizes[i] + t}, coeffs);
        }
    }
    return res;
}

GenMergeResult plan_generalized_merge(const std::vector<std::size_t>& initial_sizes,
                                      std::size_t n_i, std::size_t n_f,
                                      const Field& field, std::uint64_t seed) {
    std::size_t ki_star = 0, k_f = 0;
    for (std::size_t v : initial_sizes) {
        if (v == 0) throw parameter_error("initial sizes must be positive");
        ki_star = std::max(ki_star, v);
        k_f += v;
    }
    if (initial_sizes.empty()) throw parameter_error("need at least one initial stripe");
    if (n_i <= ki_star) throw parameter_error("need n_i > max initial size");
    if (n_f <= k_f) throw parameter_error("need n_f > sum of initial sizes");
    const std::size_t r_i = n_i - ki_star;
    const std::size_t r_f = n_f - k_f;

    GenMergeResult res;
    res.field = &field;
    res.initial_layout.resize(initial_sizes.size());
    {
        std::size_t off = 0;
        for (std::size_t i = 0; i < initial_sizes.size(); ++i) {
            res.initial_layout[i].resize(initial_sizes[i]);
            std::iota(res.initial_layout[i].begin(), res.initial_layout[i].end(), off);
            off += initial_sizes[i];
        }
    }
    for (std::size_t v : initial_sizes) res.plan.initial_stripe_sizes.push_back(v + r_i);
    res.plan.final_stripe_sizes = {n_f};
    PlanBuilder b(res.plan);

    // Single stripe, no growth: relabeling only.
    if (initial_sizes.size() == 1 && r_f <= r_i) {
        res.parent_initial = make_systematic_mds(n_i, ki_star, field, seed);
        res.initial_codes = {res.parent_initial};
        res.final_code = projection_final(res.parent_initial, k_f, r_f);
        for (std::size_t j = 0; j < n_f; ++j) res.plan.unchanged.push_back({{0, j}, {0, j}});
        for (std::size_t j = n_f; j < n_i; ++j) res.plan.retired.push_back({0, j});
        return res;
    }

    const bool nontrivial = r_f <= r_i;
    if (nontrivial) {
        const Field* use = &field;
        std::mt19937_64 rng(seed ^ 0xc3a5c85c97cb3127ull);
        res.parent_initial = make_systematic_mds(n_i, ki_star, field, seed);
        auto fam = search_multipliers(res.parent_initial, initial_sizes, r_f, field,
                                      rng, 400);
        if (!fam && field == Field::gf256()) {
            use = &Field::gf65536();
            res.parent_initial = make_systematic_mds(n_i, ki_star, *use, seed);
            fam = search_multipliers(res.parent_initial, initial_sizes, r_f, *use, rng,
                                     400);
        }
        if (!fam)
            throw construction_error("no MDS multiplier family found within the budget");
        res.final_code = std::move(fam->final);
        res.multipliers = std::move(fam->multipliers);
        res.field = use;
    } else {
        res.parent_initial = make_systematic_mds(n_i, ki_star, field, seed);
        res.final_code = make_systematic_mds(n_f, k_f, field, seed + 1);
    }
    for (std::size_t v : initial_sizes) {
        std::vector<std::size_t> drop;
        for (std::size_t l = v; l < ki_star; ++l) drop.push_back(l);
        res.initial_codes.push_back(drop.empty() ? res.parent_initial
                                                 : shorten(res.parent_initial, drop));
    }

    std::vector<NodeRef> reads;
    for (std::size_t i = 0; i < initial_sizes.size(); ++i) {
        const std::size_t sz = initial_sizes[i];
        for (std::size_t u = 0; u < sz; ++u)
            res.plan.unchanged.push_back({{i, u}, {0, res.initial_layout[i][u]}});
        for (std::size_t t = 0; t < r_i; ++t) res.plan.retired.push_back({i, sz + t});
        if (!nontrivial || sz <= r_f)
            for (std::size_t l = 0; l < sz; ++l) reads.push_back({i, l});
        else
            for (std::size_t t = 0; t < r_f; ++t) reads.push_back({i, sz + t});
    }
    b.set_read_set(std::move(reads));

    for (std::size_t t = 0; t < r_f; ++t) {
        std::map<NodeRef, Elem> coeffs;
        for (std::size_t i = 0; i < initial_sizes.size(); ++i) {
            const std::size_t sz = initial_sizes[i];
            if (nontrivial && sz > r_f) {
                coeffs[{i, sz + t}] ^= res.multipliers(i, t);
            } else {
                // Fully read stripe: re-encode its share directly.
                for (std::size_t l = 0; l < sz; ++l)
                    coeffs[{i, l}] ^=
                        res.final_code.generator(res.initial_layout[i][l], k_f + t);
            }
        }
        b.new_node({0, k_f + t}, coeffs);
    }
    return res;
}

MergePlanResult plan_merge(const ConversionParams& params, const Field& field,
                           std::uint64_t seed) {
    if (params.k_f % params.k_i != 0 || params.k_f / params.k_i < 2)
        throw regime_error("plan_merge needs k_f = s*k_i with integer s >= 2");
    const std::size_t s = params.k_f / params.k_i;
    std::vector<std::size_t> sizes(s, params.k_i);
    GenMergeResult gm = plan_generalized_merge(sizes, params.n_i, params.n_f, field, seed);

    MergePlanResult out{{{params, {}, {}, {}, gm.field}, std::move(gm.multipliers)},
                        std::move(gm.plan)};
    out.design.spec.partitions = contiguous_partitions(params);
    out.design.spec.initial_code = std::move(gm.parent_initial);
    out.design.spec.final_code = std::move(gm.final_code);
    return out;
}

nlohmann::json tree_to_json(const GeneralPlanTree& tree) {
    nlohmann::json j;
    j["regime"] = tree.regime;
    j["intermediate_sizes"] = tree.intermediate_sizes;
    j["groups"] = nlohmann::json::array();
    for (const auto& g : tree.groups) {
        nlohmann::json tails = nlohmann::json::array();
        for (const auto& p : g.tail)
            tails.push_back({{"source_stripe", p.source_stripe},
                             {"locals", p.locals},
                             {"via_parity", p.via_parity}});
        j["groups"].push_back({{"final_stripe", g.final_stripe},
                               {"whole_initial", g.whole_initial},
                               {"tail", tails}});
    }
    return j;
}

namespace {

// Break a list of (stripe, local) pairs into runs by stripe.
std::vector<IntermediatePiece> runs_by_stripe(
    const std::vector<std::pair<std::size_t, std::size_t>>& cells, bool via_parity) {
    std::vector<IntermediatePiece> out;
    for (const auto& [c, u] : cells) {
        if (out.empty() || out.back().source_stripe != c)
            out.push_back({c, {}, via_parity});
        out.back().locals.push_back(u);
    }
    return out;
}

} // namespace

GeneralPlanResult plan_general(const ConversionDesign& design, bool allow_any_partitions) {
    const auto& spec = design.spec;
    const auto& p = spec.params;
    const Field& f = *spec.field;
    const std::size_t k_i = p.k_i, k_f = p.k_f, r_i = p.r_i(), r_f = p.r_f();
    const std::size_t si = p.initial_stripes(), sf = p.final_stripes();

    GeneralPlanResult res;

    if (k_i == k_f) {
        res.tree.regime = "degenerate";
        res.plan.initial_stripe_sizes.assign(si, p.n_i);
        res.plan.final_stripe_sizes.assign(sf, p.n_f);
        if (r_i >= r_f) {
            for (std::size_t s = 0; s < si; ++s) {
                for (std::size_t j = 0; j < p.n_f; ++j)
                    res.plan.unchanged.push_back({{s, j}, {s, j}});
                for (std::size_t j = p.n_f; j < p.n_i; ++j)
                    res.plan.retired.push_back({s, j});
            }
        } else {
            // Keep everything, read all data, add the missing parities.
            PlanBuilder b(res.plan);
            std::vector<NodeRef> reads;
            for (std::size_t s = 0; s < si; ++s) {
                for (std::size_t j = 0; j < p.n_i; ++j)
                    res.plan.unchanged.push_back({{s, j}, {s, j}});
                for (std::size_t l = 0; l < k_i; ++l) reads.push_back({s, l});
            }
            b.set_read_set(std::move(reads));
            for (std::size_t s = 0; s < si; ++s)
                for (std::size_t t = r_i; t < r_f; ++t) {
                    std::map<NodeRef, Elem> coeffs;
                    for (std::size_t u = 0; u < k_f; ++u)
                        coeffs[{s, u}] ^= spec.final_code.generator(u, k_f + t);
                    b.new_node({s, k_f + t}, coeffs);
                }
        }
        return res;
    }

    if (!allow_any_partitions &&
        !same_partitions(spec.partitions, optimal_partitions(p).partitions))
        throw plan_inconsistency_error(
            "plan_general requires partitions from optimal_partitions");

    const bool nontrivial = r_i >= r_f && r_f < std::min(k_i, k_f);
    if (!nontrivial || allow_any_partitions) {
        res.tree.regime = "default";
        res.plan = fallback_plan(spec);
        return res;
    }

    auto fmap = final_position_map(spec.partitions, p.message_len());
    res.plan.initial_stripe_sizes.assign(si, p.n_i);
    res.plan.final_stripe_sizes.assign(sf, p.n_f);
    PlanBuilder b(res.plan);

    // All systematic nodes stay unchanged, all initial parities retire.
    for (std::size_t s = 0; s < si; ++s) {
        for (std::size_t l = 0; l < k_i; ++l) {
            auto [j, u] = fmap[spec.partitions.initial_sets[s][l]];
            res.plan.unchanged.push_back({{s, l}, {j, u}});
        }
        for (std::size_t t = 0; t < r_i; ++t) res.plan.retired.push_back({s, k_i + t});
    }

    if (k_i < k_f) {
        res.tree.regime = "merge-like";
        if (design.multipliers.rows() == 0)
            throw plan_inconsistency_error("design lacks the multiplier family");
        const auto& gi = spec.initial_code.generator;
        const std::size_t blk = k_f / k_i;
        const std::size_t rho = k_f % k_i;
        const std::size_t m = si % sf;
        const bool tail_via_parity = r_f <= rho;

        std::vector<NodeRef> reads;
        for (std::size_t s = 0; s + m < si; ++s)
            for (std::size_t t = 0; t < r_f; ++t) reads.push_back({s, k_i + t});
        for (std::size_t c = si - m; c < si; ++c) {
            if (tail_via_parity) {
                for (std::size_t l = rho; l < k_i; ++l) reads.push_back({c, l});
                for (std::size_t t = 0; t < r_f; ++t) reads.push_back({c, k_i + t});
            } else {
                for (std::size_t l = 0; l < k_i; ++l) reads.push_back({c, l});
            }
        }
        b.set_read_set(std::move(reads));

        for (std::size_t j = 0; j < sf; ++j) {
            StripeGroup grp;
            grp.final_stripe = j;
            for (std::size_t w = 0; w < blk; ++w) grp.whole_initial.push_back(j * blk + w);

            std::vector<std::pair<std::size_t, std::size_t>> tail_cells;
            for (std::size_t l = 0; l < rho; ++l) {
                std::size_t pos = spec.partitions.final_sets[j][blk * k_i + l];
                tail_cells.push_back({pos / k_i, pos % k_i});
            }
            const bool unread_bin = tail_via_parity && j < m;
            grp.tail = runs_by_stripe(tail_cells, unread_bin);

            for (std::size_t t = 0; t < r_f; ++t) {
                std::map<NodeRef, Elem> coeffs;
                for (std::size_t w = 0; w < blk; ++w)
                    coeffs[{j * blk + w, k_i + t}] ^= design.multipliers(w, t);
                if (rho > 0) {
                    const Elem gt = design.multipliers(blk, t);
                    if (unread_bin) {
                        // Interference elimination: scale the whole parity,
                        // cancel the positions outside this stripe's piece.
                        const std::size_t c = tail_cells.front().first;
                        coeffs[{c, k_i + t}] ^= gt;
                        for (std::size_t l = rho; l < k_i; ++l)
                            coeffs[{c, l}] ^= f.mul(gt, gi(l, k_i + t));
                    } else {
                        for (std::size_t l = 0; l < rho; ++l) {
                            auto [c, u] = tail_cells[l];
                            coeffs[{c, u}] ^= f.mul(gt, gi(l, k_i + t));
                        }
                    }
                }
                b.new_node({j, k_f + t}, coeffs);
            }
            res.tree.groups.push_back(std::move(grp));
        }
        for (const auto& g : res.tree.groups)
            for (const auto& piece : g.tail)
                res.tree.intermediate_sizes.push_back(piece.locals.size());
        res.plan.final_stripe_sizes.assign(sf, p.n_f);
        return res;
    }

    // k_i > k_f: split every initial stripe; leftover tails are assembled
    // into the remaining final stripes at no extra read cost.
    res.tree.regime = "split-like";
    const std::size_t d = k_i / k_f;
    const auto& gi = spec.initial_code.generator;

    std::vector<NodeRef> reads;
    for (std::size_t s = 0; s < si; ++s) {
        for (std::size_t l = k_f; l < k_i; ++l) reads.push_back({s, l});
        for (std::size_t t = 0; t < r_f; ++t) reads.push_back({s, k_i + t});
    }
    b.set_read_set(std::move(reads));

    for (std::size_t j = 0; j < sf; ++j) {
        StripeGroup grp;
        grp.final_stripe = j;
        const bool head_piece = j < si * d && j % d == 0;
        std::vector<std::pair<std::size_t, std::size_t>> cells;
        for (std::size_t u = 0; u < k_f; ++u) {
            std::size_t pos = spec.partitions.final_sets[j][u];
            cells.push_back({pos / k_i, pos % k_i});
        }
        grp.tail = runs_by_stripe(cells, head_piece);

        for (std::size_t t = 0; t < r_f; ++t) {
            std::map<NodeRef, Elem> coeffs;
            if (head_piece) {
                const std::size_t s = j / d;
                coeffs[{s, k_i + t}] = 1;
                for (std::size_t l = k_f; l < k_i; ++l) coeffs[{s, l}] ^= gi(l, k_i + t);
            } else {
                for (std::size_t u = 0; u < k_f; ++u) {
                    auto [c, l] = cells[u];
                    coeffs[{c, l}] ^= gi(u, k_i + t);
                }
            }
            b.new_node({j, k_f + t}, coeffs);
        }
        res.tree.groups.push_back(std::move(grp));
    }
    for (const auto& g : res.tree.groups)
        for (const auto& piece : g.tail)
            res.tree.intermediate_sizes.push_back(piece.locals.size());
    return res;
}

ExecutionResult execute(const ConversionPlan& plan,
                        const std::vector<std::vector<Elem>>& initial_payloads,
                        const Field& field, const ConvertibleCodeSpec* spec) {
    if (initial_payloads.size() != plan.initial_stripe_sizes.size())
        throw parameter_error("execute: wrong number of initial stripes");
    for (std::size_t s = 0; s < initial_payloads.size(); ++s)
        if (initial_payloads[s].size() != plan.initial_stripe_sizes[s])
            throw parameter_error("execute: stripe payload size mismatch");

    ExecutionResult res;
    std::vector<Elem> read_values(plan.read_set.size());
    for (std::size_t i = 0; i < plan.read_set.size(); ++i) {
        const auto& r = plan.read_set[i];
        read_values[i] = initial_payloads[r.stripe][r.node];
        res.touched.push_back(r);
    }

    // Integrity check on read parity nodes whose whole stripe data was read.
    if (spec) {
        const std::size_t k = spec->params.k_i;
        std::set<NodeRef> read_refs(plan.read_set.begin(), plan.read_set.end());
        for (const auto& r : plan.read_set) {
            if (r.node < k || plan.initial_stripe_sizes[r.stripe] != spec->params.n_i)
                continue;
            bool have_all = true;
            for (std::size_t l = 0; l < k && have_all; ++l)
                have_all = read_refs.count({r.stripe, l}) > 0;
            if (!have_all) continue;
            Elem expected = 0;
            for (std::size_t l = 0; l < k; ++l)
                expected ^= field.mul(spec->initial_code.generator(l, r.node),
                                      initial_payloads[r.stripe][l]);
            if (expected != initial_payloads[r.stripe][r.node])
                throw payload_corruption_error(
                    "parity mismatch at stripe " + std::to_string(r.stripe) + ", node " +
                    std::to_string(r.node));
        }
    }

    res.final_payloads.resize(plan.final_stripe_sizes.size());
    for (std::size_t j = 0; j < plan.final_stripe_sizes.size(); ++j)
        res.final_payloads[j].assign(plan.final_stripe_sizes[j], 0);
    for (const auto& u : plan.unchanged)
        res.final_payloads[u.to.stripe][u.to.node] =
            initial_payloads[u.from.stripe][u.from.node];
    for (const auto& nn : plan.new_nodes) {
        Elem acc = 0;
        for (std::size_t i = 0; i < nn.coeffs.size(); ++i)
            acc ^= field.mul(nn.coeffs[i], read_values[i]);
        res.final_payloads[nn.at.stripe][nn.at.node] = acc;
    }
    return res;
}

std::vector<std::vector<Elem>> encode_initial(const ConvertibleCodeSpec& spec,
                                              std::span<const Elem> message) {
    if (message.size() != spec.params.message_len())
        throw parameter_error("message length must be lcm(k_i, k_f)");
    std::vector<std::vector<Elem>> out;
    for (const auto& iset : spec.partitions.initial_sets) {
        std::vector<Elem> m(iset.size());
        for (std::size_t u = 0; u < iset.size(); ++u) m[u] = message[iset[u]];
        out.push_back(spec.initial_code.encode(m, *spec.field));
    }
    return out;
}

std::vector<std::vector<Elem>> encode_final(const ConvertibleCodeSpec& spec,
                                            std::span<const Elem> message) {
    if (message.size() != spec.params.message_len())
        throw parameter_error("message length must be lcm(k_i, k_f)");
    std::vector<std::vector<Elem>> out;
    for (const auto& fset : spec.partitions.final_sets) {
        std::vector<Elem> m(fset.size());
        for (std::size_t u = 0; u < fset.size(); ++u) m[u] = message[fset[u]];
        out.push_back(spec.final_code.encode(m, *spec.field));
    }
    return out;
}

} // namespace ccode
