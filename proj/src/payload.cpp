#include "ccode/payload.hpp"

#include <cstdint>

namespace ccode {

namespace {

std::size_t symbol_count(const StripePayloads& initial) {
    std::size_t len = initial.empty() || initial[0].empty() ? 0 : initial[0][0].size();
    for (const auto& stripe : initial)
        for (const auto& node : stripe)
            if (node.size() != len)
                throw parameter_error("all node payloads must have equal length");
    return len;
}

StripePayloads allocate_output(const ConversionPlan& plan, std::size_t len) {
    StripePayloads out(plan.final_stripe_sizes.size());
    for (std::size_t j = 0; j < out.size(); ++j)
        out[j].assign(plan.final_stripe_sizes[j], std::vector<Elem>(len, 0));
    return out;
}

void check_shape(const ConversionPlan& plan, const StripePayloads& initial) {
    if (initial.size() != plan.initial_stripe_sizes.size())
        throw parameter_error("initial stripe count mismatch");
    for (std::size_t s = 0; s < initial.size(); ++s)
        if (initial[s].size() != plan.initial_stripe_sizes[s])
            throw parameter_error("initial stripe node count mismatch");
}

} // namespace

StripePayloads apply_plan_serial(const ConversionPlan& plan, const StripePayloads& initial,
                                 const Field& f) {
    check_shape(plan, initial);
    const std::size_t len = symbol_count(initial);
    StripePayloads out = allocate_output(plan, len);

    for (const auto& u : plan.unchanged)
        out[u.to.stripe][u.to.node] = initial[u.from.stripe][u.from.node];

    for (const auto& nn : plan.new_nodes) {
        auto& dst = out[nn.at.stripe][nn.at.node];
        for (std::size_t i = 0; i < plan.read_set.size(); ++i) {
            const Elem c = nn.coeffs[i];
            if (!c) continue;
            const auto& src = initial[plan.read_set[i].stripe][plan.read_set[i].node];
            for (std::size_t s = 0; s < len; ++s) dst[s] ^= f.mul(c, src[s]);
        }
    }
    return out;
}

StripePayloads apply_plan_parallel(const ConversionPlan& plan,
                                   const StripePayloads& initial, const Field& f) {
    check_shape(plan, initial);
    const std::size_t len = symbol_count(initial);
    StripePayloads out = allocate_output(plan, len);

    for (const auto& u : plan.unchanged)
        out[u.to.stripe][u.to.node] = initial[u.from.stripe][u.from.node];

    for (const auto& nn : plan.new_nodes) {
        auto& dst = out[nn.at.stripe][nn.at.node];
#ifdef CCODE_HAVE_OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (std::int64_t s = 0; s < static_cast<std::int64_t>(len); ++s) {
            Elem acc = 0;
            for (std::size_t i = 0; i < plan.read_set.size(); ++i) {
                const Elem c = nn.coeffs[i];
                if (!c) continue;
                acc ^= f.mul(
                    c, initial[plan.read_set[i].stripe][plan.read_set[i].node]
                              [static_cast<std::size_t>(s)]);
            }
            dst[static_cast<std::size_t>(s)] = acc;
        }
    }
    return out;
}

} // namespace ccode
