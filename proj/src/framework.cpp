#include "ccode/framework.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace ccode {

void PartitionPair::validate(std::size_t message_len) const {
    auto check = [&](const std::vector<std::vector<std::size_t>>& sets, const char* side) {
        std::vector<bool> seen(message_len, false);
        std::size_t count = 0;
        for (const auto& s : sets)
            for (std::size_t p : s) {
                if (p >= message_len || seen[p])
                    throw plan_inconsistency_error(std::string(side) +
                                                   " partition does not partition [M]");
                seen[p] = true;
                ++count;
            }
        if (count != message_len)
            throw plan_inconsistency_error(std::string(side) + " partition misses positions");
    };
    check(initial_sets, "initial");
    check(final_sets, "final");
}

PartitionPair contiguous_partitions(const ConversionParams& p) {
    PartitionPair pp;
    const std::size_t m = p.message_len();
    for (std::size_t i = 0; i < p.initial_stripes(); ++i) {
        std::vector<std::size_t> s(p.k_i);
        std::iota(s.begin(), s.end(), i * p.k_i);
        pp.initial_sets.push_back(std::move(s));
    }
    for (std::size_t j = 0; j < p.final_stripes(); ++j) {
        std::vector<std::size_t> s(p.k_f);
        std::iota(s.begin(), s.end(), j * p.k_f);
        pp.final_sets.push_back(std::move(s));
    }
    pp.validate(m);
    return pp;
}

std::vector<Elem> encoding_vector(const MdsCode& code,
                                  const std::vector<std::size_t>& partition_set,
                                  std::size_t node, std::size_t message_len,
                                  const Field& f) {
    (void)f;
    if (partition_set.size() != code.k)
        throw parameter_error("encoding_vector: partition set size != k");
    std::vector<Elem> g(message_len, 0);
    for (std::size_t u = 0; u < code.k; ++u) g[partition_set[u]] = code.generator(u, node);
    return g;
}

ClassifySummary classify(const ConversionPlan& plan) {
    if (plan.initial_stripe_sizes.empty() || plan.final_stripe_sizes.empty())
        throw plan_inconsistency_error("plan has no stripes");
    std::set<NodeRef> initial_seen, final_seen;
    auto initial_valid = [&](const NodeRef& n) {
        return n.stripe < plan.initial_stripe_sizes.size() &&
               n.node < plan.initial_stripe_sizes[n.stripe];
    };
    auto final_valid = [&](const NodeRef& n) {
        return n.stripe < plan.final_stripe_sizes.size() &&
               n.node < plan.final_stripe_sizes[n.stripe];
    };

    ClassifySummary s;
    s.unchanged_per_final_stripe.assign(plan.final_stripe_sizes.size(), 0);

    for (const auto& u : plan.unchanged) {
        if (!initial_valid(u.from) || !final_valid(u.to) ||
            !initial_seen.insert(u.from).second || !final_seen.insert(u.to).second)
            throw plan_inconsistency_error("unchanged mapping is not injective over the grids");
        s.unchanged_per_final_stripe[u.to.stripe]++;
    }
    for (const auto& r : plan.retired)
        if (!initial_valid(r) || !initial_seen.insert(r).second)
            throw plan_inconsistency_error("retired set overlaps or leaves the initial grid");
    for (const auto& n : plan.new_nodes)
        if (!final_valid(n.at) || !final_seen.insert(n.at).second)
            throw plan_inconsistency_error("new nodes overlap or leave the final grid");

    std::size_t initial_total = 0, final_total = 0;
    for (std::size_t v : plan.initial_stripe_sizes) initial_total += v;
    for (std::size_t v : plan.final_stripe_sizes) final_total += v;
    if (initial_seen.size() != initial_total)
        throw plan_inconsistency_error("unchanged+retired does not cover the initial grid");
    if (final_seen.size() != final_total)
        throw plan_inconsistency_error("unchanged+new does not cover the final grid");
    for (const auto& r : plan.read_set)
        if (!initial_valid(r))
            throw plan_inconsistency_error("read set references a non-initial node");

    s.unchanged = plan.unchanged.size();
    s.retired = plan.retired.size();
    s.new_count = plan.new_nodes.size();
    return s;
}

AccessReport access_cost(const ConversionPlan& plan) {
    AccessReport r;
    r.reads = plan.read_set.size();
    r.writes = plan.new_nodes.size();
    r.total = r.reads + r.writes;
    return r;
}

ConversionPlan default_plan(const ConvertibleCodeSpec& spec) {
    const auto& p = spec.params;
    ConversionPlan plan;
    plan.initial_stripe_sizes.assign(p.initial_stripes(), p.n_i);
    plan.final_stripe_sizes.assign(p.final_stripes(), p.n_f);

    // Degenerate reuse: same dimension and the final code is a column prefix
    // of the initial one. Keep the first n_f nodes, touch nothing.
    if (p.k_i == p.k_f && p.n_f <= p.n_i) {
        bool prefix = true;
        for (std::size_t i = 0; i < p.k_i && prefix; ++i)
            for (std::size_t j = 0; j < p.n_f && prefix; ++j)
                prefix = spec.final_code.generator(i, j) == spec.initial_code.generator(i, j);
        if (prefix) {
            for (std::size_t s = 0; s < p.initial_stripes(); ++s) {
                for (std::size_t j = 0; j < p.n_f; ++j)
                    plan.unchanged.push_back({{s, j}, {s, j}});
                for (std::size_t j = p.n_f; j < p.n_i; ++j) plan.retired.push_back({s, j});
            }
            return plan;
        }
    }

    // Read k_i systematic nodes per initial stripe (M reads); everything in
    // the final grid is written.
    std::vector<NodeRef> position_holder(p.message_len());
    for (std::size_t s = 0; s < p.initial_stripes(); ++s) {
        for (std::size_t j = 0; j < p.k_i; ++j) {
            plan.read_set.push_back({s, j});
            position_holder[spec.partitions.initial_sets[s][j]] = {s, j};
        }
        for (std::size_t j = 0; j < p.n_i; ++j) plan.retired.push_back({s, j});
    }
    std::map<NodeRef, std::size_t> read_index;
    for (std::size_t i = 0; i < plan.read_set.size(); ++i)
        read_index[plan.read_set[i]] = i;

    for (std::size_t t = 0; t < p.final_stripes(); ++t) {
        const auto& fset = spec.partitions.final_sets[t];
        for (std::size_t j = 0; j < p.n_f; ++j) {
            NewNode nn;
            nn.at = {t, j};
            nn.coeffs.assign(plan.read_set.size(), 0);
            for (std::size_t u = 0; u < p.k_f; ++u) {
                Elem g = spec.final_code.generator(u, j);
                if (g == 0) continue;
                nn.coeffs[read_index.at(position_holder[fset[u]])] ^= g;
            }
            plan.new_nodes.push_back(std::move(nn));
        }
    }
    return plan;
}

namespace {

nlohmann::json noderef_json(const NodeRef& n) {
    return nlohmann::json{{"stripe", n.stripe}, {"node", n.node}};
}

NodeRef noderef_from(const nlohmann::json& j) {
    return {j.at("stripe").get<std::size_t>(), j.at("node").get<std::size_t>()};
}

} // namespace

nlohmann::json plan_to_json(const ConversionPlan& plan) {
    nlohmann::json j;
    j["initial_stripe_sizes"] = plan.initial_stripe_sizes;
    j["final_stripe_sizes"] = plan.final_stripe_sizes;
    j["read_set"] = nlohmann::json::array();
    for (const auto& r : plan.read_set) j["read_set"].push_back(noderef_json(r));
    j["retired"] = nlohmann::json::array();
    for (const auto& r : plan.retired) j["retired"].push_back(noderef_json(r));
    j["unchanged_map"] = nlohmann::json::array();
    for (const auto& u : plan.unchanged)
        j["unchanged_map"].push_back(
            {{"from", noderef_json(u.from)}, {"to", noderef_json(u.to)}});
    j["new_nodes"] = nlohmann::json::array();
    for (const auto& n : plan.new_nodes)
        j["new_nodes"].push_back({{"at", noderef_json(n.at)}, {"coeffs", n.coeffs}});
    return j;
}

ConversionPlan plan_from_json(const nlohmann::json& j) {
    ConversionPlan plan;
    plan.initial_stripe_sizes = j.at("initial_stripe_sizes").get<std::vector<std::size_t>>();
    plan.final_stripe_sizes = j.at("final_stripe_sizes").get<std::vector<std::size_t>>();
    for (const auto& r : j.at("read_set")) plan.read_set.push_back(noderef_from(r));
    for (const auto& r : j.at("retired")) plan.retired.push_back(noderef_from(r));
    for (const auto& u : j.at("unchanged_map"))
        plan.unchanged.push_back({noderef_from(u.at("from")), noderef_from(u.at("to"))});
    for (const auto& n : j.at("new_nodes")) {
        NewNode nn;
        nn.at = noderef_from(n.at("at"));
        nn.coeffs = n.at("coeffs").get<std::vector<Elem>>();
        plan.new_nodes.push_back(std::move(nn));
    }
    return plan;
}

nlohmann::json report_to_json(const AccessReport& r) {
    return nlohmann::json{{"reads", r.reads},
                          {"writes", r.writes},
                          {"total", r.total},
                          {"bound", r.bound},
                          {"default_total", r.default_total},
                          {"default_reads", r.default_reads},
                          {"savings", r.savings},
                          {"optimal", r.optimal}};
}

} // namespace ccode
