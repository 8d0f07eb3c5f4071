#include <doctest.h>

#include "ccode/bounds.hpp"
#include "ccode/conversions.hpp"
#include "ccode/oracle.hpp"

using namespace ccode;

TEST_CASE("preservation oracle catches a wrong coefficient") {
    const Field& f = Field::gf256();
    ConversionParams p(7, 5, 12, 10);
    auto [design, plan] = plan_merge(p, f, 21);
    REQUIRE(verify_preservation(design.spec, plan, 20, 1));

    ConversionPlan broken = plan;
    REQUIRE(!broken.new_nodes.empty());
    broken.new_nodes[0].coeffs[0] = f.add(broken.new_nodes[0].coeffs[0], 1);
    CHECK(!verify_preservation(design.spec, broken, 20, 1));
}

TEST_CASE("exhaustive MDS oracle respects its work budget") {
    const Field& f = Field::gf256();
    MdsCode big = make_systematic_mds(30, 15, f, 1);
    CHECK_THROWS_AS(verify_mds_exhaustive(big, f, 1, 1000), work_budget_error);
    MdsCode small = make_systematic_mds(8, 5, f, 1);
    CHECK(verify_mds_exhaustive(small, f, 1));
}

TEST_CASE("audit reproduces the worked report numbers") {
    const Field& f = Field::gf256();
    ConversionParams p(6, 5, 13, 12);
    auto design = design_conversion(p, f, 1);
    auto planned = plan_general(design);
    auto audit = audit_access(design.spec, planned.plan);
    CHECK(audit.report.total == 23);
    CHECK(audit.report.bound == 23);
    CHECK(audit.report.default_total == 125);
    CHECK(audit.report.optimal);

    auto base = audit_access(design.spec, default_plan(design.spec));
    CHECK(base.report.reads == 60);
    CHECK(!base.report.optimal);
    CHECK(base.report.savings == doctest::Approx(0.0));
}

TEST_CASE("audit rejects plans that claim to beat the bound") {
    const Field& f = Field::gf256();
    ConversionParams p(6, 5, 13, 12);
    auto design = design_conversion(p, f, 1);
    auto planned = plan_general(design);

    // Drop one read (and its coefficient column) so the cost dips below the
    // proven floor; the audit must refuse to report it.
    ConversionPlan doctored = planned.plan;
    doctored.read_set.pop_back();
    for (auto& nn : doctored.new_nodes) nn.coeffs.pop_back();
    CHECK_THROWS_AS(audit_access(design.spec, doctored), plan_inconsistency_error);
}

TEST_CASE("brute-force partition search agrees with the constructor") {
    for (auto [ki, kf, rf] : {std::array<std::size_t, 3>{5, 2, 1},
                              {2, 5, 1},
                              {3, 4, 2},
                              {4, 3, 1}}) {
        ConversionParams p(ki + rf + 1, ki, kf + rf, kf);
        auto best = optimal_partitions(p);
        std::size_t s = partition_objective(best.intersections, p.r_f());
        CHECK(s == brute_force_partition_objective(p));
    }
    ConversionParams huge(8, 7, 14, 13); // M = 91 > 12
    CHECK_THROWS_AS(brute_force_partition_objective(huge), work_budget_error);
}
