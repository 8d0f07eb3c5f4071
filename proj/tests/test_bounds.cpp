#include <doctest.h>

#include "ccode/bounds.hpp"
#include "ccode/oracle.hpp"

using namespace ccode;

TEST_CASE("merge bound") {
    auto b = merge_bound(ConversionParams(7, 5, 12, 10));
    CHECK(b.reads == 4);
    CHECK(b.writes == 2);
    CHECK(b.total == 6);

    // r_i < r_f forces reading whole stripes.
    CHECK(merge_bound(ConversionParams(6, 5, 12, 10)).reads == 10);
    CHECK_THROWS_AS(merge_bound(ConversionParams(6, 5, 7, 5)), regime_error);
    CHECK_THROWS_AS(merge_bound(ConversionParams(6, 5, 13, 12)), regime_error);
}

TEST_CASE("split bound") {
    auto b = split_bound(ConversionParams(13, 10, 6, 5));
    CHECK(b.reads == 6);
    CHECK(b.writes == 2);
    CHECK(b.total == 8);

    CHECK(split_bound(ConversionParams(11, 10, 7, 5)).total == 14); // 2 * n_f
    // r_f >= k_f clamps the read bound at M.
    CHECK(split_bound(ConversionParams(7, 4, 5, 2)).reads == 4);
    CHECK_THROWS_AS(split_bound(ConversionParams(12, 10, 6, 4)), regime_error);
}

TEST_CASE("generalized split bound") {
    CHECK(gen_split_bound(5, {2, 2, 1}, 1) == 4);
    CHECK(gen_split_bound(5, {5}, 5) == 0);
    CHECK(gen_split_bound(5, {5}, 1) == 0);
    CHECK_THROWS_AS(gen_split_bound(5, {2, 2}, 1), parameter_error);
}

TEST_CASE("generalized merge bound") {
    CHECK(gen_merge_bound({5, 2}, 1, 1) == std::vector<std::size_t>{1, 1});
    CHECK(gen_merge_bound({5, 2}, 1, 2) == std::vector<std::size_t>{5, 2});
    CHECK(gen_merge_bound({}, 1, 1).empty());
}

TEST_CASE("general bound on the worked figures") {
    auto fig1 = general_bound(ConversionParams(6, 5, 13, 12));
    CHECK(fig1.reads == 18); // 12*1 + 2*(5-2)
    CHECK(fig1.writes == 5);
    CHECK(fig1.total == 23);

    auto fig2 = general_bound(ConversionParams(13, 12, 6, 5));
    CHECK(fig2.reads == 40); // 5*1 + 5*(12-5)
    CHECK(fig2.writes == 12);
    CHECK(fig2.total == 52);

    // r_i < r_f: everything must be read.
    CHECK(general_bound(ConversionParams(6, 5, 14, 12)).reads == 60);
    CHECK_THROWS_AS(general_bound(ConversionParams(6, 5, 7, 5)), regime_error);
}

TEST_CASE("general bound reads are non-decreasing in r_f (nontrivial regime)") {
    for (std::size_t ki : {3, 5, 7})
        for (std::size_t kf : {4, 6, 9}) {
            if (ki == kf) continue;
            std::size_t prev = 0;
            for (std::size_t rf = 1; rf < std::min(ki, kf); ++rf) {
                ConversionParams p(ki + 4, ki, kf + rf, kf); // r_i = 4 >= r_f
                if (p.r_i() < rf) break;
                std::size_t reads = general_bound(p).reads;
                CHECK(reads >= prev);
                prev = reads;
            }
        }
}

TEST_CASE("regime specialization of the general bound") {
    // Merge shape: k_f = s*k_i.
    for (auto [ni, ki, nf, kf] : {std::array<std::size_t, 4>{7, 5, 12, 10},
                                  {8, 4, 14, 12},
                                  {6, 5, 12, 10}}) {
        ConversionParams p(ni, ki, nf, kf);
        auto m = merge_bound(p);
        auto g = general_bound(p);
        CHECK(m.total == g.total);
    }
    // Split shape: k_i = s*k_f.
    for (auto [ni, ki, nf, kf] : {std::array<std::size_t, 4>{13, 10, 6, 5},
                                  {14, 12, 5, 4},
                                  {11, 10, 7, 5}}) {
        ConversionParams p(ni, ki, nf, kf);
        auto s = split_bound(p);
        auto g = general_bound(p);
        CHECK(s.total == g.total);
    }
}

TEST_CASE("optimal partitions: structure and intersections") {
    {
        ConversionParams p(6, 5, 13, 12);
        auto opt = optimal_partitions(p);
        auto maxima = opt.intersections.row_maxima();
        std::size_t fives = 0, twos = 0;
        for (std::size_t v : maxima) (v == 5 ? fives : twos) += 1;
        CHECK(fives == 10);
        CHECK(twos == 2);
        for (std::size_t v : maxima) CHECK((v == 5 || v == 2));
    }
    {
        ConversionParams p(13, 12, 6, 5);
        auto opt = optimal_partitions(p);
        for (std::size_t v : opt.intersections.row_maxima()) CHECK(v == 5);
    }
    CHECK_THROWS_AS(optimal_partitions(ConversionParams(6, 5, 7, 5)), regime_error);
}

TEST_CASE("optimizer matches the exhaustive search for M <= 12") {
    for (std::size_t ki = 1; ki <= 6; ++ki)
        for (std::size_t kf = 1; kf <= 6; ++kf) {
            if (ki == kf) continue;
            for (std::size_t ri = 1; ri <= 3; ++ri)
                for (std::size_t rf = 1; rf <= 3; ++rf) {
                    ConversionParams p(ki + ri, ki, kf + rf, kf);
                    if (p.message_len() > 12) continue;
                    auto opt = optimal_partitions(p);
                    std::size_t got = partition_objective(opt.intersections, rf);
                    std::size_t best = brute_force_partition_objective(p);
                    REQUIRE(got == best);
                }
        }
}

TEST_CASE("objective/bound identity") {
    // reads bound = si*k_i - s where s is the maximized objective.
    for (auto [ni, ki, nf, kf] : {std::array<std::size_t, 4>{6, 5, 13, 12},
                                  {13, 12, 6, 5},
                                  {7, 5, 9, 7},
                                  {10, 7, 8, 5}}) {
        ConversionParams p(ni, ki, nf, kf);
        if (p.r_i() < p.r_f() || p.r_f() >= std::min(p.k_i, p.k_f)) continue;
        auto opt = optimal_partitions(p);
        std::size_t s = partition_objective(opt.intersections, p.r_f());
        CHECK(general_bound(p).reads == p.initial_stripes() * p.k_i - s);
    }
}
