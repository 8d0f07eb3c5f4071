#include <doctest.h>

#include <random>

#include "ccode/galois.hpp"

using namespace ccode;

TEST_CASE("gf256 basic products") {
    const Field& f = Field::gf256();
    CHECK(f.mul(2, 3) == 6);
    CHECK(f.mul(0x80, 2) == 0x1D);
    for (int a = 0; a < 256; ++a) CHECK(f.mul(static_cast<Elem>(a), 0) == 0);
}

TEST_CASE("inverse properties") {
    const Field& f = Field::gf256();
    CHECK(f.inv(1) == 1);
    CHECK(f.mul(2, f.inv(2)) == 1);
    CHECK_THROWS_AS(f.inv(0), field_error);
}

TEST_CASE("exhaustive inverses for w <= 8") {
    // One irreducible polynomial per width.
    const std::uint32_t polys[] = {0x3, 0x7, 0xB, 0x13, 0x25, 0x43, 0x89, 0x11D};
    for (int w = 1; w <= 8; ++w) {
        Field f(w, polys[w - 1]);
        for (std::uint32_t a = 1; a < f.order(); ++a)
            REQUIRE(f.mul(static_cast<Elem>(a), f.inv(static_cast<Elem>(a))) == 1);
    }
}

TEST_CASE("reducible polynomial rejected") {
    // x^4 + x^2 + 1 = (x^2 + x + 1)^2
    CHECK_THROWS_AS(Field(4, 0x15), field_error);
    CHECK_THROWS_AS(Field(0, 0x3), field_error);
    CHECK_THROWS_AS(Field(17, 0x3), field_error);
}

TEST_CASE("field axioms on random triples") {
    for (const Field* fp : {&Field::gf256(), &Field::gf65536()}) {
        const Field& f = *fp;
        std::mt19937_64 rng(42);
        for (int i = 0; i < 1000; ++i) {
            Elem a = static_cast<Elem>(rng() % f.order());
            Elem b = static_cast<Elem>(rng() % f.order());
            Elem c = static_cast<Elem>(rng() % f.order());
            CHECK(f.add(f.add(a, b), c) == f.add(a, f.add(b, c)));
            CHECK(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
            CHECK(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
            CHECK(f.add(a, a) == 0); // characteristic 2
            CHECK(f.mul(a, b) == f.mul(b, a));
        }
    }
}

TEST_CASE("rank") {
    const Field& f = Field::gf256();
    CHECK(rank(GfMatrix::identity(5), f) == 5);
    CHECK(rank(GfMatrix(3, 4), f) == 0);

    GfMatrix m(3, 5);
    std::mt19937_64 rng(7);
    for (std::size_t j = 0; j < 5; ++j) {
        m(0, j) = static_cast<Elem>(rng() % 256);
        m(1, j) = static_cast<Elem>(1 + rng() % 255);
        m(2, j) = m(0, j) ^ m(1, j); // third row = XOR of the first two
    }
    CHECK(rank(m, f) == 2);
}

TEST_CASE("solve round trips") {
    const Field& f = Field::gf256();
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        GfMatrix a(4, 4);
        do {
            for (auto& e : a.entries()) e = static_cast<Elem>(rng() % 256);
        } while (!is_nonsingular(a, f));
        GfMatrix x(4, 2);
        for (auto& e : x.entries()) e = static_cast<Elem>(rng() % 256);
        GfMatrix b = a.mul(x, f);
        CHECK(solve(a, b, f) == x);
    }
    GfMatrix id = GfMatrix::identity(3);
    GfMatrix b(3, 1);
    b(1, 0) = 9;
    CHECK(solve(id, b, f) == b);

    GfMatrix singular(2, 2);
    singular(0, 0) = singular(1, 0) = 1; // equal rows
    singular(0, 1) = singular(1, 1) = 5;
    CHECK_THROWS_AS(solve(singular, GfMatrix(2, 1), f), singular_matrix_error);
}
