#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "ccode/codes.hpp"
#include "ccode/storage.hpp"

using namespace ccode;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("ccode_test_" + std::to_string(static_cast<unsigned>(std::rand())));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("manifest JSON round trip") {
    const Field& f = Field::gf65536();
    Manifest m;
    m.w = 16;
    m.poly = f.poly();
    m.n = 6;
    m.k = 5;
    m.stripes = 3;
    m.payload_len = 12345;
    m.seed = 42;
    m.chunk = 64;
    m.generator = make_systematic_mds(6, 5, f, 42).generator;

    auto j = manifest_to_json(m);
    Manifest back = manifest_from_json(j);
    CHECK(back.w == m.w);
    CHECK(back.poly == m.poly);
    CHECK(back.n == m.n);
    CHECK(back.k == m.k);
    CHECK(back.stripes == m.stripes);
    CHECK(back.payload_len == m.payload_len);
    CHECK(back.seed == m.seed);
    CHECK(back.chunk == m.chunk);
    CHECK(back.bytes_per_symbol() == 2);
    CHECK(back.generator.entries() == m.generator.entries());

    TempDir tmp;
    save_manifest(m, tmp.path);
    Manifest loaded = load_manifest(tmp.path);
    CHECK(loaded.generator.entries() == m.generator.entries());
    CHECK_THROWS_AS(load_manifest(tmp.path / "missing"), storage_error);
}

TEST_CASE("node store counts symbols and validates lengths") {
    TempDir tmp;
    NodeStore store(tmp.path, 1);
    std::vector<Elem> syms{1, 2, 3, 250};
    store.write_node(0, 2, syms);
    CHECK(store.exists(0, 2));
    CHECK(!store.exists(1, 2));

    CHECK(store.symbols_read() == 0);
    CHECK(store.read_node(0, 2, 4) == syms);
    CHECK(store.read_node(0, 2, 4) == syms);
    CHECK(store.symbols_read() == 8);
    store.reset_counter();
    CHECK(store.symbols_read() == 0);

    CHECK_THROWS_AS(store.read_node(0, 2, 5), storage_error);
    CHECK_THROWS_AS(store.read_node(3, 3, 4), storage_error);
}

TEST_CASE("wide symbols survive the byte codec") {
    std::vector<Elem> syms{0, 1, 0x1234, 0xFFFF, 0x00FF, 0xFF00};
    auto bytes = symbols_to_bytes(syms, 2);
    CHECK(bytes.size() == 12);
    CHECK(bytes[4] == 0x34); // little-endian
    CHECK(bytes[5] == 0x12);
    CHECK(bytes_to_symbols(bytes, 2) == syms);

    std::vector<Elem> narrow{7, 0, 255};
    CHECK(bytes_to_symbols(symbols_to_bytes(narrow, 1), 1) == narrow);

    std::vector<std::uint8_t> odd{1, 2, 3};
    CHECK_THROWS_AS(bytes_to_symbols(odd, 2), storage_error);
}

TEST_CASE("node file names are stable") {
    CHECK(node_file_name(0, 0) == "s0_n0.dat");
    CHECK(node_file_name(12, 3) == "s12_n3.dat");
}
