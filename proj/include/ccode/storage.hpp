#pragma once

// On-disk stripe layout: node files `s{stripe}_n{node}.dat` next to a
// `manifest.json`. Symbols are single field elements, 1 byte for w <= 8 and
// 2 bytes little-endian otherwise; each node file holds `chunk` symbols.
// All reads go through NodeStore so tests can count symbols actually loaded.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ccode/codes.hpp"
#include "ccode/galois.hpp"

#include <json.hpp>

namespace ccode {

struct storage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Manifest {
    int version = 1;
    std::size_t w = 8;
    std::uint32_t poly = 0;
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t stripes = 0;     // includes zero-padding stripes
    std::size_t payload_len = 0; // original file size in bytes
    std::uint64_t seed = 0;
    std::size_t chunk = 1; // symbols per node file

    GfMatrix generator; // [k x n] systematic generator of the stripe code

    std::size_t bytes_per_symbol() const { return w <= 8 ? 1 : 2; }
    std::size_t data_stripes() const; // stripes actually carrying payload
};

nlohmann::json manifest_to_json(const Manifest& m);
Manifest manifest_from_json(const nlohmann::json& j);
void save_manifest(const Manifest& m, const std::filesystem::path& dir);
Manifest load_manifest(const std::filesystem::path& dir);

std::string node_file_name(std::size_t stripe, std::size_t node);

/// Node-file I/O with a symbol-level read counter.
class NodeStore {
public:
    NodeStore(std::filesystem::path dir, std::size_t bytes_per_symbol)
        : dir_(std::move(dir)), bps_(bytes_per_symbol) {}

    std::filesystem::path path(std::size_t stripe, std::size_t node) const;
    void write_node(std::size_t stripe, std::size_t node, const std::vector<Elem>& syms);
    std::vector<Elem> read_node(std::size_t stripe, std::size_t node,
                                std::size_t expected_symbols);
    bool exists(std::size_t stripe, std::size_t node) const;

    std::size_t symbols_read() const { return symbols_read_; }
    void reset_counter() { symbols_read_ = 0; }

private:
    std::filesystem::path dir_;
    std::size_t bps_;
    std::size_t symbols_read_ = 0;
};

std::vector<Elem> bytes_to_symbols(const std::vector<std::uint8_t>& bytes,
                                   std::size_t bytes_per_symbol);
std::vector<std::uint8_t> symbols_to_bytes(const std::vector<Elem>& syms,
                                           std::size_t bytes_per_symbol);

} // namespace ccode
