#include "ccode/storage.hpp"

#include <fstream>

namespace ccode {

namespace fs = std::filesystem;

std::size_t Manifest::data_stripes() const {
    std::size_t bytes_per_stripe = k * chunk * bytes_per_symbol();
    return bytes_per_stripe == 0
               ? 0
               : (payload_len + bytes_per_stripe - 1) / bytes_per_stripe;
}

nlohmann::json manifest_to_json(const Manifest& m) {
    nlohmann::json gen = nlohmann::json::array();
    for (std::size_t i = 0; i < m.generator.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < m.generator.cols(); ++j) row.push_back(m.generator(i, j));
        gen.push_back(std::move(row));
    }
    return {{"version", m.version},
            {"field", {{"w", m.w}, {"poly", m.poly}}},
            {"n", m.n},
            {"k", m.k},
            {"stripes", m.stripes},
            {"payload_len", m.payload_len},
            {"seed", m.seed},
            {"chunk", m.chunk},
            {"generator", std::move(gen)}};
}

Manifest manifest_from_json(const nlohmann::json& j) {
    Manifest m;
    m.version = j.at("version").get<int>();
    m.w = j.at("field").at("w").get<std::size_t>();
    m.poly = j.at("field").at("poly").get<std::uint32_t>();
    m.n = j.at("n").get<std::size_t>();
    m.k = j.at("k").get<std::size_t>();
    m.stripes = j.at("stripes").get<std::size_t>();
    m.payload_len = j.at("payload_len").get<std::size_t>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.chunk = j.value("chunk", std::size_t{1});
    const auto& gen = j.at("generator");
    m.generator = GfMatrix(m.k, m.n);
    if (gen.size() != m.k) throw storage_error("manifest generator has wrong row count");
    for (std::size_t i = 0; i < m.k; ++i) {
        if (gen[i].size() != m.n)
            throw storage_error("manifest generator has wrong column count");
        for (std::size_t c = 0; c < m.n; ++c) m.generator(i, c) = gen[i][c].get<Elem>();
    }
    return m;
}

void save_manifest(const Manifest& m, const fs::path& dir) {
    std::ofstream out(dir / "manifest.json");
    if (!out) throw storage_error("cannot write manifest in " + dir.string());
    out << manifest_to_json(m).dump(2) << '\n';
}

Manifest load_manifest(const fs::path& dir) {
    std::ifstream in(dir / "manifest.json");
    if (!in) throw storage_error("no manifest.json in " + dir.string());
    nlohmann::json j;
    in >> j;
    return manifest_from_json(j);
}

std::string node_file_name(std::size_t stripe, std::size_t node) {
    return "s" + std::to_string(stripe) + "_n" + std::to_string(node) + ".dat";
}

fs::path NodeStore::path(std::size_t stripe, std::size_t node) const {
    return dir_ / node_file_name(stripe, node);
}

void NodeStore::write_node(std::size_t stripe, std::size_t node,
                           const std::vector<Elem>& syms) {
    auto bytes = symbols_to_bytes(syms, bps_);
    std::ofstream out(path(stripe, node), std::ios::binary);
    if (!out) throw storage_error("cannot write " + path(stripe, node).string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

std::vector<Elem> NodeStore::read_node(std::size_t stripe, std::size_t node,
                                       std::size_t expected_symbols) {
    std::ifstream in(path(stripe, node), std::ios::binary);
    if (!in) throw storage_error("missing node file " + path(stripe, node).string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (bytes.size() != expected_symbols * bps_)
        throw storage_error("node file " + path(stripe, node).string() +
                            " has unexpected length");
    symbols_read_ += expected_symbols;
    return bytes_to_symbols(bytes, bps_);
}

bool NodeStore::exists(std::size_t stripe, std::size_t node) const {
    return fs::exists(path(stripe, node));
}

std::vector<Elem> bytes_to_symbols(const std::vector<std::uint8_t>& bytes,
                                   std::size_t bytes_per_symbol) {
    if (bytes.size() % bytes_per_symbol != 0)
        throw storage_error("byte stream not a whole number of symbols");
    std::vector<Elem> syms(bytes.size() / bytes_per_symbol);
    for (std::size_t i = 0; i < syms.size(); ++i) {
        syms[i] = bytes[i * bytes_per_symbol];
        if (bytes_per_symbol == 2)
            syms[i] = static_cast<Elem>(syms[i] | (bytes[i * 2 + 1] << 8));
    }
    return syms;
}

std::vector<std::uint8_t> symbols_to_bytes(const std::vector<Elem>& syms,
                                           std::size_t bytes_per_symbol) {
    std::vector<std::uint8_t> bytes(syms.size() * bytes_per_symbol);
    for (std::size_t i = 0; i < syms.size(); ++i) {
        bytes[i * bytes_per_symbol] = static_cast<std::uint8_t>(syms[i] & 0xFF);
        if (bytes_per_symbol == 2)
            bytes[i * 2 + 1] = static_cast<std::uint8_t>(syms[i] >> 8);
    }
    return bytes;
}

} // namespace ccode
