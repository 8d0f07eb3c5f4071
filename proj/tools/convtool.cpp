// Stripe encode / convert / decode / verify front end.
//
// Exit codes: 0 success, 1 verification failure, 2 parameter error,
// 3 construction-search failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ccode/bounds.hpp"
#include "ccode/codes.hpp"
#include "ccode/conversions.hpp"
#include "ccode/framework.hpp"
#include "ccode/galois.hpp"
#include "ccode/oracle.hpp"
#include "ccode/payload.hpp"
#include "ccode/storage.hpp"

namespace fs = std::filesystem;
using namespace ccode;

namespace {

Field make_field(std::size_t bits) {
    if (bits == 8) return Field::gf256();
    if (bits == 16) return Field::gf65536();
    throw parameter_error("--field-bits must be 8 or 16");
}

std::vector<std::uint8_t> read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw storage_error("cannot read " + p.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path& p, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw storage_error("cannot write " + p.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

void write_json(const fs::path& p, const nlohmann::json& j) {
    std::ofstream out(p);
    if (!out) throw storage_error("cannot write " + p.string());
    out << j.dump(2) << '\n';
}

std::vector<Elem> parity_column(const GfMatrix& gen, std::size_t col,
                                const std::vector<std::vector<Elem>>& data,
                                std::size_t chunk, const Field& f) {
    std::vector<Elem> out(chunk, 0);
    for (std::size_t l = 0; l < data.size(); ++l) {
        Elem c = gen(l, col);
        if (!c) continue;
        for (std::size_t t = 0; t < chunk; ++t) out[t] ^= f.mul(c, data[l][t]);
    }
    return out;
}

int cmd_encode(const fs::path& input, const fs::path& out_dir, std::size_t n,
               std::size_t k, std::size_t field_bits, std::uint64_t seed,
               std::size_t chunk) {
    Field field = make_field(field_bits);
    MdsCode code = make_systematic_mds(n, k, field, seed);

    Manifest m;
    m.w = field.width();
    m.poly = field.poly();
    m.n = n;
    m.k = k;
    m.seed = seed;
    m.chunk = chunk;
    m.generator = code.generator;

    auto bytes = read_file(input);
    m.payload_len = bytes.size();
    const std::size_t bps = m.bytes_per_symbol();
    const std::size_t stripe_bytes = k * chunk * bps;
    m.stripes = bytes.empty() ? 0 : (bytes.size() + stripe_bytes - 1) / stripe_bytes;
    bytes.resize(m.stripes * stripe_bytes, 0);
    auto syms = bytes_to_symbols(bytes, bps);

    fs::create_directories(out_dir);
    NodeStore store(out_dir, bps);
    for (std::size_t s = 0; s < m.stripes; ++s) {
        std::vector<std::vector<Elem>> data(k);
        for (std::size_t l = 0; l < k; ++l) {
            auto begin = syms.begin() + static_cast<std::ptrdiff_t>((s * k + l) * chunk);
            data[l].assign(begin, begin + static_cast<std::ptrdiff_t>(chunk));
            store.write_node(s, l, data[l]);
        }
        for (std::size_t t = k; t < n; ++t)
            store.write_node(s, t, parity_column(code.generator, t, data, chunk, field));
    }
    save_manifest(m, out_dir);
    return 0;
}

int cmd_decode(const fs::path& dir, const fs::path& output) {
    Manifest m = load_manifest(dir);
    NodeStore store(dir, m.bytes_per_symbol());
    // Optional stripe-local data layout written by convert; identity when
    // absent. layout[j % groups][u] is the batch-relative position of node u.
    std::vector<std::vector<std::size_t>> layout;
    {
        std::ifstream in(dir / "manifest.json");
        nlohmann::json j;
        in >> j;
        if (j.contains("layout"))
            layout = j["layout"].get<std::vector<std::vector<std::size_t>>>();
    }
    const std::size_t groups = layout.empty() ? 1 : layout.size();
    const std::size_t batch_positions = layout.empty() ? m.k : groups * m.k;

    std::vector<Elem> syms(m.stripes * m.k * m.chunk, 0);
    for (std::size_t s = 0; s < m.stripes; ++s)
        for (std::size_t u = 0; u < m.k; ++u) {
            auto node = store.read_node(s, u, m.chunk);
            std::size_t pos = layout.empty()
                                  ? s * m.k + u
                                  : (s / groups) * batch_positions + layout[s % groups][u];
            std::copy(node.begin(), node.end(),
                      syms.begin() + static_cast<std::ptrdiff_t>(pos * m.chunk));
        }
    auto bytes = symbols_to_bytes(syms, m.bytes_per_symbol());
    bytes.resize(m.payload_len);
    write_file(output, bytes);
    return 0;
}

int cmd_verify(const fs::path& dir) {
    Manifest m = load_manifest(dir);
    Field field(static_cast<int>(m.w), m.poly);
    NodeStore store(dir, m.bytes_per_symbol());
    MdsCode code{m.n, m.k, m.generator};
    if (!is_mds(code, field)) {
        std::cerr << "manifest generator is not MDS\n";
        return 1;
    }
    for (std::size_t s = 0; s < m.stripes; ++s) {
        std::vector<std::vector<Elem>> data(m.k);
        for (std::size_t l = 0; l < m.k; ++l) data[l] = store.read_node(s, l, m.chunk);
        for (std::size_t t = m.k; t < m.n; ++t) {
            auto want = parity_column(m.generator, t, data, m.chunk, field);
            if (store.read_node(s, t, m.chunk) != want) {
                std::cerr << "corrupt node: stripe " << s << ", node " << t << " ("
                          << node_file_name(s, t) << ")\n";
                return 1;
            }
        }
    }
    std::cout << "ok: " << m.stripes << " stripes verified\n";
    return 0;
}

int cmd_convert(const fs::path& dir, const fs::path& out_dir, std::size_t n_f,
                std::size_t k_f, const fs::path& plan_out, const fs::path& report_out,
                bool allow_default) {
    Manifest m = load_manifest(dir);
    Field field(static_cast<int>(m.w), m.poly);
    ConversionParams params(m.n, m.k, n_f, k_f);
    MdsCode initial{m.n, m.k, m.generator};

    std::optional<ConversionDesign> design;
    GeneralPlanResult planned;
    try {
        design = design_conversion(params, field, m.seed, &initial);
        planned = plan_general(*design);
    } catch (const construction_error& e) {
        if (!allow_default) {
            std::cerr << "construction search failed: " << e.what() << '\n';
            return 3;
        }
        design = ConversionDesign{
            ConvertibleCodeSpec{params, contiguous_partitions(params), initial,
                                make_systematic_mds(n_f, k_f, field, m.seed + 1), &field},
            GfMatrix{}};
        planned.tree.regime = "default";
        planned.plan = default_plan(design->spec);
    }
    const ConvertibleCodeSpec& spec = design->spec;
    const ConversionPlan& plan = planned.plan;
    AccessAudit audit = audit_access(spec, plan);

    // Pad the source to a whole number of conversion batches with zero
    // stripes, so every batch is uniform (and instrumented reads stay in
    // lockstep with the plan).
    const std::size_t si = params.initial_stripes(), sf = params.final_stripes();
    const std::size_t batches = m.stripes == 0 ? 0 : (m.stripes + si - 1) / si;
    NodeStore in_store(dir, m.bytes_per_symbol());
    for (std::size_t s = m.stripes; s < batches * si; ++s)
        for (std::size_t j = 0; j < m.n; ++j)
            in_store.write_node(s, j, std::vector<Elem>(m.chunk, 0));
    if (m.stripes != batches * si) {
        Manifest padded = m;
        padded.stripes = batches * si;
        save_manifest(padded, dir);
    }

    fs::create_directories(out_dir);
    NodeStore out_store(out_dir, m.bytes_per_symbol());
    in_store.reset_counter();
    for (std::size_t b = 0; b < batches; ++b) {
        StripePayloads batch(si);
        for (std::size_t s = 0; s < si; ++s)
            batch[s].resize(m.n); // only read-set nodes get loaded
        for (const auto& r : plan.read_set)
            batch[r.stripe][r.node] = in_store.read_node(b * si + r.stripe, r.node, m.chunk);

        for (const auto& nn : plan.new_nodes) {
            std::vector<Elem> acc(m.chunk, 0);
            for (std::size_t i = 0; i < plan.read_set.size(); ++i) {
                const Elem c = nn.coeffs[i];
                if (!c) continue;
                const auto& src = batch[plan.read_set[i].stripe][plan.read_set[i].node];
                for (std::size_t t = 0; t < m.chunk; ++t) acc[t] ^= field.mul(c, src[t]);
            }
            out_store.write_node(b * sf + nn.at.stripe, nn.at.node, acc);
        }
        for (const auto& u : plan.unchanged)
            fs::copy_file(in_store.path(b * si + u.from.stripe, u.from.node),
                          out_store.path(b * sf + u.to.stripe, u.to.node),
                          fs::copy_options::overwrite_existing);
    }
    const std::size_t measured = in_store.symbols_read();
    const std::size_t expected = batches * audit.report.reads * m.chunk;
    if (measured != expected)
        throw plan_inconsistency_error("instrumented reads diverge from the plan");

    Manifest out_m = m;
    out_m.n = n_f;
    out_m.k = k_f;
    out_m.stripes = batches * sf;
    out_m.generator = spec.final_code.generator;
    nlohmann::json mj = manifest_to_json(out_m);
    mj["layout"] = spec.partitions.final_sets;
    write_json(out_dir / "manifest.json", mj);

    nlohmann::json pj = plan_to_json(plan);
    pj["tree"] = tree_to_json(planned.tree);
    if (!plan_out.empty()) write_json(plan_out, pj);

    nlohmann::json rj = report_to_json(audit.report);
    rj["read_set"] = pj["read_set"];
    rj["new_nodes"] = pj["new_nodes"];
    rj["unchanged_map"] = pj["unchanged_map"];
    rj["batches"] = batches;
    rj["measured_symbol_reads"] = measured;
    rj["symbols_per_node"] = m.chunk;
    if (!report_out.empty()) write_json(report_out, rj);

    std::cout << "converted " << batches << " batch(es): reads=" << audit.report.reads
              << " writes=" << audit.report.writes << " bound=" << audit.report.bound
              << (audit.report.optimal ? " (access-optimal)" : "") << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"linear MDS convertible-code stripe tool"};
    app.require_subcommand(1);

    std::string input, dir, out, plan_out, report_out;
    std::size_t ni = 0, ki = 0, nf = 0, kf = 0, field_bits = 8, chunk = 1;
    std::uint64_t seed = 1;
    bool allow_default = false;

    auto* enc = app.add_subcommand("encode", "encode a file into stripe node files");
    enc->add_option("--input", input)->required();
    enc->add_option("--out", out)->required();
    enc->add_option("--ni", ni, "code length n")->required();
    enc->add_option("--ki", ki, "code dimension k")->required();
    enc->add_option("--field-bits", field_bits);
    enc->add_option("--seed", seed);
    enc->add_option("--chunk", chunk, "symbols per node file");

    auto* conv = app.add_subcommand("convert", "convert stripes to new parameters");
    conv->add_option("--dir", dir)->required();
    conv->add_option("--out", out)->required();
    conv->add_option("--nf", nf)->required();
    conv->add_option("--kf", kf)->required();
    conv->add_option("--plan-out", plan_out);
    conv->add_option("--report-out", report_out);
    conv->add_flag("--allow-default", allow_default,
                   "fall back to the default approach if construction fails");

    auto* dec = app.add_subcommand("decode", "reassemble the original file");
    dec->add_option("--dir", dir)->required();
    dec->add_option("--out", out)->required();

    auto* ver = app.add_subcommand("verify", "recompute and check all parities");
    ver->add_option("--dir", dir)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (enc->parsed()) return cmd_encode(input, out, ni, ki, field_bits, seed, chunk);
        if (conv->parsed())
            return cmd_convert(dir, out, nf, kf, plan_out, report_out, allow_default);
        if (dec->parsed()) return cmd_decode(dir, out);
        if (ver->parsed()) return cmd_verify(dir);
    } catch (const construction_error& e) {
        std::cerr << "construction failure: " << e.what() << '\n';
        return 3;
    } catch (const storage_error& e) {
        std::cerr << "storage error: " << e.what() << '\n';
        return 1;
    } catch (const payload_corruption_error& e) {
        std::cerr << "corruption: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
