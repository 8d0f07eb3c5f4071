// Compares the serial and OpenMP payload kernels on a synthetic conversion.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "ccode/conversions.hpp"
#include "ccode/payload.hpp"

using namespace ccode;

namespace {

double run(const ConversionPlan& plan, const StripePayloads& initial, const Field& f,
           bool parallel, std::size_t reps, StripePayloads& out) {
    auto t0 = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < reps; ++i)
        out = parallel ? apply_plan_parallel(plan, initial, f)
                       : apply_plan_serial(plan, initial, f);
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count() / static_cast<double>(reps);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial vs parallel payload-kernel benchmark"};
    std::size_t ni = 6, ki = 5, nf = 13, kf = 12, chunk = 1 << 20, reps = 5;
    std::uint64_t seed = 1;
    app.add_option("--ni", ni);
    app.add_option("--ki", ki);
    app.add_option("--nf", nf);
    app.add_option("--kf", kf);
    app.add_option("--chunk", chunk, "symbols per node");
    app.add_option("--reps", reps);
    app.add_option("--seed", seed);
    CLI11_PARSE(app, argc, argv);

    ConversionParams params(ni, ki, nf, kf);
    auto design = design_conversion(params, Field::gf256(), seed);
    auto planned = plan_general(design);
    const Field& f = *design.spec.field;

    std::mt19937_64 rng(seed);
    StripePayloads initial(planned.plan.initial_stripe_sizes.size());
    for (std::size_t s = 0; s < initial.size(); ++s) {
        initial[s].resize(planned.plan.initial_stripe_sizes[s]);
        for (auto& node : initial[s]) {
            node.resize(chunk);
            for (auto& e : node) e = static_cast<Elem>(rng() % f.order());
        }
    }

    StripePayloads serial_out, parallel_out;
    double ts = run(planned.plan, initial, f, false, reps, serial_out);
    double tp = run(planned.plan, initial, f, true, reps, parallel_out);
    bool match = serial_out == parallel_out;

    std::cout << "plan: (" << ni << "," << ki << ") -> (" << nf << "," << kf
              << "), chunk=" << chunk << ", new nodes="
              << planned.plan.new_nodes.size() << "\n"
              << "serial:   " << ts * 1e3 << " ms/rep\n"
              << "parallel: " << tp * 1e3 << " ms/rep  (speedup " << ts / tp << "x)\n"
              << "outputs " << (match ? "match" : "DIFFER") << '\n';
    return match ? 0 : 1;
}
