#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ccode/galois.hpp"

namespace ccode {

struct parameter_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct construction_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct work_budget_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Systematic [n,k] MDS code: generator = [I | P], P the k x (n-k) parity
/// block. The code is MDS iff every square submatrix of P is nonsingular.
struct MdsCode {
    std::size_t n = 0;
    std::size_t k = 0;
    GfMatrix generator; // k x n, first k columns identity

    std::size_t r() const { return n - k; }
    GfMatrix parity() const; // k x r block

    /// Codeword for a length-k message.
    std::vector<Elem> encode(std::span<const Elem> message, const Field& f) const;

    /// Recover the message from any k coordinates. `positions` must be
    /// distinct; throws singular_matrix_error when they do not decode
    /// (i.e. when the code is not MDS on that subset).
    std::vector<Elem> decode(std::span<const std::size_t> positions,
                             std::span<const Elem> values, const Field& f) const;
};

/// Systematic MDS code from a seeded Cauchy parity block. Requires n <= q.
MdsCode make_systematic_mds(std::size_t n, std::size_t k, const Field& f,
                            std::uint64_t seed);

/// Exhaustive minor check on the parity block. `budget` caps the number of
/// minors evaluated; throws work_budget_error beyond it.
bool is_mds(const MdsCode& c, const Field& f, std::uint64_t budget = (1ull << 22));

/// s-shortening at systematic coordinates: drop those message rows and
/// columns. Keeps n-k, preserves MDS.
MdsCode shorten(const MdsCode& c, std::span<const std::size_t> positions);

/// s-lengthening: [n,k] -> [n+s,k+s] MDS code (new systematic coordinates
/// appended after the existing ones) whose shortening on the new positions
/// recovers the input. Seeded randomized search with MDS validation.
MdsCode lengthen(const MdsCode& c, std::size_t s, const Field& f,
                 std::uint64_t seed, std::size_t budget = 2000);

/// Visit all size-k combinations of [n]; callback returns false to stop.
void for_each_combination(std::size_t n, std::size_t k,
                          const std::function<bool(std::span<const std::size_t>)>& cb);

std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

} // namespace ccode
