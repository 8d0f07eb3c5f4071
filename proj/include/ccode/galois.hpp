#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ccode {

using Elem = std::uint16_t;

struct field_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct singular_matrix_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// GF(2^w), 1 <= w <= 16. Multiplication goes through log/antilog tables
/// built at construction; the reduction polynomial is checked for
/// irreducibility (exhaustive divisor check, cheap for w <= 16).
class Field {
public:
    Field(int w, std::uint32_t reduction_poly);

    static const Field& gf256();   // w=8,  poly 0x11D
    static const Field& gf65536(); // w=16, poly 0x1100B

    int width() const { return w_; }
    std::uint32_t poly() const { return poly_; }
    std::uint32_t order() const { return q_; }

    Elem add(Elem a, Elem b) const { return a ^ b; }
    Elem mul(Elem a, Elem b) const {
        if (a == 0 || b == 0) return 0;
        return exp_[log_[a] + log_[b]];
    }
    Elem inv(Elem a) const {
        if (a == 0) throw field_error("inverse of zero");
        return exp_[(q_ - 1) - log_[a]];
    }
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
    Elem pow(Elem a, unsigned e) const;

    std::uint32_t log(Elem a) const { return log_[a]; }
    Elem exp_at(std::uint32_t i) const { return exp_[i % (q_ - 1)]; }

    bool operator==(const Field& o) const { return w_ == o.w_ && poly_ == o.poly_; }

private:
    Elem mul_slow(Elem a, Elem b) const;

    int w_;
    std::uint32_t poly_;
    std::uint32_t q_;
    std::vector<Elem> exp_;          // length 2(q-1), doubled to skip the mod
    std::vector<std::uint32_t> log_; // length q, log_[0] unused
};

/// Dense row-major matrix over GF(2^w). Immutable in spirit: operations
/// return new matrices.
class GfMatrix {
public:
    GfMatrix() : rows_(0), cols_(0) {}
    GfMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols, 0) {}

    static GfMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Elem operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
    Elem& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }

    std::span<const Elem> row(std::size_t r) const {
        return {entries_.data() + r * cols_, cols_};
    }

    GfMatrix mul(const GfMatrix& other, const Field& f) const;
    std::vector<Elem> mul_vec(std::span<const Elem> v, const Field& f) const; // this * v
    GfMatrix submatrix(std::span<const std::size_t> rows,
                       std::span<const std::size_t> cols) const;
    GfMatrix columns(std::span<const std::size_t> cols) const;
    GfMatrix transposed() const;

    bool operator==(const GfMatrix& o) const = default;

    const std::vector<Elem>& entries() const { return entries_; }
    std::vector<Elem>& entries() { return entries_; }

private:
    std::size_t rows_, cols_;
    std::vector<Elem> entries_;
};

/// Row rank via Gaussian elimination. Pivot = first nonzero entry in column
/// order, lowest row index first.
std::size_t rank(const GfMatrix& m, const Field& f);

/// Solve a * x = b for square nonsingular a. Throws singular_matrix_error.
GfMatrix solve(const GfMatrix& a, const GfMatrix& b, const Field& f);

bool is_nonsingular(const GfMatrix& a, const Field& f);

} // namespace ccode
