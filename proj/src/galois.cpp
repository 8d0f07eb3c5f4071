#include "ccode/galois.hpp"

namespace ccode {
namespace {

// Polynomial multiplication over GF(2), no reduction.
std::uint64_t clmul(std::uint32_t a, std::uint32_t b) {
    std::uint64_t r = 0;
    while (b) {
        if (b & 1) r ^= a;
        a <<= 1;
        b >>= 1;
    }
    return r;
}

int degree(std::uint64_t p) {
    int d = -1;
    while (p) {
        ++d;
        p >>= 1;
    }
    return d;
}

std::uint64_t poly_mod(std::uint64_t a, std::uint64_t m) {
    int dm = degree(m);
    for (int d = degree(a); d >= dm; d = degree(a))
        a ^= m << (d - dm);
    return a;
}

bool is_irreducible(std::uint32_t p, int w) {
    if (degree(p) != w) return false;
    for (std::uint32_t d = 2; d < (1u << (w / 2 + 1)); ++d) {
        if (degree(d) < 1) continue;
        if (poly_mod(p, d) == 0) return false;
    }
    return true;
}

} // namespace

Field::Field(int w, std::uint32_t reduction_poly) : w_(w), poly_(reduction_poly) {
    if (w < 1 || w > 16) throw field_error("field width out of range [1,16]");
    if (!is_irreducible(reduction_poly, w))
        throw field_error("reduction polynomial is not irreducible of degree " +
                          std::to_string(w));
    q_ = 1u << w;

    // Find a multiplicative generator and fill the tables from it.
    log_.assign(q_, 0);
    exp_.assign(2 * (q_ - 1) + 1, 0);
    for (Elem cand = 2; cand < q_ || (q_ == 2 && cand == 2); ++cand) {
        Elem g = (q_ == 2) ? 1 : cand;
        std::uint32_t x = 1, n = 0;
        bool ok = true;
        std::vector<std::uint32_t> lg(q_, 0);
        std::vector<Elem> ex(q_ - 1, 0);
        do {
            ex[n] = static_cast<Elem>(x);
            if (x != 1 && lg[x] != 0) {
                ok = false;
                break;
            }
            lg[x] = n;
            x = static_cast<std::uint32_t>(poly_mod(clmul(static_cast<std::uint32_t>(x), g),
                                                    poly_));
            ++n;
        } while (x != 1 && n < q_);
        if (ok && n == q_ - 1) {
            lg[1] = 0;
            for (std::uint32_t i = 0; i < q_ - 1; ++i) {
                exp_[i] = ex[i];
                exp_[i + (q_ - 1)] = ex[i];
            }
            exp_[2 * (q_ - 1)] = 1;
            log_ = std::move(lg);
            return;
        }
        if (q_ == 2) break;
    }
    throw field_error("no multiplicative generator found (poly not primitive-compatible)");
}

Elem Field::mul_slow(Elem a, Elem b) const {
    return static_cast<Elem>(poly_mod(clmul(a, b), poly_));
}

Elem Field::pow(Elem a, unsigned e) const {
    if (e == 0) return 1;
    if (a == 0) return 0;
    return exp_[(static_cast<std::uint64_t>(log_[a]) * e) % (q_ - 1)];
}

const Field& Field::gf256() {
    static const Field f(8, 0x11D);
    return f;
}

const Field& Field::gf65536() {
    static const Field f(16, 0x1100B);
    return f;
}

GfMatrix GfMatrix::identity(std::size_t n) {
    GfMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

GfMatrix GfMatrix::mul(const GfMatrix& other, const Field& f) const {
    if (cols_ != other.rows_) throw std::invalid_argument("matrix dim mismatch");
    GfMatrix out(rows_, other.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            Elem a = (*this)(i, k);
            if (a == 0) continue;
            for (std::size_t j = 0; j < other.cols_; ++j)
                out(i, j) ^= f.mul(a, other(k, j));
        }
    return out;
}

std::vector<Elem> GfMatrix::mul_vec(std::span<const Elem> v, const Field& f) const {
    if (v.size() != cols_) throw std::invalid_argument("vector dim mismatch");
    std::vector<Elem> out(rows_, 0);
    for (std::size_t i = 0; i < rows_; ++i) {
        Elem acc = 0;
        for (std::size_t j = 0; j < cols_; ++j) acc ^= f.mul((*this)(i, j), v[j]);
        out[i] = acc;
    }
    return out;
}

GfMatrix GfMatrix::submatrix(std::span<const std::size_t> rows,
                             std::span<const std::size_t> cols) const {
    GfMatrix out(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j)
            out(i, j) = (*this)(rows[i], cols[j]);
    return out;
}

GfMatrix GfMatrix::columns(std::span<const std::size_t> cols) const {
    GfMatrix out(rows_, cols.size());
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = (*this)(i, cols[j]);
    return out;
}

GfMatrix GfMatrix::transposed() const {
    GfMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
}

std::size_t rank(const GfMatrix& m, const Field& f) {
    GfMatrix a = m;
    std::size_t r = 0;
    for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
        std::size_t pivot = r;
        while (pivot < a.rows() && a(pivot, c) == 0) ++pivot;
        if (pivot == a.rows()) continue;
        if (pivot != r)
            for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(r, j), a(pivot, j));
        Elem pinv = f.inv(a(r, c));
        for (std::size_t i = r + 1; i < a.rows(); ++i) {
            Elem factor = f.mul(a(i, c), pinv);
            if (factor == 0) continue;
            for (std::size_t j = c; j < a.cols(); ++j)
                a(i, j) ^= f.mul(factor, a(r, j));
        }
        ++r;
    }
    return r;
}

GfMatrix solve(const GfMatrix& a, const GfMatrix& b, const Field& f) {
    if (a.rows() != a.cols()) throw singular_matrix_error("solve: matrix not square");
    if (a.rows() != b.rows()) throw std::invalid_argument("solve: rhs dim mismatch");
    const std::size_t n = a.rows();
    GfMatrix m = a;
    GfMatrix x = b;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t pivot = c;
        while (pivot < n && m(pivot, c) == 0) ++pivot;
        if (pivot == n) throw singular_matrix_error("solve: singular matrix");
        if (pivot != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(c, j), m(pivot, j));
            for (std::size_t j = 0; j < x.cols(); ++j) std::swap(x(c, j), x(pivot, j));
        }
        Elem pinv = f.inv(m(c, c));
        for (std::size_t j = 0; j < n; ++j) m(c, j) = f.mul(m(c, j), pinv);
        for (std::size_t j = 0; j < x.cols(); ++j) x(c, j) = f.mul(x(c, j), pinv);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c) continue;
            Elem factor = m(i, c);
            if (factor == 0) continue;
            for (std::size_t j = 0; j < n; ++j) m(i, j) ^= f.mul(factor, m(c, j));
            for (std::size_t j = 0; j < x.cols(); ++j) x(i, j) ^= f.mul(factor, x(c, j));
        }
    }
    return x;
}

bool is_nonsingular(const GfMatrix& a, const Field& f) {
    return a.rows() == a.cols() && rank(a, f) == a.rows();
}

} // namespace ccode
