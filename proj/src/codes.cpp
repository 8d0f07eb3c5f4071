#include "ccode/codes.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace ccode {

GfMatrix MdsCode::parity() const {
    GfMatrix p(k, n - k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < n - k; ++j) p(i, j) = generator(i, k + j);
    return p;
}

std::vector<Elem> MdsCode::encode(std::span<const Elem> message, const Field& f) const {
    if (message.size() != k) throw parameter_error("encode: message length != k");
    std::vector<Elem> out(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
        Elem acc = 0;
        for (std::size_t i = 0; i < k; ++i) acc ^= f.mul(generator(i, j), message[i]);
        out[j] = acc;
    }
    return out;
}

std::vector<Elem> MdsCode::decode(std::span<const std::size_t> positions,
                                  std::span<const Elem> values, const Field& f) const {
    if (positions.size() != k || values.size() != k)
        throw parameter_error("decode: need exactly k coordinates");
    // Solve G_S^T m = c_S.
    GfMatrix gs = generator.columns(positions).transposed();
    GfMatrix rhs(k, 1);
    for (std::size_t i = 0; i < k; ++i) rhs(i, 0) = values[i];
    GfMatrix m = solve(gs, rhs, f);
    std::vector<Elem> out(k);
    for (std::size_t i = 0; i < k; ++i) out[i] = m(i, 0);
    return out;
}

namespace {

std::vector<Elem> seeded_element_permutation(const Field& f, std::uint64_t seed) {
    std::vector<Elem> all(f.order());
    std::iota(all.begin(), all.end(), 0);
    std::mt19937_64 rng(seed);
    for (std::size_t i = all.size() - 1; i > 0; --i)
        std::swap(all[i], all[rng() % (i + 1)]);
    return all;
}

} // namespace

MdsCode make_systematic_mds(std::size_t n, std::size_t k, const Field& f,
                            std::uint64_t seed) {
    if (k < 1 || n <= k) throw parameter_error("need 1 <= k < n");
    if (n > f.order()) throw parameter_error("Cauchy construction needs n <= q");
    const std::size_t r = n - k;
    // Two disjoint sequences of distinct elements drawn from a seeded
    // permutation of the field.
    std::vector<Elem> elems = seeded_element_permutation(f, seed);
    if (elems.size() < k + r) throw construction_error("field too small for distinct sequences");

    MdsCode c;
    c.n = n;
    c.k = k;
    c.generator = GfMatrix(k, n);
    for (std::size_t i = 0; i < k; ++i) c.generator(i, i) = 1;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < r; ++j)
            c.generator(i, k + j) = f.inv(f.add(elems[i], elems[k + j]));
    return c;
}

void for_each_combination(std::size_t n, std::size_t k,
                          const std::function<bool(std::span<const std::size_t>)>& cb) {
    if (k > n) return;
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        if (!cb(idx)) return;
        // Advance to the next combination.
        std::size_t i = k;
        while (i > 0) {
            --i;
            if (idx[i] != i + n - k) break;
            if (i == 0) return;
        }
        if (idx[i] == i + n - k) return;
        ++idx[i];
        for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

bool is_mds(const MdsCode& c, const Field& f, std::uint64_t budget) {
    const std::size_t k = c.k, r = c.r();
    std::uint64_t work = 0;
    for (std::size_t d = 1; d <= std::min(k, r); ++d)
        work += binomial(k, d) * binomial(r, d);
    if (work > budget) throw work_budget_error("is_mds: minor count exceeds budget");

    GfMatrix p = c.parity();
    bool ok = true;
    for (std::size_t d = 1; d <= std::min(k, r) && ok; ++d) {
        for_each_combination(k, d, [&](std::span<const std::size_t> rows) {
            for_each_combination(r, d, [&](std::span<const std::size_t> cols) {
                if (!is_nonsingular(p.submatrix(rows, cols), f)) {
                    ok = false;
                    return false;
                }
                return true;
            });
            return ok;
        });
    }
    return ok;
}

MdsCode shorten(const MdsCode& c, std::span<const std::size_t> positions) {
    const std::size_t s = positions.size();
    if (s >= c.k) throw parameter_error("shorten: s must be < k");
    std::vector<bool> drop(c.k, false);
    for (std::size_t p : positions) {
        if (p >= c.k) throw parameter_error("shorten: only systematic coordinates supported");
        if (drop[p]) throw parameter_error("shorten: duplicate position");
        drop[p] = true;
    }
    MdsCode out;
    out.k = c.k - s;
    out.n = c.n - s;
    out.generator = GfMatrix(out.k, out.n);
    std::size_t ri = 0;
    for (std::size_t i = 0; i < c.k; ++i) {
        if (drop[i]) continue;
        std::size_t cj = 0;
        for (std::size_t j = 0; j < c.n; ++j) {
            if (j < c.k && drop[j]) continue;
            out.generator(ri, cj++) = c.generator(i, j);
        }
        ++ri;
    }
    return out;
}

MdsCode lengthen(const MdsCode& c, std::size_t s, const Field& f, std::uint64_t seed,
                 std::size_t budget) {
    if (s == 0) return c;
    const std::size_t r = c.r();
    std::mt19937_64 rng(seed);
    for (std::size_t attempt = 0; attempt < budget; ++attempt) {
        MdsCode cand;
        cand.k = c.k + s;
        cand.n = c.n + s;
        cand.generator = GfMatrix(cand.k, cand.n);
        for (std::size_t i = 0; i < cand.k; ++i) cand.generator(i, i) = 1;
        for (std::size_t i = 0; i < c.k; ++i)
            for (std::size_t j = 0; j < r; ++j)
                cand.generator(i, cand.k + j) = c.generator(i, c.k + j);
        for (std::size_t i = c.k; i < cand.k; ++i)
            for (std::size_t j = 0; j < r; ++j)
                cand.generator(i, cand.k + j) = static_cast<Elem>(rng() % f.order());
        try {
            if (is_mds(cand, f)) return cand;
        } catch (const work_budget_error&) {
            throw;
        }
    }
    throw construction_error("lengthen: no MDS lengthening found within budget");
}

} // namespace ccode
