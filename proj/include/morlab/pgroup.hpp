#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "morlab/errors.hpp"
#include "morlab/matrix.hpp"

namespace morlab {

// Parameters of the extra-special group of order p^(2n+1) and exponent p,
// p odd: generators x_1..x_n, y_1..y_n with [x_i, y_i] = z, all other pairs
// commuting, and z central of order p.
struct EsParams {
    PrimeModulus p;
    std::size_t n;

    EsParams(PrimeModulus prime, std::size_t count) : p(prime), n(count) {
        if (p.value() == 2) throw ValueError("EsParams: p must be odd");
        if (n == 0) throw ValueError("EsParams: n must be >= 1");
    }

    bool operator==(const EsParams& o) const { return p == o.p && n == o.n; }
    bool operator!=(const EsParams& o) const { return !(*this == o); }
};

// Group element in the normal form x^a y^b z^c, meaning
// x_1^(a_1) ... x_n^(a_n) y_1^(b_1) ... y_n^(b_n) z^c.
class EsElement {
public:
    EsElement(EsParams params, std::vector<std::uint64_t> a, std::vector<std::uint64_t> b, std::uint64_t c)
        : params_(params), a_(std::move(a)), b_(std::move(b)), c_(c % params.p.value()) {
        if (a_.size() != params_.n || b_.size() != params_.n)
            throw ValueError("EsElement: exponent vectors must have length n");
        for (std::uint64_t& v : a_) v %= params_.p.value();
        for (std::uint64_t& v : b_) v %= params_.p.value();
    }

    static EsElement identity(const EsParams& params) {
        return EsElement(params, std::vector<std::uint64_t>(params.n, 0),
                         std::vector<std::uint64_t>(params.n, 0), 0);
    }

    const EsParams& params() const { return params_; }
    const std::vector<std::uint64_t>& a() const { return a_; }
    const std::vector<std::uint64_t>& b() const { return b_; }
    std::uint64_t c() const { return c_; }

    bool is_identity() const {
        if (c_ != 0) return false;
        for (std::uint64_t v : a_)
            if (v != 0) return false;
        for (std::uint64_t v : b_)
            if (v != 0) return false;
        return true;
    }

    // Image in G/Z as a length-2n vector (a_1..a_n, b_1..b_n).
    VecFp bar() const {
        std::vector<std::uint64_t> v = a_;
        v.insert(v.end(), b_.begin(), b_.end());
        return VecFp(params_.p, std::move(v));
    }

    bool operator==(const EsElement& o) const {
        return params_ == o.params_ && a_ == o.a_ && b_ == o.b_ && c_ == o.c_;
    }
    bool operator!=(const EsElement& o) const { return !(*this == o); }

private:
    EsParams params_;
    std::vector<std::uint64_t> a_, b_;
    std::uint64_t c_;
};

namespace detail {

inline void es_check(const EsElement& g, const EsElement& h) {
    if (g.params() != h.params()) throw ValueError("EsElement: parameter mismatch");
}

inline std::uint64_t dot_mod(const std::vector<std::uint64_t>& u, const std::vector<std::uint64_t>& v,
                             const PrimeModulus& p) {
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < u.size(); ++i) acc = p.add(acc, p.mul(u[i], v[i]));
    return acc;
}

}  // namespace detail

// Collection rule: moving x^(a') of the right factor past y^b of the left
// one costs z^(-b.a').
inline EsElement es_mul(const EsElement& g, const EsElement& h) {
    detail::es_check(g, h);
    const PrimeModulus& p = g.params().p;
    const std::size_t n = g.params().n;
    std::vector<std::uint64_t> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = p.add(g.a()[i], h.a()[i]);
        b[i] = p.add(g.b()[i], h.b()[i]);
    }
    const std::uint64_t cross = detail::dot_mod(g.b(), h.a(), p);
    const std::uint64_t c = p.sub(p.add(g.c(), h.c()), cross);
    return EsElement(g.params(), std::move(a), std::move(b), c);
}

// g^k = (ka, kb, kc - C(k,2) a.b), valid for any integer k.
inline EsElement es_pow(const EsElement& g, long long k) {
    const PrimeModulus& p = g.params().p;
    const std::size_t n = g.params().n;
    const std::uint64_t pv = p.value();
    const std::uint64_t kr = static_cast<std::uint64_t>(((k % static_cast<long long>(pv)) + static_cast<long long>(pv)) % static_cast<long long>(pv));
    // C(k, 2) mod p, computed exactly in 128 bits first
    const __int128 kk = k;
    __int128 binom = kk * (kk - 1) / 2;
    binom %= static_cast<__int128>(pv);
    if (binom < 0) binom += pv;
    const std::uint64_t b2 = static_cast<std::uint64_t>(binom);

    std::vector<std::uint64_t> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = p.mul(kr, g.a()[i]);
        b[i] = p.mul(kr, g.b()[i]);
    }
    const std::uint64_t ab = detail::dot_mod(g.a(), g.b(), p);
    const std::uint64_t c = p.sub(p.mul(kr, g.c()), p.mul(b2, ab));
    return EsElement(g.params(), std::move(a), std::move(b), c);
}

inline EsElement es_inverse(const EsElement& g) { return es_pow(g, -1); }

// [g, h] = g^-1 h^-1 g h, computed literally from the collection rule.
inline EsElement es_commutator(const EsElement& g, const EsElement& h) {
    detail::es_check(g, h);
    return es_mul(es_mul(es_inverse(g), es_inverse(h)), es_mul(g, h));
}

// x_i, y_i, z as elements.
inline EsElement es_gen_x(const EsParams& params, std::size_t i) {
    if (i >= params.n) throw ValueError("es_gen_x: index out of range");
    std::vector<std::uint64_t> a(params.n, 0), b(params.n, 0);
    a[i] = 1;
    return EsElement(params, std::move(a), std::move(b), 0);
}

inline EsElement es_gen_y(const EsParams& params, std::size_t i) {
    if (i >= params.n) throw ValueError("es_gen_y: index out of range");
    std::vector<std::uint64_t> a(params.n, 0), b(params.n, 0);
    b[i] = 1;
    return EsElement(params, std::move(a), std::move(b), 0);
}

inline EsElement es_gen_z(const EsParams& params) {
    std::vector<std::uint64_t> a(params.n, 0), b(params.n, 0);
    return EsElement(params, std::move(a), std::move(b), 1);
}

// Alternating form on G/Z induced by the commutator: [g, h] = z^B(gbar, hbar).
// In the coordinate order (a_1..a_n, b_1..b_n) its Gram matrix is
// [[0, I], [-I, 0]].
struct SymplecticForm {
    EsParams params;
    MatrixFp J;

    explicit SymplecticForm(const EsParams& es) : params(es), J(2 * es.n, es.p) {
        for (std::size_t i = 0; i < es.n; ++i) {
            J.set(i, es.n + i, 1);
            J.set(es.n + i, i, es.p.neg(1));
        }
    }

    std::uint64_t apply(const VecFp& u, const VecFp& w) const {
        const PrimeModulus& p = params.p;
        if (u.mod != p || w.mod != p || u.size() != 2 * params.n || w.size() != 2 * params.n)
            throw ValueError("SymplecticForm: operand mismatch");
        std::uint64_t acc = 0;
        for (std::size_t i = 0; i < params.n; ++i) {
            acc = p.add(acc, p.mul(u.v[i], w.v[params.n + i]));
            acc = p.sub(acc, p.mul(u.v[params.n + i], w.v[i]));
        }
        return acc;
    }
};

inline std::uint64_t bilinear_B(const EsParams& params, const VecFp& u, const VecFp& w) {
    return SymplecticForm(params).apply(u, w);
}

// F_p-dimensions of the factors of the central series 1 < Z(G) < G, read
// top down: G/Z(G) then Z(G).
inline std::vector<std::size_t> series_sections(const EsParams& params) {
    return {2 * params.n, 1};
}

// Order of the orthogonal group O^eps(2n, 2):
// 2^(n(n-1)+1) (2^n - eps) prod_{i=1}^{n-1} (2^(2i) - 1).
inline std::uint64_t orthogonal_group_order(unsigned n, int eps) {
    if (n == 0) throw ValueError("orthogonal_group_order: n must be >= 1");
    if (eps != 1 && eps != -1) throw ValueError("orthogonal_group_order: eps must be +1 or -1");
    std::uint64_t out = checked_pow_u64(2, n * (n - 1) + 1);
    const std::uint64_t twon = checked_pow_u64(2, n);
    out = checked_mul_u64(out, eps == 1 ? twon - 1 : twon + 1);
    for (unsigned i = 1; i < n; ++i) {
        out = checked_mul_u64(out, checked_pow_u64(2, 2 * i) - 1);
    }
    return out;
}

}  // namespace morlab
