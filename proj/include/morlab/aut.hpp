#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "morlab/errors.hpp"
#include "morlab/matrix.hpp"
#include "morlab/pgroup.hpp"

namespace morlab {

// Automorphism of the extra-special group, stored by its action on the
// generators: phi(x_i) has image m.col(i) in G/Z and central offset v[i],
// phi(y_i) likewise at column n+i, and phi(z) = z^zeta. Validity demands
// m^T J m = zeta J with m invertible and zeta != 0; that makes the
// generator images satisfy the defining relations, so phi extends to the
// whole group.
class EsAut {
public:
    EsAut(EsParams params, MatrixFp m, VecFp v, std::uint64_t zeta)
        : params_(params), m_(std::move(m)), v_(std::move(v)), zeta_(zeta % params.p.value()) {
        const std::size_t dim = 2 * params_.n;
        if (m_.dim() != dim || !(m_.mod() == params_.p)) throw ValueError("EsAut: matrix shape mismatch");
        if (v_.size() != dim || v_.mod != params_.p) throw ValueError("EsAut: offset shape mismatch");
        if (zeta_ == 0) throw ValueError("EsAut: zeta must be nonzero");
        if (!m_.invertible()) throw ValueError("EsAut: matrix is singular");
        const MatrixFp j = SymplecticForm(params_).J;
        if (m_.transpose() * j * m_ != j.scaled(zeta_)) {
            throw ValueError("EsAut: similitude condition m^T J m = zeta J fails");
        }
    }

    static EsAut identity(const EsParams& params) {
        return EsAut(params, MatrixFp::identity(2 * params.n, params.p),
                     VecFp::zeros(2 * params.n, params.p), 1);
    }

    const EsParams& params() const { return params_; }
    const MatrixFp& m() const { return m_; }
    const VecFp& v() const { return v_; }
    std::uint64_t zeta() const { return zeta_; }

    bool operator==(const EsAut& o) const {
        return params_ == o.params_ && m_ == o.m_ && v_ == o.v_ && zeta_ == o.zeta_;
    }
    bool operator!=(const EsAut& o) const { return !(*this == o); }

    // Image of the i-th generator (x_i for i < n, y_{i-n} otherwise).
    EsElement gen_image(std::size_t i) const {
        const std::size_t n = params_.n;
        std::vector<std::uint64_t> a(n), b(n);
        for (std::size_t r = 0; r < n; ++r) {
            a[r] = m_.at(r, i);
            b[r] = m_.at(n + r, i);
        }
        return EsElement(params_, std::move(a), std::move(b), v_.v[i]);
    }

private:
    EsParams params_;
    MatrixFp m_;
    VecFp v_;
    std::uint64_t zeta_;
};

inline EsAut aut_validate(const EsParams& params, const MatrixFp& m, const VecFp& v, std::uint64_t zeta) {
    return EsAut(params, m, v, zeta);
}

// Central automorphism: fixes G/Z and Z pointwise, shifts the generators
// into the center by the given offsets. These are exactly the inner
// automorphisms.
inline EsAut make_central_aut(const EsParams& params, const VecFp& offsets) {
    return EsAut(params, MatrixFp::identity(2 * params.n, params.p), offsets, 1);
}

// Inner means trivial on both Z(G) and G/Z(G).
inline bool is_inner(const EsAut& f) {
    return f.zeta() == 1 && f.m().is_identity();
}

inline EsElement aut_apply(const EsAut& f, const EsElement& g) {
    if (f.params() != g.params()) throw ValueError("aut_apply: parameter mismatch");
    const std::size_t n = f.params().n;
    EsElement acc = EsElement::identity(f.params());
    for (std::size_t i = 0; i < n; ++i) {
        if (g.a()[i] != 0) acc = es_mul(acc, es_pow(f.gen_image(i), static_cast<long long>(g.a()[i])));
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (g.b()[i] != 0) acc = es_mul(acc, es_pow(f.gen_image(n + i), static_cast<long long>(g.b()[i])));
    }
    const std::uint64_t zc = f.params().p.mul(f.zeta(), g.c());
    std::vector<std::uint64_t> za(n, 0), zb(n, 0);
    return es_mul(acc, EsElement(f.params(), std::move(za), std::move(zb), zc));
}

// (f2 o f1): the matrix and zeta parts multiply; the offsets are read off by
// pushing each generator through both maps.
inline EsAut aut_compose(const EsAut& f2, const EsAut& f1) {
    if (f2.params() != f1.params()) throw ValueError("aut_compose: parameter mismatch");
    const EsParams& params = f1.params();
    const std::size_t dim = 2 * params.n;
    std::vector<std::uint64_t> v(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        v[i] = aut_apply(f2, f1.gen_image(i)).c();
    }
    return EsAut(params, f2.m() * f1.m(), VecFp(params.p, std::move(v)),
                 params.p.mul(f2.zeta(), f1.zeta()));
}

inline EsAut aut_pow(const EsAut& f, const Exponent& e) {
    return pow_square_multiply(f, e, EsAut::identity(f.params()),
                               [](const EsAut& a, const EsAut& b) { return aut_compose(a, b); });
}

inline EsAut aut_inverse(const EsAut& f) {
    const EsParams& params = f.params();
    const PrimeModulus& p = params.p;
    const std::size_t dim = 2 * params.n;
    const MatrixFp minv = f.m().inverse();
    const std::uint64_t zinv = p.inv(f.zeta());

    // psi(g_i) has image minv.col(i) and offset w_i chosen so that
    // f(psi(g_i)) = g_i: the offset picked up by f on that coset
    // representative must cancel.
    std::vector<std::uint64_t> w(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        std::vector<std::uint64_t> a(params.n), b(params.n);
        for (std::size_t r = 0; r < params.n; ++r) {
            a[r] = minv.at(r, i);
            b[r] = minv.at(params.n + r, i);
        }
        const EsElement rep(params, std::move(a), std::move(b), 0);
        const std::uint64_t s = aut_apply(f, rep).c();
        w[i] = p.mul(p.neg(s), zinv);
    }
    return EsAut(params, minv, VecFp(p, std::move(w)), zinv);
}

// Order of phi in Aut(G): with t = lcm(ord(m), ord(zeta)), phi^t is central,
// and a nontrivial central automorphism has order p.
inline std::uint64_t aut_order(const EsAut& f) {
    const PrimeModulus& p = f.params().p;
    const std::uint64_t tm = matrix_order(f.m());
    const std::uint64_t tz = multiplicative_order(FpElem(f.zeta(), p), factor_integer(p.value() - 1));
    const std::uint64_t t = lcm_u64(tm, tz);
    const EsAut ft = aut_pow(f, Exponent(t));
    if (ft == EsAut::identity(f.params())) return t;
    return checked_mul_u64(t, p.value());
}

// Symplectic transvection x -> x + lambda B(x, u) u, as a matrix:
// I + lambda u (J u)^T.
inline MatrixFp symplectic_transvection(const EsParams& params, const VecFp& u, std::uint64_t lambda) {
    const PrimeModulus& p = params.p;
    const std::size_t dim = 2 * params.n;
    if (u.size() != dim || u.mod != p) throw ValueError("symplectic_transvection: bad direction vector");
    if (u.is_zero() || lambda % p.value() == 0)
        throw ValueError("symplectic_transvection: direction and lambda must be nonzero");
    const MatrixFp j = SymplecticForm(params).J;
    const std::vector<std::uint64_t> ju = j.mul_vec(u.v);
    MatrixFp t = MatrixFp::identity(dim, p);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t k = 0; k < dim; ++k) {
            t.set(i, k, p.add(t.at(i, k), p.mul(lambda, p.mul(u.v[i], ju[k]))));
        }
    }
    return t;
}

// Random symplectic automorphism whose matrix has irreducible characteristic
// polynomial: multiply a handful of random transvections (these generate
// Sp(2n, p)) and reject until the polynomial is irreducible. The offsets are
// uniform and zeta = 1.
inline EsAut sample_symplectic_irreducible(const EsParams& params, Rng& rng) {
    const PrimeModulus& p = params.p;
    const std::size_t dim = 2 * params.n;
    for (int tries = 0; tries < 100000; ++tries) {
        const std::size_t count = dim + 2 + rng.below(dim + 3);
        MatrixFp m = MatrixFp::identity(dim, p);
        for (std::size_t c = 0; c < count; ++c) {
            std::vector<std::uint64_t> uv(dim);
            bool nonzero = false;
            for (auto& x : uv) {
                x = rng.below(p.value());
                nonzero |= (x != 0);
            }
            if (!nonzero) continue;
            m = m * symplectic_transvection(params, VecFp(p, std::move(uv)), rng.range(1, p.value() - 1));
        }
        if (!is_irreducible(char_poly(m))) continue;
        std::vector<std::uint64_t> off(dim);
        for (auto& x : off) x = rng.below(p.value());
        return EsAut(params, std::move(m), VecFp(p, std::move(off)), 1);
    }
    throw CapExceededError("sample_symplectic_irreducible: rejection cap reached");
}

}  // namespace morlab
