#pragma once

#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "morlab/aut.hpp"
#include "morlab/errors.hpp"
#include "morlab/matrix.hpp"
#include "morlab/pgroup.hpp"

namespace morlab {

// Elementary-abelian platform F_p^d. Elements are column vectors written
// additively; the automorphism group is GL(d, p).
struct EaParams {
    PrimeModulus p;
    std::size_t d;

    EaParams(PrimeModulus prime, std::size_t dim) : p(prime), d(dim) {
        if (d == 0) throw ValueError("EaParams: dimension must be >= 1");
    }

    bool operator==(const EaParams& o) const { return p == o.p && d == o.d; }
    bool operator!=(const EaParams& o) const { return !(*this == o); }
};

using PlatformParams = std::variant<EsParams, EaParams>;
using PlatformAut = std::variant<EsAut, MatrixFp>;
using PlatformElement = std::variant<EsElement, VecFp>;

inline bool same_platform(const PlatformParams& a, const PlatformParams& b) { return a == b; }

inline PlatformParams platform_of(const PlatformAut& f) {
    if (const auto* fe = std::get_if<EsAut>(&f)) return fe->params();
    const MatrixFp& m = std::get<MatrixFp>(f);
    return EaParams(m.mod(), m.dim());
}

inline const PrimeModulus& platform_prime(const PlatformParams& pp) {
    if (const auto* es = std::get_if<EsParams>(&pp)) return es->p;
    return std::get<EaParams>(pp).p;
}

inline std::size_t platform_generator_count(const PlatformParams& pp) {
    if (const auto* es = std::get_if<EsParams>(&pp)) return 2 * es->n;
    return std::get<EaParams>(pp).d;
}

inline PlatformAut platform_identity(const PlatformParams& pp) {
    if (const auto* es = std::get_if<EsParams>(&pp)) return EsAut::identity(*es);
    const EaParams& ea = std::get<EaParams>(pp);
    return MatrixFp::identity(ea.d, ea.p);
}

inline PlatformElement platform_identity_element(const PlatformParams& pp) {
    if (const auto* es = std::get_if<EsParams>(&pp)) return EsElement::identity(*es);
    const EaParams& ea = std::get<EaParams>(pp);
    return VecFp::zeros(ea.d, ea.p);
}

inline PlatformElement platform_generator(const PlatformParams& pp, std::size_t i) {
    if (const auto* es = std::get_if<EsParams>(&pp))
        return i < es->n ? es_gen_x(*es, i) : es_gen_y(*es, i - es->n);
    const EaParams& ea = std::get<EaParams>(pp);
    if (i >= ea.d) throw ValueError("platform_generator: index out of range");
    VecFp e = VecFp::zeros(ea.d, ea.p);
    e.v[i] = 1;
    return e;
}

// Rejects automorphism values that do not act on the given platform:
// shape or modulus mismatch, singular matrices. EsAut values are
// checked for the similitude condition on construction already; this
// re-runs the check so deserialized data cannot bypass it.
inline void platform_check_aut(const PlatformParams& pp, const PlatformAut& f) {
    if (const auto* es = std::get_if<EsParams>(&pp)) {
        const auto* fe = std::get_if<EsAut>(&f);
        if (!fe || fe->params() != *es) throw ValueError("automorphism does not match platform");
        aut_validate(*es, fe->m(), fe->v(), fe->zeta());
        return;
    }
    const EaParams& ea = std::get<EaParams>(pp);
    const auto* fm = std::get_if<MatrixFp>(&f);
    if (!fm || fm->dim() != ea.d || fm->mod() != ea.p)
        throw ValueError("automorphism does not match platform");
    if (!fm->invertible()) throw ValueError("invalid automorphism: matrix is singular");
}

inline void platform_check_element(const PlatformParams& pp, const PlatformElement& a) {
    if (const auto* es = std::get_if<EsParams>(&pp)) {
        const auto* ge = std::get_if<EsElement>(&a);
        if (!ge || ge->params() != *es) throw ValueError("element does not match platform");
        return;
    }
    const EaParams& ea = std::get<EaParams>(pp);
    const auto* gv = std::get_if<VecFp>(&a);
    if (!gv || gv->size() != ea.d || gv->mod != ea.p)
        throw ValueError("element does not match platform");
}

inline PlatformAut platform_compose(const PlatformAut& f2, const PlatformAut& f1) {
    if (const auto* e2 = std::get_if<EsAut>(&f2))
        return aut_compose(*e2, std::get<EsAut>(f1));
    return std::get<MatrixFp>(f2) * std::get<MatrixFp>(f1);
}

inline PlatformAut platform_pow(const PlatformAut& f, const Exponent& e) {
    if (const auto* fe = std::get_if<EsAut>(&f)) return aut_pow(*fe, e);
    return mat_pow_lg(std::get<MatrixFp>(f), e);
}

inline PlatformAut platform_inverse(const PlatformAut& f) {
    if (const auto* fe = std::get_if<EsAut>(&f)) return aut_inverse(*fe);
    return std::get<MatrixFp>(f).inverse();
}

inline std::uint64_t platform_order(const PlatformAut& f) {
    if (const auto* fe = std::get_if<EsAut>(&f)) return aut_order(*fe);
    return matrix_order(std::get<MatrixFp>(f));
}

inline PlatformElement platform_apply(const PlatformAut& f, const PlatformElement& a) {
    if (const auto* fe = std::get_if<EsAut>(&f)) return aut_apply(*fe, std::get<EsElement>(a));
    const MatrixFp& m = std::get<MatrixFp>(f);
    return VecFp(m.mod(), m.mul_vec(std::get<VecFp>(a).v));
}

}  // namespace morlab
