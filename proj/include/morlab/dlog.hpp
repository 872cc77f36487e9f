#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "morlab/errors.hpp"
#include "morlab/extfield.hpp"
#include "morlab/intarith.hpp"
#include "morlab/matrix.hpp"
#include "morlab/mor.hpp"

namespace morlab {

// A discrete-log instance in the cyclic group generated by g. The order
// field only needs to be a factored multiple of ord(g); the solvers divide
// the true order out of it.
template <class E>
struct DlogInstance {
    E g;
    E h;
    FactoredInteger order;
};

// Congruence certificate m = residue (mod modulus). When modulus equals
// ord(g), residue is the least non-negative solution.
struct DlogAnswer {
    std::uint64_t residue;
    std::uint64_t modulus;

    bool operator==(const DlogAnswer& o) const {
        return residue == o.residue && modulus == o.modulus;
    }
};

// Baby-step giant-step. Memory scales with sqrt(ord(g)).
template <class E>
DlogAnswer bsgs(const DlogInstance<E>& inst) {
    const std::uint64_t ord = multiplicative_order(inst.g, inst.order);
    if (ord > (std::uint64_t{1} << 40)) throw CapExceededError("bsgs: order exceeds 2^40");

    std::uint64_t s = static_cast<std::uint64_t>(std::ceil(std::sqrt(static_cast<double>(ord))));
    if (s == 0) s = 1;
    while (s * s < ord) ++s;

    std::map<std::vector<std::uint64_t>, std::uint64_t> baby;
    E cur = inst.g.pow(Exponent(0));
    for (std::uint64_t j = 0; j < s && j < ord; ++j) {
        baby.emplace(cur.key(), j);  // keeps the smallest j per element
        cur = cur * inst.g;
    }

    const E stride = inst.g.inverse().pow(Exponent(s));
    E probe = inst.h;
    for (std::uint64_t i = 0; i * s < ord + s; ++i) {
        const auto it = baby.find(probe.key());
        if (it != baby.end()) {
            const std::uint64_t m = (i * s + it->second) % ord;
            if (!(inst.g.pow(Exponent(m)) == inst.h))
                throw NoSolutionError("bsgs: target is not in the subgroup generated by g");
            return DlogAnswer{m, ord};
        }
        probe = probe * stride;
    }
    throw NoSolutionError("bsgs: target is not in the subgroup generated by g");
}

namespace detail {

// Merge r mod n with r2 mod n2 (n, n2 coprime) into r mod n*n2.
inline void crt_merge(std::uint64_t& r, std::uint64_t& n, std::uint64_t r2, std::uint64_t n2) {
    const std::uint64_t ninv = inv_mod_u64(n % n2, n2);
    const std::uint64_t diff = (r2 + n2 - r % n2) % n2;
    r += n * mulmod_u64(diff, ninv, n2);
    n *= n2;
}

}  // namespace detail

// Pohlig-Hellman: prime-power subproblems solved digit by digit, each digit
// a bsgs in the order-q subgroup, then a CRT merge.
template <class E>
DlogAnswer pohlig_hellman(const DlogInstance<E>& inst) {
    const std::uint64_t ord = multiplicative_order(inst.g, inst.order);
    const FactoredInteger fo = inst.order.divisor(ord);

    std::uint64_t res = 0, mod = 1;
    for (const auto& [q, e] : fo.factors) {
        const std::uint64_t qe = checked_pow_u64(q, e);
        const E gq = inst.g.pow(Exponent(ord / qe));
        const E hq = inst.h.pow(Exponent(ord / qe));
        const E gamma = inst.g.pow(Exponent(ord / q));
        const E gq_inv = gq.inverse();

        std::uint64_t x = 0, qk = 1;
        for (unsigned k = 0; k < e; ++k) {
            const E shifted = hq * gq_inv.pow(Exponent(x));
            const E target = shifted.pow(Exponent(checked_pow_u64(q, e - 1 - k)));
            const DlogInstance<E> sub{gamma, target, FactoredInteger{q, {{q, 1}}}};
            x += bsgs(sub).residue * qk;
            qk *= q;
        }
        detail::crt_merge(res, mod, x, qe);
    }

    if (!(inst.g.pow(Exponent(res)) == inst.h))
        throw NoSolutionError("pohlig_hellman: target is not in the subgroup generated by g");
    return DlogAnswer{res, ord};
}

namespace detail {

// One root of f (monic, squarefree product of linears over F) by random
// gcd splitting; exhaustive scan for p = 2 where the quadratic-residue
// trick is unavailable.
inline ExtFieldElem extract_root(PolyT<ExtFieldElem> f, const ExtField& field, Rng& rng) {
    using PolyE = PolyT<ExtFieldElem>;
    const PrimeModulus& p = field.prime();

    if (p.value() == 2) {
        if (field.size() > (std::uint64_t{1} << 20))
            throw CapExceededError("root search: field too large to enumerate");
        for (std::uint64_t code = 0; code < field.size(); ++code) {
            std::vector<FpElem> cs;
            std::uint64_t c = code;
            for (unsigned i = 0; i < field.degree(); ++i, c >>= 1)
                cs.emplace_back(c & 1, p);
            const ExtFieldElem cand(Poly(p, cs), field);
            if (f.eval(cand) == ExtFieldElem::zero(field)) return cand;
        }
        throw NoSolutionError("root search: no root found");
    }

    const std::uint64_t half = field.unit_group_order() / 2;
    for (int tries = 0; tries < 200; ++tries) {
        if (f.degree() == 1) return ExtFieldElem::zero(field) - f.coeff(0) * f.coeff(1).inverse();
        std::vector<FpElem> cs;
        for (unsigned i = 0; i < field.degree(); ++i) cs.emplace_back(rng.below(p.value()), p);
        const ExtFieldElem gamma(Poly(p, cs), field);
        const PolyE shifted = PolyE::x(field) + PolyE(field, {gamma});
        const PolyE w = poly_powmod(shifted, Exponent(half), f) - PolyE::one(field);
        if (w.is_zero()) continue;
        const PolyE d = poly_gcd(w, f);
        if (d.degree() <= 0 || d.degree() >= f.degree()) continue;
        f = 2 * d.degree() <= f.degree() ? d : poly_divexact(f, d).monic();
    }
    throw CapExceededError("root search: splitting cap reached");
}

}  // namespace detail

// Matrix discrete log via the field embedding: for g with irreducible
// characteristic polynomial chi, F_p[g] = F_p[t]/chi is a field in which g
// acts as alpha = t. h = g^m forces chi_h to vanish at some Frobenius
// conjugate of alpha^m, so a root beta of chi_h plus one Pohlig-Hellman run
// per conjugate recovers m mod ord(alpha).
inline DlogAnswer menezes_wu_dlog(const MatrixFp& g, const MatrixFp& h) {
    if (g.dim() != h.dim() || g.mod() != h.mod())
        throw ValueError("menezes_wu_dlog: dimension or modulus mismatch");
    if (!g.invertible()) throw ValueError("menezes_wu_dlog: g is singular");

    const Poly chi_g = char_poly(g);
    if (!is_irreducible(chi_g))
        throw ValueError(
            "menezes_wu_dlog: characteristic polynomial of g is reducible; only the "
            "irreducible case is handled");

    const PrimeModulus& p = g.mod();
    const ExtField field(p, chi_g);
    const ExtFieldElem alpha = ExtFieldElem::t(field);

    // Lift chi_h into F[X] and find one root.
    const Poly chi_h = char_poly(h);
    using PolyE = PolyT<ExtFieldElem>;
    std::vector<ExtFieldElem> lifted;
    for (std::size_t i = 0; i <= static_cast<std::size_t>(chi_h.degree()); ++i)
        lifted.push_back(ExtFieldElem::from_base(chi_h.coeff(i).value(), field));
    PolyE chi_h_ext(field, std::move(lifted));

    const PolyE xq = poly_powmod(PolyE::x(field), Exponent(field.size()), chi_h_ext);
    const PolyE linear_part = poly_gcd(xq - PolyE::x(field), chi_h_ext);
    if (linear_part.degree() <= 0)
        throw NoSolutionError("menezes_wu_dlog: chi_h has no root in F_p[g]; h is not a power of g");

    Rng rng(0x6d656e657a6573);  // fixed seed: the attack is deterministic
    ExtFieldElem beta = detail::extract_root(linear_part, field, rng);

    const FactoredInteger group = factor_integer(field.unit_group_order());
    const std::uint64_t ord_alpha = multiplicative_order(alpha, group);
    for (unsigned j = 0; j < field.degree(); ++j) {
        try {
            const DlogInstance<ExtFieldElem> inst{alpha, beta, group};
            const DlogAnswer ans = pohlig_hellman(inst);
            if (mat_pow_naive(g, Exponent(ans.residue)) == h)
                return DlogAnswer{ans.residue, ord_alpha};
        } catch (const NoSolutionError&) {
        }
        beta = beta.pow(Exponent(p.value()));  // next Frobenius conjugate
    }
    throw NoSolutionError("menezes_wu_dlog: h is not a power of g");
}

// Unipotent discrete log. With N = u - I nilpotent, h = u^m expands as
// I + mN + C(m,2)N^2 + ...; cutting with N^{s-2} isolates m N^{s-1} and
// gives the digit m mod p. Dividing the digit out and replacing u by u^p
// lifts one p-adic digit per round, up to ord(u) = p^ceil(log_p s).
inline DlogAnswer unipotent_dlog(const MatrixFp& u, const MatrixFp& h) {
    if (u.dim() != h.dim() || u.mod() != h.mod())
        throw ValueError("unipotent_dlog: dimension or modulus mismatch");
    const std::size_t d = u.dim();
    const PrimeModulus& p = u.mod();
    const MatrixFp id = MatrixFp::identity(d, p);

    MatrixFp n = u - id;
    for (std::size_t i = 0; i < d && !n.is_zero(); ++i) n = n * (u - id);
    if (!n.is_zero()) throw ValueError("unipotent_dlog: u is not unipotent");

    std::uint64_t res = 0, mod = 1;
    MatrixFp ucur = u;
    MatrixFp hcur = h;
    while (!ucur.is_identity()) {
        const MatrixFp ncur = ucur - id;
        // Nilindex s and a column v(=e_col), coordinate row with
        // (ncur^{s-1} v)_row nonzero.
        std::vector<MatrixFp> pows{id};
        while (!pows.back().is_zero()) pows.push_back(pows.back() * ncur);
        const std::size_t s = pows.size() - 1;  // ncur^s = 0, ncur^{s-1} != 0
        std::size_t row = 0, col = 0;
        bool found = false;
        for (std::size_t i = 0; i < d && !found; ++i)
            for (std::size_t j = 0; j < d && !found; ++j)
                if (pows[s - 1].at(i, j) != 0) {
                    row = i;
                    col = j;
                    found = true;
                }

        const MatrixFp cut = (hcur - id) * pows[s - 2];
        const std::uint64_t den = pows[s - 1].at(row, col);
        const std::uint64_t digit = p.mul(cut.at(row, col), p.inv(den));

        res += digit * mod;
        mod = checked_mul_u64(mod, p.value());
        hcur = hcur * mat_pow_naive(ucur.inverse(), Exponent(digit));
        ucur = mat_pow_naive(ucur, Exponent(p.value()));
    }
    if (!(hcur == id) || !(mat_pow_naive(u, Exponent(res)) == h))
        throw NoSolutionError("unipotent_dlog: h is not a power of u");
    return DlogAnswer{res, mod};
}

// Central (= inner) automorphism attack on the extra-special platform:
// phi(g_i) = g_i z^{v_i} and phi^m(g_i) = g_i z^{m v_i}, so any index with
// v_i != 0 reveals m mod p by one division.
inline DlogAnswer central_aut_attack(const MorPublicKey& pub) {
    const auto* es = std::get_if<EsParams>(&pub.platform);
    if (!es)
        throw NoSolutionError("central_aut_attack: not central (elementary-abelian platform)");
    platform_check_aut(pub.platform, pub.phi);
    platform_check_aut(pub.platform, pub.phi_m);

    const EsAut& phi = std::get<EsAut>(pub.phi);
    const EsAut& phim = std::get<EsAut>(pub.phi_m);
    if (!is_inner(phi)) throw NoSolutionError("central_aut_attack: phi is not central");
    if (!is_inner(phim)) throw NoSolutionError("central_aut_attack: phi_m is not central");

    const PrimeModulus& p = es->p;
    const std::vector<std::uint64_t>& v = phi.v().v;
    const std::vector<std::uint64_t>& w = phim.v().v;

    std::size_t pivot = v.size();
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0) {
            pivot = i;
            break;
        }
    if (pivot == v.size())
        throw NoSolutionError("central_aut_attack: all offsets vanish (identity key)");

    const std::uint64_t m = p.mul(w[pivot], p.inv(v[pivot]));
    for (std::size_t i = 0; i < v.size(); ++i)
        if (w[i] != p.mul(m, v[i]))
            throw NoSolutionError("central_aut_attack: offsets inconsistent; phi_m is not a power");
    return DlogAnswer{m, p.value()};
}

}  // namespace morlab
