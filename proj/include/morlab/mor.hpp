#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "morlab/errors.hpp"
#include "morlab/platform.hpp"

namespace morlab {

// ElGamal in Aut(G): the public key publishes phi and phi^m through their
// action on generators, the private key keeps m together with the order of
// phi so decryption can invert by exponent. Textbook construction with no
// padding or KEM layer; research use only, not safe for real traffic.

struct MorPublicKey {
    PlatformParams platform;
    PlatformAut phi;
    PlatformAut phi_m;
};

struct MorPrivateKey {
    PlatformParams platform;
    std::uint64_t m;
    std::uint64_t order_phi;
    PlatformAut phi;
};

struct MorCiphertext {
    PlatformParams platform;
    PlatformAut phi_r;
    PlatformElement payload;
};

// forced_m / forced_r bypass the uniform draw; test plumbing only.
struct MorHooks {
    std::optional<std::uint64_t> forced_m;
    std::optional<std::uint64_t> forced_r;
};

namespace detail {

inline std::uint64_t draw_exponent(std::uint64_t order, const std::optional<std::uint64_t>& forced,
                                   Rng& rng) {
    if (forced) {
        if (*forced == 0) throw ValueError("forced exponent must be positive");
        return *forced;
    }
    if (order <= 2) throw ValueError("automorphism order too small to draw an exponent");
    return rng.range(2, order - 1);
}

}  // namespace detail

inline std::pair<MorPublicKey, MorPrivateKey> mor_keygen(const PlatformParams& pp, Rng& rng,
                                                         const MorHooks& hooks = {}) {
    PlatformAut phi = platform_identity(pp);
    std::uint64_t order = 1;
    for (int tries = 0; tries < 1000; ++tries) {
        if (const auto* es = std::get_if<EsParams>(&pp)) {
            phi = sample_symplectic_irreducible(*es, rng);
        } else {
            const EaParams& ea = std::get<EaParams>(pp);
            phi = companion(random_irreducible(static_cast<unsigned>(ea.d), ea.p, rng));
        }
        order = platform_order(phi);
        if (order > 3) break;
        order = 0;
    }
    if (order == 0) throw CapExceededError("mor_keygen: could not sample phi of order > 3");

    const std::uint64_t m = detail::draw_exponent(order, hooks.forced_m, rng);
    if (m >= order) throw ValueError("forced m must lie below the order of phi");
    MorPublicKey pub{pp, phi, platform_pow(phi, Exponent(m))};
    MorPrivateKey priv{pp, m, order, std::move(phi)};
    return {std::move(pub), std::move(priv)};
}

inline MorCiphertext mor_encrypt(const MorPublicKey& pub, const PlatformElement& a, Rng& rng,
                                 const MorHooks& hooks = {}) {
    platform_check_element(pub.platform, a);
    platform_check_aut(pub.platform, pub.phi);
    platform_check_aut(pub.platform, pub.phi_m);
    // The order of phi is not part of the public key; recompute it so r can
    // be drawn from the full range.
    const std::uint64_t order = platform_order(pub.phi);
    const std::uint64_t r = detail::draw_exponent(order, hooks.forced_r, rng);
    return MorCiphertext{pub.platform, platform_pow(pub.phi, Exponent(r)),
                         platform_apply(platform_pow(pub.phi_m, Exponent(r)), a)};
}

inline PlatformElement mor_decrypt(const MorPrivateKey& priv, const MorCiphertext& ct) {
    if (!same_platform(priv.platform, ct.platform))
        throw ValueError("ciphertext platform does not match private key");
    platform_check_aut(priv.platform, ct.phi_r);
    platform_check_element(priv.platform, ct.payload);
    if (priv.m == 0 || priv.m >= priv.order_phi)
        throw ValueError("private exponent out of range");

    // phi_r^m = phi^{rm}; its inverse is also phi_r^{order - m} because
    // phi^order = 1. Both inversion routes run and must agree.
    const PlatformAut phi_rm = platform_pow(ct.phi_r, Exponent(priv.m));
    const PlatformAut inv_direct = platform_inverse(phi_rm);
    const PlatformAut inv_by_exp = platform_pow(ct.phi_r, Exponent(priv.order_phi - priv.m));
    if (!(inv_direct == inv_by_exp)) throw Error("mor_decrypt: inversion paths disagree");
    return platform_apply(inv_direct, ct.payload);
}

// Plain ElGamal over F_p^x, the comparison baseline.

struct ElGamalPublicKey {
    PrimeModulus p;
    FpElem g;
    FpElem gm;
};

struct ElGamalPrivateKey {
    PrimeModulus p;
    FpElem g;
    std::uint64_t m;
    std::uint64_t order_g;
};

struct ElGamalCiphertext {
    FpElem c1;
    FpElem c2;
};

inline std::uint64_t elgamal_order(const PrimeModulus& p, const FpElem& g) {
    if (g.value() == 0) throw ValueError("elgamal: generator must be a unit");
    const std::uint64_t ord = multiplicative_order(g, factor_integer(p.value() - 1));
    if (ord == 1) throw ValueError("elgamal: generator has order 1");
    return ord;
}

inline std::pair<ElGamalPublicKey, ElGamalPrivateKey> elgamal_keygen(const PrimeModulus& p,
                                                                     const FpElem& g, Rng& rng,
                                                                     const MorHooks& hooks = {}) {
    const std::uint64_t ord = elgamal_order(p, g);
    const std::uint64_t m = detail::draw_exponent(ord, hooks.forced_m, rng);
    return {ElGamalPublicKey{p, g, g.pow(Exponent(m))}, ElGamalPrivateKey{p, g, m, ord}};
}

inline ElGamalCiphertext elgamal_encrypt(const ElGamalPublicKey& pub, const FpElem& a, Rng& rng,
                                         const MorHooks& hooks = {}) {
    if (a.value() == 0) throw ValueError("elgamal: message must be a unit");
    const std::uint64_t ord = elgamal_order(pub.p, pub.g);
    const std::uint64_t r = detail::draw_exponent(ord, hooks.forced_r, rng);
    return ElGamalCiphertext{pub.g.pow(Exponent(r)), pub.gm.pow(Exponent(r)) * a};
}

inline FpElem elgamal_decrypt(const ElGamalPrivateKey& priv, const ElGamalCiphertext& ct) {
    return ct.c1.pow(Exponent(priv.m)).inverse() * ct.c2;
}

// A decryption oracle receives a claimed public component phi^m, a
// ciphertext head phi^r, and the payload, and returns phi^{-mr}(payload).
using DecryptionOracle = std::function<PlatformElement(
    const PlatformAut& pub_phi_m, const PlatformAut& ct_phi_r, const PlatformElement& payload)>;

// Decryption oracle => Diffie-Hellman: feed the oracle phi^{m1} as the
// public component and (phi^{m2}, g_i) as the ciphertext; it answers
// phi^{-m1 m2}(g_i). The images assemble the whole automorphism, whose
// inverse is the DH value phi^{m1 m2}.
inline PlatformAut dh_from_decryption_oracle(const PlatformAut& phi_m1, const PlatformAut& phi_m2,
                                             const DecryptionOracle& oracle) {
    const PlatformParams pp = platform_of(phi_m1);
    platform_check_aut(pp, phi_m1);
    platform_check_aut(pp, phi_m2);

    std::vector<PlatformElement> images;
    const std::size_t count = platform_generator_count(pp);
    images.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        images.push_back(oracle(phi_m1, phi_m2, platform_generator(pp, i)));

    PlatformAut assembled = platform_identity(pp);
    if (const auto* es = std::get_if<EsParams>(&pp)) {
        const std::size_t dim = 2 * es->n;
        MatrixFp m(dim, es->p);
        std::vector<std::uint64_t> off(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            const EsElement& img = std::get<EsElement>(images[i]);
            const VecFp bar = img.bar();
            for (std::size_t rrow = 0; rrow < dim; ++rrow) m.set(rrow, i, bar.v[rrow]);
            off[i] = img.c();
        }
        const std::uint64_t zeta =
            es_commutator(std::get<EsElement>(images[0]), std::get<EsElement>(images[es->n])).c();
        assembled = aut_validate(*es, m, VecFp(es->p, std::move(off)), zeta);
    } else {
        const EaParams& ea = std::get<EaParams>(pp);
        MatrixFp m(ea.d, ea.p);
        for (std::size_t i = 0; i < ea.d; ++i) {
            const VecFp& img = std::get<VecFp>(images[i]);
            for (std::size_t rrow = 0; rrow < ea.d; ++rrow) m.set(rrow, i, img.v[rrow]);
        }
        assembled = m;
    }
    platform_check_aut(pp, assembled);
    return platform_inverse(assembled);
}

namespace detail {

// b (big-endian) := b * mult + add. mult, add < 2^41.
inline void bytes_mul_add(std::vector<std::uint8_t>& b, std::uint64_t mult, std::uint64_t add) {
    std::uint64_t carry = add;
    for (auto it = b.rbegin(); it != b.rend(); ++it) {
        const std::uint64_t cur = static_cast<std::uint64_t>(*it) * mult + carry;
        *it = static_cast<std::uint8_t>(cur & 0xff);
        carry = cur >> 8;
    }
    while (carry != 0) {
        b.insert(b.begin(), static_cast<std::uint8_t>(carry & 0xff));
        carry >>= 8;
    }
}

// b (big-endian) := b / div, returns b mod div. div < 2^41.
inline std::uint64_t bytes_divmod(std::vector<std::uint8_t>& b, std::uint64_t div) {
    std::uint64_t rem = 0;
    for (auto& x : b) {
        const std::uint64_t cur = (rem << 8) | x;
        x = static_cast<std::uint8_t>(cur / div);
        rem = cur % div;
    }
    return rem;
}

inline bool bytes_all_zero(const std::vector<std::uint8_t>& b) {
    for (std::uint8_t x : b)
        if (x != 0) return false;
    return true;
}

}  // namespace detail

// The message is the big-endian integer value of the bytes, written in
// little-endian base-p digits across the coordinate slots: a_1..a_n,
// b_1..b_n, c on the extra-special platform, the d vector entries on the
// elementary one. The value must fit, i.e. lie below p^{slots}.
inline PlatformElement encode_message(const PlatformParams& pp,
                                      const std::vector<std::uint8_t>& bytes) {
    const std::uint64_t p = platform_prime(pp).value();
    const std::size_t slots =
        std::holds_alternative<EsParams>(pp) ? 2 * std::get<EsParams>(pp).n + 1
                                             : std::get<EaParams>(pp).d;
    std::vector<std::uint8_t> work = bytes;
    std::vector<std::uint64_t> digits(slots, 0);
    for (std::size_t i = 0; i < slots; ++i) digits[i] = detail::bytes_divmod(work, p);
    if (!detail::bytes_all_zero(work)) throw ValueError("message too large for platform");

    if (const auto* es = std::get_if<EsParams>(&pp)) {
        const std::size_t n = es->n;
        std::vector<std::uint64_t> a(digits.begin(), digits.begin() + n);
        std::vector<std::uint64_t> b(digits.begin() + n, digits.begin() + 2 * n);
        return EsElement(*es, std::move(a), std::move(b), digits[2 * n]);
    }
    return VecFp(platform_prime(pp), std::move(digits));
}

// Inverse of encode_message; returns the shortest big-endian byte string
// (empty for the identity element).
inline std::vector<std::uint8_t> decode_message(const PlatformParams& pp,
                                                const PlatformElement& a) {
    platform_check_element(pp, a);
    const std::uint64_t p = platform_prime(pp).value();
    std::vector<std::uint64_t> digits;
    if (const auto* ge = std::get_if<EsElement>(&a)) {
        digits = ge->a();
        digits.insert(digits.end(), ge->b().begin(), ge->b().end());
        digits.push_back(ge->c());
    } else {
        digits = std::get<VecFp>(a).v;
    }
    std::vector<std::uint8_t> out;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it)
        detail::bytes_mul_add(out, p, *it);
    while (!out.empty() && out.front() == 0) out.erase(out.begin());
    return out;
}

}  // namespace morlab
