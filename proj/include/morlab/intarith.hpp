#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "morlab/errors.hpp"
#include "morlab/rng.hpp"

namespace morlab {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    if (m == 0) throw ValueError("powmod_u64: zero modulus");
    std::uint64_t acc = 1 % m;
    a %= m;
    while (e != 0) {
        if (e & 1) acc = mulmod_u64(acc, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return acc;
}

inline std::uint64_t checked_mul_u64(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > UINT64_MAX / a) throw CapExceededError("64-bit overflow in multiplication");
    return a * b;
}

// p^e, throwing rather than wrapping.
inline std::uint64_t checked_pow_u64(std::uint64_t p, unsigned e) {
    std::uint64_t r = 1;
    while (e-- > 0) r = checked_mul_u64(r, p);
    return r;
}

inline std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) throw ValueError("lcm_u64: zero argument");
    return checked_mul_u64(a / std::gcd(a, b), b);
}

// Inverse of a modulo n, extended Euclid. Requires gcd(a, n) = 1.
inline std::uint64_t inv_mod_u64(std::uint64_t a, std::uint64_t n) {
    if (n == 0) throw ValueError("inv_mod_u64: modulus must be positive");
    if (n > (std::uint64_t{1} << 62)) throw CapExceededError("inv_mod_u64: modulus too large");
    if (n == 1) return 0;
    std::int64_t t = 0, nt = 1;
    std::int64_t r = static_cast<std::int64_t>(n), nr = static_cast<std::int64_t>(a % n);
    while (nr != 0) {
        const std::int64_t q = r / nr;
        t = std::exchange(nt, t - q * nt);
        r = std::exchange(nr, r - q * nr);
    }
    if (r != 1) throw ValueError("inv_mod_u64: argument not coprime to modulus");
    if (t < 0) t += static_cast<std::int64_t>(n);
    return static_cast<std::uint64_t>(t);
}

// Deterministic Miller-Rabin, exact for all 64-bit inputs with this base set.
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (unsigned r = 1; r < s; ++r) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

// A positive integer together with its complete prime factorization,
// exponents sorted by prime.
struct FactoredInteger {
    std::uint64_t value = 1;
    std::vector<std::pair<std::uint64_t, unsigned>> factors;  // (prime, exponent)

    // Product of prime powers dividing `d`, where d | value. Used to carry a
    // factorization down to a divisor whose factorization is then immediate.
    FactoredInteger divisor(std::uint64_t d) const {
        if (d == 0 || value % d != 0) throw ValueError("FactoredInteger::divisor: not a divisor");
        FactoredInteger out;
        out.value = d;
        for (auto [q, e] : factors) {
            (void)e;
            unsigned k = 0;
            while (d % q == 0) {
                d /= q;
                ++k;
            }
            if (k > 0) out.factors.emplace_back(q, k);
        }
        return out;
    }
};

namespace detail {

// Brent's cycle variant of Pollard rho. Returns a nontrivial factor of
// composite odd n, or 0 if the iteration cap ran out.
inline std::uint64_t pollard_rho(std::uint64_t n, Rng& rng) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        const std::uint64_t c = rng.range(1, n - 1);
        std::uint64_t x = rng.below(n);
        std::uint64_t y = x, d = 1;
        std::uint64_t q = 1;
        const std::uint64_t cap = 1u << 22;
        std::uint64_t count = 0;
        auto step = [&](std::uint64_t v) { return (mulmod_u64(v, v, n) + c) % n; };
        while (d == 1 && count < cap) {
            x = step(x);
            y = step(step(y));
            ++count;
            const std::uint64_t diff = x > y ? x - y : y - x;
            if (diff == 0) break;
            q = mulmod_u64(q, diff, n);
            if (count % 128 == 0) {
                d = std::gcd(q, n);
                q = 1;
            }
        }
        if (d == 1) d = std::gcd(q, n);
        if (d != 1 && d != n) return d;
    }
    return 0;
}

}  // namespace detail

// Complete factorization: trial division by small primes, then Pollard rho
// with Miller-Rabin primality on the remaining cofactors. Throws
// CapExceededError if rho stalls (never observed below 64 bits, but the
// failure mode is reported honestly rather than looping forever).
inline FactoredInteger factor_integer(std::uint64_t n) {
    if (n == 0) throw ValueError("factor_integer: n must be positive");
    FactoredInteger out;
    out.value = n;
    std::map<std::uint64_t, unsigned> acc;
    for (std::uint64_t q = 2; q <= 1000000 && q * q <= n; q += (q == 2 ? 1 : 2)) {
        while (n % q == 0) {
            n /= q;
            ++acc[q];
        }
    }
    std::vector<std::uint64_t> pending;
    if (n > 1) pending.push_back(n);
    Rng rng(0x706f6c6c617264);  // fixed seed: factoring is deterministic
    while (!pending.empty()) {
        const std::uint64_t m = pending.back();
        pending.pop_back();
        if (is_prime_u64(m)) {
            ++acc[m];
            continue;
        }
        const std::uint64_t d = detail::pollard_rho(m, rng);
        if (d == 0) throw CapExceededError("factor_integer: rho iteration cap reached");
        pending.push_back(d);
        pending.push_back(m / d);
    }
    out.factors.assign(acc.begin(), acc.end());
    return out;
}

}  // namespace morlab
