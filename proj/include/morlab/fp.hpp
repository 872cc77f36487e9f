#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "morlab/errors.hpp"
#include "morlab/intarith.hpp"
#include "morlab/rng.hpp"

namespace morlab {

// A prime modulus, validated on construction by trial division. Bounded at
// 2^40 so validation stays cheap; everything in this toolkit runs at desk
// scale and larger primes would be a misuse of it.
class PrimeModulus {
public:
    explicit PrimeModulus(std::uint64_t p) : p_(p) {
        if (p >= (std::uint64_t{1} << 40)) throw ValueError("PrimeModulus: p >= 2^40");
        if (!trial_prime(p)) throw ValueError("PrimeModulus: " + std::to_string(p) + " is not prime");
    }

    std::uint64_t value() const { return p_; }

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
        const std::uint64_t s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + p_ - b; }
    std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : p_ - a; }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return mulmod_u64(a, b, p_); }
    std::uint64_t inv(std::uint64_t a) const {
        if (a % p_ == 0) throw ValueError("PrimeModulus::inv: zero has no inverse");
        return powmod_u64(a, p_ - 2, p_);
    }

    bool operator==(const PrimeModulus& o) const { return p_ == o.p_; }
    bool operator!=(const PrimeModulus& o) const { return p_ != o.p_; }

private:
    std::uint64_t p_;

    static bool trial_prime(std::uint64_t p) {
        if (p < 2) return false;
        if (p % 2 == 0) return p == 2;
        if (p % 3 == 0) return p == 3;
        for (std::uint64_t q = 5; q * q <= p; q += 6) {
            if (p % q == 0 || p % (q + 2) == 0) return false;
        }
        return true;
    }
};

// An element of F_p. Arithmetic checks that both operands live over the
// same modulus.
class FpElem {
public:
    using Context = PrimeModulus;

    FpElem(std::uint64_t v, PrimeModulus p) : v_(v % p.value()), p_(p) {}

    static FpElem zero(const PrimeModulus& p) { return FpElem(0, p); }
    static FpElem one(const PrimeModulus& p) { return FpElem(1, p); }

    std::uint64_t value() const { return v_; }
    const PrimeModulus& context() const { return p_; }

    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }

    FpElem operator+(const FpElem& o) const { return make(p_.add(v_, check(o))); }
    FpElem operator-(const FpElem& o) const { return make(p_.sub(v_, check(o))); }
    FpElem operator*(const FpElem& o) const { return make(p_.mul(v_, check(o))); }
    FpElem operator-() const { return make(p_.neg(v_)); }
    FpElem inverse() const { return make(p_.inv(v_)); }

    FpElem pow(const Exponent& e) const {
        if (v_ == 0) {
            if (e.is_zero()) return one(p_);
            return zero(p_);
        }
        return make(powmod_u64(v_, e.mod_u64(p_.value() - 1), p_.value()));
    }

    bool operator==(const FpElem& o) const { return v_ == check(o); }
    bool operator!=(const FpElem& o) const { return !(*this == o); }

    std::vector<std::uint64_t> key() const { return {v_}; }

private:
    std::uint64_t v_;
    PrimeModulus p_;

    FpElem make(std::uint64_t v) const { return FpElem(v, p_); }
    std::uint64_t check(const FpElem& o) const {
        if (p_ != o.p_) throw ValueError("FpElem: mixed moduli");
        return o.v_;
    }
};

// Order of `a` in the group whose size is given, completely factored.
// Standard divide-out-the-primes argument; errors if a^|G| != 1, which
// means the claimed group order was wrong.
template <class E>
std::uint64_t multiplicative_order(const E& a, const FactoredInteger& group_order) {
    if (!a.pow(Exponent(group_order.value)).is_one())
        throw ValueError("multiplicative_order: a^order != 1, inconsistent group order");
    std::uint64_t o = group_order.value;
    for (auto [q, e] : group_order.factors) {
        for (unsigned i = 0; i < e; ++i) {
            if (a.pow(Exponent(o / q)).is_one())
                o /= q;
            else
                break;
        }
    }
    return o;
}

}  // namespace morlab
