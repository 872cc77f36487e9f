#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "morlab/errors.hpp"

namespace morlab {

// Deterministic source of randomness. Every randomized routine in the
// library takes one of these explicitly, so a fixed seed pins each derived
// artifact bit for bit. The engine is std::mt19937_64, whose output stream
// is specified by the standard; bounded draws use rejection sampling because
// std::uniform_int_distribution is not portable across implementations.
//
// Not a cryptographic generator. This toolkit studies the mathematics of
// the scheme; see the README.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    // Uniform draw from [0, n).
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw ValueError("Rng::below: empty range");
        if ((n & (n - 1)) == 0) return eng_() & (n - 1);
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x = eng_();
        while (x >= limit) x = eng_();
        return x % n;
    }

    // Uniform draw from [lo, hi], both ends included.
    std::uint64_t range(std::uint64_t lo, std::uint64_t hi) {
        if (lo > hi) throw ValueError("Rng::range: empty range");
        if (lo == 0 && hi == UINT64_MAX) return eng_();
        return lo + below(hi - lo + 1);
    }

private:
    std::mt19937_64 eng_;
};

// Non-negative integer exponent stored as a bit sequence (little-endian
// 64-bit limbs). Square-and-multiply loops walk the bits from the top, so
// exponents far beyond 64 bits never require big-integer arithmetic; the
// only reduction ever needed is by a word-sized modulus.
class Exponent {
public:
    Exponent(std::uint64_t v = 0) : limbs_{v} { trim(); }

    // Uniform exponent of exactly `nbits` bits (top bit forced to 1).
    static Exponent random_bits(std::size_t nbits, Rng& rng) {
        if (nbits == 0) throw ValueError("Exponent::random_bits: nbits = 0");
        Exponent e;
        e.limbs_.assign((nbits + 63) / 64, 0);
        for (auto& limb : e.limbs_) limb = rng.next();
        const std::size_t top = nbits - 1;
        // clear bits above `top`, then set bit `top`
        const std::size_t last = top / 64;
        e.limbs_.resize(last + 1);
        const std::size_t used = top % 64 + 1;
        if (used < 64) e.limbs_[last] &= (std::uint64_t{1} << used) - 1;
        e.limbs_[last] |= std::uint64_t{1} << (top % 64);
        return e;
    }

    bool is_zero() const { return limbs_.size() == 1 && limbs_[0] == 0; }

    std::size_t bit_length() const {
        std::uint64_t top = limbs_.back();
        std::size_t n = (limbs_.size() - 1) * 64;
        while (top != 0) {
            ++n;
            top >>= 1;
        }
        return n;
    }

    bool bit(std::size_t i) const {
        const std::size_t limb = i / 64;
        if (limb >= limbs_.size()) return false;
        return (limbs_[limb] >> (i % 64)) & 1;
    }

    bool fits_u64() const { return limbs_.size() == 1; }

    std::uint64_t as_u64() const {
        if (!fits_u64()) throw ValueError("Exponent::as_u64: does not fit");
        return limbs_[0];
    }

    // Value mod n, for word-sized n.
    std::uint64_t mod_u64(std::uint64_t n) const {
        if (n == 0) throw ValueError("Exponent::mod_u64: zero modulus");
        unsigned __int128 r = 0;
        for (std::size_t i = limbs_.size(); i-- > 0;) {
            r = ((r << 64) | limbs_[i]) % n;
        }
        return static_cast<std::uint64_t>(r);
    }

    bool operator==(const Exponent& o) const { return limbs_ == o.limbs_; }

private:
    std::vector<std::uint64_t> limbs_;

    void trim() {
        while (limbs_.size() > 1 && limbs_.back() == 0) limbs_.pop_back();
        if (limbs_.empty()) limbs_.push_back(0);
    }
};

// Generic square-and-multiply: walks e from the most significant bit.
template <class T, class Mul>
T pow_square_multiply(const T& base, const Exponent& e, const T& identity, Mul mul) {
    T acc = identity;
    for (std::size_t i = e.bit_length(); i-- > 0;) {
        acc = mul(acc, acc);
        if (e.bit(i)) acc = mul(acc, base);
    }
    return acc;
}

}  // namespace morlab
