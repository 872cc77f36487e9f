#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "morlab/errors.hpp"
#include "morlab/poly.hpp"

namespace morlab {

// F_{p^d} presented as F_p[t]/(f) for a monic irreducible f of degree d.
class ExtField {
public:
    ExtField(PrimeModulus p, Poly modulus) : p_(p), f_(std::move(modulus)) {
        if (!(f_.context() == p_)) throw ValueError("ExtField: modulus context mismatch");
        if (!is_irreducible(f_)) throw ValueError("ExtField: modulus is not irreducible");
    }

    const PrimeModulus& prime() const { return p_; }
    const Poly& modulus() const { return f_; }
    unsigned degree() const { return static_cast<unsigned>(f_.degree()); }

    // p^d; the library keeps extension fields small enough to enumerate
    // exponents in 64 bits.
    std::uint64_t size() const {
        std::uint64_t s = 1;
        for (unsigned i = 0; i < degree(); ++i) s = checked_mul_u64(s, p_.value());
        return s;
    }
    std::uint64_t unit_group_order() const { return size() - 1; }

    bool operator==(const ExtField& o) const { return p_ == o.p_ && f_ == o.f_; }
    bool operator!=(const ExtField& o) const { return !(*this == o); }

private:
    PrimeModulus p_;
    Poly f_;
};

// An element of an ExtField, held as its reduced polynomial representative.
class ExtFieldElem {
public:
    using Context = ExtField;

    ExtFieldElem(Poly rep, ExtField field) : f_(std::move(field)), rep_(poly_mod(rep, f_.modulus())) {
        if (!(rep_.context() == f_.prime())) throw ValueError("ExtFieldElem: representative context mismatch");
    }

    static ExtFieldElem zero(const ExtField& f) { return ExtFieldElem(Poly::zero(f.prime()), f); }
    static ExtFieldElem one(const ExtField& f) { return ExtFieldElem(Poly::one(f.prime()), f); }
    // The generator t, a root of the field's modulus.
    static ExtFieldElem t(const ExtField& f) { return ExtFieldElem(Poly::x(f.prime()), f); }
    static ExtFieldElem from_base(std::uint64_t v, const ExtField& f) {
        return ExtFieldElem(Poly(f.prime(), {FpElem(v, f.prime())}), f);
    }

    const ExtField& context() const { return f_; }
    const Poly& rep() const { return rep_; }

    bool is_zero() const { return rep_.is_zero(); }
    bool is_one() const { return rep_.degree() == 0 && rep_.coeff(0).is_one(); }

    ExtFieldElem operator+(const ExtFieldElem& o) const { return make(rep_ + check(o)); }
    ExtFieldElem operator-(const ExtFieldElem& o) const { return make(rep_ - check(o)); }
    ExtFieldElem operator*(const ExtFieldElem& o) const { return make(rep_ * check(o)); }
    ExtFieldElem operator-() const { return make(-rep_); }

    ExtFieldElem inverse() const {
        if (is_zero()) throw ValueError("ExtFieldElem::inverse: zero has no inverse");
        auto [g, u, v] = poly_xgcd(rep_, f_.modulus());
        (void)v;
        if (g.degree() != 0) throw ValueError("ExtFieldElem::inverse: gcd not constant");
        return make(u);
    }

    ExtFieldElem pow(const Exponent& e) const {
        if (is_zero()) return e.is_zero() ? one(f_) : zero(f_);
        const std::uint64_t r = e.mod_u64(f_.unit_group_order());
        return make(poly_powmod(rep_, Exponent(r), f_.modulus()));
    }

    bool operator==(const ExtFieldElem& o) const { return rep_ == check(o); }
    bool operator!=(const ExtFieldElem& o) const { return !(*this == o); }

    // Padded coefficient vector; usable as an ordered map key.
    std::vector<std::uint64_t> key() const {
        std::vector<std::uint64_t> k(f_.degree(), 0);
        for (unsigned i = 0; i < f_.degree(); ++i) k[i] = rep_.coeff(i).value();
        return k;
    }

private:
    ExtField f_;
    Poly rep_;

    ExtFieldElem make(const Poly& r) const { return ExtFieldElem(r, f_); }
    const Poly& check(const ExtFieldElem& o) const {
        if (f_ != o.f_) throw ValueError("ExtFieldElem: mixed fields");
        return o.rep_;
    }
};

}  // namespace morlab
