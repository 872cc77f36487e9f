#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "morlab/errors.hpp"
#include "morlab/fp.hpp"
#include "morlab/rng.hpp"

namespace morlab {

// Dense univariate polynomial over a field. The coefficient type K must
// provide: a Context typedef (equality-comparable), statics zero/one taking
// a context, context(), is_zero(), ==, unary -, +, -, *, and inverse().
// Instantiated with FpElem (base field) and ExtFieldElem (root finding over
// extensions). Coefficients ascend: c[i] multiplies x^i. The zero polynomial
// has an empty coefficient vector and degree -1.
template <class K>
class PolyT {
public:
    using Context = typename K::Context;

    explicit PolyT(Context ctx) : ctx_(std::move(ctx)) {}

    PolyT(Context ctx, std::vector<K> coeffs) : ctx_(std::move(ctx)), c_(std::move(coeffs)) {
        for (const K& k : c_) {
            if (!(k.context() == ctx_)) throw ValueError("PolyT: coefficient context mismatch");
        }
        normalize();
    }

    static PolyT zero(const Context& ctx) { return PolyT(ctx); }
    static PolyT one(const Context& ctx) { return PolyT(ctx, {K::one(ctx)}); }
    static PolyT x(const Context& ctx) { return PolyT(ctx, {K::zero(ctx), K::one(ctx)}); }

    // c * x^k
    static PolyT monomial(const K& c, std::size_t k) {
        std::vector<K> v(k + 1, K::zero(c.context()));
        v[k] = c;
        return PolyT(c.context(), std::move(v));
    }

    const Context& context() const { return ctx_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }

    K coeff(std::size_t i) const {
        return i < c_.size() ? c_[i] : K::zero(ctx_);
    }
    const std::vector<K>& coeffs() const { return c_; }

    K leading() const {
        if (is_zero()) throw ValueError("PolyT::leading: zero polynomial");
        return c_.back();
    }
    bool is_monic() const { return !is_zero() && c_.back() == K::one(ctx_); }

    PolyT operator+(const PolyT& o) const {
        check(o);
        std::vector<K> r;
        const std::size_t n = std::max(c_.size(), o.c_.size());
        r.reserve(n);
        for (std::size_t i = 0; i < n; ++i) r.push_back(coeff(i) + o.coeff(i));
        return PolyT(ctx_, std::move(r));
    }

    PolyT operator-(const PolyT& o) const {
        check(o);
        std::vector<K> r;
        const std::size_t n = std::max(c_.size(), o.c_.size());
        r.reserve(n);
        for (std::size_t i = 0; i < n; ++i) r.push_back(coeff(i) - o.coeff(i));
        return PolyT(ctx_, std::move(r));
    }

    PolyT operator*(const PolyT& o) const {
        check(o);
        if (is_zero() || o.is_zero()) return zero(ctx_);
        std::vector<K> r(c_.size() + o.c_.size() - 1, K::zero(ctx_));
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i].is_zero()) continue;
            for (std::size_t j = 0; j < o.c_.size(); ++j) {
                r[i + j] = r[i + j] + c_[i] * o.c_[j];
            }
        }
        return PolyT(ctx_, std::move(r));
    }

    PolyT operator*(const K& s) const {
        std::vector<K> r = c_;
        for (K& k : r) k = k * s;
        return PolyT(ctx_, std::move(r));
    }

    PolyT operator-() const {
        std::vector<K> r = c_;
        for (K& k : r) k = -k;
        return PolyT(ctx_, std::move(r));
    }

    bool operator==(const PolyT& o) const {
        check(o);
        return c_ == o.c_;
    }
    bool operator!=(const PolyT& o) const { return !(*this == o); }

    PolyT monic() const {
        if (is_zero()) throw ValueError("PolyT::monic: zero polynomial");
        return *this * c_.back().inverse();
    }

    K eval(const K& at) const {
        K acc = K::zero(ctx_);
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * at + c_[i];
        return acc;
    }

private:
    Context ctx_;
    std::vector<K> c_;

    void normalize() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    void check(const PolyT& o) const {
        if (!(ctx_ == o.ctx_)) throw ValueError("PolyT: context mismatch");
    }
};

using Poly = PolyT<FpElem>;

// Euclidean division: a = q*b + r with deg r < deg b.
template <class K>
std::pair<PolyT<K>, PolyT<K>> divmod(const PolyT<K>& a, const PolyT<K>& b) {
    if (b.is_zero()) throw ValueError("divmod: division by zero polynomial");
    const auto& ctx = a.context();
    if (a.degree() < b.degree()) return {PolyT<K>::zero(ctx), a};
    const K lead_inv = b.leading().inverse();
    std::vector<K> rem(a.coeffs());
    std::vector<K> quo(a.degree() - b.degree() + 1, K::zero(ctx));
    for (int i = a.degree(); i >= b.degree(); --i) {
        const K c = rem[i] * lead_inv;
        if (c.is_zero()) continue;
        quo[i - b.degree()] = c;
        for (int j = 0; j <= b.degree(); ++j) {
            rem[i - b.degree() + j] = rem[i - b.degree() + j] - c * b.coeff(j);
        }
    }
    return {PolyT<K>(ctx, std::move(quo)), PolyT<K>(ctx, std::move(rem))};
}

template <class K>
PolyT<K> poly_mod(const PolyT<K>& a, const PolyT<K>& b) {
    return divmod(a, b).second;
}

// Exact quotient; throws if the division leaves a remainder.
template <class K>
PolyT<K> poly_divexact(const PolyT<K>& a, const PolyT<K>& b) {
    auto [q, r] = divmod(a, b);
    if (!r.is_zero()) throw ValueError("poly_divexact: division is not exact");
    return q;
}

// Monic gcd.
template <class K>
PolyT<K> poly_gcd(PolyT<K> a, PolyT<K> b) {
    if (a.is_zero() && b.is_zero()) throw ValueError("poly_gcd: gcd(0, 0) undefined");
    while (!b.is_zero()) {
        PolyT<K> r = poly_mod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

// Extended gcd: returns (g, u, v) with u*a + v*b = g, g monic.
template <class K>
std::tuple<PolyT<K>, PolyT<K>, PolyT<K>> poly_xgcd(const PolyT<K>& a, const PolyT<K>& b) {
    if (a.is_zero() && b.is_zero()) throw ValueError("poly_xgcd: gcd(0, 0) undefined");
    const auto& ctx = a.context();
    PolyT<K> r0 = a, r1 = b;
    PolyT<K> s0 = PolyT<K>::one(ctx), s1 = PolyT<K>::zero(ctx);
    PolyT<K> t0 = PolyT<K>::zero(ctx), t1 = PolyT<K>::one(ctx);
    while (!r1.is_zero()) {
        auto [q, r2] = divmod(r0, r1);
        r0 = std::move(r1);
        r1 = std::move(r2);
        PolyT<K> s2 = s0 - q * s1;
        s0 = std::move(s1);
        s1 = std::move(s2);
        PolyT<K> t2 = t0 - q * t1;
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    const K lead_inv = r0.leading().inverse();
    return {r0 * lead_inv, s0 * lead_inv, t0 * lead_inv};
}

template <class K>
PolyT<K> lcm_poly(const PolyT<K>& a, const PolyT<K>& b) {
    if (a.is_zero() || b.is_zero()) throw ValueError("lcm_poly: zero argument");
    return poly_divexact(a * b, poly_gcd(a, b)).monic();
}

// f^e mod m by square and multiply, reducing after every step so the
// exponent may be astronomically large.
template <class K>
PolyT<K> poly_powmod(const PolyT<K>& f, const Exponent& e, const PolyT<K>& m) {
    if (m.degree() < 1) throw ValueError("poly_powmod: modulus must have degree >= 1");
    const PolyT<K> base = poly_mod(f, m);
    return pow_square_multiply(base, e, poly_mod(PolyT<K>::one(f.context()), m),
                               [&](const PolyT<K>& x, const PolyT<K>& y) { return poly_mod(x * y, m); });
}

// Rabin's criterion over F_p: monic f of degree d >= 1 is irreducible iff
// x^(p^d) = x (mod f) and gcd(x^(p^(d/r)) - x, f) = 1 for every prime r | d.
inline bool is_irreducible(const Poly& f) {
    if (!f.is_monic() || f.degree() < 1) throw ValueError("is_irreducible: requires a monic polynomial of degree >= 1");
    const PrimeModulus& p = f.context();
    const unsigned d = static_cast<unsigned>(f.degree());
    if (d == 1) return true;

    const Poly x = Poly::x(p);
    // frob(k) = x^(p^k) mod f, by k-fold exponentiation to the p-th power
    auto frob = [&](unsigned k) {
        Poly r = poly_mod(x, f);
        for (unsigned i = 0; i < k; ++i) r = poly_powmod(r, Exponent(p.value()), f);
        return r;
    };
    if (frob(d) != poly_mod(x, f)) return false;
    for (auto [r, e] : factor_integer(d).factors) {
        (void)e;
        const Poly g = frob(d / static_cast<unsigned>(r)) - x;
        if (g.is_zero()) return false;
        if (poly_gcd(g, f).degree() != 0) return false;
    }
    return true;
}

inline Poly random_monic(unsigned degree, const PrimeModulus& p, Rng& rng) {
    std::vector<FpElem> c;
    c.reserve(degree + 1);
    for (unsigned i = 0; i < degree; ++i) c.emplace_back(rng.below(p.value()), p);
    c.emplace_back(1, p);
    return Poly(p, std::move(c));
}

// Rejection sampling; roughly one in d draws lands on an irreducible, so the
// cap is generous.
inline Poly random_irreducible(unsigned degree, const PrimeModulus& p, Rng& rng) {
    if (degree == 0) throw ValueError("random_irreducible: degree must be >= 1");
    const std::uint64_t cap = 1000ull * degree;
    for (std::uint64_t i = 0; i < cap; ++i) {
        Poly f = random_monic(degree, p, rng);
        if (is_irreducible(f)) return f;
    }
    throw CapExceededError("random_irreducible: rejection cap reached");
}

}  // namespace morlab
