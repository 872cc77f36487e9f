#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <set>
#include <vector>

#include "morlab/extfield.hpp"
#include "morlab/fp.hpp"
#include "morlab/intarith.hpp"
#include "morlab/poly.hpp"
#include "morlab/rng.hpp"

using namespace morlab;

namespace {

Poly make_poly(const PrimeModulus& p, std::vector<std::uint64_t> ascending) {
    std::vector<FpElem> c;
    c.reserve(ascending.size());
    for (std::uint64_t v : ascending) c.emplace_back(v, p);
    return Poly(p, std::move(c));
}

}  // namespace

TEST_CASE("Rng determinism and range") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) REQUIRE(a.next() == b.next());

    Rng r(7);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 2000; ++i) {
        const std::uint64_t x = r.below(5);
        REQUIRE(x < 5);
        seen.insert(x);
    }
    REQUIRE(seen.size() == 5);

    REQUIRE_THROWS_AS(r.below(0), ValueError);
    for (int i = 0; i < 500; ++i) {
        const std::uint64_t x = r.range(10, 12);
        REQUIRE(x >= 10);
        REQUIRE(x <= 12);
    }
}

TEST_CASE("Exponent bits and reduction") {
    Exponent e(0);
    REQUIRE(e.is_zero());
    REQUIRE(e.bit_length() == 0);

    Exponent f(0b1011);
    REQUIRE(f.bit_length() == 4);
    REQUIRE(f.bit(0));
    REQUIRE(f.bit(1));
    REQUIRE(!f.bit(2));
    REQUIRE(f.bit(3));
    REQUIRE(!f.bit(64));
    REQUIRE(f.mod_u64(5) == 11 % 5);

    Rng rng(1);
    for (int i = 0; i < 50; ++i) {
        Exponent g = Exponent::random_bits(256, rng);
        REQUIRE(g.bit_length() == 256);
        REQUIRE(!g.fits_u64());
    }
    // mod_u64 agrees with direct arithmetic on word-sized exponents
    for (int i = 0; i < 200; ++i) {
        const std::uint64_t v = rng.next();
        const std::uint64_t n = rng.range(1, 1u << 30);
        REQUIRE(Exponent(v).mod_u64(n) == v % n);
        REQUIRE(Exponent(v).as_u64() == v);
    }
}

TEST_CASE("modular arithmetic on words") {
    REQUIRE(mulmod_u64(3, 4, 5) == 2);
    REQUIRE(powmod_u64(2, 10, 1000) == 24);
    REQUIRE(powmod_u64(5, 0, 7) == 1);
    // no wraparound near 2^64
    const std::uint64_t big = UINT64_MAX - 58;  // 2^64 - 59, prime
    REQUIRE(mulmod_u64(big - 1, big - 1, big) == 1);

    REQUIRE(checked_mul_u64(1u << 20, 1u << 20) == 1ull << 40);
    REQUIRE_THROWS_AS(checked_mul_u64(1ull << 33, 1ull << 33), CapExceededError);
    REQUIRE(checked_pow_u64(13, 16) == 665416609183179841ull);
    REQUIRE(lcm_u64(6, 15) == 30);
}

TEST_CASE("64-bit primality") {
    REQUIRE(is_prime_u64(2));
    REQUIRE(is_prime_u64(3));
    REQUIRE(is_prime_u64(2147483647));          // 2^31 - 1
    REQUIRE(is_prime_u64(2305843009213693951)); // 2^61 - 1
    REQUIRE(is_prime_u64(UINT64_MAX - 58));     // 2^64 - 59
    REQUIRE(!is_prime_u64(0));
    REQUIRE(!is_prime_u64(1));
    REQUIRE(!is_prime_u64(561));   // Carmichael
    REQUIRE(!is_prime_u64(41041)); // Carmichael
    REQUIRE(!is_prime_u64(UINT64_MAX));
}

TEST_CASE("factor_integer") {
    const FactoredInteger f = factor_integer(59048);
    REQUIRE(f.value == 59048);
    const std::vector<std::pair<std::uint64_t, unsigned>> expect = {{2, 3}, {11, 2}, {61, 1}};
    REQUIRE(f.factors == expect);

    REQUIRE(factor_integer(1).factors.empty());
    REQUIRE(factor_integer(97).factors == std::vector<std::pair<std::uint64_t, unsigned>>{{97, 1}});

    // semiprime beyond the trial-division bound exercises the rho path
    const std::uint64_t p = 2147483647, q = 2147483629;
    const FactoredInteger g = factor_integer(p * q);
    REQUIRE(g.factors == std::vector<std::pair<std::uint64_t, unsigned>>{{q, 1}, {p, 1}});

    Rng rng(11);
    for (int i = 0; i < 50; ++i) {
        const std::uint64_t n = rng.range(2, 1u << 20);
        const FactoredInteger h = factor_integer(n);
        std::uint64_t prod = 1;
        for (auto [r, e] : h.factors) {
            REQUIRE(is_prime_u64(r));
            for (unsigned j = 0; j < e; ++j) prod *= r;
        }
        REQUIRE(prod == n);
    }

    const FactoredInteger d = factor_integer(720).divisor(24);
    REQUIRE(d.value == 24);
    REQUIRE(d.factors == std::vector<std::pair<std::uint64_t, unsigned>>{{2, 3}, {3, 1}});
    REQUIRE_THROWS_AS(factor_integer(720).divisor(7), ValueError);
    REQUIRE_THROWS_AS(factor_integer(0), ValueError);
}

TEST_CASE("PrimeModulus validation") {
    REQUIRE(PrimeModulus(2).value() == 2);
    REQUIRE(PrimeModulus(19).value() == 19);
    REQUIRE(PrimeModulus(2147483647).value() == 2147483647);
    REQUIRE_THROWS_AS(PrimeModulus(0), ValueError);
    REQUIRE_THROWS_AS(PrimeModulus(1), ValueError);
    REQUIRE_THROWS_AS(PrimeModulus(561), ValueError);
    REQUIRE_THROWS_AS(PrimeModulus(1ull << 40), ValueError);

    const PrimeModulus p(19);
    REQUIRE(p.add(18, 3) == 2);
    REQUIRE(p.sub(2, 5) == 16);
    REQUIRE(p.neg(0) == 0);
    REQUIRE(p.mul(p.inv(7), 7) == 1);
    REQUIRE_THROWS_AS(p.inv(0), ValueError);
}

TEST_CASE("FpElem arithmetic") {
    const PrimeModulus p(19);
    const FpElem a(7, p), b(15, p);
    REQUIRE((a + b).value() == 3);
    REQUIRE((a - b).value() == 11);
    REQUIRE((a * b).value() == (7 * 15) % 19);
    REQUIRE((-a).value() == 12);
    REQUIRE((a * a.inverse()).is_one());

    const PrimeModulus q(5);
    REQUIRE_THROWS_AS(a + FpElem(1, q), ValueError);

    // pow agrees with plain square-and-multiply (no order reduction)
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        const FpElem x(rng.range(1, 18), p);
        const Exponent e = Exponent::random_bits(80, rng);
        const FpElem direct = pow_square_multiply(x, e, FpElem::one(p),
                                                  [](const FpElem& u, const FpElem& v) { return u * v; });
        REQUIRE(x.pow(e) == direct);
    }
    REQUIRE(FpElem(0, p).pow(Exponent(5)).is_zero());
    REQUIRE(FpElem(3, p).pow(Exponent(0)).is_one());
}

TEST_CASE("multiplicative_order in F_p") {
    const PrimeModulus p(19);
    const FactoredInteger n = factor_integer(18);
    REQUIRE(multiplicative_order(FpElem(2, p), n) == 18);
    REQUIRE(multiplicative_order(FpElem(7, p), n) == 3);
    REQUIRE(multiplicative_order(FpElem(1, p), n) == 1);
    REQUIRE(multiplicative_order(FpElem(18, p), n) == 2);
    // wrong group order is detected
    REQUIRE_THROWS_AS(multiplicative_order(FpElem(2, p), factor_integer(4)), ValueError);

    // ord(a) really is minimal: a^k != 1 for 1 <= k < ord
    for (std::uint64_t a = 2; a < 19; ++a) {
        const std::uint64_t o = multiplicative_order(FpElem(a, p), n);
        for (std::uint64_t k = 1; k < o; ++k) REQUIRE(powmod_u64(a, k, 19) != 1);
        REQUIRE(powmod_u64(a, o, 19) == 1);
    }
}

TEST_CASE("polynomial division") {
    const PrimeModulus p(5);
    const Poly a = make_poly(p, {1, 0, 1});  // x^2 + 1
    const Poly b = make_poly(p, {2, 1});     // x + 2
    const auto [quo, rem] = divmod(a, b);
    REQUIRE(quo == make_poly(p, {3, 1}));  // x + 3
    REQUIRE(rem.is_zero());

    REQUIRE_THROWS_AS(divmod(a, Poly::zero(p)), ValueError);

    Rng rng(9);
    for (int i = 0; i < 200; ++i) {
        const Poly f = random_monic(rng.below(6) + 1, p, rng) * FpElem(rng.range(1, 4), p);
        const Poly g = random_monic(rng.below(4) + 1, p, rng) * FpElem(rng.range(1, 4), p);
        const auto [q2, r2] = divmod(f, g);
        REQUIRE(q2 * g + r2 == f);
        REQUIRE(r2.degree() < g.degree());
    }
}

TEST_CASE("polynomial gcd and xgcd") {
    const PrimeModulus p(5);
    const Poly a = make_poly(p, {4, 0, 1});  // x^2 - 1
    const Poly b = make_poly(p, {4, 1});     // x - 1
    REQUIRE(poly_gcd(a, b) == b);

    REQUIRE_THROWS_AS(poly_gcd(Poly::zero(p), Poly::zero(p)), ValueError);
    REQUIRE(poly_gcd(a, Poly::zero(p)) == a.monic());

    Rng rng(13);
    for (int i = 0; i < 200; ++i) {
        const Poly f = random_monic(rng.below(5) + 1, p, rng);
        const Poly g = random_monic(rng.below(5) + 1, p, rng);
        const auto [d, u, v] = poly_xgcd(f, g);
        REQUIRE(u * f + v * g == d);
        REQUIRE(d == poly_gcd(f, g));
        REQUIRE(poly_mod(f, d).is_zero());
        REQUIRE(poly_mod(g, d).is_zero());

        const Poly l = lcm_poly(f, g);
        REQUIRE(poly_mod(l, f).is_zero());
        REQUIRE(poly_mod(l, g).is_zero());
        REQUIRE(l.degree() == f.degree() + g.degree() - d.degree());
    }
}

TEST_CASE("poly_powmod") {
    const PrimeModulus p(3);
    const Poly m = make_poly(p, {1, 0, 1});  // x^2 + 1
    REQUIRE(poly_powmod(Poly::x(p), Exponent(4), m) == Poly::one(p));
    REQUIRE(poly_powmod(Poly::x(p), Exponent(2), m) == make_poly(p, {2}));
    REQUIRE_THROWS_AS(poly_powmod(Poly::x(p), Exponent(2), Poly::one(p)), ValueError);

    // agrees with naive multiply-and-reduce for small exponents
    Rng rng(17);
    const PrimeModulus q(7);
    for (int i = 0; i < 100; ++i) {
        const Poly mod = random_monic(rng.below(4) + 1, q, rng);
        const Poly f = random_monic(rng.below(5) + 1, q, rng);
        const std::uint64_t e = rng.below(30);
        Poly naive = poly_mod(Poly::one(q), mod);
        for (std::uint64_t j = 0; j < e; ++j) naive = poly_mod(naive * f, mod);
        REQUIRE(poly_powmod(f, Exponent(e), mod) == naive);
    }
}

TEST_CASE("polynomial evaluation") {
    const PrimeModulus p(7);
    const Poly f = make_poly(p, {1, 2, 0, 3});  // 3x^3 + 2x + 1
    REQUIRE(f.eval(FpElem(0, p)).value() == 1);
    REQUIRE(f.eval(FpElem(2, p)).value() == (3 * 8 + 2 * 2 + 1) % 7);
}

TEST_CASE("irreducibility over F_3, degree 2") {
    const PrimeModulus p(3);
    std::set<std::vector<std::uint64_t>> found;
    for (std::uint64_t b = 0; b < 3; ++b) {
        for (std::uint64_t c = 0; c < 3; ++c) {
            const Poly f = make_poly(p, {c, b, 1});
            bool has_root = false;
            for (std::uint64_t x = 0; x < 3; ++x) {
                if (f.eval(FpElem(x, p)).is_zero()) has_root = true;
            }
            REQUIRE(is_irreducible(f) == !has_root);
            if (!has_root) found.insert({c, b});
        }
    }
    const std::set<std::vector<std::uint64_t>> expect = {{1, 0}, {2, 1}, {2, 2}};
    REQUIRE(found == expect);  // x^2+1, x^2+x+2, x^2+2x+2
}

TEST_CASE("irreducibility, assorted degrees") {
    const PrimeModulus p2(2);
    // degree-3 over F_2: irreducible iff no root (a factorization must
    // contain a linear term)
    int count = 0;
    for (std::uint64_t c0 = 0; c0 < 2; ++c0)
        for (std::uint64_t c1 = 0; c1 < 2; ++c1)
            for (std::uint64_t c2 = 0; c2 < 2; ++c2) {
                const Poly f = make_poly(p2, {c0, c1, c2, 1});
                bool has_root = false;
                for (std::uint64_t x = 0; x < 2; ++x)
                    if (f.eval(FpElem(x, p2)).is_zero()) has_root = true;
                REQUIRE(is_irreducible(f) == !has_root);
                if (is_irreducible(f)) ++count;
            }
    REQUIRE(count == 2);

    // x^4 + x^2 + 1 = (x^2 + x + 1)^2 over F_2 has no root but is reducible
    REQUIRE(!is_irreducible(make_poly(p2, {1, 0, 1, 0, 1})));
    REQUIRE(is_irreducible(make_poly(p2, {1, 1})));
    REQUIRE_THROWS_AS(is_irreducible(make_poly(p2, {1})), ValueError);
    REQUIRE_THROWS_AS(is_irreducible(Poly::zero(p2)), ValueError);
}

TEST_CASE("random_irreducible") {
    Rng rng(2024);
    for (unsigned d : {1u, 2u, 5u, 8u}) {
        for (std::uint64_t pv : {2ull, 5ull, 13ull}) {
            const PrimeModulus p(pv);
            const Poly f = random_irreducible(d, p, rng);
            REQUIRE(f.degree() == static_cast<int>(d));
            REQUIRE(f.is_monic());
            REQUIRE(is_irreducible(f));
        }
    }
    // determinism
    Rng r1(5), r2(5);
    REQUIRE(random_irreducible(6, PrimeModulus(7), r1) == random_irreducible(6, PrimeModulus(7), r2));
}

TEST_CASE("extension field basics") {
    const PrimeModulus p(3);
    const ExtField f9(p, make_poly(p, {1, 0, 1}));  // F_9 = F_3[t]/(t^2+1)
    REQUIRE(f9.size() == 9);
    REQUIRE(f9.unit_group_order() == 8);
    REQUIRE_THROWS_AS(ExtField(p, make_poly(p, {2, 0, 1})), ValueError);  // t^2+2 = (t+1)(t+2)

    const ExtFieldElem t = ExtFieldElem::t(f9);
    REQUIRE((t * t) == ExtFieldElem::from_base(2, f9));  // t^2 = -1
    REQUIRE(multiplicative_order(t, factor_integer(8)) == 4);

    const PrimeModulus p2(2);
    const ExtField f4(p2, make_poly(p2, {1, 1, 1}));
    REQUIRE(multiplicative_order(ExtFieldElem::t(f4), factor_integer(3)) == 3);
}

TEST_CASE("extension field properties") {
    const PrimeModulus p(5);
    Rng rng(31);
    const ExtField f(p, random_irreducible(3, p, rng));  // F_125
    const std::uint64_t n = f.unit_group_order();

    for (int i = 0; i < 200; ++i) {
        std::vector<FpElem> c;
        for (int j = 0; j < 3; ++j) c.emplace_back(rng.below(5), p);
        const ExtFieldElem a(Poly(p, c), f);
        if (a.is_zero()) continue;
        REQUIRE((a * a.inverse()).is_one());
        REQUIRE(a.pow(Exponent(n)).is_one());
        REQUIRE(a.pow(Exponent(n + 3)) == a.pow(Exponent(3)));

        // Frobenius is additive
        std::vector<FpElem> c2;
        for (int j = 0; j < 3; ++j) c2.emplace_back(rng.below(5), p);
        const ExtFieldElem b(Poly(p, c2), f);
        REQUIRE((a + b).pow(Exponent(5)) == a.pow(Exponent(5)) + b.pow(Exponent(5)));
    }
    REQUIRE_THROWS_AS(ExtFieldElem::zero(f).inverse(), ValueError);
}

TEST_CASE("polynomials over an extension field") {
    const PrimeModulus p(3);
    const ExtField f9(p, make_poly(p, {1, 0, 1}));
    const ExtFieldElem t = ExtFieldElem::t(f9);

    // x^2 - t^2 = (x - t)(x + t) over F_9
    using EPoly = PolyT<ExtFieldElem>;
    const EPoly lhs(f9, {-(t * t), ExtFieldElem::zero(f9), ExtFieldElem::one(f9)});
    const EPoly fac1(f9, {-t, ExtFieldElem::one(f9)});
    const EPoly fac2(f9, {t, ExtFieldElem::one(f9)});
    REQUIRE(fac1 * fac2 == lhs);
    REQUIRE(poly_mod(lhs, fac1).is_zero());
    REQUIRE(poly_gcd(lhs, fac1) == fac1);
    REQUIRE(lhs.eval(t).is_zero());
}
