// Acceptance harness. Runs the eleven release checks end to end and prints
// one verdict line per criterion; the exit code is the number of failures.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "morlab/morlab.hpp"

namespace {

using namespace morlab;
using Clock = std::chrono::steady_clock;
using Bytes = std::vector<std::uint8_t>;

struct Outcome {
    bool ok;
    std::string detail;
};

double elapsed_s(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt_s(double s) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(2) << s << "s";
    return out.str();
}

Poly make_poly(const PrimeModulus& p, const std::vector<std::uint64_t>& coeffs) {
    std::vector<FpElem> c;
    c.reserve(coeffs.size());
    for (std::uint64_t v : coeffs) c.emplace_back(v, p);
    return Poly(p, std::move(c));
}

Bytes random_message(const PlatformParams& pp, Rng& rng) {
    // Stays below capacity by drawing one digit short of the slot count.
    const std::uint64_t p = platform_prime(pp).value();
    const std::size_t slots = std::holds_alternative<EsParams>(pp)
                                  ? 2 * std::get<EsParams>(pp).n + 1
                                  : std::get<EaParams>(pp).d;
    PlatformElement e = platform_identity_element(pp);
    std::vector<std::uint64_t> digits(slots, 0);
    for (std::size_t i = 0; i + 1 < slots; ++i) digits[i] = rng.below(p);
    if (const auto* es = std::get_if<EsParams>(&pp)) {
        std::vector<std::uint64_t> a(digits.begin(), digits.begin() + es->n);
        std::vector<std::uint64_t> b(digits.begin() + es->n, digits.begin() + 2 * es->n);
        e = EsElement(*es, std::move(a), std::move(b), digits[2 * es->n]);
    } else {
        e = VecFp(platform_prime(pp), std::move(digits));
    }
    return decode_message(pp, e);
}

VecFp random_vec(const EsParams& params, Rng& rng) {
    std::vector<std::uint64_t> v(2 * params.n);
    for (auto& x : v) x = rng.below(params.p.value());
    return VecFp(params.p, std::move(v));
}

EsElement random_element(const EsParams& params, Rng& rng) {
    std::vector<std::uint64_t> a(params.n), b(params.n);
    for (auto& x : a) x = rng.below(params.p.value());
    for (auto& x : b) x = rng.below(params.p.value());
    return EsElement(params, std::move(a), std::move(b), rng.below(params.p.value()));
}

EsAut multiplier_aut(const EsParams& params, std::uint64_t c) {
    const std::size_t n = params.n;
    MatrixFp m = MatrixFp::identity(2 * n, params.p);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, c);
    return EsAut(params, std::move(m), VecFp::zeros(2 * n, params.p), c);
}

EsAut random_aut(const EsParams& params, Rng& rng) {
    EsAut f = sample_symplectic_irreducible(params, rng);
    const std::uint64_t c = rng.range(1, params.p.value() - 1);
    EsAut g = aut_compose(multiplier_aut(params, c), f);
    return aut_validate(params, g.m(), random_vec(params, rng), g.zeta());
}

MatrixFp jordan_from_shape(const std::vector<unsigned>& shape, const PrimeModulus& p) {
    const unsigned d = std::accumulate(shape.begin(), shape.end(), 0u);
    MatrixFp m = MatrixFp::identity(d, p);
    unsigned pos = 0;
    for (unsigned s : shape) {
        for (unsigned i = 0; i + 1 < s; ++i) m.set(pos + i, pos + i + 1, 1);
        pos += s;
    }
    return m;
}

std::uint64_t expected_unipotent_order(const std::vector<unsigned>& shape, std::uint64_t p) {
    const unsigned s = *std::max_element(shape.begin(), shape.end());
    std::uint64_t ord = 1;
    while (ord < s) ord *= p;
    return ord;
}

DecryptionOracle honest_oracle(const PlatformAut& phi, std::uint64_t order) {
    return [phi, order](const PlatformAut& pub_phi_m, const PlatformAut& ct_phi_r,
                        const PlatformElement& payload) {
        for (std::uint64_t k = 0; k < order; ++k) {
            if (platform_pow(phi, Exponent(k)) == pub_phi_m) {
                const PlatformAut inv = platform_inverse(platform_pow(ct_phi_r, Exponent(k)));
                return platform_apply(inv, payload);
            }
        }
        throw NoSolutionError("honest oracle: public component is not a power of phi");
    };
}

std::string serialize_aut(const PlatformAut& f) {
    std::string out;
    detail::write_aut(out, "aut", f);
    return out;
}

// 1. Encrypt/decrypt roundtrips reproduce every message on every platform.
Outcome criterion_roundtrips() {
    const std::vector<PlatformParams> grids = {
        EsParams(PrimeModulus(3), 1), EsParams(PrimeModulus(5), 2), EsParams(PrimeModulus(7), 2),
        EaParams(PrimeModulus(3), 4), EaParams(PrimeModulus(5), 4)};
    Rng rng(101);
    int total = 0;
    for (const auto& pp : grids) {
        for (int trial = 0; trial < 100; ++trial) {
            const auto [pub, priv] = mor_keygen(pp, rng);
            const Bytes msg = random_message(pp, rng);
            const MorCiphertext ct = mor_encrypt(pub, encode_message(pp, msg), rng);
            if (decode_message(pp, mor_decrypt(priv, ct)) != msg)
                return {false, "mismatch on trial " + std::to_string(total)};
            ++total;
        }
    }
    return {true, std::to_string(total) + "/500 roundtrips"};
}

// 2. Both exponentiation paths agree on random invertible matrices.
Outcome criterion_expo_equivalence() {
    Rng rng(202);
    struct Cell {
        std::size_t d;
        std::uint64_t p;
    };
    int total = 0;
    for (const Cell cell : {Cell{2, 3}, Cell{4, 5}, Cell{8, 13}}) {
        const PrimeModulus p(cell.p);
        for (int trial = 0; trial < 100; ++trial) {
            const MatrixFp m = random_invertible_matrix(cell.d, p, rng);
            const Exponent e(rng.next());
            if (mat_pow_lg(m, e) != mat_pow_naive(m, e))
                return {false, "64-bit mismatch at d=" + std::to_string(cell.d)};
            ++total;
        }
    }
    const PrimeModulus p13(13);
    for (int trial = 0; trial < 100; ++trial) {
        const MatrixFp m = companion(random_irreducible(16, p13, rng));
        const Exponent e = Exponent::random_bits(256, rng);
        if (mat_pow_lg(m, e) != mat_pow_naive(m, e))
            return {false, "256-bit mismatch at d=16"};
        ++total;
    }
    return {true, std::to_string(total) + " agreements"};
}

// 3. The field-embedding attack recovers the exponent on conjugated
//    companion keys, verified by re-exponentiation, within the time budget.
Outcome criterion_menezes_wu() {
    const auto t0 = Clock::now();
    Rng rng(303);
    const std::uint64_t primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31};
    int total = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const unsigned d = 1 + static_cast<unsigned>(trial % 4);
        const PrimeModulus p(primes[trial % 11]);
        MatrixFp g(1, p);
        while (true) {
            g = companion(random_irreducible(d, p, rng));
            if (d > 1) {
                const MatrixFp s = random_invertible_matrix(d, p, rng);
                g = s.inverse() * g * s;
            }
            if (g.invertible()) break;
        }
        const std::uint64_t m = rng.below(std::uint64_t{1} << 20);
        const MatrixFp h = mat_pow_naive(g, Exponent(m));
        const DlogAnswer ans = menezes_wu_dlog(g, h);
        if (ans.residue != m % ans.modulus)
            return {false, "wrong residue on trial " + std::to_string(trial)};
        if (mat_pow_naive(g, Exponent(ans.residue)) != h)
            return {false, "re-exponentiation failed on trial " + std::to_string(trial)};
        ++total;
    }
    const double dt = elapsed_s(t0);
    if (dt >= 10.0) return {false, "suite took " + fmt_s(dt) + " (budget 10s)"};
    return {true, std::to_string(total) + " recoveries in " + fmt_s(dt)};
}

// 4. Inner-automorphism keys fall to the central attack in at most a
//    millisecond each, even at 31-bit primes and rank 8.
Outcome criterion_central_speed() {
    Rng rng(404);
    double worst = 0;
    int keys = 0;
    for (const std::uint64_t p : {3ull, 1009ull, 2147483647ull}) {
        for (const unsigned n : {1u, 4u, 8u}) {
            const EsParams params(PrimeModulus(p), n);
            for (int trial = 0; trial < 5; ++trial) {
                VecFp offsets = random_vec(params, rng);
                if (std::all_of(offsets.v.begin(), offsets.v.end(),
                                [](std::uint64_t x) { return x == 0; }))
                    offsets.v[0] = 1;
                const EsAut phi = make_central_aut(params, offsets);
                const std::uint64_t m = rng.below(p);
                const MorPublicKey pub{params, phi, aut_pow(phi, m)};
                double best = 1e9;
                DlogAnswer ans{0, 0};
                for (int rep = 0; rep < 3; ++rep) {
                    const auto t0 = Clock::now();
                    ans = central_aut_attack(pub);
                    best = std::min(best, elapsed_s(t0));
                }
                if (!(ans == DlogAnswer{m % p, p}))
                    return {false, "wrong exponent at p=" + std::to_string(p)};
                worst = std::max(worst, best);
                ++keys;
            }
        }
    }
    if (worst > 1e-3) {
        std::ostringstream o;
        o << "slowest key " << worst * 1e3 << "ms (budget 1ms)";
        return {false, o.str()};
    }
    std::ostringstream o;
    o << keys << " keys, slowest " << std::fixed << std::setprecision(3) << worst * 1e3 << "ms";
    return {true, o.str()};
}

// 5. The unipotent attack recovers the exponent modulo ord(u) on every
//    Jordan shape, and the 2x2 case shows the exponent on the superdiagonal.
Outcome criterion_unipotent() {
    const std::vector<std::vector<unsigned>> shapes = {
        {1}, {2}, {1, 1}, {3}, {2, 1}, {1, 1, 1},
        {4}, {3, 1}, {2, 2}, {2, 1, 1}, {1, 1, 1, 1}};
    Rng rng(505);
    int total = 0;
    for (const std::uint64_t pv : {3ull, 5ull, 7ull}) {
        const PrimeModulus p(pv);
        for (const auto& shape : shapes) {
            const MatrixFp u = jordan_from_shape(shape, p);
            const std::uint64_t ord = expected_unipotent_order(shape, pv);
            for (int trial = 0; trial < 100; ++trial) {
                const std::uint64_t m = rng.below(std::uint64_t{1} << 30);
                const MatrixFp h = mat_pow_lg(u, Exponent(m));
                const DlogAnswer ans = unipotent_dlog(u, h);
                if (!(ans == DlogAnswer{m % ord, ord}))
                    return {false, "wrong answer at p=" + std::to_string(pv)};
                if (mat_pow_lg(u, Exponent(ans.residue)) != h)
                    return {false, "re-exponentiation failed at p=" + std::to_string(pv)};
                ++total;
            }
        }
        // 2x2 single block: the top-right entry of u^m is m mod p itself.
        const MatrixFp u2 = jordan_from_shape({2}, p);
        for (std::uint64_t m = 0; m < 4 * pv; ++m) {
            const MatrixFp h = mat_pow_naive(u2, Exponent(m));
            if (h.at(0, 1) != m % pv) return {false, "superdiagonal identity failed"};
            if (!(unipotent_dlog(u2, h) == DlogAnswer{m % pv, pv}))
                return {false, "superdiagonal recovery failed"};
            ++total;
        }
    }
    return {true, std::to_string(total) + " recoveries over 11 shapes x {3,5,7}"};
}

// 6. Companion matrices of irreducibles act irreducibly; every non-identity
//    unipotent matrix has a proper invariant subspace. Both exhaustively.
Outcome criterion_invariant_subspaces() {
    int companions = 0;
    for (const std::uint64_t pv : {2ull, 3ull}) {
        const PrimeModulus p(pv);
        for (unsigned deg = 1; deg <= 3; ++deg) {
            std::vector<std::uint64_t> coeffs(deg + 1, 0);
            coeffs[deg] = 1;
            const std::uint64_t count = [&] {
                std::uint64_t c = 1;
                for (unsigned i = 0; i < deg; ++i) c *= pv;
                return c;
            }();
            for (std::uint64_t code = 0; code < count; ++code) {
                std::uint64_t rest = code;
                for (unsigned i = 0; i < deg; ++i) {
                    coeffs[i] = rest % pv;
                    rest /= pv;
                }
                const Poly f = make_poly(p, coeffs);
                if (!is_irreducible(f)) continue;
                if (invariant_subspace_search(companion(f)).has_value())
                    return {false, "irreducible companion has invariant subspace"};
                ++companions;
            }
        }
    }

    int unipotents = 0;
    const PrimeModulus p3(3);
    for (unsigned d = 1; d <= 3; ++d) {
        std::uint64_t count = 1;
        for (unsigned i = 0; i < d * d; ++i) count *= 3;
        for (std::uint64_t code = 0; code < count; ++code) {
            MatrixFp m(d, p3);
            std::uint64_t rest = code;
            for (unsigned i = 0; i < d; ++i)
                for (unsigned j = 0; j < d; ++j) {
                    m.set(i, j, rest % 3);
                    rest /= 3;
                }
            const MatrixFp n = m - MatrixFp::identity(d, p3);
            if (n.is_zero()) continue;  // identity
            MatrixFp nk = n;
            for (unsigned i = 1; i < d; ++i) nk = nk * n;
            if (!nk.is_zero()) continue;  // not unipotent
            if (!invariant_subspace_search(m).has_value())
                return {false, "unipotent matrix without witness"};
            ++unipotents;
        }
    }
    return {true, std::to_string(companions) + " companions, " +
                      std::to_string(unipotents) + " unipotents"};
}

// 7. The group law matches the 3x3 unitriangular matrix model
//    under (a,b,c) -> [[1,b,-c],[0,1,a],[0,0,1]].
Outcome criterion_group_law() {
    const auto model = [](const EsElement& g) {
        const PrimeModulus& p = g.params().p;
        MatrixFp m = MatrixFp::identity(3, p);
        m.set(0, 1, g.b()[0]);
        m.set(0, 2, (p.value() - g.c()) % p.value());
        m.set(1, 2, g.a()[0]);
        return m;
    };
    const auto check = [&](const EsElement& g, const EsElement& h) {
        return model(es_mul(g, h)) == model(g) * model(h);
    };

    const EsParams e3(PrimeModulus(3), 1);
    int total = 0;
    for (std::uint64_t i = 0; i < 27; ++i) {
        const EsElement g(e3, {i % 3}, {(i / 3) % 3}, i / 9);
        for (std::uint64_t j = 0; j < 27; ++j) {
            const EsElement h(e3, {j % 3}, {(j / 3) % 3}, j / 9);
            if (!check(g, h)) return {false, "exhaustive p=3 mismatch"};
            ++total;
        }
    }
    Rng rng(707);
    for (const std::uint64_t pv : {5ull, 7ull}) {
        const EsParams params(PrimeModulus(pv), 1);
        for (int trial = 0; trial < 2000; ++trial) {
            if (!check(random_element(params, rng), random_element(params, rng)))
                return {false, "random p=" + std::to_string(pv) + " mismatch"};
            ++total;
        }
    }
    return {true, std::to_string(total) + " products checked"};
}

// 8. Automorphism algebra: homomorphism, zeta multiplicativity under
//    composition, inverse, and power coherence; 1000 trials per property.
Outcome criterion_aut_algebra() {
    const EsParams params(PrimeModulus(5), 2);
    Rng rng(808);
    for (int trial = 0; trial < 1000; ++trial) {
        const EsAut f = random_aut(params, rng);
        const EsElement g = random_element(params, rng);
        const EsElement h = random_element(params, rng);
        if (aut_apply(f, es_mul(g, h)) != es_mul(aut_apply(f, g), aut_apply(f, h)))
            return {false, "homomorphism property failed"};
    }
    for (int trial = 0; trial < 1000; ++trial) {
        const EsAut f1 = random_aut(params, rng);
        const EsAut f2 = random_aut(params, rng);
        const EsAut comp = aut_compose(f2, f1);
        if (comp.zeta() != f2.zeta() * f1.zeta() % 5)
            return {false, "zeta multiplicativity failed"};
        const EsElement g = random_element(params, rng);
        if (aut_apply(comp, g) != aut_apply(f2, aut_apply(f1, g)))
            return {false, "composition coherence failed"};
    }
    const EsAut id = EsAut::identity(params);
    for (int trial = 0; trial < 1000; ++trial) {
        const EsAut f = random_aut(params, rng);
        const EsAut inv = aut_inverse(f);
        if (aut_compose(inv, f) != id || aut_compose(f, inv) != id)
            return {false, "inverse property failed"};
    }
    for (int trial = 0; trial < 1000; ++trial) {
        const EsAut f = random_aut(params, rng);
        const std::uint64_t a = rng.below(64), b = rng.below(64);
        if (aut_pow(f, a + b) != aut_compose(aut_pow(f, a), aut_pow(f, b)))
            return {false, "power additivity failed"};
        EsAut cube = aut_compose(f, aut_compose(f, f));
        if (aut_pow(f, 3) != cube) return {false, "power coherence failed"};
    }
    return {true, "4 properties x 1000 trials"};
}

// 9. A decryption oracle yields the composite power phi^(m'm'') exactly,
//    byte for byte once serialized.
Outcome criterion_dh_reduction() {
    const std::vector<PlatformParams> grids = {EsParams(PrimeModulus(5), 2),
                                               EaParams(PrimeModulus(5), 4)};
    Rng rng(909);
    int total = 0;
    for (const auto& pp : grids) {
        for (int trial = 0; trial < 10; ++trial) {
            const auto [pub, priv] = mor_keygen(pp, rng);
            const PlatformAut& phi = priv.phi;
            const std::uint64_t order = priv.order_phi;
            const std::uint64_t m1 = rng.range(1, order - 1);
            const std::uint64_t m2 = rng.range(1, order - 1);
            const DecryptionOracle oracle = honest_oracle(phi, order);
            const PlatformAut rec = dh_from_decryption_oracle(
                platform_pow(phi, Exponent(m1)), platform_pow(phi, Exponent(m2)), oracle);
            const PlatformAut expect = platform_pow(phi, Exponent(m1 * m2));
            if (!(rec == expect)) return {false, "recovered automorphism differs"};
            if (serialize_aut(rec) != serialize_aut(expect))
                return {false, "serialized forms differ"};
            ++total;
        }
    }
    return {true, std::to_string(total) + " oracle reductions"};
}

// 10. Orthogonal group orders over F_2, with the n=2 minus case
//     cross-checked against an inline evaluation of the product formula.
Outcome criterion_orthogonal_orders() {
    if (orthogonal_group_order(1, 1) != 2) return {false, "(1,+1) != 2"};
    if (orthogonal_group_order(1, -1) != 6) return {false, "(1,-1) != 6"};
    if (orthogonal_group_order(2, -1) != 120) return {false, "(2,-1) != 120"};
    // Independent evaluation at n=2, eps=-1: 2^(n(n-1)+1) (2^n+1) (2^2-1).
    const std::uint64_t byhand = (std::uint64_t{1} << 3) * (4 + 1) * (4 - 1);
    if (byhand != 120) return {false, "product formula evaluates to " + std::to_string(byhand)};
    if (orthogonal_group_order(2, -1) != byhand) return {false, "cross-check failed"};
    return {true, "2 / 6 / 120, formula cross-checked"};
}

std::string g_bench_table;

// 11. The benchmark's correctness gate holds and a full report comes out
//     for d in {4,8,16} with 256-bit exponents.
Outcome criterion_bench_gate() {
    const BenchReport report = bench_expo();  // throws if the gate fails
    if (report.rows.size() != 6)
        return {false, "expected 6 rows, got " + std::to_string(report.rows.size())};
    for (const BenchRow& row : report.rows) {
        if (row.exp_bits != 256) return {false, "wrong exponent width in report"};
        if (row.median_ms <= 0) return {false, "non-positive timing in report"};
    }
    g_bench_table = format_table(report);
    return {true, "gate held, 6 rows reported"};
}

}  // namespace

int main() {
    struct Entry {
        const char* name;
        Outcome (*fn)();
    };
    const Entry entries[] = {
        {"protocol-roundtrips", criterion_roundtrips},
        {"exponentiation-equivalence", criterion_expo_equivalence},
        {"menezes-wu-recovery", criterion_menezes_wu},
        {"central-attack-speed", criterion_central_speed},
        {"unipotent-recovery", criterion_unipotent},
        {"invariant-subspace-lemmas", criterion_invariant_subspaces},
        {"group-law-oracle", criterion_group_law},
        {"automorphism-algebra", criterion_aut_algebra},
        {"oracle-to-dh-reduction", criterion_dh_reduction},
        {"orthogonal-order-formula", criterion_orthogonal_orders},
        {"benchmark-gate", criterion_bench_gate},
    };

    int failures = 0;
    int idx = 0;
    for (const Entry& e : entries) {
        ++idx;
        Outcome out{false, ""};
        const auto t0 = Clock::now();
        try {
            out = e.fn();
        } catch (const std::exception& ex) {
            out = {false, std::string("exception: ") + ex.what()};
        }
        std::ostringstream line;
        line << (out.ok ? "PASS" : "FAIL") << "  criterion " << std::setw(2) << idx << ": "
             << std::left << std::setw(28) << e.name << std::right << "  " << fmt_s(elapsed_s(t0));
        if (!out.detail.empty()) line << "  [" << out.detail << "]";
        std::cout << line.str() << "\n" << std::flush;
        if (!out.ok) ++failures;
    }
    std::cout << "\n" << (11 - failures) << "/11 criteria passed\n";
    if (!g_bench_table.empty()) {
        std::cout << "\nbenchmark report:\n" << g_bench_table;
    }
    return failures;
}
