#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "morlab/errors.hpp"
#include "morlab/mor.hpp"

namespace morlab {

struct BenchRow {
    std::string op;
    std::string params;
    unsigned exp_bits;
    unsigned reps;
    double median_ms;
    std::string baseline;  // op whose median the ratio divides by
    double ratio;
};

struct BenchReport {
    std::vector<BenchRow> rows;
};

// Timed results land here so the optimizer cannot drop the work.
inline volatile std::uint64_t bench_sink = 0;

namespace detail {

template <class F>
double median_ms(unsigned reps, F&& body) {
    if (reps == 0) throw ValueError("bench: repetitions must be >= 1");
    std::vector<double> times;
    times.reserve(reps);
    for (unsigned i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        body();
        const auto t1 = std::chrono::steady_clock::now();
        times.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    std::sort(times.begin(), times.end());
    return times[times.size() / 2];
}

inline std::uint64_t next_prime_at_least(std::uint64_t n) {
    while (!is_prime_u64(n)) ++n;
    return n;
}

inline std::uint64_t probe(const PlatformElement& a) {
    if (const auto* ge = std::get_if<EsElement>(&a)) return ge->c();
    return std::get<VecFp>(a).v.front();
}

inline std::uint64_t probe(const MorCiphertext& ct) { return probe(ct.payload); }

// Smallest usable generator-like element: largest order among small
// candidates, preferring a primitive root.
inline FpElem pick_generator(const PrimeModulus& p) {
    const FactoredInteger group = factor_integer(p.value() - 1);
    FpElem best = FpElem(1, p);
    std::uint64_t best_ord = 1;
    for (std::uint64_t c = 2; c < 64 && c < p.value(); ++c) {
        const FpElem g(c, p);
        const std::uint64_t ord = multiplicative_order(g, group);
        if (ord == p.value() - 1) return g;
        if (ord > best_ord) {
            best = g;
            best_ord = ord;
        }
    }
    return best;
}

}  // namespace detail

// Naive square-and-multiply against the conjugation route, on companion
// matrices of random irreducible polynomials. Both paths must produce the
// same matrix before any timing runs (the correctness gate).
inline BenchReport bench_expo(const std::vector<std::size_t>& dims = {4, 8, 16},
                              std::uint64_t p = 13, unsigned bits = 256, unsigned reps = 7,
                              std::uint64_t seed = 1) {
    BenchReport rep;
    const PrimeModulus mod(p);
    Rng rng(seed);
    for (const std::size_t d : dims) {
        const MatrixFp g = companion(random_irreducible(static_cast<unsigned>(d), mod, rng));
        const Exponent e = Exponent::random_bits(bits, rng);

        if (mat_pow_naive(g, e) != mat_pow_lg(g, e))
            throw Error("bench_expo: correctness gate failed, exponentiation paths disagree");

        const std::string params = "d=" + std::to_string(d) + " p=" + std::to_string(p);
        const double tn = detail::median_ms(reps, [&] { bench_sink = mat_pow_naive(g, e).at(0, 0); });
        const double tl = detail::median_ms(reps, [&] { bench_sink = mat_pow_lg(g, e).at(0, 0); });
        rep.rows.push_back({"mat_pow_naive", params, bits, reps, tn, "mat_pow_naive", 1.0});
        rep.rows.push_back({"mat_pow_lg", params, bits, reps, tl, "mat_pow_naive", tl / tn});
    }
    return rep;
}

// MOR on the extra-special grid against ElGamal in F_q^x at a matched
// modulus q >= p^{2n+1}, per operation.
inline BenchReport bench_protocol(const std::vector<std::pair<std::uint64_t, std::size_t>>& grid =
                                      {{3, 1}, {5, 2}, {7, 2}},
                                  unsigned reps = 15, std::uint64_t seed = 2) {
    BenchReport rep;
    for (const auto& [pv, n] : grid) {
        const EsParams es{PrimeModulus(pv), n};
        const PlatformParams pp{es};
        Rng rng(seed);
        const auto [pub, priv] = mor_keygen(pp, rng);
        const PlatformElement msg = encode_message(pp, {0x01});
        const MorCiphertext ct = mor_encrypt(pub, msg, rng);
        const unsigned bits = static_cast<unsigned>(Exponent(priv.order_phi).bit_length());
        const std::string mor_params =
            "extraspecial p=" + std::to_string(pv) + " n=" + std::to_string(n);

        std::uint64_t ctr = seed;
        const double tme = detail::median_ms(reps, [&] {
            Rng r(++ctr);
            bench_sink = detail::probe(mor_encrypt(pub, msg, r));
        });
        const double tmd =
            detail::median_ms(reps, [&] { bench_sink = detail::probe(mor_decrypt(priv, ct)); });

        const std::uint64_t q = detail::next_prime_at_least(checked_pow_u64(pv, 2 * n + 1));
        const PrimeModulus qm(q);
        const FpElem g = detail::pick_generator(qm);
        Rng erng(seed + 1);
        const auto [epub, epriv] = elgamal_keygen(qm, g, erng);
        const FpElem ea(2 % q, qm);
        const ElGamalCiphertext ect = elgamal_encrypt(epub, ea, erng);
        const std::string eg_params = "F_q^x q=" + std::to_string(q);

        const double tee = detail::median_ms(reps, [&] {
            Rng r(++ctr);
            bench_sink = elgamal_encrypt(epub, ea, r).c2.value();
        });
        const double ted =
            detail::median_ms(reps, [&] { bench_sink = elgamal_decrypt(epriv, ect).value(); });

        rep.rows.push_back(
            {"elgamal_encrypt", eg_params, bits, reps, tee, "elgamal_encrypt", 1.0});
        rep.rows.push_back(
            {"mor_encrypt", mor_params, bits, reps, tme, "elgamal_encrypt", tme / tee});
        rep.rows.push_back(
            {"elgamal_decrypt", eg_params, bits, reps, ted, "elgamal_decrypt", 1.0});
        rep.rows.push_back(
            {"mor_decrypt", mor_params, bits, reps, tmd, "elgamal_decrypt", tmd / ted});
    }
    return rep;
}

inline std::string format_table(const BenchReport& rep) {
    std::ostringstream out;
    out << std::left << std::setw(16) << "op" << std::setw(26) << "params" << std::right
        << std::setw(6) << "bits" << std::setw(6) << "reps" << std::setw(12) << "median_ms"
        << "  " << std::left << std::setw(16) << "baseline" << std::right << std::setw(8)
        << "ratio" << "\n";
    for (const BenchRow& r : rep.rows) {
        out << std::left << std::setw(16) << r.op << std::setw(26) << r.params << std::right
            << std::setw(6) << r.exp_bits << std::setw(6) << r.reps << std::setw(12) << std::fixed
            << std::setprecision(4) << r.median_ms << "  " << std::left << std::setw(16)
            << r.baseline << std::right << std::setw(8) << std::setprecision(2) << r.ratio
            << "\n";
    }
    return out.str();
}

inline std::string format_machine(const BenchReport& rep) {
    std::ostringstream out;
    for (const BenchRow& r : rep.rows) {
        out << "row: op=" << r.op << " params=\"" << r.params << "\" bits=" << r.exp_bits
            << " reps=" << r.reps << " median_ms=" << std::fixed << std::setprecision(6)
            << r.median_ms << " baseline=" << r.baseline << " ratio=" << std::setprecision(4)
            << r.ratio << "\n";
    }
    return out.str();
}

}  // namespace morlab
