#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "morlab/errors.hpp"
#include "morlab/mor.hpp"

namespace morlab {

// Versioned line-based text artifacts. Layout is fixed so that writing is
// canonical: header "<KIND> v1", then "key: value" lines in a set order,
// matrices row-major as space-separated decimals, a trailing newline.
// Parsing is the exact inverse and revalidates every arithmetic invariant,
// so a tampered file cannot produce an invalid in-memory object.

namespace detail {

inline std::string join_u64(const std::vector<std::uint64_t>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(xs[i]);
    }
    return out;
}

inline std::string matrix_line(const MatrixFp& m) {
    std::vector<std::uint64_t> flat;
    flat.reserve(m.dim() * m.dim());
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j) flat.push_back(m.at(i, j));
    return join_u64(flat);
}

inline void write_platform(std::string& out, const PlatformParams& pp) {
    if (const auto* es = std::get_if<EsParams>(&pp)) {
        out += "platform: extraspecial\n";
        out += "p: " + std::to_string(es->p.value()) + "\n";
        out += "n: " + std::to_string(es->n) + "\n";
    } else {
        const EaParams& ea = std::get<EaParams>(pp);
        out += "platform: elementary\n";
        out += "p: " + std::to_string(ea.p.value()) + "\n";
        out += "d: " + std::to_string(ea.d) + "\n";
    }
}

inline void write_aut(std::string& out, const std::string& label, const PlatformAut& f) {
    out += label + ":\n";
    if (const auto* fe = std::get_if<EsAut>(&f)) {
        out += "M: " + matrix_line(fe->m()) + "\n";
        out += "v: " + join_u64(fe->v().v) + "\n";
        out += "zeta: " + std::to_string(fe->zeta()) + "\n";
    } else {
        out += "M: " + matrix_line(std::get<MatrixFp>(f)) + "\n";
    }
}

inline std::string element_line(const PlatformElement& a) {
    if (const auto* ge = std::get_if<EsElement>(&a)) {
        std::vector<std::uint64_t> flat = ge->a();
        flat.insert(flat.end(), ge->b().begin(), ge->b().end());
        flat.push_back(ge->c());
        return join_u64(flat);
    }
    return join_u64(std::get<VecFp>(a).v);
}

class LineReader {
public:
    explicit LineReader(const std::string& text) {
        std::string cur;
        for (char c : text) {
            if (c == '\n') {
                lines_.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        if (!cur.empty()) lines_.push_back(cur);  // tolerate a missing final newline
    }

    std::string next(const char* what) {
        if (pos_ >= lines_.size())
            throw FormatError(std::string("artifact truncated: missing ") + what);
        return lines_[pos_++];
    }

    std::string value(const std::string& key) {
        const std::string line = next(key.c_str());
        const std::string prefix = key + ": ";
        if (line.rfind(prefix, 0) != 0)
            throw FormatError("expected line '" + key + ": ...', got '" + line + "'");
        return line.substr(prefix.size());
    }

    void marker(const std::string& label) {
        const std::string line = next(label.c_str());
        if (line != label + ":")
            throw FormatError("expected section '" + label + ":', got '" + line + "'");
    }

    void finish() const {
        if (pos_ != lines_.size()) throw FormatError("trailing data after artifact body");
    }

private:
    std::vector<std::string> lines_;
    std::size_t pos_ = 0;
};

inline std::uint64_t parse_u64(const std::string& s) {
    if (s.empty() || s.size() > 20) throw FormatError("bad integer '" + s + "'");
    std::uint64_t v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') throw FormatError("bad integer '" + s + "'");
        const std::uint64_t d = static_cast<std::uint64_t>(c - '0');
        if (v > (UINT64_MAX - d) / 10) throw FormatError("integer overflow in '" + s + "'");
        v = v * 10 + d;
    }
    return v;
}

inline std::vector<std::uint64_t> parse_u64_list(const std::string& s, std::size_t count,
                                                 std::uint64_t bound) {
    std::vector<std::uint64_t> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(parse_u64(tok));
    if (out.size() != count)
        throw FormatError("expected " + std::to_string(count) + " values, got " +
                          std::to_string(out.size()));
    for (std::uint64_t v : out)
        if (v >= bound) throw FormatError("entry " + std::to_string(v) + " out of range");
    return out;
}

inline void header(LineReader& r, const std::string& kind) {
    const std::string line = r.next("header");
    const std::size_t sp = line.find(' ');
    const std::string got_kind = sp == std::string::npos ? line : line.substr(0, sp);
    const std::string got_ver = sp == std::string::npos ? "" : line.substr(sp + 1);
    if (got_kind != kind)
        throw FormatError("expected a " + kind + " artifact, got '" + got_kind + "'");
    if (got_ver != "v1") throw FormatError("unsupported " + kind + " version '" + got_ver + "'");
}

inline PlatformParams read_platform(LineReader& r) {
    const std::string kind = r.value("platform");
    const PrimeModulus p(parse_u64(r.value("p")));
    if (kind == "extraspecial") return EsParams{p, parse_u64(r.value("n"))};
    if (kind == "elementary") return EaParams{p, parse_u64(r.value("d"))};
    throw FormatError("unknown platform '" + kind + "'");
}

inline PlatformAut read_aut(LineReader& r, const std::string& label, const PlatformParams& pp) {
    r.marker(label);
    const PrimeModulus& p = platform_prime(pp);
    try {
        if (const auto* es = std::get_if<EsParams>(&pp)) {
            const std::size_t dim = 2 * es->n;
            const auto flat = parse_u64_list(r.value("M"), dim * dim, p.value());
            MatrixFp m(dim, p);
            for (std::size_t i = 0; i < dim; ++i)
                for (std::size_t j = 0; j < dim; ++j) m.set(i, j, flat[i * dim + j]);
            VecFp v(p, parse_u64_list(r.value("v"), dim, p.value()));
            const std::uint64_t zeta = parse_u64(r.value("zeta"));
            return aut_validate(*es, m, v, zeta);
        }
        const EaParams& ea = std::get<EaParams>(pp);
        const auto flat = parse_u64_list(r.value("M"), ea.d * ea.d, p.value());
        MatrixFp m(ea.d, p);
        for (std::size_t i = 0; i < ea.d; ++i)
            for (std::size_t j = 0; j < ea.d; ++j) m.set(i, j, flat[i * ea.d + j]);
        PlatformAut f{std::move(m)};
        platform_check_aut(pp, f);
        return f;
    } catch (const ValueError& e) {
        throw ValueError(std::string("invalid automorphism in section '") + label +
                         "': " + e.what());
    }
}

inline PlatformElement read_element(LineReader& r, const PlatformParams& pp) {
    const PrimeModulus& p = platform_prime(pp);
    if (const auto* es = std::get_if<EsParams>(&pp)) {
        auto flat = parse_u64_list(r.value("payload"), 2 * es->n + 1, p.value());
        std::vector<std::uint64_t> a(flat.begin(), flat.begin() + es->n);
        std::vector<std::uint64_t> b(flat.begin() + es->n, flat.begin() + 2 * es->n);
        return EsElement(*es, std::move(a), std::move(b), flat[2 * es->n]);
    }
    const EaParams& ea = std::get<EaParams>(pp);
    return VecFp(p, parse_u64_list(r.value("payload"), ea.d, p.value()));
}

}  // namespace detail

inline std::string write_artifact(const MorPublicKey& pub) {
    std::string out = "MOR-PUBLIC v1\n";
    detail::write_platform(out, pub.platform);
    detail::write_aut(out, "phi", pub.phi);
    detail::write_aut(out, "phim", pub.phi_m);
    return out;
}

inline std::string write_artifact(const MorPrivateKey& priv) {
    std::string out = "MOR-PRIVATE v1\n";
    detail::write_platform(out, priv.platform);
    out += "m: " + std::to_string(priv.m) + "\n";
    out += "order: " + std::to_string(priv.order_phi) + "\n";
    detail::write_aut(out, "phi", priv.phi);
    return out;
}

inline std::string write_artifact(const MorCiphertext& ct) {
    std::string out = "MOR-CT v1\n";
    detail::write_platform(out, ct.platform);
    detail::write_aut(out, "phir", ct.phi_r);
    out += "payload: " + detail::element_line(ct.payload) + "\n";
    return out;
}

inline MorPublicKey parse_public(const std::string& text) {
    detail::LineReader r(text);
    detail::header(r, "MOR-PUBLIC");
    const PlatformParams pp = detail::read_platform(r);
    PlatformAut phi = detail::read_aut(r, "phi", pp);
    PlatformAut phim = detail::read_aut(r, "phim", pp);
    r.finish();
    return MorPublicKey{pp, std::move(phi), std::move(phim)};
}

inline MorPrivateKey parse_private(const std::string& text) {
    detail::LineReader r(text);
    detail::header(r, "MOR-PRIVATE");
    const PlatformParams pp = detail::read_platform(r);
    const std::uint64_t m = detail::parse_u64(r.value("m"));
    const std::uint64_t order = detail::parse_u64(r.value("order"));
    PlatformAut phi = detail::read_aut(r, "phi", pp);
    r.finish();
    if (m == 0 || m >= order) throw ValueError("private key invariant violated: need 1 <= m < order");
    if (!(platform_pow(phi, Exponent(order)) == platform_identity(pp)))
        throw ValueError("private key invariant violated: phi^order is not the identity");
    return MorPrivateKey{pp, m, order, std::move(phi)};
}

inline MorCiphertext parse_ciphertext(const std::string& text) {
    detail::LineReader r(text);
    detail::header(r, "MOR-CT");
    const PlatformParams pp = detail::read_platform(r);
    PlatformAut phir = detail::read_aut(r, "phir", pp);
    PlatformElement payload = detail::read_element(r, pp);
    r.finish();
    return MorCiphertext{pp, std::move(phir), std::move(payload)};
}

}  // namespace morlab
