#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "morlab/errors.hpp"
#include "morlab/extfield.hpp"
#include "morlab/fp.hpp"
#include "morlab/poly.hpp"
#include "morlab/rng.hpp"

namespace morlab {

// Column vector over F_p.
struct VecFp {
    PrimeModulus mod;
    std::vector<std::uint64_t> v;

    VecFp(PrimeModulus p, std::vector<std::uint64_t> values) : mod(p), v(std::move(values)) {
        for (std::uint64_t& x : v) x %= mod.value();
    }
    static VecFp zeros(std::size_t n, PrimeModulus p) {
        return VecFp(p, std::vector<std::uint64_t>(n, 0));
    }

    std::size_t size() const { return v.size(); }
    bool is_zero() const {
        return std::all_of(v.begin(), v.end(), [](std::uint64_t x) { return x == 0; });
    }
    bool operator==(const VecFp& o) const { return mod == o.mod && v == o.v; }
    bool operator!=(const VecFp& o) const { return !(*this == o); }
};

// Square matrix over F_p, row-major, entries kept reduced.
class MatrixFp {
public:
    MatrixFp(std::size_t dim, PrimeModulus p) : dim_(dim), p_(p), e_(dim * dim, 0) {
        if (dim == 0) throw ValueError("MatrixFp: dimension must be >= 1");
    }

    static MatrixFp identity(std::size_t dim, PrimeModulus p) {
        MatrixFp m(dim, p);
        for (std::size_t i = 0; i < dim; ++i) m.set(i, i, 1);
        return m;
    }

    std::size_t dim() const { return dim_; }
    const PrimeModulus& mod() const { return p_; }

    std::uint64_t at(std::size_t i, std::size_t j) const { return e_[i * dim_ + j]; }
    void set(std::size_t i, std::size_t j, std::uint64_t v) { e_[i * dim_ + j] = v % p_.value(); }

    bool operator==(const MatrixFp& o) const { return dim_ == o.dim_ && p_ == o.p_ && e_ == o.e_; }
    bool operator!=(const MatrixFp& o) const { return !(*this == o); }

    bool is_identity() const { return *this == identity(dim_, p_); }
    bool is_zero() const {
        return std::all_of(e_.begin(), e_.end(), [](std::uint64_t x) { return x == 0; });
    }

    MatrixFp operator+(const MatrixFp& o) const {
        check(o);
        MatrixFp r(dim_, p_);
        for (std::size_t k = 0; k < e_.size(); ++k) r.e_[k] = p_.add(e_[k], o.e_[k]);
        return r;
    }

    MatrixFp operator-(const MatrixFp& o) const {
        check(o);
        MatrixFp r(dim_, p_);
        for (std::size_t k = 0; k < e_.size(); ++k) r.e_[k] = p_.sub(e_[k], o.e_[k]);
        return r;
    }

    MatrixFp operator*(const MatrixFp& o) const {
        check(o);
        MatrixFp r(dim_, p_);
        for (std::size_t i = 0; i < dim_; ++i) {
            for (std::size_t k = 0; k < dim_; ++k) {
                const std::uint64_t a = at(i, k);
                if (a == 0) continue;
                for (std::size_t j = 0; j < dim_; ++j) {
                    r.e_[i * dim_ + j] = (r.e_[i * dim_ + j] + mulmod_u64(a, o.at(k, j), p_.value())) % p_.value();
                }
            }
        }
        return r;
    }

    MatrixFp scaled(std::uint64_t s) const {
        MatrixFp r(dim_, p_);
        for (std::size_t k = 0; k < e_.size(); ++k) r.e_[k] = p_.mul(e_[k], s);
        return r;
    }

    MatrixFp transpose() const {
        MatrixFp r(dim_, p_);
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j) r.set(j, i, at(i, j));
        return r;
    }

    std::vector<std::uint64_t> mul_vec(const std::vector<std::uint64_t>& x) const {
        if (x.size() != dim_) throw ValueError("MatrixFp::mul_vec: size mismatch");
        std::vector<std::uint64_t> r(dim_, 0);
        for (std::size_t i = 0; i < dim_; ++i) {
            unsigned __int128 acc = 0;
            for (std::size_t j = 0; j < dim_; ++j) acc += static_cast<unsigned __int128>(at(i, j)) * x[j];
            r[i] = static_cast<std::uint64_t>(acc % p_.value());
        }
        return r;
    }

    VecFp apply(const VecFp& x) const {
        if (x.mod != p_) throw ValueError("MatrixFp::apply: modulus mismatch");
        return VecFp(p_, mul_vec(x.v));
    }

    std::uint64_t det() const {
        MatrixFp a = *this;
        std::uint64_t d = 1;
        for (std::size_t col = 0; col < dim_; ++col) {
            std::size_t piv = col;
            while (piv < dim_ && a.at(piv, col) == 0) ++piv;
            if (piv == dim_) return 0;
            if (piv != col) {
                a.swap_rows(piv, col);
                d = p_.neg(d);
            }
            d = p_.mul(d, a.at(col, col));
            const std::uint64_t inv = p_.inv(a.at(col, col));
            for (std::size_t r = col + 1; r < dim_; ++r) {
                const std::uint64_t f = p_.mul(a.at(r, col), inv);
                if (f == 0) continue;
                for (std::size_t c = col; c < dim_; ++c) {
                    a.set(r, c, p_.sub(a.at(r, c), p_.mul(f, a.at(col, c))));
                }
            }
        }
        return d;
    }

    bool invertible() const { return det() != 0; }

    MatrixFp inverse() const {
        MatrixFp a = *this;
        MatrixFp inv = identity(dim_, p_);
        for (std::size_t col = 0; col < dim_; ++col) {
            std::size_t piv = col;
            while (piv < dim_ && a.at(piv, col) == 0) ++piv;
            if (piv == dim_) throw ValueError("MatrixFp::inverse: matrix is singular");
            a.swap_rows(piv, col);
            inv.swap_rows(piv, col);
            const std::uint64_t s = p_.inv(a.at(col, col));
            a.scale_row(col, s);
            inv.scale_row(col, s);
            for (std::size_t r = 0; r < dim_; ++r) {
                if (r == col) continue;
                const std::uint64_t f = a.at(r, col);
                if (f == 0) continue;
                a.submul_row(r, col, f);
                inv.submul_row(r, col, f);
            }
        }
        return inv;
    }

private:
    std::size_t dim_;
    PrimeModulus p_;
    std::vector<std::uint64_t> e_;

    void check(const MatrixFp& o) const {
        if (dim_ != o.dim_ || p_ != o.p_) throw ValueError("MatrixFp: dimension or modulus mismatch");
    }
    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < dim_; ++j) std::swap(e_[a * dim_ + j], e_[b * dim_ + j]);
    }
    void scale_row(std::size_t r, std::uint64_t s) {
        for (std::size_t j = 0; j < dim_; ++j) e_[r * dim_ + j] = p_.mul(e_[r * dim_ + j], s);
    }
    // row r -= f * row src
    void submul_row(std::size_t r, std::size_t src, std::uint64_t f) {
        for (std::size_t j = 0; j < dim_; ++j) {
            e_[r * dim_ + j] = p_.sub(e_[r * dim_ + j], p_.mul(f, e_[src * dim_ + j]));
        }
    }
};

inline MatrixFp mat_pow_naive(const MatrixFp& m, const Exponent& e) {
    return pow_square_multiply(m, e, MatrixFp::identity(m.dim(), m.mod()),
                               [](const MatrixFp& a, const MatrixFp& b) { return a * b; });
}

// f(M), by Horner.
inline MatrixFp poly_eval_matrix(const Poly& f, const MatrixFp& m) {
    if (!(f.context() == m.mod())) throw ValueError("poly_eval_matrix: modulus mismatch");
    MatrixFp acc(m.dim(), m.mod());
    const MatrixFp id = MatrixFp::identity(m.dim(), m.mod());
    for (int i = f.degree(); i >= 0; --i) {
        acc = acc * m + id.scaled(f.coeff(i).value());
    }
    return acc;
}

// f(M) v, by Horner on the vector; costs deg(f) matrix-vector products.
inline std::vector<std::uint64_t> poly_eval_matrix_vec(const Poly& f, const MatrixFp& m,
                                                       const std::vector<std::uint64_t>& v) {
    const PrimeModulus& p = m.mod();
    std::vector<std::uint64_t> acc(m.dim(), 0);
    for (int i = f.degree(); i >= 0; --i) {
        acc = m.mul_vec(acc);
        const std::uint64_t c = f.coeff(i).value();
        if (c != 0) {
            for (std::size_t j = 0; j < acc.size(); ++j) acc[j] = p.add(acc[j], p.mul(c, v[j]));
        }
    }
    return acc;
}

// Characteristic polynomial: similarity reduction to upper Hessenberg form,
// then the leading-principal-minor recurrence. O(d^3) and valid over any
// prime field, unlike trace-based methods that divide by small integers.
inline Poly char_poly(const MatrixFp& m) {
    const std::size_t d = m.dim();
    const PrimeModulus& p = m.mod();
    MatrixFp h = m;

    for (std::size_t j = 0; j + 2 < d; ++j) {
        std::size_t piv = j + 1;
        while (piv < d && h.at(piv, j) == 0) ++piv;
        if (piv == d) continue;
        if (piv != j + 1) {
            // swap rows and columns: a similarity
            for (std::size_t c = 0; c < d; ++c) {
                const std::uint64_t t = h.at(piv, c);
                h.set(piv, c, h.at(j + 1, c));
                h.set(j + 1, c, t);
            }
            for (std::size_t r = 0; r < d; ++r) {
                const std::uint64_t t = h.at(r, piv);
                h.set(r, piv, h.at(r, j + 1));
                h.set(r, j + 1, t);
            }
        }
        const std::uint64_t inv = p.inv(h.at(j + 1, j));
        for (std::size_t r = j + 2; r < d; ++r) {
            const std::uint64_t f = p.mul(h.at(r, j), inv);
            if (f == 0) continue;
            // row r -= f * row j+1, then column j+1 += f * column r
            for (std::size_t c = 0; c < d; ++c) h.set(r, c, p.sub(h.at(r, c), p.mul(f, h.at(j + 1, c))));
            for (std::size_t r2 = 0; r2 < d; ++r2) h.set(r2, j + 1, p.add(h.at(r2, j + 1), p.mul(f, h.at(r2, r))));
        }
    }

    // p_k = (x - H[k-1][k-1]) p_{k-1} - sum_i H[k-1-i][k-1] (prod of subdiagonal) p_{k-1-i}
    std::vector<Poly> ps;
    ps.reserve(d + 1);
    ps.push_back(Poly::one(p));
    const Poly x = Poly::x(p);
    for (std::size_t k = 1; k <= d; ++k) {
        Poly pk = (x - Poly(p, {FpElem(h.at(k - 1, k - 1), p)})) * ps[k - 1];
        std::uint64_t prod = 1;
        for (std::size_t i = 1; i < k; ++i) {
            prod = p.mul(prod, h.at(k - i, k - i - 1));
            if (prod == 0) break;
            const std::uint64_t c = p.mul(h.at(k - 1 - i, k - 1), prod);
            if (c != 0) pk = pk - ps[k - 1 - i] * FpElem(c, p);
        }
        ps.push_back(pk);
    }
    return ps[d];
}

namespace detail {

// Row-echelon accumulator over F_p. Every stored row has its first nonzero
// entry (the pivot) normalized to 1 and rows are kept sorted by pivot, so a
// single ascending elimination pass fully reduces a new vector. Rows may
// carry a polynomial recording the vector as poly(M) applied to some fixed
// start vector; reduction updates the polynomial in lockstep.
struct EchelonRow {
    std::size_t pivot;
    std::vector<std::uint64_t> vec;
    bool tracked;
    Poly comb;
};

class Echelon {
public:
    explicit Echelon(PrimeModulus p) : p_(p) {}

    std::size_t rank() const { return rows_.size(); }
    const std::vector<EchelonRow>& rows() const { return rows_; }

    // Reduce v in place against all rows; comb (if given) is updated so that
    // the invariant "v corresponds to comb" is preserved.
    void reduce(std::vector<std::uint64_t>& v, Poly* comb) const {
        for (const EchelonRow& row : rows_) {
            const std::uint64_t c = v[row.pivot];
            if (c == 0) continue;
            for (std::size_t j = row.pivot; j < v.size(); ++j) {
                v[j] = p_.sub(v[j], p_.mul(c, row.vec[j]));
            }
            if (comb != nullptr) {
                if (!row.tracked) throw ValueError("Echelon: tracked reduction against untracked row");
                *comb = *comb - row.comb * FpElem(c, p_);
            }
        }
    }

    std::size_t insert(std::vector<std::uint64_t> v) { return insert_row(std::move(v), false, Poly::zero(p_)); }
    std::size_t insert(std::vector<std::uint64_t> v, Poly comb) { return insert_row(std::move(v), true, std::move(comb)); }

private:
    PrimeModulus p_;
    std::vector<EchelonRow> rows_;

    // Insert an already-reduced nonzero vector. Returns its pivot.
    std::size_t insert_row(std::vector<std::uint64_t> v, bool tracked, Poly comb) {
        std::size_t piv = 0;
        while (piv < v.size() && v[piv] == 0) ++piv;
        if (piv == v.size()) throw ValueError("Echelon::insert: zero vector");
        const std::uint64_t s = p_.inv(v[piv]);
        for (std::uint64_t& x : v) x = p_.mul(x, s);
        if (tracked) comb = comb * FpElem(s, p_);
        const auto it = std::lower_bound(rows_.begin(), rows_.end(), piv,
                                         [](const EchelonRow& r, std::size_t k) { return r.pivot < k; });
        if (it != rows_.end() && it->pivot == piv) throw ValueError("Echelon::insert: duplicate pivot");
        rows_.insert(it, EchelonRow{piv, std::move(v), tracked, std::move(comb)});
        return piv;
    }
};

// Least-degree monic h with h(M) v inside the subspace spanned by `inside`
// (pass an empty echelon for the plain annihilator). Spins v, Mv, M^2 v, ...
// reducing each against `inside` (untracked) and the earlier spun vectors
// (tracked); the first dependence yields h.
inline Poly conductor_into(const MatrixFp& m, const std::vector<std::uint64_t>& v, const Echelon& inside) {
    const PrimeModulus& p = m.mod();
    Echelon spun(p);
    std::vector<std::uint64_t> k_vec = v;
    Poly k_poly = Poly::one(p);
    for (std::size_t step = 0; step <= m.dim(); ++step) {
        std::vector<std::uint64_t> r_vec = k_vec;
        Poly r_poly = k_poly;
        inside.reduce(r_vec, nullptr);
        spun.reduce(r_vec, &r_poly);
        if (std::all_of(r_vec.begin(), r_vec.end(), [](std::uint64_t x) { return x == 0; })) {
            return r_poly.monic();
        }
        spun.insert(std::move(r_vec), std::move(r_poly));
        k_vec = m.mul_vec(k_vec);
        k_poly = k_poly * Poly::x(p);
    }
    throw ValueError("conductor_into: no dependence found (internal error)");
}

// Strip from f every irreducible factor it shares with s, to full
// multiplicity. gcd-only; no factorization.
template <class K>
PolyT<K> remove_shared_factors(PolyT<K> f, const PolyT<K>& s) {
    if (s.degree() < 1) return f;
    PolyT<K> h = poly_gcd(f, s);
    while (h.degree() > 0) {
        f = poly_divexact(f, h);
        h = poly_gcd(f, s);
    }
    return f;
}

// Split lcm(f, g) into coprime monic parts F | f and G | g with
// F * G = lcm(f, g). Each shared irreducible factor is routed wholesale to
// whichever input carries it with the higher multiplicity (ties go to f),
// so only gcds and exact divisions are needed.
template <class K>
std::pair<PolyT<K>, PolyT<K>> coprime_split(const PolyT<K>& f, const PolyT<K>& g) {
    const PolyT<K> d = poly_gcd(f, g);
    const PolyT<K> f_own = remove_shared_factors(f, d).monic();  // factors of f absent from g
    const PolyT<K> g_own = remove_shared_factors(g, d).monic();
    const PolyT<K> f_shared = poly_divexact(f, f_own).monic();
    const PolyT<K> g_shared = poly_divexact(g, g_own).monic();
    // f_shared and g_shared have the same radical; s collects the factors
    // where g wins strictly
    const PolyT<K> s = poly_divexact(g_shared, poly_gcd(f_shared, g_shared)).monic();
    const PolyT<K> f_keep = remove_shared_factors(f_shared, s).monic();
    const PolyT<K> g_keep = poly_divexact(g_shared, remove_shared_factors(g_shared, s)).monic();
    return {(f_own * f_keep).monic(), (g_own * g_keep).monic()};
}

}  // namespace detail

// Minimal polynomial: lcm of the annihilators of the standard basis vectors.
inline Poly min_poly(const MatrixFp& m) {
    const PrimeModulus& p = m.mod();
    const detail::Echelon empty(p);
    Poly mu = Poly::one(p);
    for (std::size_t i = 0; i < m.dim(); ++i) {
        std::vector<std::uint64_t> e(m.dim(), 0);
        e[i] = 1;
        mu = lcm_poly(mu, detail::conductor_into(m, e, empty));
        if (mu.degree() == static_cast<int>(m.dim())) break;
    }
    return mu;
}

// Companion matrix of a monic f: ones on the subdiagonal, -coefficients of f
// down the last column.
inline MatrixFp companion(const Poly& f) {
    if (!f.is_monic() || f.degree() < 1) throw ValueError("companion: requires a monic polynomial of degree >= 1");
    const std::size_t d = static_cast<std::size_t>(f.degree());
    MatrixFp c(d, f.context());
    for (std::size_t j = 0; j + 1 < d; ++j) c.set(j + 1, j, 1);
    for (std::size_t i = 0; i < d; ++i) c.set(i, d - 1, (-f.coeff(i)).value());
    return c;
}

inline bool is_companion(const MatrixFp& m) {
    const std::size_t d = m.dim();
    for (std::size_t j = 0; j + 1 < d; ++j) {
        for (std::size_t i = 0; i < d; ++i) {
            if (m.at(i, j) != (i == j + 1 ? 1u : 0u)) return false;
        }
    }
    return true;
}

// Monic f with companion(f) == m; caller must have checked is_companion.
inline Poly companion_poly(const MatrixFp& m) {
    const PrimeModulus& p = m.mod();
    std::vector<FpElem> c;
    c.reserve(m.dim() + 1);
    for (std::size_t i = 0; i < m.dim(); ++i) c.push_back(-FpElem(m.at(i, m.dim() - 1), p));
    c.push_back(FpElem::one(p));
    return Poly(p, std::move(c));
}

// Rational canonical data: invariant factor blocks in ascending divisibility
// order (the last one is the minimal polynomial) and the change of basis P
// with P^{-1} M P = blockdiag(companion(blocks[0]), ...).
struct FrobeniusForm {
    std::vector<Poly> blocks;
    MatrixFp transform;

    MatrixFp block_diagonal() const {
        std::size_t d = 0;
        for (const Poly& b : blocks) d += static_cast<std::size_t>(b.degree());
        MatrixFp out(d, transform.mod());
        std::size_t off = 0;
        for (const Poly& b : blocks) {
            const MatrixFp c = companion(b);
            for (std::size_t i = 0; i < c.dim(); ++i)
                for (std::size_t j = 0; j < c.dim(); ++j) out.set(off + i, off + j, c.at(i, j));
            off += c.dim();
        }
        return out;
    }
};

// Cyclic decomposition by spinning. Generators are found with maximal
// conductor into the subspace W built so far (the lcm of the basis vectors'
// conductors, realized on a single vector by routing coprime parts), then
// corrected by a W-component so their annihilator is exactly that conductor.
// Everything runs on gcds and exact divisions; nothing is factored.
inline FrobeniusForm frobenius_normal_form(const MatrixFp& m) {
    const std::size_t d = m.dim();
    const PrimeModulus& p = m.mod();

    struct Gen {
        std::vector<std::uint64_t> v;
        Poly f;
    };
    std::vector<Gen> gens;
    detail::Echelon w(p);
    // chain columns in generator order, deg(f) of them per generator
    std::vector<std::vector<std::uint64_t>> chain_cols;

    while (w.rank() < d) {
        // merge basis-vector conductors into one vector of maximal conductor
        std::optional<std::pair<std::vector<std::uint64_t>, Poly>> best;
        for (std::size_t i = 0; i < d && (!best || best->second.degree() < static_cast<int>(d - w.rank())); ++i) {
            std::vector<std::uint64_t> e(d, 0);
            e[i] = 1;
            const Poly h = detail::conductor_into(m, e, w);
            if (h.degree() == 0) continue;  // e_i already in W
            if (!best) {
                best = {std::move(e), h};
                continue;
            }
            auto& [u, f] = *best;
            if (poly_mod(f, h).is_zero()) continue;  // h | f: nothing new
            const auto [bigf, bigg] = detail::coprime_split(f, h);
            std::vector<std::uint64_t> z(d, 0);
            if (bigf.degree() > 0) z = poly_eval_matrix_vec(poly_divexact(f, bigf), m, u);
            if (bigg.degree() > 0) {
                const std::vector<std::uint64_t> z2 = poly_eval_matrix_vec(poly_divexact(h, bigg), m, e);
                for (std::size_t j = 0; j < d; ++j) z[j] = p.add(z[j], z2[j]);
            }
            best = {std::move(z), (bigf * bigg).monic()};
        }
        if (!best) throw ValueError("frobenius_normal_form: internal: no generator found");
        auto [vec, h] = *best;

        // subtract the W-component so that h(M) vec = 0 exactly
        std::vector<std::uint64_t> x = poly_eval_matrix_vec(h, m, vec);
        if (!std::all_of(x.begin(), x.end(), [](std::uint64_t t) { return t == 0; })) {
            // solve for x over the chain columns, then peel off h-multiples
            const std::size_t k = chain_cols.size();
            MatrixFp sys(d, p);  // columns: chain vectors, padded with zero columns
            for (std::size_t j = 0; j < k; ++j)
                for (std::size_t i = 0; i < d; ++i) sys.set(i, j, chain_cols[j][i]);
            // gaussian solve sys * c = x (consistent: x lies in W)
            std::vector<std::uint64_t> rhs = x;
            std::vector<std::uint64_t> coef(d, 0);
            {
                MatrixFp a = sys;
                std::vector<std::size_t> pivot_col;
                std::size_t row = 0;
                for (std::size_t col = 0; col < k && row < d; ++col) {
                    std::size_t piv = row;
                    while (piv < d && a.at(piv, col) == 0) ++piv;
                    if (piv == d) continue;
                    if (piv != row) {
                        for (std::size_t c2 = 0; c2 < d; ++c2) {
                            const std::uint64_t t = a.at(piv, c2);
                            a.set(piv, c2, a.at(row, c2));
                            a.set(row, c2, t);
                        }
                        std::swap(rhs[piv], rhs[row]);
                    }
                    const std::uint64_t s = p.inv(a.at(row, col));
                    for (std::size_t c2 = 0; c2 < d; ++c2) a.set(row, c2, p.mul(a.at(row, c2), s));
                    rhs[row] = p.mul(rhs[row], s);
                    for (std::size_t r2 = 0; r2 < d; ++r2) {
                        if (r2 == row) continue;
                        const std::uint64_t f2 = a.at(r2, col);
                        if (f2 == 0) continue;
                        for (std::size_t c2 = 0; c2 < d; ++c2) a.set(r2, c2, p.sub(a.at(r2, c2), p.mul(f2, a.at(row, c2))));
                        rhs[r2] = p.sub(rhs[r2], p.mul(f2, rhs[row]));
                    }
                    pivot_col.push_back(col);
                    ++row;
                }
                for (std::size_t r2 = row; r2 < d; ++r2) {
                    if (rhs[r2] != 0) throw ValueError("frobenius_normal_form: internal: x not in W");
                }
                for (std::size_t r2 = 0; r2 < row; ++r2) coef[pivot_col[r2]] = rhs[r2];
            }
            // coefficients, chunked per generator, give polynomials g_i with
            // x = sum g_i(M) v_i; the theory guarantees h | g_i
            std::size_t off = 0;
            for (const Gen& gen : gens) {
                const std::size_t len = static_cast<std::size_t>(gen.f.degree());
                std::vector<FpElem> gc;
                gc.reserve(len);
                for (std::size_t j = 0; j < len; ++j) gc.emplace_back(coef[off + j], p);
                off += len;
                const Poly gi(p, std::move(gc));
                if (gi.is_zero()) continue;
                const Poly qi = poly_divexact(gi, h);
                const std::vector<std::uint64_t> sub = poly_eval_matrix_vec(qi, m, gen.v);
                for (std::size_t j = 0; j < d; ++j) vec[j] = p.sub(vec[j], sub[j]);
            }
        }

        // append the new cyclic chain
        std::vector<std::uint64_t> cur = vec;
        for (int j = 0; j < h.degree(); ++j) {
            chain_cols.push_back(cur);
            std::vector<std::uint64_t> red = cur;
            w.reduce(red, nullptr);
            w.insert(std::move(red));
            cur = m.mul_vec(cur);
        }
        gens.push_back(Gen{std::move(vec), std::move(h)});
    }

    FrobeniusForm out{{}, MatrixFp(d, p)};
    out.blocks.reserve(gens.size());
    // found in descending divisibility; emit ascending
    std::size_t col = 0;
    for (std::size_t gi = gens.size(); gi-- > 0;) {
        out.blocks.push_back(gens[gi].f);
        std::vector<std::uint64_t> cur = gens[gi].v;
        for (int j = 0; j < gens[gi].f.degree(); ++j) {
            for (std::size_t i = 0; i < d; ++i) out.transform.set(i, col, cur[i]);
            ++col;
            cur = m.mul_vec(cur);
        }
    }
    return out;
}

// ell(C_f) for the companion matrix of f, column by column: column j holds
// the coefficients of ell * x^j mod f. Costs O(deg^2) instead of a Horner
// pass of matrix products.
inline MatrixFp poly_eval_companion(const Poly& ell, const Poly& f) {
    const PrimeModulus& p = f.context();
    const std::size_t d = static_cast<std::size_t>(f.degree());
    MatrixFp out(d, p);
    Poly cur = poly_mod(ell, f);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < d; ++i) out.set(i, j, cur.coeff(i).value());
        if (j + 1 < d) cur = poly_mod(cur * Poly::x(p), f);
    }
    return out;
}

// M^e for invertible M via the rational canonical form: reduce t^e modulo
// the minimal polynomial once, then evaluate the small remainder at each
// companion block. The exponent never touches a matrix product chain, so
// 256-bit exponents cost polynomial work in the dimension. When M already
// is the companion matrix of an irreducible polynomial the decomposition is
// skipped outright.
inline MatrixFp mat_pow_lg(const MatrixFp& m, const Exponent& e) {
    if (!m.invertible()) throw ValueError("mat_pow_lg: matrix is singular");
    const PrimeModulus& p = m.mod();

    if (is_companion(m)) {
        const Poly f = companion_poly(m);
        if (is_irreducible(f)) {
            const Poly ell = poly_powmod(Poly::x(p), e, f);
            return poly_eval_companion(ell, f);
        }
    }

    const FrobeniusForm fnf = frobenius_normal_form(m);
    const Poly& mu = fnf.blocks.back();
    const Poly ell = poly_powmod(Poly::x(p), e, mu);

    const std::size_t d = m.dim();
    MatrixFp big(d, p);
    std::size_t off = 0;
    for (const Poly& b : fnf.blocks) {
        const MatrixFp blk = poly_eval_companion(poly_mod(ell, b), b);
        for (std::size_t i = 0; i < blk.dim(); ++i)
            for (std::size_t j = 0; j < blk.dim(); ++j) big.set(off + i, off + j, blk.at(i, j));
        off += blk.dim();
    }
    return fnf.transform * big * fnf.transform.inverse();
}

// Multiplicative order of an invertible matrix: order of t in F_p[t]/(mu).
// When mu is irreducible that quotient is a field and the factored-order
// argument applies; otherwise fall back to a capped scan k -> t^k mod mu,
// which only arises for reducible minimal polynomials (small orders in all
// uses here, but the cap keeps pathological inputs honest).
inline std::uint64_t matrix_order(const MatrixFp& m) {
    if (!m.invertible()) throw ValueError("matrix_order: matrix is singular");
    if (m.is_identity()) return 1;
    const PrimeModulus& p = m.mod();
    const Poly mu = min_poly(m);

    if (is_irreducible(mu)) {
        const unsigned deg = static_cast<unsigned>(mu.degree());
        std::uint64_t n = 1;
        for (unsigned i = 0; i < deg; ++i) {
            n = checked_mul_u64(n, p.value());
            if (n > (std::uint64_t{1} << 40)) throw CapExceededError("matrix_order: p^deg exceeds 2^40");
        }
        const ExtField f(p, mu);
        return multiplicative_order(ExtFieldElem::t(f), factor_integer(n - 1));
    }

    const std::uint64_t cap = std::uint64_t{1} << 22;
    Poly r = poly_mod(Poly::x(p), mu);
    const Poly one = Poly::one(p);
    for (std::uint64_t k = 1; k <= cap; ++k) {
        if (r == one) return k;
        r = poly_mod(r * Poly::x(p), mu);
    }
    throw CapExceededError("matrix_order: scan cap reached");
}

// Exhaustive search for a proper nonzero M-invariant subspace: spin every
// projectively-normalized vector and return the first one whose cyclic span
// fails to fill the space. Minimal invariant subspaces are cyclic, so an
// empty result proves none exists. Enumeration is capped at p^d <= 10^6.
inline std::optional<std::vector<VecFp>> invariant_subspace_search(const MatrixFp& m) {
    const std::size_t d = m.dim();
    const PrimeModulus& p = m.mod();
    double total = 1;
    for (std::size_t i = 0; i < d; ++i) total *= static_cast<double>(p.value());
    if (total > 1e6) throw CapExceededError("invariant_subspace_search: p^d exceeds 10^6");
    if (d == 1) return std::nullopt;

    std::vector<std::uint64_t> v(d, 0);
    // lexicographic enumeration of vectors whose first nonzero entry is 1
    for (std::size_t lead = 0; lead < d; ++lead) {
        std::fill(v.begin(), v.end(), 0);
        v[lead] = 1;
        while (true) {
            detail::Echelon span(p);
            std::vector<std::uint64_t> cur = v;
            while (true) {
                std::vector<std::uint64_t> red = cur;
                span.reduce(red, nullptr);
                if (std::all_of(red.begin(), red.end(), [](std::uint64_t x) { return x == 0; })) break;
                span.insert(std::move(red));
                cur = m.mul_vec(cur);
            }
            if (span.rank() < d) {
                std::vector<VecFp> basis;
                basis.reserve(span.rank());
                for (const auto& row : span.rows()) basis.emplace_back(p, row.vec);
                return basis;
            }
            // next vector with this leading position: odometer over the tail
            std::size_t i = d;
            while (i > lead + 1) {
                --i;
                v[i] = (v[i] + 1) % p.value();
                if (v[i] != 0) break;
            }
            if (i == lead + 1 && v.size() > lead + 1 && std::all_of(v.begin() + lead + 1, v.end(), [](std::uint64_t x) { return x == 0; }))
                break;
            if (lead + 1 == d) break;  // single vector for the last position
        }
    }
    return std::nullopt;
}

inline MatrixFp random_matrix(std::size_t dim, const PrimeModulus& p, Rng& rng) {
    MatrixFp m(dim, p);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) m.set(i, j, rng.below(p.value()));
    return m;
}

inline MatrixFp random_invertible_matrix(std::size_t dim, const PrimeModulus& p, Rng& rng) {
    for (int tries = 0; tries < 10000; ++tries) {
        MatrixFp m = random_matrix(dim, p, rng);
        if (m.invertible()) return m;
    }
    throw CapExceededError("random_invertible_matrix: rejection cap reached");
}

}  // namespace morlab
