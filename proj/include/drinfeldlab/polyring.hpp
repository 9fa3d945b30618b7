/*
   Copyright 2026 the drinfeld-lab authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef DRINFELDLAB_POLYRING_HPP
#define DRINFELDLAB_POLYRING_HPP

#include <algorithm>
#include <map>
#include <random>
#include <tuple>

#include "gf.hpp"

namespace dlab {

/**
 * Element of A = F_q[t]. Coefficients live in a fixed base field, constant
 * term first, trimmed; deg 0 = -infinity is represented by an empty vector.
 */
class Poly {
  public:
    Poly() = default;
    Poly(FieldPtr base, std::vector<FieldElem> coeffs)
        : base_(std::move(base)), c_(std::move(coeffs)) {
        for (const auto& x : c_)
            if (x.field() != base_)
                throw std::invalid_argument("coefficient not in the base field");
        detail::ptrim(c_);
    }

    static Poly zero(FieldPtr base) { return Poly(std::move(base), {}); }
    static Poly one(FieldPtr base) {
        auto e = base->one();
        return Poly(std::move(base), {e});
    }
    static Poly t(FieldPtr base) {
        std::vector<FieldElem> c{base->zero(), base->one()};
        return Poly(std::move(base), std::move(c));
    }
    static Poly constant(FieldPtr base, FieldElem c) {
        return Poly(std::move(base), {std::move(c)});
    }

    const FieldPtr& base() const { return base_; }
    const std::vector<FieldElem>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    bool is_one() const { return c_.size() == 1 && c_[0].is_one(); }
    bool is_constant() const { return c_.size() <= 1; }
    /// Degree; -1 encodes the zero polynomial.
    long degree() const { return static_cast<long>(c_.size()) - 1; }
    FieldElem leading() const {
        if (c_.empty()) throw std::domain_error("zero polynomial has no leading coefficient");
        return c_.back();
    }
    bool is_monic() const { return !c_.empty() && c_.back().is_one(); }
    FieldElem coeff(size_t i) const { return i < c_.size() ? c_[i] : base_->zero(); }

    Poly operator+(const Poly& r) const { return wrap(detail::padd(c_, r.checked(*this))); }
    Poly operator-(const Poly& r) const { return wrap(detail::psub(c_, r.checked(*this))); }
    Poly operator*(const Poly& r) const { return wrap(detail::pmul(c_, r.checked(*this))); }
    Poly operator-() const { return wrap(detail::pscale(c_, -base_->one())); }
    Poly operator*(const FieldElem& s) const { return wrap(detail::pscale(c_, s)); }

    std::pair<Poly, Poly> divmod(const Poly& d) const {
        auto [q, r] = detail::pdivmod(c_, d.checked(*this));
        return {wrap(std::move(q)), wrap(std::move(r))};
    }
    Poly operator/(const Poly& d) const { return divmod(d).first; }
    Poly operator%(const Poly& d) const { return divmod(d).second; }

    Poly monic() const { return wrap(detail::pmonic(c_)); }

    Poly pow(uint64_t e) const {
        Poly r = one(base_), b = *this;
        while (e) {
            if (e & 1) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }

    /// The q-th power for q a power of the characteristic. The Frobenius
    /// x -> x^q is a ring endomorphism, so (sum c_i t^i)^q = sum c_i^q t^(iq):
    /// linear time and sparse, where repeated squaring would be quadratic in
    /// the (potentially huge) result degree.
    Poly qth_power(uint64_t q) const {
        uint64_t v = q;
        while (v > 1 && v % base_->p() == 0) v /= base_->p();
        if (v != 1) throw std::invalid_argument("q is not a power of the characteristic");
        if (q == 1 || is_constant() || is_zero()) return pow(q);
        std::vector<FieldElem> c(static_cast<size_t>(degree()) * q + 1, base_->zero());
        for (size_t i = 0; i < c_.size(); ++i)
            if (!c_[i].is_zero()) c[i * q] = c_[i].pow(q);
        return wrap(std::move(c));
    }

    /// Evaluate at a field element; x may live in an extension of the base.
    FieldElem eval(const FieldElem& x) const {
        FieldElem r = x.field()->zero();
        for (size_t i = c_.size(); i-- > 0;) r = r * x + embed(c_[i], x.field());
        return r;
    }

    bool operator==(const Poly& r) const { return base_ == r.base_ && c_ == r.c_; }
    bool operator!=(const Poly& r) const { return !(*this == r); }

    /// Canonical order: by degree, then lexicographically from the top
    /// coefficient down (matching the default-modulus and prime-stream rule).
    bool canon_less(const Poly& r) const {
        if (c_.size() != r.c_.size()) return c_.size() < r.c_.size();
        for (size_t i = c_.size(); i-- > 0;) {
            if (c_[i] == r.c_[i]) continue;
            return c_[i].canon_less(r.c_[i]);
        }
        return false;
    }

    std::string to_string(const std::string& var = "t") const;

  private:
    Poly wrap(std::vector<FieldElem> v) const { return Poly(base_, std::move(v)); }
    const std::vector<FieldElem>& checked(const Poly& other) const {
        if (base_ != other.base_)
            throw std::invalid_argument("polynomials over different base fields");
        return c_;
    }

    FieldPtr base_;
    std::vector<FieldElem> c_;
};

inline std::string Poly::to_string(const std::string& var) const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = c_.size(); i-- > 0;) {
        const FieldElem& a = c_[i];
        if (a.is_zero()) continue;
        if (!first) os << "+";
        first = false;
        std::string cs = a.to_string();
        bool composite = cs.find('+') != std::string::npos || cs.find('*') != std::string::npos;
        if (i == 0) {
            os << (composite ? "(" + cs + ")" : cs);
            continue;
        }
        if (!a.is_one()) os << (composite ? "(" + cs + ")" : cs) << "*";
        os << var;
        if (i > 1) os << "^" << i;
    }
    return os.str();
}

/// Maximal ideal of A, named by its monic irreducible generator.
class PrimeIdeal {
  public:
    PrimeIdeal() = default;
    explicit PrimeIdeal(Poly gen) : gen_(std::move(gen)) {
        if (!gen_.is_monic()) throw std::invalid_argument("ideal generator must be monic");
        if (!detail::pirreducible(gen_.coeffs(), gen_.base()->size()))
            throw std::invalid_argument("ideal generator must be irreducible");
    }
    const Poly& gen() const { return gen_; }
    long degree() const { return gen_.degree(); }
    bool operator==(const PrimeIdeal& r) const { return gen_ == r.gen_; }
    bool operator!=(const PrimeIdeal& r) const { return !(*this == r); }

  private:
    Poly gen_;
};

inline Poly poly_gcd(const Poly& a, const Poly& b) {
    return Poly(a.base(), detail::pgcd(a.coeffs(), b.coeffs()));
}

/// Returns (g, s, u) with s*a + u*b = g, g = gcd(a, b) monic.
inline std::tuple<Poly, Poly, Poly> poly_xgcd(const Poly& a, const Poly& b) {
    Poly r0 = a, r1 = b;
    Poly s0 = Poly::one(a.base()), s1 = Poly::zero(a.base());
    Poly u0 = Poly::zero(a.base()), u1 = Poly::one(a.base());
    while (!r1.is_zero()) {
        auto [q, r2] = r0.divmod(r1);
        Poly s2 = s0 - q * s1, u2 = u0 - q * u1;
        r0 = r1; r1 = r2;
        s0 = s1; s1 = s2;
        u0 = u1; u1 = u2;
    }
    if (r0.is_zero()) return {r0, s0, u0};
    FieldElem c = r0.leading().inv();
    return {r0 * c, s0 * c, u0 * c};
}

inline bool is_irreducible(const Poly& f) {
    if (f.is_zero() || f.is_constant()) return false;
    return detail::pirreducible(f.monic().coeffs(), f.base()->size());
}

namespace detail {

inline Poly poly_from_index(const FieldPtr& base, size_t deg, uint64_t idx, bool monic) {
    uint64_t q = base->size();
    std::vector<FieldElem> c;
    for (size_t i = 0; i < deg; ++i) {
        c.push_back(base->element_at(idx % q));
        idx /= q;
    }
    if (monic)
        c.push_back(base->one());
    else {
        c.push_back(base->element_at(idx % q));
        idx /= q;
    }
    if (idx != 0) throw std::out_of_range("polynomial index");
    return Poly(base, std::move(c));
}

inline uint64_t pow_u64(uint64_t b, size_t e) {
    uint64_t r = 1;
    for (size_t i = 0; i < e; ++i) {
        if (b != 0 && r > UINT64_MAX / b) throw std::overflow_error("pow_u64");
        r *= b;
    }
    return r;
}

} // namespace detail

/// All monic irreducibles of degree <= D, ordered by (degree, canonical
/// coefficient order). Deterministic; a pure function of (q, D).
inline std::vector<PrimeIdeal> primes_of_degree_up_to(const FieldPtr& base, size_t D) {
    if (D < 1) throw std::invalid_argument("degree bound must be >= 1");
    uint64_t q = base->size();
    std::vector<PrimeIdeal> out;
    for (size_t d = 1; d <= D; ++d) {
        uint64_t count = detail::pow_u64(q, d);
        for (uint64_t idx = 0; idx < count; ++idx) {
            Poly f = detail::poly_from_index(base, d, idx, true);
            if (is_irreducible(f)) out.emplace_back(f);
        }
    }
    return out;
}

/// Chinese remainder lift: unique representative of degree < sum(deg m_i)
/// congruent to each residue. Moduli must be pairwise coprime.
inline Poly crt(const std::vector<std::pair<Poly, Poly>>& residues) {
    if (residues.empty()) throw std::invalid_argument("crt of empty system");
    const FieldPtr& base = residues[0].first.base();
    Poly acc = residues[0].first % residues[0].second;
    Poly mod = residues[0].second;
    for (size_t i = 1; i < residues.size(); ++i) {
        const auto& [r, m] = residues[i];
        auto [g, s, u] = poly_xgcd(mod, m);
        if (!g.is_one()) throw std::invalid_argument("crt moduli not coprime");
        // acc' = acc + mod * s * (r - acc)  (s*mod = 1 mod m)
        Poly acc2 = acc + mod * s * (r - acc);
        mod = mod * m;
        acc = acc2 % mod;
    }
    (void)base;
    return acc;
}

/// Formal derivative.
inline Poly derivative(const Poly& f) {
    std::vector<FieldElem> c;
    const auto& a = f.coeffs();
    for (size_t i = 1; i < a.size(); ++i) {
        uint64_t s = i % f.base()->p();
        c.push_back(a[i] * f.base()->from_int(s));
    }
    return Poly(f.base(), std::move(c));
}

namespace detail {

// p-th root of f when f = g(x^p): coefficient-wise p-th root with stride p.
inline Poly pth_root(const Poly& f) {
    const FieldPtr& base = f.base();
    uint64_t p = base->p();
    size_t m = base->abs_degree();
    std::vector<FieldElem> c;
    for (size_t i = 0; i < f.coeffs().size(); i += p) {
        FieldElem a = f.coeffs()[i];
        // p-th root in F_{p^m} is the (m-1)-fold p-power
        for (size_t k = 0; k + 1 < m; ++k) a = a.pow(p);
        c.push_back(a);
    }
    return Poly(base, std::move(c));
}

// Equal-degree splitting of a monic squarefree product of degree-d
// irreducibles (Cantor-Zassenhaus; seeded, so factor order is reproducible).
inline void equal_degree_split(const Poly& f, size_t d, std::mt19937_64& rng,
                               std::vector<Poly>& out) {
    size_t n = static_cast<size_t>(f.degree());
    if (n == d) {
        out.push_back(f);
        return;
    }
    const FieldPtr& base = f.base();
    uint64_t q = base->size();
    std::uniform_int_distribution<uint64_t> dist(0, q - 1);
    while (true) {
        // random polynomial of degree < n
        std::vector<FieldElem> rc;
        for (size_t i = 0; i < n; ++i) rc.push_back(base->element_at(dist(rng)));
        Poly r(base, std::move(rc));
        if (r.is_zero()) continue;
        Poly g = poly_gcd(f, r);
        if (!g.is_constant() && g.degree() < f.degree()) {
            equal_degree_split(g, d, rng, out);
            equal_degree_split(f / g, d, rng, out);
            return;
        }
        Poly h;
        if (base->p() == 2) {
            // trace map T(r) = r + r^q + ... + r^(q^(d-1)) mod f
            PVec acc = r.coeffs();
            PVec cur = r.coeffs();
            for (size_t i = 1; i < d; ++i) {
                cur = pfrobmod(cur, q, 1, f.coeffs());
                acc = padd(acc, cur);
            }
            h = Poly(base, std::move(acc));
        } else {
            // r^((q^d - 1)/2) - 1 mod f
            PVec e = r.coeffs();
            // exponent (q^d - 1) / 2 may exceed 64 bits for large q^d; at desk
            // scale q^d stays comfortably below 2^63
            uint64_t qd = pow_u64(q, d);
            h = Poly(base, ppowmod(e, (qd - 1) / 2, f.coeffs())) - Poly::one(base);
        }
        Poly g2 = poly_gcd(f, h);
        if (!g2.is_constant() && g2.degree() < f.degree()) {
            equal_degree_split(g2, d, rng, out);
            equal_degree_split(f / g2, d, rng, out);
            return;
        }
    }
}

} // namespace detail

/**
 * Full factorization of a nonzero polynomial into monic irreducibles with
 * multiplicities: squarefree decomposition, distinct-degree splitting, then
 * randomized equal-degree splitting driven by `seed`. The returned list is
 * sorted canonically, so the result is independent of the seed; the seed only
 * fixes the internal splitting order.
 */
namespace detail {

// Yun-style squarefree decomposition adapted to characteristic p: returns
// pairs (monic squarefree part, multiplicity).
inline void squarefree_decompose(const Poly& f0, size_t mult,
                                 std::vector<std::pair<Poly, size_t>>& out) {
    Poly f = f0.monic();
    if (f.is_constant()) return;
    Poly d = derivative(f);
    if (d.is_zero()) {
        squarefree_decompose(pth_root(f), mult * f.base()->p(), out);
        return;
    }
    Poly c = poly_gcd(f, d);
    Poly w = f / c;
    size_t i = 1;
    while (!w.is_constant()) {
        Poly y = poly_gcd(w, c);
        Poly fac = w / y;
        if (!fac.is_constant()) out.push_back({fac.monic(), mult * i});
        w = y;
        c = c / y;
        ++i;
    }
    if (!c.is_constant()) squarefree_decompose(pth_root(c), mult * f.base()->p(), out);
}

} // namespace detail

inline std::vector<std::pair<PrimeIdeal, size_t>> factor(const Poly& a,
                                                         uint64_t seed = 0x5eed) {
    if (a.is_zero()) throw std::invalid_argument("cannot factor the zero polynomial");
    std::mt19937_64 rng(seed);
    std::vector<std::pair<Poly, size_t>> found;
    std::vector<std::pair<Poly, size_t>> squarefree;
    detail::squarefree_decompose(a, 1, squarefree);

    uint64_t q = a.base()->size();
    for (const auto& [sf, mult] : squarefree) {
        // distinct-degree splitting
        Poly f = sf;
        detail::PVec x{a.base()->zero(), a.base()->one()};
        detail::PVec xq = x;
        size_t d = 0;
        while (f.degree() > 0) {
            ++d;
            if (2 * d > static_cast<size_t>(f.degree())) {
                found.push_back({f, mult}); // remaining part is irreducible
                break;
            }
            xq = detail::pfrobmod(xq, q, 1, f.coeffs());
            Poly g = poly_gcd(f, Poly(a.base(), detail::psub(xq, x)));
            if (!g.is_constant()) {
                std::vector<Poly> parts;
                detail::equal_degree_split(g.monic(), d, rng, parts);
                for (const auto& piece : parts) found.push_back({piece, mult});
                f = f / g;
                xq = detail::pmod(xq, f.coeffs());
            }
        }
    }

    std::sort(found.begin(), found.end(),
              [](const auto& l, const auto& r) { return l.first.canon_less(r.first); });
    std::vector<std::pair<PrimeIdeal, size_t>> out;
    for (auto& [f, m] : found) out.push_back({PrimeIdeal(f.monic()), m});
    return out;
}

} // namespace dlab

#endif
