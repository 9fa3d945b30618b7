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

#ifndef DRINFELDLAB_SKEWPOLY_HPP
#define DRINFELDLAB_SKEWPOLY_HPP

#include "linalg.hpp"
#include "polyring.hpp"

namespace dlab {

namespace detail {

// Ring operations for the two coefficient rings used by the twisted
// polynomial ring: a finite field k, or A = F_q[t]. In both cases the
// "ring descriptor" is a FieldPtr (the field itself, resp. the F_q of
// coefficients).
template <class R>
struct ring_ops;

template <>
struct ring_ops<FieldElem> {
    static FieldElem zero(const FieldPtr& f) { return f->zero(); }
    static FieldElem one(const FieldPtr& f) { return f->one(); }
    static FieldElem qpow(const FieldElem& x, uint64_t q) { return x.pow(q); }
    static FieldElem lead_inv(const FieldElem& x) { return x.inv(); }
    static bool is_zero(const FieldElem& x) { return x.is_zero(); }
    static bool is_one(const FieldElem& x) { return x.is_one(); }
};

template <>
struct ring_ops<Poly> {
    static Poly zero(const FieldPtr& f) { return Poly::zero(f); }
    static Poly one(const FieldPtr& f) { return Poly::one(f); }
    static Poly qpow(const Poly& x, uint64_t q) { return x.qth_power(q); }
    static Poly lead_inv(const Poly& x) {
        if (!x.is_constant() || x.is_zero())
            throw std::domain_error("not right-divisible in A{tau}: leading coefficient "
                                    "is not a unit");
        return Poly::constant(x.base(), x.coeff(0).inv());
    }
    static bool is_zero(const Poly& x) { return x.is_zero(); }
    static bool is_one(const Poly& x) { return x.is_one(); }
};

} // namespace detail

/**
 * Element of the twisted polynomial ring R{tau} with tau*u = u^q*tau,
 * R a finite field or A = F_q[t]. Coefficients c_0..c_nu represent
 * sum c_i tau^i, constant term first, trimmed.
 */
template <class R>
class SkewPoly {
    using Ops = detail::ring_ops<R>;

  public:
    SkewPoly() = default;
    SkewPoly(FieldPtr ring, uint64_t q, std::vector<R> coeffs)
        : ring_(std::move(ring)), q_(q), c_(std::move(coeffs)) {
        trim();
    }

    static SkewPoly zero(FieldPtr ring, uint64_t q) { return SkewPoly(std::move(ring), q, {}); }
    static SkewPoly one(FieldPtr ring, uint64_t q) {
        std::vector<R> c{Ops::one(ring)};
        return SkewPoly(std::move(ring), q, std::move(c));
    }
    static SkewPoly tau(FieldPtr ring, uint64_t q) {
        std::vector<R> c{Ops::zero(ring), Ops::one(ring)};
        return SkewPoly(std::move(ring), q, std::move(c));
    }
    static SkewPoly constant(FieldPtr ring, uint64_t q, R c0) {
        std::vector<R> c{std::move(c0)};
        return SkewPoly(std::move(ring), q, std::move(c));
    }

    const FieldPtr& ring() const { return ring_; }
    uint64_t q() const { return q_; }
    const std::vector<R>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    /// tau-degree; -1 for the zero polynomial.
    long degree() const { return static_cast<long>(c_.size()) - 1; }
    R coeff(size_t i) const { return i < c_.size() ? c_[i] : Ops::zero(ring_); }
    R constant_term() const { return coeff(0); }

    SkewPoly operator+(const SkewPoly& r) const {
        check(r);
        std::vector<R> c = c_.size() >= r.c_.size() ? c_ : r.c_;
        const std::vector<R>& s = c_.size() >= r.c_.size() ? r.c_ : c_;
        for (size_t i = 0; i < s.size(); ++i) c[i] = c[i] + s[i];
        return SkewPoly(ring_, q_, std::move(c));
    }

    SkewPoly operator-(const SkewPoly& r) const {
        check(r);
        std::vector<R> c = c_;
        c.resize(std::max(c_.size(), r.c_.size()), Ops::zero(ring_));
        for (size_t i = 0; i < r.c_.size(); ++i) c[i] = c[i] - r.c_[i];
        return SkewPoly(ring_, q_, std::move(c));
    }

    /// Twisted product: (a tau^i)(b tau^j) = a b^{q^i} tau^{i+j}.
    SkewPoly operator*(const SkewPoly& r) const {
        check(r);
        if (is_zero() || r.is_zero()) return zero(ring_, q_);
        std::vector<R> c(c_.size() + r.c_.size() - 1, Ops::zero(ring_));
        for (size_t i = 0; i < c_.size(); ++i) {
            if (Ops::is_zero(c_[i])) continue;
            for (size_t j = 0; j < r.c_.size(); ++j) {
                if (Ops::is_zero(r.c_[j])) continue;
                R b = r.c_[j];
                for (size_t k = 0; k < i; ++k) b = Ops::qpow(b, q_);
                c[i + j] = c[i + j] + c_[i] * b;
            }
        }
        return SkewPoly(ring_, q_, std::move(c));
    }

    SkewPoly scale(const R& s) const {
        std::vector<R> c = c_;
        for (auto& x : c) x = x * s;
        return SkewPoly(ring_, q_, std::move(c));
    }

    bool operator==(const SkewPoly& r) const {
        return ring_ == r.ring_ && q_ == r.q_ && c_ == r.c_;
    }
    bool operator!=(const SkewPoly& r) const { return !(*this == r); }

  private:
    void trim() {
        while (!c_.empty() && Ops::is_zero(c_.back())) c_.pop_back();
    }
    void check(const SkewPoly& r) const {
        if (ring_ != r.ring_ || q_ != r.q_)
            throw std::invalid_argument("skew polynomials over different rings");
    }

    FieldPtr ring_;
    uint64_t q_ = 0;
    std::vector<R> c_;
};

/**
 * Right division: f = s*g + r with deg_tau r < deg_tau g. Requires the
 * leading coefficient of g to be a unit (always, over a field).
 */
template <class R>
std::pair<SkewPoly<R>, SkewPoly<R>> right_divmod(const SkewPoly<R>& f, const SkewPoly<R>& g) {
    using Ops = detail::ring_ops<R>;
    if (g.is_zero()) throw std::domain_error("right division by zero");
    SkewPoly<R> r = f;
    SkewPoly<R> s = SkewPoly<R>::zero(f.ring(), f.q());
    R glead_inv = Ops::lead_inv(g.coeffs().back());
    while (!r.is_zero() && r.degree() >= g.degree()) {
        size_t shift = static_cast<size_t>(r.degree() - g.degree());
        // c tau^shift * g has leading coefficient c * glead^{q^shift}
        R glead_shifted_inv = glead_inv;
        for (size_t k = 0; k < shift; ++k)
            glead_shifted_inv = Ops::qpow(glead_shifted_inv, f.q());
        R c = r.coeffs().back() * glead_shifted_inv;
        std::vector<R> mono(shift + 1, Ops::zero(f.ring()));
        mono[shift] = c;
        SkewPoly<R> term(f.ring(), f.q(), std::move(mono));
        s = s + term;
        r = r - term * g;
    }
    return {s, r};
}

/// Monic right greatest common divisor (field coefficients).
template <class R>
SkewPoly<R> rgcd(SkewPoly<R> f, SkewPoly<R> g) {
    using Ops = detail::ring_ops<R>;
    if (f.is_zero() && g.is_zero()) throw std::invalid_argument("rgcd(0, 0)");
    while (!g.is_zero()) {
        auto [s, r] = right_divmod(f, g);
        f = std::move(g);
        g = std::move(r);
    }
    return f.scale(Ops::lead_inv(f.coeffs().back()) * Ops::one(f.ring()));
}

/// Evaluation as an additive polynomial: sum c_i x^{q^i}. For field
/// coefficients x may live in an extension of the coefficient field.
inline FieldElem additive_eval(const SkewPoly<FieldElem>& f, const FieldElem& x) {
    FieldElem acc = x.field()->zero();
    FieldElem xq = x;
    for (size_t i = 0; i < f.coeffs().size(); ++i) {
        if (i > 0) xq = xq.pow(f.q());
        if (!f.coeffs()[i].is_zero()) acc = acc + embed(f.coeffs()[i], x.field()) * xq;
    }
    return acc;
}

inline Poly additive_eval(const SkewPoly<Poly>& f, const Poly& x) {
    Poly acc = Poly::zero(x.base());
    Poly xq = x;
    for (size_t i = 0; i < f.coeffs().size(); ++i) {
        if (i > 0) xq = xq.qth_power(f.q());
        if (!f.coeffs()[i].is_zero()) acc = acc + f.coeffs()[i] * xq;
    }
    return acc;
}

/// Dimension of k over the subfield fq along the tower.
inline size_t tower_degree(const FieldPtr& k, const FieldPtr& fq) {
    size_t d = 1;
    for (FieldPtr f = k; f != fq; f = f->base()) {
        if (!f) throw std::invalid_argument("not a tower extension of the given subfield");
        d *= f->rel_degree();
    }
    return d;
}

/// Product basis of k over the subfield fq, in the order matching
/// flatten_coords.
inline std::vector<FieldElem> tower_basis(const FieldPtr& k, const FieldPtr& fq) {
    size_t n = tower_degree(k, fq);
    std::vector<FieldElem> basis;
    for (size_t i = 0; i < n; ++i) {
        Vec coords(n, fq->zero());
        coords[i] = fq->one();
        basis.push_back(unflatten_coords(k, fq, coords));
    }
    return basis;
}

/**
 * Matrix over F_q of the F_q-linear map x -> additive_eval(f, x) on the
 * coefficient field of f, in the fixed tower basis. Contravariant with
 * skew multiplication: matrix(f*g) = matrix(f) * matrix(g).
 */
inline Mat operator_matrix(const SkewPoly<FieldElem>& f, const FieldPtr& fq) {
    const FieldPtr& k = f.ring();
    if (!is_subfield_of(fq, k))
        throw std::invalid_argument("base field is not a subfield of the coefficient field");
    size_t n = tower_degree(k, fq);
    Mat m(fq, n, n);
    auto basis = tower_basis(k, fq);
    for (size_t j = 0; j < n; ++j) {
        Vec col = flatten_coords(additive_eval(f, basis[j]), fq);
        for (size_t i = 0; i < n; ++i) m.at(i, j) = col[i];
    }
    return m;
}

} // namespace dlab

#endif
