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

#ifndef DRINFELDLAB_DRINFELD_HPP
#define DRINFELDLAB_DRINFELD_HPP

#include "skewpoly.hpp"

namespace dlab {

/**
 * Drinfeld module of generic characteristic over A = F_q[t], given by
 * phi_t in A{tau} with constant term t. The base field of definition is
 * F_q(t) with ring of integers A; every coefficient lives in A.
 */
class DrinfeldModule {
  public:
    /// coeffs: c_0..c_d of phi_t = sum c_i tau^i, with c_0 = t and c_d != 0.
    DrinfeldModule(FieldPtr fq, std::vector<Poly> coeffs) : fq_(std::move(fq)) {
        if (coeffs.size() < 2) throw std::invalid_argument("phi_t must have tau-degree >= 1");
        if (coeffs[0] != Poly::t(fq_))
            throw std::invalid_argument("constant term of phi_t must be t");
        if (coeffs.back().is_zero())
            throw std::invalid_argument("leading coefficient of phi_t must be nonzero");
        phi_t_ = SkewPoly<Poly>(fq_, fq_->size(), std::move(coeffs));
    }

    static DrinfeldModule carlitz(const FieldPtr& fq) {
        return DrinfeldModule(fq, {Poly::t(fq), Poly::one(fq)});
    }

    const FieldPtr& fq() const { return fq_; }
    uint64_t q() const { return fq_->size(); }
    const SkewPoly<Poly>& phi_t() const { return phi_t_; }
    size_t rank() const { return static_cast<size_t>(phi_t_.degree()); }

    /// The image phi_a, computed by Horner in the (commutative) image of phi.
    SkewPoly<Poly> phi_of(const Poly& a) const {
        if (a.base() != fq_) throw std::invalid_argument("a not over the module's F_q");
        SkewPoly<Poly> r = SkewPoly<Poly>::zero(fq_, q());
        for (size_t i = a.coeffs().size(); i-- > 0;) {
            r = r * phi_t_;
            r = r + SkewPoly<Poly>::constant(fq_, q(), Poly::constant(fq_, a.coeffs()[i]));
        }
        return r;
    }

    /// The A-module action on phi(A): act(a, x) = phi_a(x).
    Poly act(const Poly& a, const Poly& x) const { return additive_eval(phi_of(a), x); }

    bool operator==(const DrinfeldModule& r) const {
        return fq_ == r.fq_ && phi_t_ == r.phi_t_;
    }

  private:
    FieldPtr fq_;
    SkewPoly<Poly> phi_t_;
};

/**
 * Reduction of a Drinfeld module at a good prime W: a Drinfeld module over
 * the residue field k_W = A/W (or an extension of it) with special
 * characteristic W.
 */
class FiniteDrinfeldModule {
  public:
    FiniteDrinfeldModule(FieldPtr fq, FieldPtr k, FieldElem theta,
                         SkewPoly<FieldElem> phi_t_red, PrimeIdeal char_ideal)
        : fq_(std::move(fq)), k_(std::move(k)), theta_(std::move(theta)),
          phi_t_(std::move(phi_t_red)), char_(std::move(char_ideal)) {
        if (phi_t_.constant_term() != theta_)
            throw std::invalid_argument("constant term of reduced phi_t must be theta");
        if (!char_.gen().eval(theta_).is_zero())
            throw std::invalid_argument("characteristic does not annihilate theta");
        height_ = compute_height();
    }

    const FieldPtr& fq() const { return fq_; }
    const FieldPtr& k() const { return k_; }
    uint64_t q() const { return fq_->size(); }
    const FieldElem& theta() const { return theta_; }
    const SkewPoly<FieldElem>& phi_t() const { return phi_t_; }
    const PrimeIdeal& characteristic() const { return char_; }
    size_t rank() const { return static_cast<size_t>(phi_t_.degree()); }
    size_t height() const { return height_; }
    /// F_q-dimension of the carrier field.
    size_t dim() const { return tower_degree(k_, fq_); }

    SkewPoly<FieldElem> phi_of(const Poly& a) const {
        if (a.base() != fq_) throw std::invalid_argument("a not over the module's F_q");
        SkewPoly<FieldElem> r = SkewPoly<FieldElem>::zero(k_, q());
        for (size_t i = a.coeffs().size(); i-- > 0;) {
            r = r * phi_t_;
            r = r + SkewPoly<FieldElem>::constant(k_, q(), embed(a.coeffs()[i], k_));
        }
        return r;
    }

    FieldElem act(const Poly& a, const FieldElem& x) const {
        return additive_eval(phi_of(a), x);
    }

    /// The same module with carrier extended to degree n over k.
    FiniteDrinfeldModule extended(size_t n) const {
        if (n == 1) return *this;
        FieldPtr k2 = extend_field(k_, n, "w");
        std::vector<FieldElem> c;
        for (const auto& a : phi_t_.coeffs()) c.push_back(embed(a, k2));
        return FiniteDrinfeldModule(fq_, k2, embed(theta_, k2),
                                    SkewPoly<FieldElem>(k2, q(), std::move(c)), char_);
    }

  private:
    size_t compute_height() const {
        SkewPoly<FieldElem> phi_pi = phi_of(char_.gen());
        size_t v = 0;
        while (v < phi_pi.coeffs().size() && phi_pi.coeffs()[v].is_zero()) ++v;
        size_t dc = static_cast<size_t>(char_.degree());
        if (v % dc != 0) throw std::logic_error("tau-valuation not divisible by deg(char)");
        return v / dc;
    }

    FieldPtr fq_;
    FieldPtr k_;
    FieldElem theta_;
    SkewPoly<FieldElem> phi_t_;
    PrimeIdeal char_;
    size_t height_ = 0;
};

/// Good prime test: with coefficients already in A only rank preservation
/// can fail, i.e. the leading coefficient of phi_t must not vanish mod W.
inline bool is_good_prime(const DrinfeldModule& m, const PrimeIdeal& w) {
    return !(m.phi_t().coeffs().back() % w.gen()).is_zero();
}

/// Residue field A/W together with theta = t mod W. Degree-1 primes reduce
/// into F_q itself; larger primes yield the extension F_q[t]/(W).
inline std::pair<FieldPtr, FieldElem> residue_field(const PrimeIdeal& w) {
    const FieldPtr& fq = w.gen().base();
    if (w.degree() == 1) {
        // t + c -> theta = -c
        return {fq, -w.gen().coeff(0)};
    }
    FieldPtr k = FiniteField::extension(fq, w.gen().coeffs(), "u");
    return {k, k->gen()};
}

/// Reduce a good prime; throws on bad primes (callers filter).
inline FiniteDrinfeldModule reduce_at(const DrinfeldModule& m, const PrimeIdeal& w) {
    if (!is_good_prime(m, w))
        throw std::invalid_argument("cannot reduce at a bad prime: " + w.gen().to_string());
    auto [k, theta] = residue_field(w);
    std::vector<FieldElem> c;
    for (const auto& a : m.phi_t().coeffs()) c.push_back(a.eval(theta));
    return FiniteDrinfeldModule(m.fq(), k, theta,
                                SkewPoly<FieldElem>(k, m.q(), std::move(c)), w);
}

/// red_W(x) = x mod W, realized as evaluation at theta.
inline FieldElem reduce_point(const FiniteDrinfeldModule& red, const Poly& x) {
    return x.eval(red.theta());
}

inline FieldElem reduce_point(const DrinfeldModule& m, const PrimeIdeal& w, const Poly& x) {
    return reduce_point(reduce_at(m, w), x);
}

} // namespace dlab

#endif
