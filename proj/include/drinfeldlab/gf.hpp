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

#ifndef DRINFELDLAB_GF_HPP
#define DRINFELDLAB_GF_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dlab {

class FiniteField;
using FieldPtr = std::shared_ptr<const FiniteField>;

/**
 * Element of a finite field. Prime-field elements hold a single residue;
 * extension-field elements hold a coordinate vector over the base field.
 * Values are immutable once constructed and always kept in reduced form.
 */
class FieldElem {
  public:
    FieldElem() = default;
    FieldElem(FieldPtr field, uint64_t value);
    FieldElem(FieldPtr field, std::vector<FieldElem> coords);

    const FieldPtr& field() const { return field_; }
    uint64_t value() const { return value_; }
    const std::vector<FieldElem>& coords() const { return coords_; }

    bool is_zero() const;
    bool is_one() const;

    FieldElem operator+(const FieldElem& rhs) const;
    FieldElem operator-(const FieldElem& rhs) const;
    FieldElem operator-() const;
    FieldElem operator*(const FieldElem& rhs) const;
    FieldElem inv() const;
    FieldElem pow(uint64_t e) const;

    bool operator==(const FieldElem& rhs) const;
    bool operator!=(const FieldElem& rhs) const { return !(*this == rhs); }

    // Canonical total order (coordinatewise, most significant first);
    // used for deterministic enumeration and tie breaking.
    bool canon_less(const FieldElem& rhs) const;

    std::string to_string() const;

  private:
    FieldPtr field_;
    uint64_t value_ = 0;            // prime fields only
    std::vector<FieldElem> coords_; // extension fields only
};

/**
 * A finite field, either the prime field F_p or an extension of another
 * FiniteField by a monic irreducible modulus. Towers are built by chaining
 * extensions; the bottom of every chain is a prime field.
 */
class FiniteField : public std::enable_shared_from_this<FiniteField> {
  public:
    static FieldPtr prime(uint64_t p);

    /// Extension of `base` by a monic irreducible `modulus` (coefficients in
    /// `base`, constant term first, degree >= 2). Irreducibility is checked.
    static FieldPtr extension(FieldPtr base, std::vector<FieldElem> modulus,
                              std::string gen_name = "u");

    bool is_prime_field() const { return base_ == nullptr; }
    uint64_t p() const { return p_; }
    const FieldPtr& base() const { return base_; }
    const std::vector<FieldElem>& modulus() const { return modulus_; }
    const std::string& gen_name() const { return gen_name_; }

    /// Degree over the immediate base field (1 for prime fields).
    size_t rel_degree() const { return base_ ? modulus_.size() - 1 : 1; }
    /// Degree over the prime field.
    size_t abs_degree() const { return abs_degree_; }
    /// Cardinality; throws if it does not fit in 64 bits.
    uint64_t size() const;

    FieldElem zero() const;
    FieldElem one() const;
    /// Scalar c*1 for 0 <= c < p.
    FieldElem from_int(uint64_t c) const;
    /// The residue class of the generator (prime fields: throws).
    FieldElem gen() const;
    /// Element with given index in the canonical enumeration, 0 <= i < size().
    FieldElem element_at(uint64_t i) const;

  private:
    FiniteField() = default;

    FieldPtr base_;
    uint64_t p_ = 0;
    std::vector<FieldElem> modulus_; // over base_, monic, constant term first
    std::string gen_name_;
    size_t abs_degree_ = 1;

    friend class FieldElem;
};

namespace detail {

// Dense polynomial helpers over an arbitrary FiniteField, used both for
// extension-field element arithmetic and by the polynomial-ring layer.
// Representation: coefficient vector, constant term first, trimmed.

using PVec = std::vector<FieldElem>;

inline void ptrim(PVec& a) {
    while (!a.empty() && a.back().is_zero()) a.pop_back();
}

inline PVec padd(const PVec& a, const PVec& b) {
    PVec r = a.size() >= b.size() ? a : b;
    const PVec& s = a.size() >= b.size() ? b : a;
    for (size_t i = 0; i < s.size(); ++i) r[i] = r[i] + s[i];
    ptrim(r);
    return r;
}

inline PVec psub(const PVec& a, const PVec& b) {
    PVec r = a;
    if (r.size() < b.size()) r.resize(b.size(), b[0].field()->zero());
    for (size_t i = 0; i < b.size(); ++i) r[i] = r[i] - b[i];
    ptrim(r);
    return r;
}

inline PVec pmul(const PVec& a, const PVec& b) {
    if (a.empty() || b.empty()) return {};
    // work on the supports only; products of sparse high-degree operands
    // (q-th powers of twisted-ring coefficients) would otherwise scan a sea
    // of zeros
    std::vector<size_t> sa, sb;
    for (size_t i = 0; i < a.size(); ++i)
        if (!a[i].is_zero()) sa.push_back(i);
    for (size_t j = 0; j < b.size(); ++j)
        if (!b[j].is_zero()) sb.push_back(j);
    PVec r(a.size() + b.size() - 1, a[0].field()->zero());
    for (size_t i : sa)
        for (size_t j : sb) r[i + j] = r[i + j] + a[i] * b[j];
    ptrim(r);
    return r;
}

inline PVec pscale(const PVec& a, const FieldElem& c) {
    if (c.is_zero()) return {};
    PVec r = a;
    for (auto& x : r) x = x * c;
    return r;
}

// Division with remainder; b must be nonzero.
inline std::pair<PVec, PVec> pdivmod(const PVec& a, const PVec& b) {
    if (b.empty()) throw std::domain_error("division by zero polynomial");
    PVec r = a, q;
    if (a.size() < b.size()) return {q, r};
    const FieldElem lead_inv = b.back().inv();
    q.assign(a.size() - b.size() + 1, b[0].field()->zero());
    while (r.size() >= b.size()) {
        FieldElem c = r.back() * lead_inv;
        size_t shift = r.size() - b.size();
        q[shift] = c;
        for (size_t i = 0; i < b.size(); ++i) r[shift + i] = r[shift + i] - c * b[i];
        ptrim(r);
        if (r.empty()) break;
        if (r.size() >= b.size() && r.back().is_zero())
            throw std::logic_error("pdivmod: trim failure");
    }
    return {q, r};
}

inline PVec pmod(const PVec& a, const PVec& b) { return pdivmod(a, b).second; }

inline PVec pmonic(const PVec& a) {
    if (a.empty()) return a;
    return pscale(a, a.back().inv());
}

inline PVec pgcd(PVec a, PVec b) {
    while (!b.empty()) {
        PVec r = pmod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return pmonic(a);
}

// a^e mod m by square and multiply.
inline PVec ppowmod(PVec a, uint64_t e, const PVec& m) {
    PVec r{m[0].field()->one()};
    a = pmod(a, m);
    while (e) {
        if (e & 1) r = pmod(pmul(r, a), m);
        a = pmod(pmul(a, a), m);
        e >>= 1;
    }
    return r;
}

// x^(q^k) mod m, iterating the q-power map.
inline PVec pfrobmod(PVec x, uint64_t q, size_t k, const PVec& m) {
    for (size_t i = 0; i < k; ++i) x = ppowmod(std::move(x), q, m);
    return x;
}

/// Rabin irreducibility test for a monic polynomial of degree >= 1 over the
/// field of its coefficients (cardinality q).
bool pirreducible(const PVec& f, uint64_t q);

} // namespace detail

inline FieldElem::FieldElem(FieldPtr field, uint64_t value) : field_(std::move(field)) {
    if (!field_->is_prime_field())
        throw std::invalid_argument("integer constructor requires a prime field");
    value_ = value % field_->p();
}

inline FieldElem::FieldElem(FieldPtr field, std::vector<FieldElem> coords)
    : field_(std::move(field)), coords_(std::move(coords)) {
    if (field_->is_prime_field())
        throw std::invalid_argument("coordinate constructor requires an extension field");
    size_t m = field_->rel_degree();
    if (coords_.size() > m) throw std::invalid_argument("coordinate vector too long");
    coords_.resize(m, field_->base()->zero());
    for (const auto& c : coords_)
        if (c.field() != field_->base())
            throw std::invalid_argument("coordinate not in base field");
}

inline bool FieldElem::is_zero() const {
    if (!field_) throw std::logic_error("uninitialized field element");
    if (field_->is_prime_field()) return value_ == 0;
    for (const auto& c : coords_)
        if (!c.is_zero()) return false;
    return true;
}

inline bool FieldElem::is_one() const {
    if (field_->is_prime_field()) return value_ == 1 % field_->p();
    if (!coords_[0].is_one()) return false;
    for (size_t i = 1; i < coords_.size(); ++i)
        if (!coords_[i].is_zero()) return false;
    return true;
}

namespace detail {
inline void check_same_field(const FieldElem& a, const FieldElem& b) {
    if (a.field() != b.field())
        throw std::invalid_argument("operands belong to different fields");
}
} // namespace detail

inline FieldElem FieldElem::operator+(const FieldElem& rhs) const {
    detail::check_same_field(*this, rhs);
    if (field_->is_prime_field()) return FieldElem(field_, value_ + rhs.value_);
    std::vector<FieldElem> c(coords_);
    for (size_t i = 0; i < c.size(); ++i) c[i] = c[i] + rhs.coords_[i];
    return FieldElem(field_, std::move(c));
}

inline FieldElem FieldElem::operator-() const {
    if (field_->is_prime_field())
        return FieldElem(field_, value_ == 0 ? 0 : field_->p() - value_);
    std::vector<FieldElem> c(coords_);
    for (auto& x : c) x = -x;
    return FieldElem(field_, std::move(c));
}

inline FieldElem FieldElem::operator-(const FieldElem& rhs) const { return *this + (-rhs); }

inline FieldElem FieldElem::operator*(const FieldElem& rhs) const {
    detail::check_same_field(*this, rhs);
    if (field_->is_prime_field()) {
        return FieldElem(field_, (static_cast<unsigned __int128>(value_) * rhs.value_) %
                                     field_->p());
    }
    detail::PVec a(coords_), b(rhs.coords_);
    detail::ptrim(a);
    detail::ptrim(b);
    detail::PVec prod = detail::pmod(detail::pmul(a, b), field_->modulus());
    return FieldElem(field_, std::move(prod));
}

inline FieldElem FieldElem::pow(uint64_t e) const {
    FieldElem r = field_->one();
    FieldElem b = *this;
    while (e) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

inline FieldElem FieldElem::inv() const {
    if (is_zero()) throw std::domain_error("inverse of zero");
    if (field_->is_prime_field()) {
        // extended Euclid on integers
        int64_t a = static_cast<int64_t>(value_), m = static_cast<int64_t>(field_->p());
        int64_t x0 = 1, x1 = 0, m0 = m;
        while (m) {
            int64_t t = a / m;
            a -= t * m;
            std::swap(a, m);
            x0 -= t * x1;
            std::swap(x0, x1);
        }
        if (x0 < 0) x0 += m0;
        return FieldElem(field_, static_cast<uint64_t>(x0));
    }
    // extended Euclid on polynomials against the modulus
    detail::PVec r0 = field_->modulus(), r1(coords_);
    detail::ptrim(r1);
    detail::PVec s0, s1{field_->base()->one()};
    while (!r1.empty()) {
        auto [q, r2] = detail::pdivmod(r0, r1);
        detail::PVec s2 = detail::psub(s0, detail::pmul(q, s1));
        r0 = std::move(r1);
        r1 = std::move(r2);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    // r0 is a nonzero constant
    FieldElem c = r0[0].inv();
    return FieldElem(field_, detail::pscale(s0, c));
}

inline bool FieldElem::operator==(const FieldElem& rhs) const {
    if (field_ != rhs.field_) return false;
    if (field_->is_prime_field()) return value_ == rhs.value_;
    return coords_ == rhs.coords_;
}

inline bool FieldElem::canon_less(const FieldElem& rhs) const {
    detail::check_same_field(*this, rhs);
    if (field_->is_prime_field()) return value_ < rhs.value_;
    for (size_t i = coords_.size(); i-- > 0;) {
        if (coords_[i] == rhs.coords_[i]) continue;
        return coords_[i].canon_less(rhs.coords_[i]);
    }
    return false;
}

inline std::string FieldElem::to_string() const {
    if (field_->is_prime_field()) return std::to_string(value_);
    std::ostringstream os;
    bool first = true;
    for (size_t i = coords_.size(); i-- > 0;) {
        const FieldElem& c = coords_[i];
        if (c.is_zero()) continue;
        if (!first) os << "+";
        first = false;
        std::string cs = c.to_string();
        bool composite = cs.find('+') != std::string::npos;
        if (i == 0) {
            os << (composite ? "(" + cs + ")" : cs);
            continue;
        }
        if (!c.is_one()) os << (composite ? "(" + cs + ")" : cs) << "*";
        os << field_->gen_name();
        if (i > 1) os << "^" << i;
    }
    if (first) os << "0";
    return os.str();
}

inline FieldPtr FiniteField::prime(uint64_t p) {
    if (p < 2) throw std::invalid_argument("characteristic must be >= 2");
    for (uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) throw std::invalid_argument("characteristic must be prime");
    auto f = std::shared_ptr<FiniteField>(new FiniteField());
    f->p_ = p;
    f->abs_degree_ = 1;
    return f;
}

inline uint64_t FiniteField::size() const {
    uint64_t s = 1;
    for (size_t i = 0; i < abs_degree_; ++i) {
        if (s > UINT64_MAX / p_) throw std::overflow_error("field too large for size()");
        s *= p_;
    }
    return s;
}

inline FieldElem FiniteField::zero() const {
    auto self = shared_from_this();
    if (is_prime_field()) return FieldElem(self, uint64_t{0});
    return FieldElem(self, std::vector<FieldElem>{});
}

inline FieldElem FiniteField::one() const { return from_int(1); }

inline FieldElem FiniteField::from_int(uint64_t c) const {
    auto self = shared_from_this();
    if (is_prime_field()) return FieldElem(self, c);
    return FieldElem(self, std::vector<FieldElem>{base_->from_int(c)});
}

inline FieldElem FiniteField::gen() const {
    if (is_prime_field()) throw std::logic_error("prime field has no extension generator");
    std::vector<FieldElem> c{base_->zero(), base_->one()};
    return FieldElem(shared_from_this(), std::move(c));
}

inline FieldElem FiniteField::element_at(uint64_t i) const {
    auto self = shared_from_this();
    if (is_prime_field()) {
        if (i >= p_) throw std::out_of_range("element index");
        return FieldElem(self, i);
    }
    uint64_t bsz = base_->size();
    std::vector<FieldElem> c;
    for (size_t k = 0; k < rel_degree(); ++k) {
        c.push_back(base_->element_at(i % bsz));
        i /= bsz;
    }
    if (i != 0) throw std::out_of_range("element index");
    return FieldElem(self, std::move(c));
}

namespace detail {
inline bool pirreducible_impl(const PVec& f, uint64_t q) {
    size_t n = f.size() - 1;
    if (n == 0) return false;
    if (n == 1) return true;
    PVec x{f[0].field()->zero(), f[0].field()->one()};
    // x^(q^n) == x mod f
    PVec xq = pfrobmod(x, q, n, f);
    if (!psub(xq, x).empty()) return false;
    // gcd(x^(q^(n/l)) - x, f) == 1 for every prime l | n
    size_t nn = n;
    for (size_t l = 2; l * l <= nn; ++l) {
        if (nn % l) continue;
        while (nn % l == 0) nn /= l;
        PVec xql = pfrobmod(x, q, n / l, f);
        PVec g = pgcd(f, psub(xql, x));
        if (g.size() != 1) return false;
    }
    if (nn > 1) {
        PVec xql = pfrobmod(x, q, n / nn, f);
        PVec g = pgcd(f, psub(xql, x));
        if (g.size() != 1) return false;
    }
    return true;
}

inline bool pirreducible(const PVec& f, uint64_t q) { return pirreducible_impl(f, q); }
} // namespace detail

inline FieldPtr FiniteField::extension(FieldPtr base, std::vector<FieldElem> modulus,
                                       std::string gen_name) {
    detail::ptrim(modulus);
    if (modulus.size() < 2) throw std::invalid_argument("modulus must have degree >= 1");
    for (const auto& c : modulus)
        if (c.field() != base) throw std::invalid_argument("modulus coefficient not in base");
    if (!modulus.back().is_one()) throw std::invalid_argument("modulus must be monic");
    uint64_t q = base->size();
    if (!detail::pirreducible(modulus, q))
        throw std::invalid_argument("modulus not irreducible");
    auto f = std::shared_ptr<FiniteField>(new FiniteField());
    f->base_ = base;
    f->p_ = base->p();
    f->modulus_ = std::move(modulus);
    f->gen_name_ = std::move(gen_name);
    f->abs_degree_ = base->abs_degree() * (f->modulus_.size() - 1);
    return f;
}

/// x^q where q must be a power of the characteristic. F_q-linear whenever q
/// is the cardinality of a subfield of x's owner.
inline FieldElem frobenius(const FieldElem& x, uint64_t q) {
    uint64_t p = x.field()->p();
    uint64_t t = q;
    while (t > 1) {
        if (t % p != 0) throw std::invalid_argument("q is not a power of the characteristic");
        t /= p;
    }
    if (q < p) throw std::invalid_argument("q is not a power of the characteristic");
    return x.pow(q);
}

/// Lexicographically least monic irreducible of degree n over `field`
/// (coefficients compared constant term upward in the canonical element
/// order). This is the documented default-modulus rule.
inline detail::PVec default_irreducible(const FieldPtr& field, size_t n) {
    if (n < 1) throw std::invalid_argument("degree must be >= 1");
    uint64_t q = field->size();
    uint64_t total = 1;
    for (size_t i = 0; i < n; ++i) {
        if (total > UINT64_MAX / q) throw std::overflow_error("search space too large");
        total *= q;
    }
    for (uint64_t idx = 0; idx < total; ++idx) {
        detail::PVec f;
        uint64_t v = idx;
        for (size_t i = 0; i < n; ++i) {
            f.push_back(field->element_at(v % q));
            v /= q;
        }
        f.push_back(field->one());
        if (detail::pirreducible(f, q)) return f;
    }
    throw std::logic_error("no irreducible polynomial found");
}

/// F_{q^n} together with the canonical embedding (extend(F, 1) is F itself).
inline FieldPtr extend_field(const FieldPtr& field, size_t n, std::string gen_name = "w") {
    if (n < 1) throw std::invalid_argument("extension degree must be >= 1");
    if (n == 1) return field;
    return FiniteField::extension(field, default_irreducible(field, n), std::move(gen_name));
}

/// Embed x into `target`, which must be x's own field or an iterated
/// extension of it. Ring embedding: commutes with + and *.
inline FieldElem embed(const FieldElem& x, const FieldPtr& target) {
    if (x.field() == target) return x;
    std::vector<FieldPtr> chain;
    for (FieldPtr f = target; f; f = f->base()) {
        if (f == x.field()) {
            FieldElem r = x;
            for (size_t i = chain.size(); i-- > 0;) {
                std::vector<FieldElem> c{r};
                r = FieldElem(chain[i], std::move(c));
            }
            return r;
        }
        chain.push_back(f);
    }
    throw std::invalid_argument("target is not an extension of the element's field");
}

/// True if `sub` appears in the base chain of `field` (or equals it).
inline bool is_subfield_of(const FieldPtr& sub, const FieldPtr& field) {
    for (FieldPtr f = field; f; f = f->base())
        if (f == sub) return true;
    return false;
}

/// Coordinates of x over the subfield `down` in the product basis of the
/// tower, least significant first. Length = [owner : down].
inline std::vector<FieldElem> flatten_coords(const FieldElem& x, const FieldPtr& down) {
    if (x.field() == down) return {x};
    if (x.field()->is_prime_field())
        throw std::invalid_argument("not an extension of the requested subfield");
    std::vector<FieldElem> out;
    for (const auto& c : x.coords()) {
        auto part = flatten_coords(c, down);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

/// Inverse of flatten_coords.
inline FieldElem unflatten_coords(const FieldPtr& field, const FieldPtr& down,
                                  const std::vector<FieldElem>& coords, size_t& pos) {
    if (field == down) return coords.at(pos++);
    std::vector<FieldElem> c;
    for (size_t i = 0; i < field->rel_degree(); ++i)
        c.push_back(unflatten_coords(field->base(), down, coords, pos));
    return FieldElem(field, std::move(c));
}

inline FieldElem unflatten_coords(const FieldPtr& field, const FieldPtr& down,
                                  const std::vector<FieldElem>& coords) {
    size_t pos = 0;
    FieldElem r = unflatten_coords(field, down, coords, pos);
    if (pos != coords.size()) throw std::invalid_argument("coordinate count mismatch");
    return r;
}

} // namespace dlab

#endif
