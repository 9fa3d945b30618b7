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

#ifndef DRINFELDLAB_FINMOD_HPP
#define DRINFELDLAB_FINMOD_HPP

#include "drinfeld.hpp"

namespace dlab {

/**
 * Smith normal form over F_q[t], restricted to what the module layer needs:
 * the invariant factors of a square polynomial matrix. Pivoting always
 * selects the minimal-degree nonzero entry, ties broken by (row, col), so
 * the computation is deterministic.
 */
inline std::vector<Poly> smith_invariant_factors(std::vector<std::vector<Poly>> m) {
    size_t n = m.size();
    if (n == 0) return {};
    const FieldPtr& base = m[0][0].base();
    std::vector<Poly> diag;
    for (size_t k = 0; k < n; ++k) {
        while (true) {
            // minimal-degree nonzero pivot in the trailing submatrix
            long best = -1;
            size_t bi = k, bj = k;
            for (size_t i = k; i < n; ++i)
                for (size_t j = k; j < n; ++j) {
                    if (m[i][j].is_zero()) continue;
                    if (best < 0 || m[i][j].degree() < best) {
                        best = m[i][j].degree();
                        bi = i;
                        bj = j;
                    }
                }
            if (best < 0) {
                diag.push_back(Poly::zero(base));
                break;
            }
            std::swap(m[k], m[bi]);
            for (size_t i = 0; i < n; ++i) std::swap(m[i][k], m[i][bj]);
            // clear column and row k
            bool reduced = true;
            for (size_t i = k + 1; i < n; ++i) {
                if (m[i][k].is_zero()) continue;
                Poly q = m[i][k] / m[k][k];
                for (size_t j = k; j < n; ++j) m[i][j] = m[i][j] - q * m[k][j];
                if (!m[i][k].is_zero()) reduced = false; // smaller remainder appeared
            }
            for (size_t j = k + 1; j < n; ++j) {
                if (m[k][j].is_zero()) continue;
                Poly q = m[k][j] / m[k][k];
                for (size_t i = k; i < n; ++i) m[i][j] = m[i][j] - q * m[i][k];
                if (!m[k][j].is_zero()) reduced = false;
            }
            if (!reduced) continue;
            bool row_clear = true, col_clear = true;
            for (size_t i = k + 1; i < n; ++i) row_clear &= m[i][k].is_zero();
            for (size_t j = k + 1; j < n; ++j) col_clear &= m[k][j].is_zero();
            if (!row_clear || !col_clear) continue;
            // enforce divisibility of the trailing block by the pivot
            bool divides_all = true;
            for (size_t i = k + 1; i < n && divides_all; ++i)
                for (size_t j = k + 1; j < n && divides_all; ++j)
                    if (!(m[i][j] % m[k][k]).is_zero()) {
                        for (size_t jj = k; jj < n; ++jj)
                            m[k][jj] = m[k][jj] + m[i][jj];
                        divides_all = false;
                    }
            if (!divides_all) continue;
            diag.push_back(m[k][k].monic());
            break;
        }
    }
    std::vector<Poly> out;
    for (const auto& f : diag)
        if (!f.is_one()) out.push_back(f);
    return out;
}

/**
 * A finite A-module realized by an F_q-linear operator: the Mordell-Weil
 * module of a reduced Drinfeld module (or a finite product of them, acting
 * block-diagonally). Points are coordinate vectors, one residue-field
 * element per product coordinate.
 */
class OperatorModule {
  public:
    struct Component {
        FiniteDrinfeldModule fdm;
        size_t mult; // number of copies in the product
    };

    using Point = std::vector<FieldElem>;

    explicit OperatorModule(FiniteDrinfeldModule fdm)
        : OperatorModule(std::vector<Component>{{std::move(fdm), 1}}) {}

    explicit OperatorModule(std::vector<Component> comps) : comps_(std::move(comps)) {
        if (comps_.empty()) throw std::invalid_argument("empty product module");
        fq_ = comps_[0].fdm.fq();
        for (const auto& c : comps_) {
            if (c.fdm.fq() != fq_)
                throw std::invalid_argument("components over different F_q");
            if (c.mult == 0) throw std::invalid_argument("zero multiplicity");
        }
        size_t N = 0;
        for (size_t ci = 0; ci < comps_.size(); ++ci) {
            block_mats_.push_back(operator_matrix(comps_[ci].fdm.phi_t(), fq_));
            size_t d = comps_[ci].fdm.dim();
            for (size_t e = 0; e < comps_[ci].mult; ++e) {
                blocks_.push_back({ci, N, d});
                N += d;
            }
        }
        T_ = Mat(fq_, N, N);
        for (const auto& b : blocks_)
            for (size_t i = 0; i < b.dim; ++i)
                for (size_t j = 0; j < b.dim; ++j)
                    T_.at(b.offset + i, b.offset + j) = block_mats_[b.comp].at(i, j);
    }

    const FieldPtr& fq() const { return fq_; }
    const std::vector<Component>& components() const { return comps_; }
    const Mat& T() const { return T_; }
    size_t dim() const { return T_.rows(); }
    /// Number of product coordinates E = sum of multiplicities.
    size_t n_coords() const { return blocks_.size(); }
    const FiniteDrinfeldModule& coord_module(size_t c) const {
        return comps_[blocks_[c].comp].fdm;
    }

    Point zero_point() const {
        Point p;
        for (const auto& b : blocks_) p.push_back(comps_[b.comp].fdm.k()->zero());
        return p;
    }

    Vec encode(const Point& p) const {
        if (p.size() != blocks_.size()) throw std::invalid_argument("coordinate count");
        Vec v;
        for (size_t c = 0; c < p.size(); ++c) {
            if (p[c].field() != coord_module(c).k())
                throw std::invalid_argument("point coordinate in wrong field");
            Vec part = flatten_coords(p[c], fq_);
            v.insert(v.end(), part.begin(), part.end());
        }
        return v;
    }

    Point decode(const Vec& v) const {
        if (v.size() != dim()) throw std::invalid_argument("vector length");
        Point p;
        size_t pos = 0;
        for (const auto& b : blocks_) {
            Vec part(v.begin() + pos, v.begin() + pos + b.dim);
            p.push_back(unflatten_coords(comps_[b.comp].fdm.k(), fq_, part));
            pos += b.dim;
        }
        return p;
    }

    /// a(T): the matrix of the action of a in A.
    Mat act_matrix(const Poly& a) const {
        Mat r(fq_, dim(), dim());
        Mat power = Mat::identity(fq_, dim());
        for (size_t i = 0; i < a.coeffs().size(); ++i) {
            if (i > 0) power = T_ * power;
            const FieldElem& c = a.coeffs()[i];
            if (c.is_zero()) continue;
            for (size_t row = 0; row < dim(); ++row)
                for (size_t col = 0; col < dim(); ++col)
                    r.at(row, col) = r.at(row, col) + c * power.at(row, col);
        }
        return r;
    }

    Vec act_flat(const Poly& a, const Vec& v) const {
        Vec r(dim(), fq_->zero());
        Vec power = v;
        for (size_t i = 0; i < a.coeffs().size(); ++i) {
            if (i > 0) power = T_.apply(power);
            const FieldElem& c = a.coeffs()[i];
            if (c.is_zero()) continue;
            for (size_t k = 0; k < r.size(); ++k) r[k] = r[k] + c * power[k];
        }
        return r;
    }

    Point act(const Poly& a, const Point& p) const { return decode(act_flat(a, encode(p))); }

    /// Invariant factors f_1 | ... | f_r with module = direct sum A/(f_i),
    /// from the Smith normal form of tI - T.
    std::vector<Poly> structure() const {
        size_t n = dim();
        std::vector<std::vector<Poly>> m(n, std::vector<Poly>(n, Poly::zero(fq_)));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                Poly e = -Poly::constant(fq_, T_.at(i, j));
                if (i == j) e = e + Poly::t(fq_);
                m[i][j] = e;
            }
        return smith_invariant_factors(std::move(m));
    }

    /// The exponent: largest invariant factor (annihilator of the module).
    Poly exponent() const {
        auto f = structure();
        return f.empty() ? Poly::one(fq_) : f.back();
    }

    /// Monic generator of Ann_A(x), by Krylov iteration; order(0) = 1.
    Poly order_of(const Vec& x) const {
        std::vector<Vec> krylov;
        Vec cur = x;
        while (true) {
            auto coords = span_coords(fq_, krylov, cur);
            if (coords) {
                std::vector<FieldElem> c;
                for (const auto& a : *coords) c.push_back(-a);
                c.push_back(fq_->one());
                return Poly(fq_, std::move(c));
            }
            krylov.push_back(cur);
            cur = T_.apply(cur);
        }
    }

    /// F_q-basis of the A-span of the given generators (closure under T).
    std::vector<Vec> submodule(const std::vector<Vec>& gens) const {
        std::vector<Vec> basis;
        std::vector<Vec> frontier;
        for (const auto& g : gens)
            if (!in_span(fq_, basis, g)) {
                basis.push_back(g);
                frontier.push_back(g);
            }
        while (!frontier.empty()) {
            std::vector<Vec> next;
            for (const auto& v : frontier) {
                Vec tv = T_.apply(v);
                if (!in_span(fq_, basis, tv)) {
                    basis.push_back(tv);
                    next.push_back(tv);
                }
            }
            frontier = std::move(next);
        }
        return basis;
    }

    bool member(const Vec& x, const std::vector<Vec>& gens) const {
        return in_span(fq_, submodule(gens), x);
    }

    /// Basis of ker a(T) = the a-torsion of the module.
    std::vector<Vec> torsion_kernel(const Poly& a) const {
        if (a.is_zero()) throw std::invalid_argument("torsion kernel of zero");
        return kernel_basis(act_matrix(a));
    }

    /// Largest exponent k with gen(P)^k | order(x).
    size_t pi_order(const Vec& x, const PrimeIdeal& P) const {
        Poly ord = order_of(x);
        size_t k = 0;
        while ((ord % P.gen()).is_zero()) {
            ord = ord / P.gen();
            ++k;
        }
        return k;
    }

    /// P-primary component of x: act(c*m, x) where order(x) = P^k * m,
    /// P not dividing m, and c*m = 1 mod P^k.
    Vec primary_part(const Vec& x, const PrimeIdeal& P) const {
        Poly ord = order_of(x);
        Poly pk = Poly::one(fq_);
        Poly m = ord;
        while ((m % P.gen()).is_zero()) {
            m = m / P.gen();
            pk = pk * P.gen();
        }
        if (pk.is_one()) return Vec(dim(), fq_->zero()); // no P-part
        auto [g, s, u] = poly_xgcd(m, pk);
        if (!g.is_one()) throw std::logic_error("primary decomposition gcd != 1");
        // s*m = 1 mod P^k
        return act_flat((s * m) % ord, x);
    }

    /// The same module over the degree-n extension of every carrier field.
    OperatorModule extended(size_t n) const {
        if (n == 1) return *this;
        std::vector<Component> comps;
        for (const auto& c : comps_) comps.push_back({c.fdm.extended(n), c.mult});
        return OperatorModule(std::move(comps));
    }

    /// Embed a point into the extension module produced by extended(n).
    Point embed_point(const OperatorModule& ext, const Point& p) const {
        Point out;
        for (size_t c = 0; c < p.size(); ++c)
            out.push_back(embed(p[c], ext.coord_module(c).k()));
        return out;
    }

  private:
    struct Block {
        size_t comp;   // component index
        size_t offset; // flat offset
        size_t dim;    // F_q-dimension of the component carrier
    };

    FieldPtr fq_;
    std::vector<Component> comps_;
    std::vector<Mat> block_mats_;
    std::vector<Block> blocks_;
    Mat T_;
};

/**
 * Least n <= cap such that the B-torsion of the degree-n extension reaches
 * full rank d over A/B (B must be prime to the characteristic). Returns
 * nullopt when the cap is exceeded.
 */
inline std::optional<size_t> torsion_field_degree(const FiniteDrinfeldModule& m,
                                                  const PrimeIdeal& B, size_t cap) {
    if (B == m.characteristic())
        throw std::invalid_argument("B must be prime to the characteristic");
    size_t d = m.rank();
    size_t degB = static_cast<size_t>(B.degree());
    for (size_t n = 1; n <= cap; ++n) {
        OperatorModule ext{m.extended(n)};
        size_t kdim = ext.torsion_kernel(B.gen()).size();
        if (kdim % degB != 0) throw std::logic_error("torsion kernel not an A/B-space");
        if (kdim / degB == d) return n;
    }
    return std::nullopt;
}

} // namespace dlab

#endif
