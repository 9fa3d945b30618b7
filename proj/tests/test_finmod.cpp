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

#include <catch2/catch_amalgamated.hpp>

#include "drinfeldlab/finmod.hpp"

using namespace dlab;

namespace {

/// Minimal monic annihilator computed by direct skew evaluation, used as an
/// independent oracle against the operator-matrix path.
Poly order_by_evaluation(const FiniteDrinfeldModule& red, const FieldElem& x) {
    const FieldPtr& fq = red.fq();
    for (size_t deg = 0;; ++deg) {
        uint64_t monics = 1;
        for (size_t i = 0; i < deg; ++i) monics *= fq->size();
        for (uint64_t idx = 0; idx < monics; ++idx) {
            Poly a = detail::poly_from_index(fq, deg, idx, true);
            if (additive_eval(red.phi_of(a), x).is_zero()) return a;
        }
    }
}

} // namespace

TEST_CASE("structure pinned values") {
    auto f2 = FiniteField::prime(2);
    auto c = DrinfeldModule::carlitz(f2);
    Poly t = Poly::t(f2);
    Poly one = Poly::one(f2);

    OperatorModule m4(reduce_at(c, PrimeIdeal(t.pow(2) + t + one)));
    auto inv = m4.structure();
    REQUIRE(inv.size() == 1);
    CHECK(inv[0] == t * t + t);
    CHECK(m4.exponent() == t * t + t);

    OperatorModule m1(reduce_at(c, PrimeIdeal(t)));
    auto inv1 = m1.structure();
    REQUIRE(inv1.size() == 1);
    CHECK(inv1[0] == t + one);
}

TEST_CASE("element orders, dual route") {
    auto f2 = FiniteField::prime(2);
    auto c = DrinfeldModule::carlitz(f2);
    Poly t = Poly::t(f2);
    Poly one = Poly::one(f2);
    auto red = reduce_at(c, PrimeIdeal(t.pow(2) + t + one));
    OperatorModule mod(red);
    FieldElem u = red.k()->gen();

    CHECK(mod.order_of(mod.encode({red.k()->one()})) == t * t + t);
    CHECK(mod.order_of(mod.encode({red.k()->zero()})) == one);
    CHECK(mod.order_of(mod.encode({u})) == t);

    // operator route and direct skew evaluation agree on every element
    for (uint64_t i = 0; i < red.k()->size(); ++i) {
        FieldElem x = red.k()->element_at(i);
        CHECK(mod.order_of(mod.encode({x})) == order_by_evaluation(red, x));
    }
}

TEST_CASE("submodules and membership") {
    auto f2 = FiniteField::prime(2);
    auto c = DrinfeldModule::carlitz(f2);
    Poly t = Poly::t(f2);
    Poly one = Poly::one(f2);
    auto red = reduce_at(c, PrimeIdeal(t.pow(2) + t + one));
    OperatorModule mod(red);
    FieldElem u = red.k()->gen();

    auto bu = mod.submodule({mod.encode({u})});
    CHECK(bu.size() == 1); // T(u) = 0, closure stops at {u}
    CHECK(mod.submodule({}).empty());
    auto b1 = mod.submodule({mod.encode({red.k()->one()})});
    CHECK(b1.size() == 2); // 1 generates the whole module

    CHECK_FALSE(mod.member(mod.encode({red.k()->one()}), bu));
    CHECK(mod.member(mod.encode({red.k()->zero()}), bu));
    CHECK(mod.member(mod.encode({u}), b1));
}

TEST_CASE("torsion kernels and dimension bounds") {
    auto f2 = FiniteField::prime(2);
    auto c = DrinfeldModule::carlitz(f2);
    Poly t = Poly::t(f2);
    Poly one = Poly::one(f2);

    OperatorModule m4(reduce_at(c, PrimeIdeal(t.pow(2) + t + one)));
    CHECK(m4.torsion_kernel(t).size() == 1);
    CHECK(m4.torsion_kernel(one).empty());

    // at the special characteristic the t-torsion collapses (d - h = 0)
    OperatorModule m1(reduce_at(c, PrimeIdeal(t)));
    CHECK(m1.torsion_kernel(t).empty());
}

TEST_CASE("primary parts and pi-orders") {
    auto f2 = FiniteField::prime(2);
    auto c = DrinfeldModule::carlitz(f2);
    Poly t = Poly::t(f2);
    Poly one = Poly::one(f2);
    auto red = reduce_at(c, PrimeIdeal(t.pow(2) + t + one));
    OperatorModule mod(red);
    Vec x1 = mod.encode({red.k()->one()});

    CHECK(mod.pi_order(x1, PrimeIdeal(t)) == 1);          // order(1) = t(t+1)
    CHECK(mod.pi_order(x1, PrimeIdeal(t + one)) == 1);
    CHECK(mod.pi_order(x1, PrimeIdeal(t.pow(2) + t + one)) == 0);
    CHECK(mod.pi_order(mod.encode({red.k()->zero()}), PrimeIdeal(t)) == 0);

    // the t-primary part of 1 is annihilated by t and nonzero
    Vec pp = mod.primary_part(x1, PrimeIdeal(t));
    CHECK(mod.order_of(pp) == t);
    // complementary parts recombine to the point
    Vec pq = mod.primary_part(x1, PrimeIdeal(t + one));
    Vec sum = pp;
    for (size_t i = 0; i < sum.size(); ++i) sum[i] = sum[i] + pq[i];
    CHECK(sum == x1);
}

TEST_CASE("dimension accounting across a sweep") {
    auto f2 = FiniteField::prime(2);
    auto c = DrinfeldModule::carlitz(f2);
    Poly t = Poly::t(f2);
    Poly one = Poly::one(f2);
    DrinfeldModule r2(f2, {t, one, one});
    for (const auto& m : {c, r2})
        for (const auto& w : primes_of_degree_up_to(f2, 4)) {
            OperatorModule mod(reduce_at(m, w));
            size_t total = 0;
            Poly prev = Poly::one(f2);
            for (const auto& f : mod.structure()) {
                total += static_cast<size_t>(f.degree());
                CHECK((f % prev).is_zero()); // divisibility chain
                prev = f;
            }
            CHECK(total == mod.dim());
        }
}

TEST_CASE("extension modules and torsion field degrees") {
    auto f2 = FiniteField::prime(2);
    auto c = DrinfeldModule::carlitz(f2);
    Poly t = Poly::t(f2);
    Poly one = Poly::one(f2);
    auto red = reduce_at(c, PrimeIdeal(t.pow(2) + t + one));
    OperatorModule mod(red);

    // degree-1 extension is the module itself
    OperatorModule same = mod.extended(1);
    CHECK(same.dim() == mod.dim());
    CHECK(same.structure() == mod.structure());

    // rank-1 t-torsion is already rational here
    auto d = torsion_field_degree(red, PrimeIdeal(t), 4);
    REQUIRE(d.has_value());
    CHECK(*d == 1);

    // torsion dimension never exceeds d * deg B away from the characteristic
    for (const auto& w : primes_of_degree_up_to(f2, 4)) {
        auto r = reduce_at(c, w);
        OperatorModule m(r);
        for (const auto& b : primes_of_degree_up_to(f2, 2)) {
            size_t dim = m.torsion_kernel(b.gen()).size();
            if (b == r.characteristic())
                CHECK(dim <= (r.rank() - r.height()) * b.degree());
            else
                CHECK(dim <= r.rank() * b.degree());
        }
    }
}

TEST_CASE("extension embeddings are injective on prime-to-char torsion") {
    auto f2 = FiniteField::prime(2);
    auto c = DrinfeldModule::carlitz(f2);
    for (const auto& w : primes_of_degree_up_to(f2, 3)) {
        auto red = reduce_at(c, w);
        OperatorModule mod(red);
        OperatorModule ext = mod.extended(2);
        for (const auto& b : primes_of_degree_up_to(f2, 2)) {
            if (b == red.characteristic()) continue;
            for (const auto& v : mod.torsion_kernel(b.gen())) {
                // nonzero torsion stays nonzero upstairs
                auto p = mod.decode(v);
                auto pe = mod.embed_point(ext, p);
                bool zero = true;
                for (const auto& x : pe) zero &= x.is_zero();
                CHECK_FALSE(zero);
            }
        }
    }
}

TEST_CASE("block product modules") {
    auto f2 = FiniteField::prime(2);
    auto c = DrinfeldModule::carlitz(f2);
    Poly t = Poly::t(f2);
    Poly one = Poly::one(f2);
    auto red = reduce_at(c, PrimeIdeal(t.pow(2) + t + one));
    OperatorModule sq({{red, 2}});
    CHECK(sq.dim() == 4);
    CHECK(sq.n_coords() == 2);
    auto inv = sq.structure();
    REQUIRE(inv.size() == 2);
    CHECK(inv[0] == t * t + t);
    CHECK(inv[1] == t * t + t);

    // diagonal action agrees with the componentwise one
    Vec v = sq.encode({red.k()->one(), red.k()->gen()});
    Vec w = sq.act_flat(t, v);
    auto parts = sq.decode(w);
    CHECK(parts[0] == red.act(t, red.k()->one()));
    CHECK(parts[1] == red.act(t, red.k()->gen()));
}
