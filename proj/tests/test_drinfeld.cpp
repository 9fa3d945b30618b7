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

#include <random>

#include "drinfeldlab/drinfeld.hpp"

using namespace dlab;

namespace {

Poly rand_poly(const FieldPtr& fq, std::mt19937_64& rng, size_t max_deg) {
    size_t deg = rng() % (max_deg + 1);
    std::vector<FieldElem> c;
    for (size_t i = 0; i <= deg; ++i) c.push_back(fq->element_at(rng() % fq->size()));
    return Poly(fq, std::move(c));
}

} // namespace

TEST_CASE("construction invariants") {
    auto f2 = FiniteField::prime(2);
    Poly t = Poly::t(f2);
    Poly one = Poly::one(f2);
    CHECK_THROWS(DrinfeldModule(f2, {one, one}));    // constant term must be t
    CHECK_THROWS(DrinfeldModule(f2, {t}));           // rank must be >= 1
    CHECK(DrinfeldModule::carlitz(f2).rank() == 1);
    CHECK(DrinfeldModule(f2, {t, one, one}).rank() == 2);
}

TEST_CASE("phi_of pinned values") {
    auto f2 = FiniteField::prime(2);
    auto c = DrinfeldModule::carlitz(f2);
    Poly t = Poly::t(f2);
    Poly one = Poly::one(f2);

    auto sq = c.phi_of(t * t);
    REQUIRE(sq.degree() == 2);
    CHECK(sq.coeff(0) == t * t);
    CHECK(sq.coeff(1) == t * t + t);
    CHECK(sq.coeff(2) == one);

    CHECK(c.phi_of(one) == SkewPoly<Poly>::one(f2, 2));
    // scalars map to scalars
    auto f3 = FiniteField::prime(3);
    auto c3 = DrinfeldModule::carlitz(f3);
    auto two = c3.phi_of(Poly::constant(f3, f3->from_int(2)));
    CHECK(two.degree() == 0);
    CHECK(two.coeff(0) == Poly::constant(f3, f3->from_int(2)));
}

TEST_CASE("module action on A") {
    auto f2 = FiniteField::prime(2);
    auto c = DrinfeldModule::carlitz(f2);
    Poly t = Poly::t(f2);
    CHECK(c.act(t, t).is_zero()); // t is a global t-torsion point over F_2
    CHECK(c.act(t.pow(3) + t, Poly::zero(f2)).is_zero());
    CHECK(c.act(Poly::one(f2), t + Poly::one(f2)) == t + Poly::one(f2));
}

TEST_CASE("good and bad primes") {
    auto f2 = FiniteField::prime(2);
    Poly t = Poly::t(f2);
    Poly one = Poly::one(f2);
    auto carlitz = DrinfeldModule::carlitz(f2);
    for (const auto& w : primes_of_degree_up_to(f2, 5)) CHECK(is_good_prime(carlitz, w));

    DrinfeldModule m(f2, {t, t}); // leading coefficient t
    CHECK_FALSE(is_good_prime(m, PrimeIdeal(t)));
    CHECK(is_good_prime(m, PrimeIdeal(t + one)));
    CHECK_THROWS(reduce_at(m, PrimeIdeal(t)));
}

TEST_CASE("reduction pinned values") {
    auto f2 = FiniteField::prime(2);
    auto c = DrinfeldModule::carlitz(f2);
    Poly t = Poly::t(f2);
    Poly one = Poly::one(f2);

    // at (t): theta = 0, phi_t reduces to pure Frobenius, height 1
    auto r0 = reduce_at(c, PrimeIdeal(t));
    CHECK(r0.theta().is_zero());
    CHECK(r0.phi_t().coeff(0).is_zero());
    CHECK(r0.phi_t().coeff(1).is_one());
    CHECK(r0.height() == 1);
    CHECK(r0.characteristic().gen() == t);

    // at (t^2+t+1): theta generates F_4 and satisfies the prime
    auto w = PrimeIdeal(t.pow(2) + t + one);
    auto r1 = reduce_at(c, w);
    CHECK(r1.k()->size() == 4);
    CHECK(w.gen().eval(r1.theta()).is_zero());
    CHECK(r1.phi_t().coeff(0) == r1.theta());

    // rank preserved across the sweep
    for (const auto& p : primes_of_degree_up_to(f2, 5))
        CHECK(reduce_at(c, p).rank() == c.rank());
}

TEST_CASE("point reduction pinned values") {
    auto f2 = FiniteField::prime(2);
    auto c = DrinfeldModule::carlitz(f2);
    Poly t = Poly::t(f2);
    Poly one = Poly::one(f2);

    CHECK(reduce_point(c, PrimeIdeal(t), t).is_zero());
    auto w = PrimeIdeal(t.pow(2) + t + one);
    auto red = reduce_at(c, w);
    CHECK(reduce_point(red, t) == red.theta());
    CHECK(reduce_point(red, t.pow(3)) == red.k()->one()); // t^3 = 1 mod t^2+t+1
}

TEST_CASE("homomorphism and degree laws, randomized") {
    for (uint64_t qv : {2, 3}) {
        auto fq = FiniteField::prime(qv);
        Poly t = Poly::t(fq);
        Poly one = Poly::one(fq);
        std::vector<DrinfeldModule> mods = {DrinfeldModule::carlitz(fq),
                                            DrinfeldModule(fq, {t, one, one}),
                                            DrinfeldModule(fq, {t, t, one})};
        std::mt19937_64 rng(31 + qv);
        for (const auto& m : mods) {
            // phi_a coefficients reach degree about q^(d deg a); cap the
            // operand degree for the q = 3 rank-2 modules to stay quick
            size_t cap = qv == 3 && m.rank() == 2 ? 3 : 4;
            for (int i = 0; i < 80; ++i) {
                Poly a = rand_poly(fq, rng, cap), b = rand_poly(fq, rng, cap);
                CHECK(m.phi_of(a + b) == m.phi_of(a) + m.phi_of(b));
                CHECK(m.phi_of(a * b) == m.phi_of(a) * m.phi_of(b));
                if (!a.is_zero())
                    CHECK(m.phi_of(a).degree() ==
                          static_cast<long>(m.rank()) * a.degree());
            }
        }
    }

    // one full-degree product for the heaviest combination
    auto f3 = FiniteField::prime(3);
    Poly t3 = Poly::t(f3), one3 = Poly::one(f3);
    DrinfeldModule r2(f3, {t3, one3, one3});
    Poly a = t3.pow(4) + t3 + one3, b = t3.pow(4) + t3 * t3 + one3;
    CHECK(r2.phi_of(a * b) == r2.phi_of(a) * r2.phi_of(b));
}

TEST_CASE("reduction is A-equivariant") {
    auto f2 = FiniteField::prime(2);
    auto c = DrinfeldModule::carlitz(f2);
    std::mt19937_64 rng(37);
    auto primes = primes_of_degree_up_to(f2, 4);
    for (int i = 0; i < 300; ++i) {
        const auto& w = primes[rng() % primes.size()];
        auto red = reduce_at(c, w);
        Poly a = rand_poly(f2, rng, 4), x = rand_poly(f2, rng, 4);
        CHECK(reduce_point(red, c.act(a, x)) == red.act(a, reduce_point(red, x)));
    }
}

TEST_CASE("height bounds") {
    auto f2 = FiniteField::prime(2);
    Poly t = Poly::t(f2);
    Poly one = Poly::one(f2);
    std::vector<DrinfeldModule> mods = {DrinfeldModule::carlitz(f2),
                                        DrinfeldModule(f2, {t, one, one}),
                                        DrinfeldModule(f2, {t, t, one})};
    for (const auto& m : mods)
        for (const auto& w : primes_of_degree_up_to(f2, 4)) {
            if (!is_good_prime(m, w)) continue;
            auto red = reduce_at(m, w);
            CHECK(red.height() >= 1);
            CHECK(red.height() <= red.rank());
        }
}
