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

#include "drinfeldlab/polyring.hpp"

using namespace dlab;

namespace {

Poly rand_poly(const FieldPtr& fq, std::mt19937_64& rng, size_t max_deg) {
    size_t deg = rng() % (max_deg + 1);
    std::vector<FieldElem> c;
    for (size_t i = 0; i <= deg; ++i) c.push_back(fq->element_at(rng() % fq->size()));
    return Poly(fq, std::move(c));
}

// Number of monic irreducibles of degree n over F_q by Moebius inversion
// of q^n = sum_{d | n} d * N_q(d).
uint64_t necklace_count(uint64_t q, uint64_t n) {
    auto mu = [](uint64_t m) -> long {
        long r = 1;
        for (uint64_t p = 2; p * p <= m; ++p)
            if (m % p == 0) {
                m /= p;
                if (m % p == 0) return 0;
                r = -r;
            }
        if (m > 1) r = -r;
        return r;
    };
    long total = 0;
    for (uint64_t d = 1; d <= n; ++d) {
        if (n % d) continue;
        uint64_t pw = 1;
        for (uint64_t i = 0; i < n / d; ++i) pw *= q;
        total += mu(d) * static_cast<long>(pw);
    }
    return static_cast<uint64_t>(total) / n;
}

} // namespace

TEST_CASE("basic arithmetic and divmod") {
    auto f2 = FiniteField::prime(2);
    Poly t = Poly::t(f2);
    Poly one = Poly::one(f2);

    CHECK(poly_gcd(t * t + t, t) == t);

    // (t^3+t+1) = t*(t^2+1) + 1
    Poly a = t.pow(3) + t + one;
    Poly b = t.pow(2) + one;
    auto [q, r] = a.divmod(b);
    CHECK(q == t);
    CHECK(r == one);
    CHECK(q * b + r == a);

    CHECK_THROWS(a.divmod(Poly::zero(f2)));
}

TEST_CASE("xgcd certificate") {
    auto f3 = FiniteField::prime(3);
    Poly t = Poly::t(f3);
    Poly one = Poly::one(f3);
    auto [g, s, u] = poly_xgcd(t, t + one);
    CHECK(g == one);
    CHECK(s * t + u * (t + one) == g);

    std::mt19937_64 rng(3);
    for (int i = 0; i < 300; ++i) {
        Poly a = rand_poly(f3, rng, 6), b = rand_poly(f3, rng, 6);
        if (a.is_zero() && b.is_zero()) continue;
        auto [g2, s2, u2] = poly_xgcd(a, b);
        CHECK(s2 * a + u2 * b == g2);
        CHECK(g2.is_monic());
        if (!a.is_zero()) CHECK((a % g2).is_zero());
        if (!b.is_zero()) CHECK((b % g2).is_zero());
    }
}

TEST_CASE("factorization") {
    auto f2 = FiniteField::prime(2);
    Poly t = Poly::t(f2);
    Poly one = Poly::one(f2);

    auto fs = factor(t * t + t);
    REQUIRE(fs.size() == 2);
    CHECK(fs[0].first.gen() == t);
    CHECK(fs[0].second == 1);
    CHECK(fs[1].first.gen() == t + one);
    CHECK(fs[1].second == 1);

    auto fs2 = factor(t.pow(2) + t + one);
    REQUIRE(fs2.size() == 1);
    CHECK(fs2[0].first.gen() == t.pow(2) + t + one);

    auto fs3 = factor(t.pow(4) + t.pow(2));
    REQUIRE(fs3.size() == 2);
    CHECK(fs3[0].second == 2);
    CHECK(fs3[1].second == 2);

    // multiplicative reconstruction on random inputs
    for (uint64_t qv : {2, 3}) {
        auto fq = FiniteField::prime(qv);
        std::mt19937_64 rng(17 + qv);
        for (int i = 0; i < 100; ++i) {
            Poly a = rand_poly(fq, rng, 8);
            if (a.is_zero()) continue;
            Poly prod = Poly::constant(fq, a.leading());
            for (const auto& [p, e] : factor(a)) prod = prod * p.gen().pow(e);
            CHECK(prod == a);
        }
    }
}

TEST_CASE("prime stream order and counts") {
    auto f2 = FiniteField::prime(2);
    auto f3 = FiniteField::prime(3);
    Poly t2 = Poly::t(f2);
    Poly one2 = Poly::one(f2);

    auto ps1 = primes_of_degree_up_to(f2, 1);
    REQUIRE(ps1.size() == 2);
    CHECK(ps1[0].gen() == t2);
    CHECK(ps1[1].gen() == t2 + one2);

    auto ps3 = primes_of_degree_up_to(f2, 3);
    std::vector<Poly> cubics;
    for (const auto& p : ps3)
        if (p.degree() == 3) cubics.push_back(p.gen());
    REQUIRE(cubics.size() == 2);
    CHECK(cubics[0] == t2.pow(3) + t2 + one2);
    CHECK(cubics[1] == t2.pow(3) + t2.pow(2) + one2);

    CHECK(primes_of_degree_up_to(f3, 1).size() == 3);

    // necklace counts, q in {2, 3}, n <= 6
    for (uint64_t qv : {2, 3}) {
        auto fq = FiniteField::prime(qv);
        auto ps = primes_of_degree_up_to(fq, 6);
        std::map<size_t, uint64_t> byDeg;
        for (const auto& p : ps) ++byDeg[p.degree()];
        for (uint64_t n = 1; n <= 6; ++n) CHECK(byDeg[n] == necklace_count(qv, n));
    }
}

TEST_CASE("prime ideals validated") {
    auto f2 = FiniteField::prime(2);
    Poly t = Poly::t(f2);
    CHECK_THROWS(PrimeIdeal(t * t)); // reducible
    CHECK_THROWS(PrimeIdeal(t * t + Poly::one(f2))); // (t+1)^2
    CHECK_NOTHROW(PrimeIdeal(t.pow(2) + t + Poly::one(f2)));
}

TEST_CASE("crt") {
    auto f2 = FiniteField::prime(2);
    Poly t = Poly::t(f2);
    Poly one = Poly::one(f2);

    CHECK(crt({{one, t}, {Poly::zero(f2), t + one}}) == t + one);
    CHECK(crt({{Poly::zero(f2), t}}) == Poly::zero(f2));
    CHECK(crt({{one, t}, {one, t + one}}) == one);
    CHECK_THROWS(crt({{one, t}, {Poly::zero(f2), t}}));
}

TEST_CASE("canonical order") {
    auto f2 = FiniteField::prime(2);
    Poly t = Poly::t(f2);
    Poly one = Poly::one(f2);
    CHECK(t.canon_less(t + one));
    CHECK((t + one).canon_less(t * t));
    CHECK(Poly::zero(f2).canon_less(one));
}

TEST_CASE("qth_power agrees with repeated multiplication") {
    for (uint64_t qv : {2, 3}) {
        auto fq = FiniteField::prime(qv);
        std::mt19937_64 rng(91 + qv);
        for (int i = 0; i < 50; ++i) {
            Poly a = rand_poly(fq, rng, 6);
            CHECK(a.qth_power(qv) == a.pow(qv));
            CHECK(a.qth_power(qv * qv) == a.pow(qv * qv));
            CHECK(a.qth_power(1) == a);
        }
    }
    auto f4 = extend_field(FiniteField::prime(2), 2, "u");
    Poly p(f4, {f4->gen(), f4->one()});
    CHECK(p.qth_power(4) == p.pow(4));
    CHECK_THROWS_AS(p.qth_power(3), std::invalid_argument);
    CHECK_THROWS_AS(p.qth_power(6), std::invalid_argument);
}
