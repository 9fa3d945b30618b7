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

#include "drinfeldlab/skewpoly.hpp"

using namespace dlab;

namespace {

SkewPoly<FieldElem> rand_skew(const FieldPtr& k, uint64_t q, std::mt19937_64& rng,
                              size_t max_deg) {
    size_t deg = rng() % (max_deg + 1);
    std::vector<FieldElem> c;
    for (size_t i = 0; i <= deg; ++i) c.push_back(k->element_at(rng() % k->size()));
    return SkewPoly<FieldElem>(k, q, std::move(c));
}

} // namespace

TEST_CASE("commutation rule") {
    auto f2 = FiniteField::prime(2);
    auto f4 = extend_field(f2, 2, "u");
    FieldElem u = f4->gen();
    auto tau = SkewPoly<FieldElem>::tau(f4, 2);
    auto a = SkewPoly<FieldElem>::constant(f4, 2, u);
    // tau * u = u^2 tau = (u+1) tau
    auto prod = tau * a;
    REQUIRE(prod.degree() == 1);
    CHECK(prod.coeff(0).is_zero());
    CHECK(prod.coeff(1) == u + f4->one());
}

TEST_CASE("square of the Carlitz action of t over A") {
    auto f2 = FiniteField::prime(2);
    Poly t = Poly::t(f2);
    auto f = SkewPoly<Poly>(f2, 2, {t, Poly::one(f2)}); // t + tau
    auto sq = f * f;
    REQUIRE(sq.degree() == 2);
    CHECK(sq.coeff(0) == t * t);
    CHECK(sq.coeff(1) == t * t + t);
    CHECK(sq.coeff(2) == Poly::one(f2));
    CHECK(f * SkewPoly<Poly>::one(f2, 2) == f);
}

TEST_CASE("right division over F_4") {
    auto f2 = FiniteField::prime(2);
    auto f4 = extend_field(f2, 2, "u");
    FieldElem u = f4->gen();
    auto tau = SkewPoly<FieldElem>::tau(f4, 2);
    auto g = tau + SkewPoly<FieldElem>::constant(f4, 2, u);

    auto [s, r] = right_divmod(tau * tau, g);
    // tau^2 = (tau + u^2)(tau + u) + u^3 with u^2 = u+1 and u^3 = 1
    CHECK(s == tau + SkewPoly<FieldElem>::constant(f4, 2, u + f4->one()));
    CHECK(r == SkewPoly<FieldElem>::one(f4, 2));
    CHECK(s * g + r == tau * tau);

    auto [s2, r2] = right_divmod(g, g);
    CHECK(s2 == SkewPoly<FieldElem>::one(f4, 2));
    CHECK(r2.is_zero());

    // dividing by tau strips the constant term
    auto f = tau * tau + tau + SkewPoly<FieldElem>::constant(f4, 2, u);
    auto [s3, r3] = right_divmod(f, tau);
    CHECK(r3 == SkewPoly<FieldElem>::constant(f4, 2, u));
    CHECK(s3 * tau + r3 == f);

    CHECK_THROWS(right_divmod(f, SkewPoly<FieldElem>::zero(f4, 2)));
}

TEST_CASE("right gcd") {
    auto f2 = FiniteField::prime(2);
    auto f4 = extend_field(f2, 2, "u");
    FieldElem u = f4->gen();
    auto tau = SkewPoly<FieldElem>::tau(f4, 2);
    auto one = SkewPoly<FieldElem>::one(f4, 2);
    auto g = tau + SkewPoly<FieldElem>::constant(f4, 2, u);

    CHECK(rgcd(tau * tau + one, g) == g);
    CHECK(rgcd(g, SkewPoly<FieldElem>::zero(f4, 2)) == g);
    CHECK(rgcd(tau, tau) == tau);
}

TEST_CASE("additive evaluation") {
    auto f2 = FiniteField::prime(2);
    Poly t = Poly::t(f2);
    auto phi_t = SkewPoly<Poly>(f2, 2, {t, Poly::one(f2)});
    // t*t + t^2 = 0 in characteristic 2: a global torsion point
    CHECK(additive_eval(phi_t, t).is_zero());
    CHECK(additive_eval(phi_t, Poly::zero(f2)).is_zero());

    auto f4 = extend_field(f2, 2, "u");
    FieldElem u = f4->gen();
    auto tau = SkewPoly<FieldElem>::tau(f4, 2);
    CHECK(additive_eval(tau, u) == u + f4->one());
}

TEST_CASE("operator matrices") {
    auto f2 = FiniteField::prime(2);
    auto f4 = extend_field(f2, 2, "u");
    auto tau = SkewPoly<FieldElem>::tau(f4, 2);

    Mat m = operator_matrix(tau, f2);
    REQUIRE(m.rows() == 2);
    // basis {1, u}: 1 -> 1, u -> u+1
    CHECK(m.at(0, 0).is_one());
    CHECK(m.at(1, 0).is_zero());
    CHECK(m.at(0, 1).is_one());
    CHECK(m.at(1, 1).is_one());

    auto c = SkewPoly<FieldElem>::constant(f4, 2, f4->one());
    CHECK(operator_matrix(c, f2) == Mat::identity(f2, 2));
    Mat z = operator_matrix(SkewPoly<FieldElem>::zero(f4, 2), f2);
    CHECK(z == Mat(f2, 2, 2));

    // multiplicativity against evaluation order
    std::mt19937_64 rng(23);
    for (int i = 0; i < 100; ++i) {
        auto f = rand_skew(f4, 2, rng, 3);
        auto g = rand_skew(f4, 2, rng, 3);
        CHECK(operator_matrix(f * g, f2) == operator_matrix(f, f2) * operator_matrix(g, f2));
    }
}

TEST_CASE("ring axioms and division certificates, randomized") {
    auto f2 = FiniteField::prime(2);
    struct Case {
        FieldPtr k;
        uint64_t q;
    };
    std::vector<Case> cases = {{extend_field(f2, 3), 2},
                               {extend_field(FiniteField::prime(3), 2), 3},
                               {extend_field(extend_field(f2, 2), 2), 4}};
    std::mt19937_64 rng(29);
    for (const auto& [k, q] : cases) {
        for (int i = 0; i < 150; ++i) {
            auto a = rand_skew(k, q, rng, 6);
            auto b = rand_skew(k, q, rng, 6);
            auto c = rand_skew(k, q, rng, 6);
            CHECK((a * b) * c == a * (b * c));
            CHECK(a * (b + c) == a * b + a * c);
            CHECK((a + b) * c == a * c + b * c);
            if (!b.is_zero()) {
                auto [s, r] = right_divmod(a, b);
                CHECK(s * b + r == a);
                CHECK(r.degree() < b.degree());
            }
            // evaluation is additive
            FieldElem x = k->element_at(rng() % k->size());
            FieldElem y = k->element_at(rng() % k->size());
            CHECK(additive_eval(a, x + y) == additive_eval(a, x) + additive_eval(a, y));
        }
    }
}
