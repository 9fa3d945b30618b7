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
#include <set>

#include "drinfeldlab/gf.hpp"

using namespace dlab;

TEST_CASE("prime field arithmetic") {
    auto f5 = FiniteField::prime(5);
    CHECK(f5->from_int(2).inv() == f5->from_int(3));
    CHECK(f5->from_int(2) * f5->from_int(3) == f5->one());
    CHECK(f5->from_int(4) + f5->from_int(3) == f5->from_int(2));
    CHECK(-f5->from_int(2) == f5->from_int(3));
    CHECK_THROWS(f5->zero().inv());
}

TEST_CASE("F_4 defining relation") {
    auto f2 = FiniteField::prime(2);
    auto f4 = extend_field(f2, 2, "u");
    FieldElem u = f4->gen();
    FieldElem one = f4->one();
    CHECK(u * u == u + one);
    CHECK((u + one) * u == one);
    CHECK(u.to_string() == "u");
    CHECK((u + one).to_string() == "u+1");
}

TEST_CASE("mixed-field operands rejected") {
    auto f2 = FiniteField::prime(2);
    auto f3 = FiniteField::prime(3);
    CHECK_THROWS(f2->one() + f3->one());
}

TEST_CASE("frobenius") {
    auto f2 = FiniteField::prime(2);
    auto f4 = extend_field(f2, 2, "u");
    FieldElem u = f4->gen();
    CHECK(frobenius(u, 2) == u + f4->one());
    CHECK(frobenius(f4->zero(), 2) == f4->zero());
    CHECK(frobenius(u, 4) == u);

    // additivity and F_q-linearity over F_2
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        FieldElem x = f4->element_at(rng() % 4);
        FieldElem y = f4->element_at(rng() % 4);
        CHECK(frobenius(x + y, 2) == frobenius(x, 2) + frobenius(y, 2));
    }
}

TEST_CASE("extension towers and embeddings") {
    auto f2 = FiniteField::prime(2);
    auto f4 = extend_field(f2, 2, "u");

    // degree-1 extension is just the field itself in disguise
    CHECK(extend_field(f2, 1) == f2);

    auto f16 = extend_field(f4, 2, "v");
    CHECK(f16->size() == 16);
    FieldElem u16 = embed(f4->gen(), f16);
    // the image of u still satisfies its defining relation
    CHECK(u16 * u16 + u16 + f16->one() == f16->zero());
    CHECK(embed(f2->one(), f16) == f16->one());

    // embeddings preserve arithmetic
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        FieldElem a = f4->element_at(rng() % 4);
        FieldElem b = f4->element_at(rng() % 4);
        CHECK(embed(a + b, f16) == embed(a, f16) + embed(b, f16));
        CHECK(embed(a * b, f16) == embed(a, f16) * embed(b, f16));
    }
}

TEST_CASE("x^|F| = x exhaustively on small fields") {
    auto f2 = FiniteField::prime(2);
    auto f3 = FiniteField::prime(3);
    for (const auto& f : {extend_field(f2, 2), extend_field(f2, 3), extend_field(f2, 4),
                          extend_field(f3, 2), extend_field(extend_field(f2, 2), 2)}) {
        for (uint64_t i = 0; i < f->size(); ++i) {
            FieldElem x = f->element_at(i);
            CHECK(x.pow(f->size()) == x);
        }
    }
}

TEST_CASE("default moduli are canonical and validated") {
    auto f2 = FiniteField::prime(2);
    // least irreducible cubic in the canonical enumeration
    auto f8 = extend_field(f2, 3, "w");
    const auto& mod = f8->modulus();
    // x^3 + x + 1: coefficients 1,1,0,1
    REQUIRE(mod.size() == 4);
    CHECK(mod[0].is_one());
    CHECK(mod[1].is_one());
    CHECK(mod[2].is_zero());
    CHECK(mod[3].is_one());

    // user-supplied reducible modulus rejected
    std::vector<FieldElem> bad{f2->one(), f2->zero(), f2->one()}; // u^2 + 1
    CHECK_THROWS_WITH(FiniteField::extension(f2, bad, "u"),
                      Catch::Matchers::ContainsSubstring("not irreducible"));
}

TEST_CASE("element enumeration round trip") {
    auto f9 = extend_field(FiniteField::prime(3), 2);
    std::set<std::string> seen;
    for (uint64_t i = 0; i < 9; ++i) seen.insert(f9->element_at(i).to_string());
    CHECK(seen.size() == 9);
}
