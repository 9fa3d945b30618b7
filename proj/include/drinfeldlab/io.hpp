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

#ifndef DRINFELDLAB_IO_HPP
#define DRINFELDLAB_IO_HPP

#include <cctype>

#include "drinfeld.hpp"

namespace dlab {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

/// Tokenizer for polynomial and skew-polynomial text: integers, identifiers,
/// and the operators + - * ^ ( ).
struct Lexer {
    explicit Lexer(std::string_view s) : s_(s) { advance(); }

    enum class Kind { Int, Ident, Op, End };
    Kind kind = Kind::End;
    uint64_t int_value = 0;
    std::string ident;
    char op = 0;

    void advance() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ >= s_.size()) {
            kind = Kind::End;
            return;
        }
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            kind = Kind::Int;
            int_value = 0;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                int_value = int_value * 10 + static_cast<uint64_t>(s_[pos_] - '0');
                ++pos_;
            }
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            kind = Kind::Ident;
            ident.clear();
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
                ident += s_[pos_];
                ++pos_;
            }
            return;
        }
        if (c == '+' || c == '-' || c == '*' || c == '^' || c == '(' || c == ')') {
            kind = Kind::Op;
            op = c;
            ++pos_;
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "' in expression");
    }

  private:
    std::string_view s_;
    size_t pos_ = 0;
};

/// Expression evaluator shared by field-element, polynomial, and skew
/// parsing. Alg provides: Value, from_int(uint64_t), by_name(const string&),
/// add, sub, neg, mul, pow(Value, uint64_t).
template <class Alg>
typename Alg::Value parse_sum(Lexer& lx, const Alg& alg);

template <class Alg>
typename Alg::Value parse_atom(Lexer& lx, const Alg& alg) {
    using K = Lexer::Kind;
    if (lx.kind == K::Int) {
        auto v = alg.from_int(lx.int_value);
        lx.advance();
        return v;
    }
    if (lx.kind == K::Ident) {
        auto v = alg.by_name(lx.ident);
        lx.advance();
        return v;
    }
    if (lx.kind == K::Op && lx.op == '(') {
        lx.advance();
        auto v = parse_sum(lx, alg);
        if (!(lx.kind == K::Op && lx.op == ')')) throw ParseError("expected ')'");
        lx.advance();
        return v;
    }
    throw ParseError("expected a term");
}

template <class Alg>
typename Alg::Value parse_power(Lexer& lx, const Alg& alg) {
    auto v = parse_atom(lx, alg);
    if (lx.kind == Lexer::Kind::Op && lx.op == '^') {
        lx.advance();
        if (lx.kind != Lexer::Kind::Int) throw ParseError("exponent must be an integer");
        uint64_t e = lx.int_value;
        lx.advance();
        v = alg.pow(v, e);
    }
    return v;
}

template <class Alg>
typename Alg::Value parse_product(Lexer& lx, const Alg& alg) {
    auto v = parse_power(lx, alg);
    while (true) {
        using K = Lexer::Kind;
        if (lx.kind == K::Op && lx.op == '*') {
            lx.advance();
            v = alg.mul(v, parse_power(lx, alg));
            continue;
        }
        // juxtaposition such as "2t^3" or "(u+1)t"
        if (lx.kind == K::Int || lx.kind == K::Ident || (lx.kind == K::Op && lx.op == '(')) {
            v = alg.mul(v, parse_power(lx, alg));
            continue;
        }
        return v;
    }
}

template <class Alg>
typename Alg::Value parse_sum(Lexer& lx, const Alg& alg) {
    using K = Lexer::Kind;
    bool neg = false;
    if (lx.kind == K::Op && (lx.op == '+' || lx.op == '-')) {
        neg = lx.op == '-';
        lx.advance();
    }
    auto v = parse_product(lx, alg);
    if (neg) v = alg.neg(v);
    while (lx.kind == K::Op && (lx.op == '+' || lx.op == '-')) {
        bool sub = lx.op == '-';
        lx.advance();
        auto r = parse_product(lx, alg);
        v = sub ? alg.sub(v, r) : alg.add(v, r);
    }
    return v;
}

/// Generator of the tower level of `field` whose printed name is `name`.
inline FieldElem field_gen_by_name(const FieldPtr& field, const std::string& name) {
    for (FieldPtr f = field; f && !f->is_prime_field(); f = f->base())
        if (f->gen_name() == name) return embed(f->gen(), field);
    throw ParseError("unknown symbol '" + name + "' in this field");
}

struct FieldAlg {
    FieldPtr field;
    using Value = FieldElem;
    Value from_int(uint64_t c) const { return field->from_int(c); }
    Value by_name(const std::string& n) const { return field_gen_by_name(field, n); }
    Value add(const Value& a, const Value& b) const { return a + b; }
    Value sub(const Value& a, const Value& b) const { return a - b; }
    Value neg(const Value& a) const { return -a; }
    Value mul(const Value& a, const Value& b) const { return a * b; }
    Value pow(const Value& a, uint64_t e) const { return a.pow(e); }
};

struct PolyAlg {
    FieldPtr fq;
    std::string var = "t";
    using Value = Poly;
    Value from_int(uint64_t c) const { return Poly::constant(fq, fq->from_int(c)); }
    Value by_name(const std::string& n) const {
        if (n == var) return Poly::t(fq);
        return Poly::constant(fq, field_gen_by_name(fq, n));
    }
    Value add(const Value& a, const Value& b) const { return a + b; }
    Value sub(const Value& a, const Value& b) const { return a - b; }
    Value neg(const Value& a) const { return -a; }
    Value mul(const Value& a, const Value& b) const { return a * b; }
    Value pow(const Value& a, uint64_t e) const { return a.pow(e); }
};

struct SkewAlg {
    FieldPtr fq;
    uint64_t q;
    using Value = SkewPoly<Poly>;
    Value wrap(Poly c) const { return Value::constant(fq, q, std::move(c)); }
    Value from_int(uint64_t c) const { return wrap(Poly::constant(fq, fq->from_int(c))); }
    Value by_name(const std::string& n) const {
        if (n == "T") return Value::tau(fq, q);
        PolyAlg pa{fq};
        return wrap(pa.by_name(n));
    }
    Value add(const Value& a, const Value& b) const { return a + b; }
    Value sub(const Value& a, const Value& b) const { return a - b; }
    Value neg(const Value& a) const {
        return Value::zero(fq, q) - a;
    }
    Value mul(const Value& a, const Value& b) const { return a * b; }
    Value pow(const Value& a, uint64_t e) const {
        Value r = Value::one(fq, q);
        for (uint64_t i = 0; i < e; ++i) r = r * a;
        return r;
    }
};

template <class Alg>
typename Alg::Value parse_all(const std::string& text, const Alg& alg) {
    Lexer lx(text);
    auto v = parse_sum(lx, alg);
    if (lx.kind != Lexer::Kind::End) throw ParseError("trailing input in expression");
    return v;
}

} // namespace detail

inline FieldElem parse_field_elem(const FieldPtr& field, const std::string& text) {
    return detail::parse_all(text, detail::FieldAlg{field});
}

inline Poly parse_poly(const FieldPtr& fq, const std::string& text,
                       const std::string& var = "t") {
    return detail::parse_all(text, detail::PolyAlg{fq, var});
}

/// Skew polynomial over A in the text form "t^2 + (t^2+t)*T + T^2" with T
/// denoting the twist variable.
inline SkewPoly<Poly> parse_skew(const FieldPtr& fq, uint64_t q, const std::string& text) {
    return detail::parse_all(text, detail::SkewAlg{fq, q});
}

/// Prints in the form parse_skew accepts; round-trips exactly.
inline std::string skew_to_string(const SkewPoly<Poly>& f) {
    if (f.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < f.coeffs().size(); ++i) {
        const Poly& c = f.coeffs()[i];
        if (c.is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        std::string cs = c.to_string();
        bool composite = cs.find('+') != std::string::npos || cs.find('*') != std::string::npos;
        if (i == 0) {
            os << (composite ? "(" + cs + ")" : cs);
            continue;
        }
        if (!c.is_one()) os << (composite ? "(" + cs + ")" : cs) << "*";
        os << "T";
        if (i > 1) os << "^" << i;
    }
    return os.str();
}

inline std::string skew_to_string(const SkewPoly<FieldElem>& f) {
    if (f.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < f.coeffs().size(); ++i) {
        const FieldElem& c = f.coeffs()[i];
        if (c.is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        std::string cs = c.to_string();
        bool composite = cs.find('+') != std::string::npos || cs.find('*') != std::string::npos;
        if (i == 0) {
            os << (composite ? "(" + cs + ")" : cs);
            continue;
        }
        if (!c.is_one()) os << (composite ? "(" + cs + ")" : cs) << "*";
        os << "T";
        if (i > 1) os << "^" << i;
    }
    return os.str();
}

} // namespace dlab

#endif
