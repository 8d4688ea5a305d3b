#pragma once

#include "sesqui/ffield.hpp"

namespace sesqui {

// O = Z[tau] presented by trace and norm of tau: tau^2 = t*tau - n.
struct QuadOrder {
    Int t;
    Int n;

    Int disc() const { return t * t - 4 * n; }
    bool operator==(const QuadOrder &o) const { return t == o.t && n == o.n; }
};

QuadOrder make_order(const Int &t, const Int &n); // checks t^2 - 4n < 0

// alpha = a + b*tau.
struct OrderElem {
    Int a;
    Int b;

    static OrderElem integer(const Int &v) { return {v, Int(0)}; }
    bool operator==(const OrderElem &o) const { return a == o.a && b == o.b; }
};

OrderElem oe_add(const OrderElem &x, const OrderElem &y);
OrderElem oe_sub(const OrderElem &x, const OrderElem &y);
OrderElem oe_mul(const OrderElem &x, const OrderElem &y, const QuadOrder &ord);
OrderElem oe_conj(const OrderElem &x, const QuadOrder &ord);
Int oe_norm(const OrderElem &x, const QuadOrder &ord);
Int oe_trace(const OrderElem &x, const QuadOrder &ord);
OrderElem oe_mod(const OrderElem &x, const Int &m);

// 2x2 integer matrix, row-major.
struct Mat2 {
    Int a, b, c, d;

    static Mat2 identity() { return {Int(1), Int(0), Int(0), Int(1)}; }
    Int det() const { return a * d - b * c; }
    Mat2 mod(const Int &m) const {
        return {mod_reduce(a, m), mod_reduce(b, m), mod_reduce(c, m), mod_reduce(d, m)};
    }
    bool operator==(const Mat2 &o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }
};

Mat2 mat_mul(const Mat2 &x, const Mat2 &y);
Mat2 mat_add(const Mat2 &x, const Mat2 &y);
Mat2 mat_scale(const Int &k, const Mat2 &x);
Mat2 mat_inv_mod(const Mat2 &x, const Int &m); // fails if det not a unit

// Left-regular representation of alpha on the basis (1, tau).
Mat2 rho(const OrderElem &alpha, const QuadOrder &ord);

// Multiplicative pair (x, y) in (F*)^2 carrying the O-action through rho.
struct PairVal {
    FieldElement x;
    FieldElement y;

    bool operator==(const PairVal &o) const { return x == o.x && y == o.y; }
};

PairVal pair_mul(const PairVal &u, const PairVal &v);
PairVal pair_pow_int(const PairVal &v, const Int &e);
PairVal pair_pow(const PairVal &v, const OrderElem &alpha, const QuadOrder &ord);

// { N(a + b tau) mod m : a, b in [0, m) }.
std::vector<Int> norms_mod(const QuadOrder &ord, const Int &m, const Int &budget = Int(1000000));

// All x in Z/m with x^2 = c (m smooth).
std::vector<Int> unit_sqrts(const Int &m, const Int &c);

// All lambda in O/mO with N(lambda) = nval and lambda^2 = sqval (sqval given
// as an order element residue).  Complete, sorted by (a, b).
std::vector<OrderElem> solve_lambda(const Int &nval, const OrderElem &sqval, const Int &m,
                                    const QuadOrder &ord, const Int &budget = Int(1) << 22);

} // namespace sesqui
