#pragma once

#include "sesqui/dlog.hpp"

namespace sesqui {

// Formal combination of the named primitive endomorphisms "i" (on curves
// y^2 = x^3 + ax), "pi" (p-power Frobenius) and integer scalars, with an
// overall integer denominator.  Examples: "i", "pi*pi", "(i + pi)/2".
struct EndoExpr {
    enum class Kind { I, Pi, Scalar, Sum, Diff, Compose };

    Kind kind = Kind::Scalar;
    Int scalar = 0;
    std::vector<EndoExpr> children;
    Int den = 1; // divisor applied on E[m], must be coprime to m

    static EndoExpr parse(const std::string &text);
    std::string str() const;
};

// Evaluate the expression at P in E[m]; the denominator acts as its inverse
// mod m, so m must be coprime to den (and odd when den is even).
Point endo_eval(const EndoExpr &expr, const Point &P, const Int &m);

// Action of tau on a fixed basis of E[m], stored as a matrix mod m.
// Column j holds the coordinates of [tau]B_j in the basis (P, Q).
struct Orientation {
    Curve E;
    Int m;
    Point P, Q;
    Mat2 M; // mod m
    QuadOrder ord;
    std::optional<Int> rel_conductor; // metadata, supplied not computed
};

Orientation orientation_from_matrix(const Curve &E, const Int &m, const Point &P, const Point &Q,
                                    const Mat2 &M, const QuadOrder &ord,
                                    std::optional<Int> rel_conductor = std::nullopt);

Orientation orientation_from_endo(const Curve &E, const Int &m, const Point &P, const Point &Q,
                                  const EndoExpr &expr, const QuadOrder &ord, Rng &rng,
                                  std::optional<Int> rel_conductor = std::nullopt);

// [alpha] R through the matrix action.
Point apply(const Orientation &orient, const OrderElem &alpha, const Point &R, Rng &rng);

// Coordinates of R in the orientation's basis.
std::pair<Int, Int> coords(const Orientation &orient, const Point &R, Rng &rng);

bool is_module_generator(const Orientation &orient, const Point &R, Rng &rng);

// Maximal s | m with E[s] contained in the O-span of R.
Int max_s(const Orientation &orient, const Point &R, Rng &rng);

// gcd(m, f) = 1 predicate cross-checked by a random generator search.
bool is_cyclic_module(const Orientation &orient, const Int &rel_conductor, Rng &rng,
                      int budget = 64);

// Point of exact order expected_order annihilated by every generator.
Point ideal_kernel(const Orientation &orient, const std::vector<OrderElem> &generators,
                   const Int &expected_order, Rng &rng);

struct Eigenbasis {
    Point S, T;
    Int eig_s, eig_t; // [tau]S = [eig_s]S, [tau]T = [eig_t]T
};

// Basis on which tau acts diagonally; not_split if none exists.
Eigenbasis eigenbasis(const Orientation &orient, Rng &rng);

// Matrix of alpha = a + b*tau in the orientation's basis.
Mat2 action_matrix(const Orientation &orient, const OrderElem &alpha);

} // namespace sesqui
