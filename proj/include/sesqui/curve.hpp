#pragma once

#include <mutex>

#include "sesqui/qorder.hpp"

namespace sesqui {

// Short Weierstrass curve y^2 = x^3 + a x + b over a field tower.  The group
// order over the base field is counted on demand (brute force, budgeted) or
// supplied up front when the caller knows it.
struct CurveDesc {
    Field f;
    FieldElement a;
    FieldElement b;

    mutable std::once_flag order_once;
    mutable std::optional<Int> order_cache;

    bool same(const CurveDesc &o) const;
};

using Curve = std::shared_ptr<const CurveDesc>;

Curve make_curve(const Field &f, const FieldElement &a, const FieldElement &b,
                 std::optional<Int> known_order = std::nullopt);

FieldElement j_invariant(const Curve &E);

class Point {
  public:
    Point() = default;
    explicit Point(Curve E) : E_(std::move(E)), inf_(true) {} // identity
    Point(Curve E, FieldElement x, FieldElement y);

    const Curve &curve() const { return E_; }
    bool is_inf() const { return inf_; }
    const FieldElement &x() const;
    const FieldElement &y() const;

    Point operator+(const Point &o) const;
    Point operator-() const;
    Point operator-(const Point &o) const { return *this + (-o); }
    bool operator==(const Point &o) const;
    bool operator!=(const Point &o) const { return !(*this == o); }

    std::string str() const;

  private:
    Curve E_;
    bool inf_ = true;
    FieldElement x_, y_;
};

Point scalar_mul(const Int &n, const Point &P);

// #E(F); brute-force count when q is below the budget, else the descriptor
// must carry a known order.
Int curve_order(const Curve &E, const Int &budget = Int(1) << 24);

Int point_order(const Point &P);

Point random_point(const Curve &E, Rng &rng);

// A point of exact order m (E[m] assumed rational; retries internally).
Point random_point_of_order(const Curve &E, const Int &m, Rng &rng);

// Basis (P, Q) of E[m] with e_m(P, Q) of exact order m.
std::pair<Point, Point> torsion_basis(const Curve &E, const Int &m, Rng &rng);

// f_{n,P} evaluated on the degree-0 divisor (S) - (T); normalization-free.
// Throws divisor_support_collision when a line vanishes at S or T.
FieldElement miller_eval(const Point &P, const Int &n, const Point &S, const Point &T);

// f_{u,T} with divisor u(T) - ([u]T) - (u-1)(inf), any sign of u, evaluated
// on (S1) - (S2).
FieldElement miller_general(const Int &u, const Point &T, const Point &S1, const Point &S2);

FieldElement weil_pairing(const Point &P, const Point &Q, const Int &m, Rng &rng);
FieldElement weil_pairing(const Point &P, const Point &Q, const Int &m);

// One prime-degree Velu step.
struct IsogenyStep {
    Point kernel_gen;
    Int ell;
    Curve domain;
    Curve codomain;
};

struct Isogeny {
    std::vector<IsogenyStep> steps;
    Curve domain;
    Curve codomain;
    Int degree = 1;
};

Isogeny identity_isogeny(const Curve &E);
Isogeny velu_isogeny(const Point &kernel_gen, const Int &ell);
// Decomposes a cyclic kernel generator of smooth order d into prime steps.
Isogeny velu_chain(const Point &kernel_gen, const Int &d);
Point isogeny_eval(const Isogeny &phi, const Point &P);
Isogeny compose(const Isogeny &phi, const Isogeny &psi); // psi after phi

// Isomorphisms E1 -> E2, (x, y) -> (u^2 x, u^3 y), one entry per valid u.
struct CurveIso {
    Curve domain, codomain;
    FieldElement u;
};
std::vector<CurveIso> find_isomorphisms(const Curve &E1, const Curve &E2);
Point iso_eval(const CurveIso &iso, const Point &P);

// #E(F_{q^j}) from #E(F_q) via the Frobenius trace recursion.
Int order_over_extension(const Int &q, const Int &order_base, unsigned j);

} // namespace sesqui
