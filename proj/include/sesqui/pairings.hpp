#pragma once

#include "sesqui/orientation.hpp"

namespace sesqui {

// Pair value after the final exponentiation, coordinates in mu_m.
struct ReducedPairValue {
    PairVal v;
    Int m;

    bool operator==(const ReducedPairValue &o) const { return v == o.v && m == o.m; }
    bool is_trivial() const { return v.x.is_one() && v.y.is_one(); }
};

// Tate-Lichtenbaum pairing f_P(D_Q) for one admissible auxiliary shift.  The
// raw value is a coset representative mod (F*)^m; only the reduced value is
// canonical.
FieldElement tate(const Point &P, const Point &Q, const Int &m, Rng &rng);

// tate(...)^((q-1)/m), independent of all auxiliary choices.
FieldElement tate_reduced(const Point &P, const Point &Q, const Int &m, Rng &rng);

// Sesquilinear pairing at level n (n | orient.m) via the two-Tate rewrite
// (t1^{2N} t2^{-Tr}, t2^2 t1^{-Tr}) with t1 = t_n(P,Q), t2 = t_n([tau]P,Q),
// reduced componentwise.
ReducedPairValue sesqui_T(const Point &P, const Point &Q, const Int &n, const Orientation &orient,
                          Rng &rng);

struct SesquiAlphaResult {
    ReducedPairValue twisted; // T_alpha(P,Q)^{conj(alpha)}, level N(alpha)
    std::optional<ReducedPairValue> untwisted; // T_alpha itself when recoverable
    bool conjugate_invertible = false;
};

SesquiAlphaResult sesqui_T_alpha(const Point &P, const Point &Q, const OrderElem &alpha,
                                 const Orientation &orient, Rng &rng);

// Direct divisor-theoretic evaluation of T_alpha (slow reference oracle).
// R_aux shifts the evaluation divisors; collisions raise
// divisor_support_collision and the caller retries with a new shift.
PairVal sesqui_direct(const Point &P, const Point &Q, const OrderElem &alpha,
                      const Orientation &orient, const Point &R_aux, Rng &rng);

// Componentwise reduction x -> x^((q-1)/n).
ReducedPairValue reduce_pair(const PairVal &v, const Int &n);

// T'_n(P,Q) = (t_n([tau]P, Q), t_n(P, Q)), reduced.
ReducedPairValue tprime(const Point &P, const Point &Q, const Int &n, const Orientation &orient,
                        Rng &rng);

enum class PairingKind { sesqui, tprime };

// lcm of the multiplicative orders of the two coordinates.
Int value_order(const ReducedPairValue &val);

// Multiplicative order of the self-pairing of P (P of exact order n).
Int self_pairing_order(const Point &P, const Int &n, const Orientation &orient, PairingKind kind,
                       Rng &rng);

} // namespace sesqui
