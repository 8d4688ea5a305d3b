#include "sesqui/pairings.hpp"

#include <set>

namespace sesqui {

FieldElement tate(const Point &P, const Point &Q, const Int &m, Rng &rng) {
    const Curve &E = P.curve();
    const Field &f = E->f;
    if ((f->q - 1) % m != 0)
        fail(errc::roots_of_unity_missing, "mu_" + m.get_str() + " not rational");
    if (!scalar_mul(m, P).is_inf())
        fail(errc::point_not_in_torsion, "first pairing argument is not m-torsion");
    if (P.is_inf())
        return one(f);
    for (int tries = 0; tries < 32; ++tries) {
        Point R = random_point(E, rng);
        Point A = Q + R;
        if (A.is_inf() || R.is_inf() || A == P || R == P)
            continue;
        try {
            return miller_eval(P, m, A, R);
        } catch (const Error &e) {
            if (e.code() != errc::divisor_support_collision)
                throw;
        }
    }
    fail(errc::divisor_support_collision, "tate pairing retries exhausted");
}

FieldElement tate_reduced(const Point &P, const Point &Q, const Int &m, Rng &rng) {
    const Field &f = P.curve()->f;
    return tate(P, Q, m, rng).pow((f->q - 1) / m);
}

ReducedPairValue reduce_pair(const PairVal &v, const Int &n) {
    const Field &f = v.x.field();
    if ((f->q - 1) % n != 0)
        fail(errc::roots_of_unity_missing, "mu_" + n.get_str() + " not rational");
    Int e = (f->q - 1) / n;
    return {{v.x.pow(e), v.y.pow(e)}, n};
}

ReducedPairValue sesqui_T(const Point &P, const Point &Q, const Int &n, const Orientation &orient,
                          Rng &rng) {
    if (orient.m % n != 0)
        fail(errc::bad_instance, "pairing level must divide the orientation level");
    Point tauP = apply(orient, OrderElem{Int(0), Int(1)}, P, rng);
    FieldElement t1 = tate_reduced(P, Q, n, rng);
    FieldElement t2 = tate_reduced(tauP, Q, n, rng);
    Int N = mod_reduce(orient.ord.n, n), Tr = mod_reduce(orient.ord.t, n);
    FieldElement x = t1.pow(mod_reduce(2 * N, n)) * t2.pow(mod_reduce(-Tr, n));
    FieldElement y = t2.pow(Int(2)) * t1.pow(mod_reduce(-Tr, n));
    return {{x, y}, n};
}

ReducedPairValue tprime(const Point &P, const Point &Q, const Int &n, const Orientation &orient,
                        Rng &rng) {
    if (orient.m % n != 0)
        fail(errc::bad_instance, "pairing level must divide the orientation level");
    Point tauP = apply(orient, OrderElem{Int(0), Int(1)}, P, rng);
    return {{tate_reduced(tauP, Q, n, rng), tate_reduced(P, Q, n, rng)}, n};
}

Int value_order(const ReducedPairValue &val) {
    Int ox = val.v.x.is_one() ? Int(1) : mult_order_dividing(val.v.x, val.m);
    Int oy = val.v.y.is_one() ? Int(1) : mult_order_dividing(val.v.y, val.m);
    return lcm(ox, oy);
}

Int self_pairing_order(const Point &P, const Int &n, const Orientation &orient, PairingKind kind,
                       Rng &rng) {
    if (P.is_inf() || !scalar_mul(n, P).is_inf())
        fail(errc::wrong_order, "self-pairing needs a point of exact order n");
    for (const auto &[q, e] : factorize(n)) {
        (void)e;
        if (scalar_mul(n / q, P).is_inf())
            fail(errc::wrong_order, "self-pairing needs a point of exact order n");
    }
    ReducedPairValue v = kind == PairingKind::sesqui ? sesqui_T(P, P, n, orient, rng)
                                                     : tprime(P, P, n, orient, rng);
    return value_order(v);
}

namespace {

// x with conj(alpha) * x = 1 mod (alpha, N) in O/NO, if one exists.
std::optional<OrderElem> conj_inverse_mod_alpha(const OrderElem &alpha, const QuadOrder &ord,
                                                const Int &N) {
    if (N * N > (Int(1) << 20))
        fail(errc::budget_exceeded, "conjugate inversion enumeration");
    OrderElem bar = oe_conj(alpha, ord);
    std::set<std::pair<Int, Int>> alpha_image;
    for (Int a = 0; a < N; ++a)
        for (Int b = 0; b < N; ++b) {
            OrderElem im = oe_mod(oe_mul(alpha, {a, b}, ord), N);
            alpha_image.insert({im.a, im.b});
        }
    for (Int a = 0; a < N; ++a)
        for (Int b = 0; b < N; ++b) {
            OrderElem z = oe_mod(oe_sub(oe_mul(bar, {a, b}, ord), OrderElem::integer(Int(1))), N);
            if (alpha_image.count({z.a, z.b}))
                return OrderElem{a, b};
        }
    return std::nullopt;
}

} // namespace

SesquiAlphaResult sesqui_T_alpha(const Point &P, const Point &Q, const OrderElem &alpha,
                                 const Orientation &orient, Rng &rng) {
    SesquiAlphaResult out;
    if (alpha.b == 0) {
        // integer alpha: T_alpha is the level-|a| pairing itself
        Int a = abs(alpha.a);
        if (a == 0)
            fail(errc::bad_instance, "alpha must be nonzero");
        if (a == 1) {
            const Field &f = P.curve()->f;
            out.twisted = {{one(f), one(f)}, Int(1)};
            out.untwisted = out.twisted;
            out.conjugate_invertible = false;
            return out;
        }
        ReducedPairValue base = sesqui_T(P, Q, a, orient, rng);
        out.untwisted = base;
        out.twisted = {pair_pow_int(base.v, a), a};
        out.conjugate_invertible = false;
        return out;
    }
    Int N = oe_norm(alpha, orient.ord);
    OrderElem bar = oe_conj(alpha, orient.ord);
    if (!apply(orient, bar, P, rng).is_inf())
        fail(errc::point_not_in_torsion, "P must lie in E[conj(alpha)]");
    ReducedPairValue tw = sesqui_T(P, Q, N, orient, rng);
    out.twisted = tw;
    auto inv = conj_inverse_mod_alpha(alpha, orient.ord, N);
    if (inv) {
        out.conjugate_invertible = true;
        out.untwisted = ReducedPairValue{pair_pow(tw.v, *inv, orient.ord), N};
    }
    return out;
}

namespace {

// f with divisor u(T1) + v(T2) - (u+v)(inf) evaluated on (S1) - (S2);
// requires [u]T1 + [v]T2 = inf.
FieldElement two_point_miller(const Int &u, const Point &T1, const Int &v, const Point &T2,
                              const Point &S1, const Point &S2) {
    const Field &f = S1.curve()->f;
    Point sum = scalar_mul(u, T1) + scalar_mul(v, T2);
    if (!sum.is_inf())
        fail(errc::non_principal_divisor, "divisor coefficients do not annihilate the points");
    FieldElement acc = one(f);
    acc = acc * miller_general(u, T1, S1, S2);
    acc = acc * miller_general(v, T2, S1, S2);
    Point uT1 = scalar_mul(u, T1);
    if (!uT1.is_inf()) {
        // vertical correction joining the two leftover points
        FieldElement v1 = S1.x() - uT1.x();
        FieldElement v2 = S2.x() - uT1.x();
        if (v1.is_zero() || v2.is_zero())
            fail(errc::divisor_support_collision, "vertical vanishes at an evaluation point");
        acc = acc * v1 / v2;
    }
    return acc;
}

} // namespace

PairVal sesqui_direct(const Point &P, const Point &Q, const OrderElem &alpha,
                      const Orientation &orient, const Point &R_aux, Rng &rng) {
    OrderElem bar = oe_conj(alpha, orient.ord);
    if (!apply(orient, bar, P, rng).is_inf())
        fail(errc::point_not_in_torsion, "P must lie in E[conj(alpha)]");
    Mat2 r = rho(alpha, orient.ord);

    OrderElem minus_tau{Int(0), Int(-1)};
    Point T1 = apply(orient, minus_tau, P, rng); // [-tau]P
    const Point &T2 = P;

    Point mtQ = apply(orient, minus_tau, Q, rng);
    Point mtR = apply(orient, minus_tau, R_aux, rng);
    Point D1a = mtQ + mtR, D1b = mtR;
    Point D2a = Q + R_aux, D2b = R_aux;
    if (D1a.is_inf() || D1b.is_inf() || D2a.is_inf() || D2b.is_inf())
        fail(errc::divisor_support_collision, "auxiliary shift degenerates a divisor");

    auto fpair_at = [&](const Point &Sa, const Point &Sb) -> PairVal {
        FieldElement f1 = two_point_miller(r.a, T1, r.b, T2, Sa, Sb);
        FieldElement f2 = two_point_miller(r.c, T1, r.d, T2, Sa, Sb);
        return {f1, f2};
    };

    PairVal at_D1 = fpair_at(D1a, D1b);
    PairVal at_D2 = fpair_at(D2a, D2b);
    OrderElem tau_bar{orient.ord.t, Int(-1)};
    return pair_mul(at_D1, pair_pow(at_D2, tau_bar, orient.ord));
}

} // namespace sesqui
