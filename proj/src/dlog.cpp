#include "sesqui/dlog.hpp"

#include <map>

namespace sesqui {

namespace {

// g of prime order ell; BSGS.
Int dlog_prime(const FieldElement &g, const FieldElement &h, const Int &ell) {
    if (h.is_one())
        return 0;
    Int step = sqrt(ell) + 1;
    std::map<std::string, Int> table;
    FieldElement cur = one(g.field());
    for (Int j = 0; j < step; ++j) {
        table.emplace(cur.str(), j);
        cur = cur * g;
    }
    FieldElement giant = g.pow(step).inv();
    FieldElement y = h;
    for (Int i = 0; i < step + 1; ++i) {
        auto it = table.find(y.str());
        if (it != table.end())
            return mod_reduce(i * step + it->second, ell);
        y = y * giant;
    }
    fail(errc::not_in_subgroup, "BSGS found no logarithm");
}

} // namespace

Int dlog_mu(const FieldElement &g, const FieldElement &h, const Int &m, const Int &smooth_bound) {
    Int n = mult_order_dividing(g, m);
    if (!h.pow(n).is_one())
        fail(errc::not_in_subgroup, "target outside the subgroup generated by the base");
    Int result = 0, result_mod = 1;
    for (const auto &[p, e] : factorize(n)) {
        if (p > smooth_bound)
            fail(errc::not_smooth, "group order has prime factor " + p.get_str());
        Int pe = 1;
        for (unsigned i = 0; i < e; ++i)
            pe *= p;
        // digits of x mod p^e
        FieldElement gp = g.pow(n / pe);       // order p^e
        FieldElement gp1 = gp.pow(pe / p);     // order p
        FieldElement hp = h.pow(n / pe);
        Int x = 0, shift = 1;
        for (unsigned i = 0; i < e; ++i) {
            FieldElement t = (hp * gp.pow(x).inv()).pow(pe / (shift * p));
            Int d = dlog_prime(gp1, t, p);
            x += shift * d;
            shift *= p;
        }
        result = result_mod == 1 ? x : crt_pair(result, result_mod, x, pe);
        result_mod *= pe;
    }
    return mod_reduce(result, n);
}

std::pair<Int, Int> point_dlog2d(const Point &R, const Point &P, const Point &Q, const Int &m,
                                 Rng &rng) {
    if (R.is_inf())
        return {Int(0), Int(0)};
    if (!scalar_mul(m, R).is_inf())
        fail(errc::point_not_in_torsion, "point is not m-torsion");
    FieldElement g = weil_pairing(P, Q, m, rng);
    Int u = dlog_mu(g, weil_pairing(R, Q, m, rng), m);
    Int v = dlog_mu(g, weil_pairing(P, R, m, rng), m);
    if (scalar_mul(u, P) + scalar_mul(v, Q) != R)
        fail(errc::internal_inconsistency, "point decomposition failed verification");
    return {u, v};
}

OrderElem olinear_dlog(const PairVal &base, const PairVal &target, const Int &m,
                       const QuadOrder &ord, const Int &smooth_bound) {
    const Field &f = base.x.field();
    FieldElement g = mu_generator(f, m);
    Int w1x = dlog_mu(g, base.x, m, smooth_bound);
    Int w1y = dlog_mu(g, base.y, m, smooth_bound);
    Int w2x = dlog_mu(g, target.x, m, smooth_bound);
    Int w2y = dlog_mu(g, target.y, m, smooth_bound);

    // pair_pow(base, a + b*tau) = target becomes, on exponent vectors,
    // a*w1 + b*(rho(tau) w1) = w2 (mod m)
    Mat2 mt = rho({Int(0), Int(1)}, ord);
    Int c1x = w1x, c1y = w1y;
    Int c2x = mt.a * w1x + mt.b * w1y;
    Int c2y = mt.c * w1x + mt.d * w1y;
    Mat2 sys{c1x, c2x, c1y, c2y}; // columns (w1, rho(tau) w1)

    Int result_a = 0, result_b = 0, result_mod = 1;
    for (const auto &[p, e] : factorize(m)) {
        Int pe = 1;
        for (unsigned i = 0; i < e; ++i)
            pe *= p;
        Int det = mod_reduce(sys.det(), pe);
        Int a, b;
        if (gcd(det, p) == 1) {
            Mat2 inv = mat_inv_mod(sys, pe);
            a = mod_reduce(inv.a * w2x + inv.b * w2y, pe);
            b = mod_reduce(inv.c * w2x + inv.d * w2y, pe);
        } else {
            if (mod_reduce(w1x, p) == 0 && mod_reduce(w1y, p) == 0)
                fail(errc::degenerate_base, "base has no full-order component mod " + p.get_str());
            // bounded search over the non-invertible prime power
            if (pe * pe > (Int(1) << 20))
                fail(errc::degenerate_base, "base exponent matrix singular mod " + p.get_str());
            bool found = false;
            a = b = 0;
            for (Int aa = 0; aa < pe && !found; ++aa)
                for (Int bb = 0; bb < pe; ++bb) {
                    if (mod_reduce(sys.a * aa + sys.b * bb - w2x, pe) == 0 &&
                        mod_reduce(sys.c * aa + sys.d * bb - w2y, pe) == 0) {
                        a = aa;
                        b = bb;
                        found = true;
                        break;
                    }
                }
            if (!found)
                fail(errc::no_solution, "target not in the O-span of the base");
        }
        result_a = result_mod == 1 ? a : crt_pair(result_a, result_mod, a, pe);
        result_b = result_mod == 1 ? b : crt_pair(result_b, result_mod, b, pe);
        result_mod *= pe;
    }
    OrderElem lam{result_a, result_b};
    if (!(pair_pow(base, lam, ord) == target))
        fail(errc::no_solution, "O-linear logarithm failed verification");
    return lam;
}

} // namespace sesqui
