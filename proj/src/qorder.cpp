#include "sesqui/qorder.hpp"

#include <algorithm>
#include <set>

namespace sesqui {

QuadOrder make_order(const Int &t, const Int &n) {
    if (t * t - 4 * n >= 0)
        fail(errc::bad_instance, "t^2 - 4n must be negative for an imaginary quadratic order");
    return {t, n};
}

OrderElem oe_add(const OrderElem &x, const OrderElem &y) { return {x.a + y.a, x.b + y.b}; }
OrderElem oe_sub(const OrderElem &x, const OrderElem &y) { return {x.a - y.a, x.b - y.b}; }

OrderElem oe_mul(const OrderElem &x, const OrderElem &y, const QuadOrder &ord) {
    // (a1 + b1 t)(a2 + b2 t) with tau^2 = t*tau - n
    return {x.a * y.a - x.b * y.b * ord.n, x.a * y.b + x.b * y.a + x.b * y.b * ord.t};
}

OrderElem oe_conj(const OrderElem &x, const QuadOrder &ord) { return {x.a + x.b * ord.t, -x.b}; }

Int oe_norm(const OrderElem &x, const QuadOrder &ord) {
    return x.a * x.a + x.a * x.b * ord.t + x.b * x.b * ord.n;
}

Int oe_trace(const OrderElem &x, const QuadOrder &ord) { return 2 * x.a + x.b * ord.t; }

OrderElem oe_mod(const OrderElem &x, const Int &m) { return {mod_reduce(x.a, m), mod_reduce(x.b, m)}; }

Mat2 mat_mul(const Mat2 &x, const Mat2 &y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
            x.c * y.b + x.d * y.d};
}

Mat2 mat_add(const Mat2 &x, const Mat2 &y) { return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d}; }

Mat2 mat_scale(const Int &k, const Mat2 &x) { return {k * x.a, k * x.b, k * x.c, k * x.d}; }

Mat2 mat_inv_mod(const Mat2 &x, const Int &m) {
    Int det = mod_reduce(x.det(), m);
    Int di = invmod(det, m);
    Mat2 adj{x.d, -x.b, -x.c, x.a};
    return mat_scale(di, adj).mod(m);
}

Mat2 rho(const OrderElem &alpha, const QuadOrder &ord) {
    // alpha * 1 = a + b tau, alpha * tau = -bn + (a + bt) tau
    return {alpha.a, -alpha.b * ord.n, alpha.b, alpha.a + alpha.b * ord.t};
}

PairVal pair_mul(const PairVal &u, const PairVal &v) { return {u.x * v.x, u.y * v.y}; }

PairVal pair_pow_int(const PairVal &v, const Int &e) { return {v.x.pow(e), v.y.pow(e)}; }

PairVal pair_pow(const PairVal &v, const OrderElem &alpha, const QuadOrder &ord) {
    if (v.x.is_zero() || v.y.is_zero())
        fail(errc::zero_element, "pair_pow on a pair with a zero coordinate");
    Mat2 r = rho(alpha, ord);
    return {v.x.pow(r.a) * v.y.pow(r.b), v.x.pow(r.c) * v.y.pow(r.d)};
}

std::vector<Int> norms_mod(const QuadOrder &ord, const Int &m, const Int &budget) {
    if (m < 2)
        fail(errc::bad_instance, "norms_mod requires m >= 2");
    if (m * m > budget)
        fail(errc::budget_exceeded, "norms_mod enumeration over " + Int(m * m).get_str() + " pairs");
    std::set<Int> out;
    for (Int a = 0; a < m; ++a)
        for (Int b = 0; b < m; ++b)
            out.insert(mod_reduce(oe_norm({a, b}, ord), m));
    return {out.begin(), out.end()};
}

std::vector<Int> unit_sqrts(const Int &m, const Int &c) { return all_sqrts_mod(c, m); }

namespace {

// solutions x of T*x = r (mod m); at most gcd(T, m) of them
std::vector<Int> linear_cong(const Int &T, const Int &r, const Int &m) {
    Int g = gcd(T, m);
    if (mod_reduce(r, g) != 0)
        return {};
    if (g == m) // T = 0 mod m: handled by the caller's enumeration branch
        return {};
    Int m2 = m / g;
    Int x0 = mod_reduce(mod_reduce(r / g, m2) * invmod(mod_reduce(T / g, m2), m2), m2);
    std::vector<Int> out;
    for (Int k = 0; k < g; ++k)
        out.push_back(x0 + k * m2);
    return out;
}

} // namespace

std::vector<OrderElem> solve_lambda(const Int &nval, const OrderElem &sqval, const Int &m,
                                    const QuadOrder &ord, const Int &budget) {
    // Tr(lambda)^2 = Tr(lambda^2) + 2 N(lambda), and Tr(lambda)*lambda =
    // lambda^2 + N(lambda); enumerate trace candidates, solve linearly,
    // then filter on the exact constraints.
    Int tr_sq = mod_reduce(oe_trace(sqval, ord) + 2 * nval, m);
    std::vector<Int> traces = unit_sqrts(m, tr_sq);
    OrderElem rhs = oe_mod(oe_add(sqval, OrderElem::integer(nval)), m);

    auto check = [&](const OrderElem &cand) {
        if (mod_reduce(oe_norm(cand, ord) - nval, m) != 0)
            return false;
        OrderElem sq = oe_mod(oe_mul(cand, cand, ord), m);
        return sq == oe_mod(sqval, m);
    };

    std::set<std::pair<Int, Int>> found;
    for (const Int &T : traces) {
        Int g = gcd(T, m);
        if (g == 0)
            g = m;
        if (g == m) {
            // T = 0: the linear relation degenerates; brute force
            if (m * m > budget)
                fail(errc::budget_exceeded, "solve_lambda degenerate trace enumeration");
            for (Int a = 0; a < m; ++a)
                for (Int b = 0; b < m; ++b) {
                    OrderElem cand{a, b};
                    if (mod_reduce(oe_trace(cand, ord), m) != 0)
                        continue;
                    if (check(cand))
                        found.insert({a, b});
                }
            continue;
        }
        auto as = linear_cong(T, rhs.a, m);
        auto bs = linear_cong(T, rhs.b, m);
        if (Int(as.size()) * Int(bs.size()) > budget)
            fail(errc::budget_exceeded, "solve_lambda candidate product too large");
        for (const Int &a : as)
            for (const Int &b : bs) {
                OrderElem cand{a, b};
                if (mod_reduce(oe_trace(cand, ord) - T, m) != 0)
                    continue;
                if (check(cand))
                    found.insert({a, b});
            }
    }
    std::vector<OrderElem> out;
    for (const auto &[a, b] : found)
        out.push_back({a, b});
    return out;
}

} // namespace sesqui
