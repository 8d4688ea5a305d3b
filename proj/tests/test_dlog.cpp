#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "sesqui/dlog.hpp"

using namespace sesqui;

namespace {

Curve e541() {
    Field f = make_prime_field(Int(541));
    return make_curve(f, one(f), zero(f));
}

} // namespace

TEST_CASE("dlog_mu basics and brute-force agreement") {
    Field f = make_prime_field(Int(541));
    FieldElement g = mu_generator(f, Int(5)); // 48
    CHECK(dlog_mu(g, one(f), Int(5)) == 0);
    CHECK(dlog_mu(g, g, Int(5)) == 1);
    CHECK(dlog_mu(g, g.pow(Int(3)), Int(5)) == 3);
    CHECK_THROWS_WITH_AS(dlog_mu(g, FieldElement(f, Int(2)), Int(5)),
                         doctest::Contains("NotInSubgroup"), Error);

    // random moduli: full brute-force cross-check
    Field f2 = make_prime_field(Int(10007));
    Rng rng(31);
    for (Int m : {Int(2), Int(7), Int(5003), Int(10006)}) {
        if ((f2->q - 1) % m != 0)
            continue;
        FieldElement h = mu_generator(f2, m);
        for (int i = 0; i < 5; ++i) {
            Int x = rng.below(m);
            CHECK(dlog_mu(h, h.pow(x), m) == x);
        }
    }
}

TEST_CASE("dlog_mu matches brute force for small orders") {
    Field f = make_prime_field(Int(541));
    for (Int m : {Int(2), Int(4), Int(5), Int(10), Int(20), Int(27), Int(54), Int(108), Int(540)}) {
        FieldElement g = mu_generator(f, m);
        FieldElement cur = one(f);
        for (Int e = 0; e < m; ++e) {
            CHECK(dlog_mu(g, cur, m) == e);
            cur = cur * g;
        }
    }
}

TEST_CASE("point_dlog2d") {
    Curve E = e541();
    Rng rng(41);
    auto [P, Q] = torsion_basis(E, Int(5), rng);
    CHECK(point_dlog2d(P, P, Q, Int(5), rng) == std::pair{Int(1), Int(0)});
    CHECK(point_dlog2d(Point(E), P, Q, Int(5), rng) == std::pair{Int(0), Int(0)});
    Point R = scalar_mul(Int(3), P) + scalar_mul(Int(4), Q);
    CHECK(point_dlog2d(R, P, Q, Int(5), rng) == std::pair{Int(3), Int(4)});

    for (int i = 0; i < 30; ++i) {
        Int u = rng.below(Int(5)), v = rng.below(Int(5));
        Point S = scalar_mul(u, P) + scalar_mul(v, Q);
        CHECK(point_dlog2d(S, P, Q, Int(5), rng) == std::pair{u, v});
    }

    Point off = random_point(E, rng);
    while (scalar_mul(Int(5), off).is_inf())
        off = random_point(E, rng);
    CHECK_THROWS_WITH_AS(point_dlog2d(off, P, Q, Int(5), rng),
                         doctest::Contains("PointNotInTorsion"), Error);
}

TEST_CASE("olinear_dlog round-trips") {
    Field f = make_prime_field(Int(541));
    QuadOrder zi = make_order(Int(0), Int(1));
    FieldElement g = mu_generator(f, Int(5));
    // base (g, 1) has exponent vector (1, 0), annihilator exactly 5*Z[i]
    PairVal base{g, one(f)};
    CHECK(olinear_dlog(base, base, Int(5), zi) == OrderElem{Int(1), Int(0)});

    Rng rng(43);
    for (int i = 0; i < 25; ++i) {
        OrderElem lam{rng.below(Int(5)), rng.below(Int(5))};
        PairVal target = pair_pow(base, lam, zi);
        CHECK(olinear_dlog(base, target, Int(5), zi) == oe_mod(lam, Int(5)));
    }

    // composite modulus
    Field f31 = make_prime_field(Int(31));
    FieldElement g15 = mu_generator(f31, Int(15));
    PairVal b15{g15, g15.pow(Int(4))};
    QuadOrder o = make_order(Int(1), Int(3));
    for (int i = 0; i < 25; ++i) {
        OrderElem lam{rng.below(Int(15)), rng.below(Int(15))};
        PairVal target = pair_pow(b15, lam, o);
        OrderElem got = olinear_dlog(b15, target, Int(15), o);
        CHECK(pair_pow(b15, got, o) == target);
        CHECK(got == oe_mod(lam, Int(15)));
    }

    // degenerate base: trivial pair
    PairVal triv{one(f), one(f)};
    CHECK_THROWS_AS(olinear_dlog(triv, base, Int(5), zi), Error);
}
