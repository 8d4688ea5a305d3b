#include "sesqui/instance.hpp"

namespace sesqui {

json instance_to_json(const AttackInstance &inst) {
    const PublicInstance &pb = inst.pub;
    json payload = json::object();
    auto put = [&](const char *key, const std::optional<Point> &P) {
        if (P)
            payload[key] = point_to_json(*P);
    };
    put("genE", pb.genE);
    put("genEp", pb.genEp);
    put("R", pb.R);
    put("phiR", pb.phiR);
    put("Pp", pb.Pp);
    put("Qp", pb.Qp);

    json out{{"format", "sesqui-instance-v1"},
             {"variant", pb.variant},
             {"m", int_to_json(pb.m)},
             {"degree", int_to_json(pb.degree)},
             {"E", curve_to_json(pb.E)},
             {"Ep", curve_to_json(pb.Ep)},
             {"orientE", orientation_to_json(pb.orE)},
             {"orientEp", orientation_to_json(pb.orEp)},
             {"payload", payload}};
    if (pb.orE2) {
        out["orient2E"] = orientation_to_json(*pb.orE2);
        out["orient2Ep"] = orientation_to_json(*pb.orEp2);
    }
    if (inst.sealed) {
        json chain = json::array();
        for (const auto &[ell, K] : inst.sealed->chain)
            chain.push_back(json{{"ell", int_to_json(ell)}, {"kernel", point_to_json(K)}});
        json sealed{{"matrix", mat_to_json(inst.sealed->matrix)}, {"chain", chain}};
        if (inst.sealed->lambda)
            sealed["lambda"] = oelem_to_json(*inst.sealed->lambda);
        out["sealed"] = sealed;
    }
    return out;
}

AttackInstance instance_from_json(const json &j) {
    AttackInstance inst;
    PublicInstance &pb = inst.pub;
    if (j.value("format", "") != std::string("sesqui-instance-v1"))
        fail(errc::bad_instance, "unknown instance format");
    pb.variant = j.at("variant").get<std::string>();
    pb.m = int_from_json(j.at("m"));
    pb.degree = int_from_json(j.at("degree"));
    pb.E = curve_from_json(j.at("E"));
    pb.Ep = curve_from_json(j.at("Ep"));
    pb.orE = orientation_from_json(j.at("orientE"), pb.E);
    pb.orEp = orientation_from_json(j.at("orientEp"), pb.Ep);
    if (j.contains("orient2E")) {
        pb.orE2 = orientation_from_json(j.at("orient2E"), pb.E);
        pb.orEp2 = orientation_from_json(j.at("orient2Ep"), pb.Ep);
    }
    const json &payload = j.at("payload");
    auto get = [&](const char *key, const Curve &E) -> std::optional<Point> {
        if (!payload.contains(key))
            return std::nullopt;
        return point_from_json(payload.at(key), E);
    };
    pb.genE = get("genE", pb.E);
    pb.genEp = get("genEp", pb.Ep);
    pb.R = get("R", pb.E);
    pb.phiR = get("phiR", pb.Ep);
    pb.Pp = get("Pp", pb.Ep);
    pb.Qp = get("Qp", pb.Ep);

    if (j.contains("sealed")) {
        SealedTruth st;
        st.matrix = mat_from_json(j.at("sealed").at("matrix"));
        if (j.at("sealed").contains("lambda"))
            st.lambda = oelem_from_json(j.at("sealed").at("lambda"));
        Curve cur = pb.E;
        for (const auto &step : j.at("sealed").at("chain")) {
            Int ell = int_from_json(step.at("ell"));
            Point K = point_from_json(step.at("kernel"), cur);
            Isogeny phi = velu_isogeny(K, ell);
            st.chain.emplace_back(ell, K);
            cur = phi.codomain;
        }
        if (!cur->same(*pb.Ep))
            fail(errc::bad_instance, "sealed chain does not land on Ep");
        inst.sealed = st;
    }
    return inst;
}

Isogeny rebuild_chain(const Curve &E, const std::vector<std::pair<Int, Point>> &chain) {
    Isogeny phi = identity_isogeny(E);
    for (const auto &[ell, K] : chain)
        phi = compose(phi, velu_isogeny(K, ell));
    return phi;
}

namespace {

struct FamilyBase {
    Curve E;
    Int m;
    Point P, Q;
    QuadOrder ord;
    Int conductor = 1;
    EndoExpr tau_expr;
    std::optional<EndoExpr> sigma_expr; // second orientation generator (two-orient)
    QuadOrder ord2{Int(0), Int(1)};
};

Point fixed_point(const Curve &E, const Int &x, const Int &y) {
    return Point(E, FieldElement(E->f, x), FieldElement(E->f, y));
}

// choose between "i" and "0 - i" so the f541 matrix matches the worked example
EndoExpr pick_i_expr(const Curve &E, const Int &m, const Point &P, const Point &Q, Rng &rng,
                     std::optional<Mat2> want = std::nullopt) {
    QuadOrder zi = make_order(Int(0), Int(1));
    for (const char *text : {"i", "0 - i"}) {
        EndoExpr e = EndoExpr::parse(text);
        Orientation cand = orientation_from_endo(E, m, P, Q, e, zi, rng);
        if (!want || cand.M == *want)
            return e;
    }
    fail(errc::internal_inconsistency, "no i-variant matches the requested matrix");
}

FamilyBase make_family(const GenSpec &spec, Rng &rng) {
    FamilyBase fb;
    if (spec.family == "f541") {
        Field f = make_prime_field(Int(541));
        fb.E = make_curve(f, one(f), zero(f));
        fb.m = spec.m != 0 ? spec.m : Int(5);
        if (fb.m == 5) {
            fb.P = fixed_point(fb.E, Int(109), Int(208));
            fb.Q = fixed_point(fb.E, Int(53), Int(195));
        } else {
            std::tie(fb.P, fb.Q) = torsion_basis(fb.E, fb.m, rng);
        }
        fb.ord = make_order(Int(0), Int(1));
        fb.conductor = 1;
        fb.tau_expr = fb.m == 5 ? pick_i_expr(fb.E, fb.m, fb.P, fb.Q, rng,
                                              Mat2{Int(3), Int(3), Int(0), Int(2)})
                                : pick_i_expr(fb.E, fb.m, fb.P, fb.Q, rng);
    } else if (spec.family == "gaussian" || spec.family == "custom") {
        if (spec.p < 3 || !is_probable_prime(spec.p))
            fail(errc::bad_instance, "gaussian family needs a prime p");
        if (spec.m == 0)
            fail(errc::bad_instance, "gaussian family needs an explicit m");
        fb.m = spec.m;
        if (spec.p % 4 == 1) {
            Field f = make_prime_field(spec.p);
            fb.E = make_curve(f, one(f), zero(f));
        } else {
            Field f = make_field(spec.p, 2, {Int(1), Int(0), Int(1)});
            fb.E = make_curve(f, one(f), zero(f), Int((spec.p + 1) * (spec.p + 1)));
        }
        std::tie(fb.P, fb.Q) = torsion_basis(fb.E, fb.m, rng);
        fb.ord = make_order(Int(0), Int(1));
        fb.conductor = 1;
        fb.tau_expr = pick_i_expr(fb.E, fb.m, fb.P, fb.Q, rng);
        if (spec.variant == "two-orient") {
            if (spec.p % 4 != 3)
                fail(errc::bad_instance, "two-orient needs a supersingular gaussian instance");
            fb.sigma_expr = EndoExpr::parse("pi");
            fb.ord2 = make_order(Int(0), spec.p);
        }
    } else if (spec.family == "wouter") {
        if (spec.r < 1)
            fail(errc::bad_instance, "wouter family needs r >= 1");
        Int m = 1;
        for (int i = 0; i < spec.r; ++i)
            m *= 3;
        Int p = 4 * m - 1;
        if (!is_probable_prime(p))
            fail(errc::bad_instance, "4*3^r - 1 = " + p.get_str() + " is not prime");
        Field f = make_field(p, 2, {Int(1), Int(0), Int(1)});
        fb.E = make_curve(f, one(f), zero(f), Int((p + 1) * (p + 1)));
        fb.m = spec.m != 0 ? spec.m : m;
        std::tie(fb.P, fb.Q) = torsion_basis(fb.E, fb.m, rng);
        fb.ord = make_order(Int(0), m);
        // Z[(i+pi)/2] has index 2 in K cap End(E); verified empirically by
        // the generator search below
        fb.conductor = 2;
        fb.tau_expr = EndoExpr::parse("(i + pi)/2");
    } else if (spec.family == "f101") {
        Field f = make_field(Int(101), 2, {Int(2), Int(-4), Int(1)});
        fb.E = make_curve(f, FieldElement(f, Int(30)), FieldElement(f, Int(2)));
        fb.m = spec.m != 0 ? spec.m : Int(3);
        std::tie(fb.P, fb.Q) = torsion_basis(fb.E, fb.m, rng);
        fb.ord = make_order(Int(18), Int(101));
        fb.conductor = 2;
        fb.tau_expr = EndoExpr::parse("pi");
    } else {
        fail(errc::bad_instance, "unknown family " + spec.family);
    }
    return fb;
}

// 2-torsion points with zero y-coordinate, deterministic order.
std::vector<Point> two_torsion_points(const Curve &E) {
    std::vector<Point> out;
    const Field &f = E->f;
    if (E->b.is_zero()) {
        out.emplace_back(E, zero(f), zero(f));
        FieldElement minus_a = -E->a;
        if (auto r = field_sqrt(minus_a)) {
            if (!r->is_zero()) {
                out.emplace_back(E, *r, zero(f));
                out.emplace_back(E, -*r, zero(f));
            }
        }
    } else {
        // scan the prime field for rational roots of the cubic
        if (f->p > (Int(1) << 20))
            fail(errc::budget_exceeded, "2-torsion root scan over a large prime field");
        for (Int x = 0; x < f->p; ++x) {
            FieldElement fx(f, x);
            if ((fx * fx * fx + E->a * fx + E->b).is_zero())
                out.emplace_back(E, fx, zero(f));
        }
    }
    return out;
}

// tau(K) for 2-torsion K, where tau = expr may carry a /2: evaluated as the
// numerator applied to a half of K (well-defined because the numerator kills
// E[2] whenever tau is integral).
Point tau_on_two_torsion(const EndoExpr &expr, const Point &K, Rng &rng) {
    const Curve &E = K.curve();
    Int den = 1;
    std::function<Int(const EndoExpr &)> tden = [&](const EndoExpr &e) {
        Int d = abs(e.den);
        for (const auto &c : e.children)
            d *= tden(c);
        return d;
    };
    den = tden(expr);
    if (den == 1)
        return endo_eval(expr, K, Int(2));
    if (den != 2)
        fail(errc::no_split_prime_kernel, "unsupported denominator in stability test");
    // find Y with [2]Y = K among E[4]
    auto [B1, B2] = torsion_basis(E, Int(4), rng);
    for (Int a = 0; a < 4; ++a)
        for (Int b = 0; b < 4; ++b) {
            Point Y = scalar_mul(a, B1) + scalar_mul(b, B2);
            if (scalar_mul(Int(2), Y) == K) {
                EndoExpr num = expr;
                num.den = 1;
                return endo_eval(num, Y, Int(4));
            }
        }
    fail(errc::internal_inconsistency, "2-torsion point has no half in E[4]");
}

struct ChainBuilder {
    Curve cur;
    std::vector<std::pair<Int, Point>> steps;
    std::vector<Point> tracked;
    Int degree = 1;

    size_t track(const Point &P) {
        tracked.push_back(P);
        return tracked.size() - 1;
    }

    void apply_step(const Point &K, const Int &ell) {
        Isogeny phi = velu_isogeny(K, ell);
        steps.emplace_back(ell, K);
        for (Point &P : tracked)
            P = isogeny_eval(phi, P);
        cur = phi.codomain;
        degree *= ell;
    }
};

Mat2 random_unimodular(const Int &m, Rng &rng) {
    for (;;) {
        Mat2 C{rng.below(m), rng.below(m), rng.below(m), rng.below(m)};
        if (gcd(mod_reduce(C.det(), m), m) == 1)
            return C;
    }
}

Point random_full_order_combo(const Orientation &o, Rng &rng, bool generator_only) {
    for (int tries = 0; tries < 4096; ++tries) {
        Int u = rng.below(o.m), v = rng.below(o.m);
        if (gcd(gcd(u, v), o.m) != 1)
            continue;
        Point R = scalar_mul(u, o.P) + scalar_mul(v, o.Q);
        if (!generator_only || is_module_generator(o, R, rng))
            return R;
    }
    fail(errc::no_such_subgroup, "no O-module generator found (is E[m] cyclic?)");
}

// lambda with [lambda] gen = target, both full-order points.
OrderElem point_olinear(const Orientation &o, const Point &gen, const Point &target, Rng &rng) {
    auto [gu, gv] = coords(o, gen, rng);
    auto [tu, tv] = coords(o, target, rng);
    Int mu = mod_reduce(o.M.a * gu + o.M.b * gv, o.m);
    Int mv = mod_reduce(o.M.c * gu + o.M.d * gv, o.m);
    Mat2 S{gu, mu, gv, mv}; // columns (gen, tau gen)
    Mat2 Sinv = mat_inv_mod(S, o.m);
    return OrderElem{mod_reduce(Sinv.a * tu + Sinv.b * tv, o.m),
                     mod_reduce(Sinv.c * tu + Sinv.d * tv, o.m)};
}

} // namespace

AttackInstance gen_instance(const GenSpec &spec) {
    Rng rng = Rng(spec.seed).split("gen-instance");
    const std::string &variant = spec.variant;
    if (variant != "norm" && variant != "sidh1" && variant != "diagonal" &&
        variant != "ramified" && variant != "two-orient")
        fail(errc::bad_instance, "unknown variant " + variant);

    Int d = spec.degree;
    if (d < 1 || d > 64)
        fail(errc::budget_exceeded, "degree outside the oracle budget");
    auto dfac = factorize(d);
    for (const auto &[q, e] : dfac) {
        (void)e;
        if (q > 13)
            fail(errc::budget_exceeded, "degree has a prime factor above 13");
    }

    FamilyBase fb = make_family(spec, rng);
    const Int m = fb.m;
    if (gcd(d, m) != 1)
        fail(errc::bad_instance, "degree shares a factor with m");
    if (d % fb.E->f->p == 0)
        fail(errc::bad_instance, "degree divisible by the characteristic");
    if (variant == "ramified" && mod_reduce(fb.ord.disc(), m) != 0)
        fail(errc::not_ramified, "ramified variant needs m | disc");
    if (variant == "two-orient" && !fb.sigma_expr)
        fail(errc::bad_instance, "two-orient variant needs a second orientation");

    Orientation orE =
        orientation_from_endo(fb.E, m, fb.P, fb.Q, fb.tau_expr, fb.ord, rng, fb.conductor);
    if (variant == "diagonal") {
        // rebuild the basis so that the first basis point generates as an
        // O-module (Diagonal SIDH wants OP = E[m])
        for (int tries = 0; tries < 4096; ++tries) {
            Point P0 = random_full_order_combo(orE, rng, true);
            Int u = rng.below(m), v = rng.below(m);
            Point Q0 = scalar_mul(u, orE.P) + scalar_mul(v, orE.Q);
            auto [pu, pv] = coords(orE, P0, rng);
            if (gcd(mod_reduce(pu * v - pv * u, m), m) != 1)
                continue;
            orE = orientation_from_endo(fb.E, m, P0, Q0, fb.tau_expr, fb.ord, rng, fb.conductor);
            break;
        }
    }

    std::optional<Orientation> orE2;
    if (fb.sigma_expr) {
        orE2 = orientation_from_endo(fb.E, m, orE.P, orE.Q, *fb.sigma_expr, fb.ord2, rng,
                                     std::nullopt);
        // sigma must anticommute with tau mod m
        Mat2 lhs = mat_mul(orE2->M, orE.M).mod(m);
        Mat2 conj_tau = mat_add(mat_scale(fb.ord.t, Mat2::identity()), mat_scale(Int(-1), orE.M));
        Mat2 rhs = mat_mul(conj_tau.mod(m), orE2->M).mod(m);
        if (!(lhs == rhs))
            fail(errc::not_anti_commuting, "second orientation does not anticommute with tau");
    }

    // build the hidden oriented isogeny
    ChainBuilder cb;
    cb.cur = fb.E;
    size_t iP = cb.track(orE.P), iQ = cb.track(orE.Q);

    struct LTracker {
        Int ell;
        size_t iA, iB;
        Mat2 M;
    };
    std::vector<LTracker> lts;
    for (const auto &[q, e] : dfac) {
        if (q == 2)
            continue;
        Int disc = mod_reduce(fb.ord.disc(), q);
        if (disc != 0 && mpz_kronecker(disc.get_mpz_t(), q.get_mpz_t()) == -1)
            fail(errc::no_split_prime_kernel,
                 "degree " + q.get_str() + " is inert in the order (disc " +
                     fb.ord.disc().get_str() + "): no oriented kernel");
        Int q2 = q * q;
        if (curve_order(fb.E) % q2 != 0)
            fail(errc::no_split_prime_kernel,
                 "degree " + q.get_str() + ": torsion not rational over the instance field");
        if (e > 1)
            fail(errc::no_split_prime_kernel,
                 "degree " + q.get_str() + "^" + std::to_string(e) + ": only squarefree odd parts");
        auto [A, B] = torsion_basis(fb.E, q, rng);
        Orientation oq = orientation_from_endo(fb.E, q, A, B, fb.tau_expr, fb.ord, rng);
        lts.push_back({q, cb.track(A), cb.track(B), oq.M});
    }

    unsigned two_steps = 0;
    for (const auto &[q, e] : dfac)
        if (q == 2)
            two_steps = e;
    for (unsigned s = 0; s < two_steps; ++s) {
        std::vector<Point> cands = two_torsion_points(cb.cur);
        std::optional<Point> stable;
        for (const Point &K : cands) {
            Point img = tau_on_two_torsion(fb.tau_expr, K, rng);
            bool tau_ok = img.is_inf() || img == K;
            if (tau_ok && fb.sigma_expr) {
                Point simg = tau_on_two_torsion(*fb.sigma_expr, K, rng);
                tau_ok = simg.is_inf() || simg == K;
            }
            if (tau_ok) {
                stable = K;
                break;
            }
        }
        if (!stable)
            fail(errc::no_split_prime_kernel, "no tau-stable 2-torsion subgroup");
        cb.apply_step(*stable, Int(2));
    }

    for (const LTracker &lt : lts) {
        // eigenvector of tau mod ell is an oriented kernel direction
        std::vector<Int> roots;
        for (Int c = 0; c < lt.ell; ++c)
            if (mod_reduce(c * c - fb.ord.t * c + fb.ord.n, lt.ell) == 0)
                roots.push_back(c);
        if (roots.empty())
            fail(errc::no_split_prime_kernel,
                 "degree " + lt.ell.get_str() + " is inert in the order (disc " +
                     fb.ord.disc().get_str() + "): no oriented kernel");
        std::optional<Point> K;
        for (const Int &c : roots) {
            Mat2 A{mod_reduce(lt.M.a - c, lt.ell), lt.M.b, lt.M.c, mod_reduce(lt.M.d - c, lt.ell)};
            for (Int u = 0; u < lt.ell && !K; ++u)
                for (Int v = 0; v < lt.ell; ++v) {
                    if (u == 0 && v == 0)
                        continue;
                    if (mod_reduce(A.a * u + A.b * v, lt.ell) == 0 &&
                        mod_reduce(A.c * u + A.d * v, lt.ell) == 0) {
                        K = scalar_mul(u, cb.tracked[lt.iA]) + scalar_mul(v, cb.tracked[lt.iB]);
                        break;
                    }
                }
            if (K)
                break;
        }
        if (!K)
            fail(errc::no_split_prime_kernel,
                 "degree " + lt.ell.get_str() + ": ramified without an eigenvector");
        cb.apply_step(*K, lt.ell);
    }

    Curve Ep = cb.cur;
    const Point &phiP = cb.tracked[iP], &phiQ = cb.tracked[iQ];

    // scrambled basis on Ep; the transported action conjugates accordingly
    Mat2 C = random_unimodular(m, rng);
    Mat2 Cinv = mat_inv_mod(C, m);
    Point Pp = scalar_mul(C.a, phiP) + scalar_mul(C.c, phiQ);
    Point Qp = scalar_mul(C.b, phiP) + scalar_mul(C.d, phiQ);
    Mat2 Mp = mat_mul(mat_mul(Cinv, orE.M), C).mod(m);
    Orientation orEp = orientation_from_matrix(Ep, m, Pp, Qp, Mp, fb.ord, fb.conductor);

    std::optional<Orientation> orEp2;
    if (orE2) {
        Mat2 M2p = mat_mul(mat_mul(Cinv, orE2->M), C).mod(m);
        orEp2 = orientation_from_matrix(Ep, m, Pp, Qp, M2p, fb.ord2, std::nullopt);
    }

    // generator self-check: the pairing compatibility relation must hold
    {
        Rng check = rng.split("selfcheck");
        Int u = check.below(m), v = check.below(m);
        Point A = scalar_mul(u, orE.P) + scalar_mul(v, orE.Q);
        Int u2 = check.below(m), v2 = check.below(m);
        Point B = scalar_mul(u2, orE.P) + scalar_mul(v2, orE.Q);
        Point vA = scalar_mul(u, phiP) + scalar_mul(v, phiQ);
        Point vB = scalar_mul(u2, phiP) + scalar_mul(v2, phiQ);
        ReducedPairValue down = sesqui_T(A, B, m, orE, check);
        ReducedPairValue up = sesqui_T(vA, vB, m, orEp, check);
        if (!(up.v == pair_pow_int(down.v, cb.degree)))
            fail(errc::internal_inconsistency, "generated chain violates pairing compatibility");
    }

    SealedTruth sealed;
    sealed.chain = cb.steps;
    {
        auto [a1, b1] = point_dlog2d(phiP, Pp, Qp, m, rng);
        auto [a2, b2] = point_dlog2d(phiQ, Pp, Qp, m, rng);
        sealed.matrix = Mat2{a1, a2, b1, b2};
        if (!(sealed.matrix == Cinv.mod(m)))
            fail(errc::internal_inconsistency, "sealed matrix disagrees with the scramble");
    }

    AttackInstance inst;
    inst.pub.variant = variant;
    inst.pub.m = m;
    inst.pub.degree = d;
    inst.pub.E = fb.E;
    inst.pub.Ep = Ep;
    inst.pub.orE = orE;
    inst.pub.orEp = orEp;
    inst.pub.orE2 = orE2;
    inst.pub.orEp2 = orEp2;

    auto push_through = [&](const Point &X) {
        auto [u, v] = coords(orE, X, rng);
        return scalar_mul(u, phiP) + scalar_mul(v, phiQ);
    };

    if (variant == "norm" || variant == "ramified" || variant == "two-orient") {
        Point genE = random_full_order_combo(orE, rng, true);
        Point genEp = random_full_order_combo(orEp, rng, true);
        inst.pub.genE = genE;
        inst.pub.genEp = genEp;
        sealed.lambda = point_olinear(orEp, genEp, push_through(genE), rng);
    } else if (variant == "sidh1") {
        Point R = random_full_order_combo(orE, rng, false);
        inst.pub.R = R;
        inst.pub.phiR = push_through(R);
    } else if (variant == "diagonal") {
        Int r = 0, s = 0;
        while (gcd(r, m) != 1)
            r = rng.below(m);
        while (gcd(s, m) != 1)
            s = rng.below(m);
        inst.pub.Pp = scalar_mul(r, phiP);
        inst.pub.Qp = scalar_mul(s, phiQ);
        sealed.lambda = OrderElem::integer(invmod(r, m)); // phi P = [r^-1] Pp
    }

    inst.sealed = sealed;
    return inst;
}

} // namespace sesqui
