#include "sesqui/curve.hpp"

#include <algorithm>

namespace sesqui {

bool CurveDesc::same(const CurveDesc &o) const {
    return f->same(*o.f) && a.coeffs() == o.a.coeffs() && b.coeffs() == o.b.coeffs();
}

Curve make_curve(const Field &f, const FieldElement &a, const FieldElement &b,
                 std::optional<Int> known_order) {
    FieldElement four(f, Int(4)), twentyseven(f, Int(27));
    FieldElement disc = four * a * a * a + twentyseven * b * b;
    if (disc.is_zero())
        fail(errc::bad_instance, "singular curve: 4a^3 + 27b^2 = 0");
    auto d = std::make_shared<CurveDesc>();
    d->f = f;
    d->a = a;
    d->b = b;
    if (known_order) {
        std::call_once(d->order_once, [] {});
        d->order_cache = *known_order;
    }
    return d;
}

FieldElement j_invariant(const Curve &E) {
    const Field &f = E->f;
    FieldElement a3 = E->a * E->a * E->a;
    FieldElement num = FieldElement(f, Int(6912)) * a3; // 1728 * 4a^3
    FieldElement den = FieldElement(f, Int(4)) * a3 + FieldElement(f, Int(27)) * E->b * E->b;
    return num / den;
}

Point::Point(Curve E, FieldElement x, FieldElement y)
    : E_(std::move(E)), inf_(false), x_(std::move(x)), y_(std::move(y)) {
    FieldElement lhs = y_ * y_;
    FieldElement rhs = x_ * x_ * x_ + E_->a * x_ + E_->b;
    if (lhs != rhs)
        fail(errc::bad_instance, "point not on curve");
}

const FieldElement &Point::x() const {
    if (inf_)
        fail(errc::internal_inconsistency, "coordinates of the identity");
    return x_;
}

const FieldElement &Point::y() const {
    if (inf_)
        fail(errc::internal_inconsistency, "coordinates of the identity");
    return y_;
}

Point Point::operator+(const Point &o) const {
    if (!E_->same(*o.E_))
        fail(errc::mixed_curves, "addition of points on different curves");
    if (inf_)
        return o;
    if (o.inf_)
        return *this;
    const Field &f = E_->f;
    if (x_ == o.x_) {
        if (y_ != o.y_ || y_.is_zero())
            return Point(E_); // P + (-P)
        // tangent
        FieldElement lam =
            (FieldElement(f, Int(3)) * x_ * x_ + E_->a) / (FieldElement(f, Int(2)) * y_);
        FieldElement x3 = lam * lam - x_ - o.x_;
        FieldElement y3 = lam * (x_ - x3) - y_;
        return Point(E_, x3, y3);
    }
    FieldElement lam = (o.y_ - y_) / (o.x_ - x_);
    FieldElement x3 = lam * lam - x_ - o.x_;
    FieldElement y3 = lam * (x_ - x3) - y_;
    return Point(E_, x3, y3);
}

Point Point::operator-() const {
    if (inf_)
        return *this;
    return Point(E_, x_, -y_);
}

bool Point::operator==(const Point &o) const {
    if (!E_->same(*o.E_))
        fail(errc::mixed_curves, "comparison of points on different curves");
    if (inf_ || o.inf_)
        return inf_ == o.inf_;
    return x_ == o.x_ && y_ == o.y_;
}

std::string Point::str() const {
    if (inf_)
        return "inf";
    return "(" + x_.str() + "," + y_.str() + ")";
}

Point scalar_mul(const Int &n, const Point &P) {
    if (n < 0)
        return -scalar_mul(-n, P);
    Point R(P.curve());
    if (n == 0 || P.is_inf())
        return R;
    size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
    for (size_t i = bits; i-- > 0;) {
        R = R + R;
        if (mpz_tstbit(n.get_mpz_t(), i))
            R = R + P;
    }
    return R;
}

namespace {

Int count_points(const Curve &E, const Int &budget) {
    const Field &f = E->f;
    if (f->q > budget)
        fail(errc::budget_exceeded, "point count over field of size " + f->q.get_str() +
                                        " exceeds budget; supply the order");
    Int half = (f->q - 1) / 2;
    Int count = f->q + 1;
    for (const FieldElement &x : all_elements(f)) {
        FieldElement rhs = x * x * x + E->a * x + E->b;
        if (rhs.is_zero())
            continue; // one point, already in q + 1
        count += rhs.pow(half).is_one() ? 1 : -1;
    }
    return count;
}

} // namespace

Int curve_order(const Curve &E, const Int &budget) {
    std::call_once(E->order_once, [&] { E->order_cache = count_points(E, budget); });
    return *E->order_cache;
}

Int point_order(const Point &P) {
    if (P.is_inf())
        return 1;
    Int N = curve_order(P.curve());
    Int ord = N;
    for (const auto &[p, k] : factorize(N)) {
        for (unsigned i = 0; i < k; ++i) {
            Int t = ord / p;
            if (scalar_mul(t, P).is_inf())
                ord = t;
            else
                break;
        }
    }
    return ord;
}

Point random_point(const Curve &E, Rng &rng) {
    const Field &f = E->f;
    for (;;) {
        std::vector<Int> coeffs(f->k);
        for (auto &c : coeffs)
            c = rng.below(f->p);
        FieldElement x(f, coeffs);
        FieldElement rhs = x * x * x + E->a * x + E->b;
        auto y = field_sqrt(rhs);
        if (!y)
            continue;
        if (!y->is_zero() && rng.next_u64() & 1)
            return Point(E, x, -*y);
        return Point(E, x, *y);
    }
}

Point random_point_of_order(const Curve &E, const Int &m, Rng &rng) {
    Int N = curve_order(E);
    if (N % m != 0)
        fail(errc::torsion_not_rational, "m does not divide the group order");
    Int c0 = N;
    for (;;) {
        Int g = gcd(c0, m);
        if (g == 1)
            break;
        c0 /= g;
    }
    Int mpart = N / c0; // order of the subgroup of points whose order divides primes of m
    auto mfac = factorize(m);
    for (int tries = 0; tries < 256; ++tries) {
        Point T = scalar_mul(c0, random_point(E, rng));
        Point acc(E);
        bool ok = true;
        for (const auto &[q, e] : mfac) {
            // isolate the q-component
            Int rest = mpart;
            while (rest % q == 0)
                rest /= q;
            Point Tq = scalar_mul(rest, T);
            // exact order q^s
            unsigned s = 0;
            Point probe = Tq;
            while (!probe.is_inf()) {
                probe = scalar_mul(q, probe);
                ++s;
            }
            if (s < e) {
                ok = false;
                break;
            }
            Int down = 1;
            for (unsigned i = 0; i < s - e; ++i)
                down *= q;
            acc = acc + scalar_mul(down, Tq);
        }
        if (ok)
            return acc;
    }
    fail(errc::torsion_not_rational, "no point of order " + m.get_str() + " found");
}

std::pair<Point, Point> torsion_basis(const Curve &E, const Int &m, Rng &rng) {
    const Field &f = E->f;
    if (m % f->p == 0)
        fail(errc::torsion_not_rational, "m shares a factor with the characteristic");
    Int N = curve_order(E);
    if (N % (m * m) != 0)
        fail(errc::torsion_not_rational, "m^2 does not divide the group order");
    auto mfac = factorize(m);
    Point P = random_point_of_order(E, m, rng);
    for (int tries = 0; tries < 64; ++tries) {
        Point Q = random_point_of_order(E, m, rng);
        FieldElement z = weil_pairing(P, Q, m, rng);
        bool full = true;
        for (const auto &[q, e] : mfac) {
            (void)e;
            if (z.pow(m / q).is_one()) {
                full = false;
                break;
            }
        }
        if (full)
            return {P, Q};
    }
    fail(errc::torsion_not_rational, "no independent torsion pair found");
}

namespace {

// The line through V and W (tangent if V = W, vertical if W = -V or either
// is the identity) evaluated at finite X.
FieldElement line_at(const Point &V, const Point &W, const Point &X) {
    const Curve &E = X.curve();
    const Field &f = E->f;
    if (V.is_inf() && W.is_inf())
        return one(f);
    if (V.is_inf())
        return X.x() - W.x();
    if (W.is_inf())
        return X.x() - V.x();
    if (V.x() == W.x() && (V.y() != W.y() || V.y().is_zero()))
        return X.x() - V.x(); // vertical
    FieldElement lam;
    if (V == W)
        lam = (FieldElement(f, Int(3)) * V.x() * V.x() + E->a) / (FieldElement(f, Int(2)) * V.y());
    else
        lam = (W.y() - V.y()) / (W.x() - V.x());
    return X.y() - V.y() - lam * (X.x() - V.x());
}

FieldElement eval_checked(const Point &V, const Point &W, const Point &X) {
    FieldElement v = line_at(V, W, X);
    if (v.is_zero())
        fail(errc::divisor_support_collision, "line vanishes at an evaluation point");
    return v;
}

// One Miller update: multiply f by l_{V,W}(S)/l_{V,W}(T) and divide by the
// vertical at V+W (skipped when V+W is the identity).
void miller_step(FieldElement &f, const Point &V, const Point &W, const Point &S, const Point &T) {
    f = f * eval_checked(V, W, S) / eval_checked(V, W, T);
    Point VW = V + W;
    if (!VW.is_inf()) {
        Point m = -VW;
        f = f * eval_checked(VW, m, T) / eval_checked(VW, m, S);
    }
}

// f_{n,P}((S) - (T)) for n >= 1; divisor n(P) - ([n]P) - (n-1)(inf).
FieldElement miller_core(const Point &P, const Int &n, const Point &S, const Point &T) {
    const Field &f = P.curve()->f;
    FieldElement acc = one(f);
    if (n == 1)
        return acc;
    Point V = P;
    size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
    for (size_t i = bits - 1; i-- > 0;) {
        acc = acc * acc;
        miller_step(acc, V, V, S, T);
        V = V + V;
        if (mpz_tstbit(n.get_mpz_t(), i)) {
            miller_step(acc, V, P, S, T);
            V = V + P;
        }
    }
    return acc;
}

} // namespace

FieldElement miller_eval(const Point &P, const Int &n, const Point &S, const Point &T) {
    if (n < 0)
        fail(errc::internal_inconsistency, "miller_eval with negative n");
    const Field &f = S.curve()->f;
    if (P.is_inf() || n == 0 || n == 1)
        return one(f);
    if (S == T)
        return one(f);
    if (S.is_inf() || T.is_inf())
        fail(errc::divisor_support_collision, "evaluation divisor touches the identity");
    return miller_core(P, n, S, T);
}

FieldElement miller_general(const Int &u, const Point &T, const Point &S1, const Point &S2) {
    const Field &f = S1.curve()->f;
    if (u == 0 || T.is_inf() || S1 == S2)
        return one(f);
    if (S1.is_inf() || S2.is_inf())
        fail(errc::divisor_support_collision, "evaluation divisor touches the identity");
    if (u > 0)
        return miller_eval(T, u, S1, S2);
    // f_u = 1 / (f_{-u} * v_{[u]T})
    Int v = -u;
    FieldElement base = miller_eval(T, v, S1, S2);
    Point uT = scalar_mul(v, T);
    FieldElement corr = one(f);
    if (!uT.is_inf()) {
        Point m = -uT;
        corr = eval_checked(uT, m, S1) / eval_checked(uT, m, S2);
    }
    return (base * corr).inv();
}

FieldElement weil_pairing(const Point &P, const Point &Q, const Int &m, Rng &rng) {
    const Field &f = P.curve()->f;
    if (P.is_inf() || Q.is_inf())
        return one(f);
    for (int tries = 0; tries < 32; ++tries) {
        Point R1 = random_point(P.curve(), rng);
        Point R2 = random_point(P.curve(), rng);
        Point A1 = P + R1;
        Point A2 = Q + R2;
        if (A1.is_inf() || A2.is_inf())
            continue;
        if (A1 == A2 || A1 == R2 || R1 == A2 || R1 == R2)
            continue;
        try {
            FieldElement fP = miller_eval(P, m, A2, R2);
            FieldElement fQ = miller_eval(Q, m, A1, R1);
            // h1 = v_{P+R1} / l_{P,R1} adjusts f_{m,P} to the shifted class
            auto h1 = [&](const Point &X) {
                return eval_checked(A1, -A1, X) / eval_checked(P, R1, X);
            };
            auto h2 = [&](const Point &X) {
                return eval_checked(A2, -A2, X) / eval_checked(Q, R2, X);
            };
            FieldElement c1 = h1(A2) / h1(R2);
            FieldElement c2 = h2(A1) / h2(R1);
            return (fP * c1.pow(m)) / (fQ * c2.pow(m));
        } catch (const Error &e) {
            if (e.code() != errc::divisor_support_collision)
                throw;
        }
    }
    fail(errc::divisor_support_collision, "weil pairing retries exhausted");
}

FieldElement weil_pairing(const Point &P, const Point &Q, const Int &m) {
    Rng rng(0x5E5AULL);
    return weil_pairing(P, Q, m, rng);
}

Isogeny identity_isogeny(const Curve &E) {
    Isogeny phi;
    phi.domain = E;
    phi.codomain = E;
    phi.degree = 1;
    return phi;
}

Isogeny velu_isogeny(const Point &kernel_gen, const Int &ell) {
    if (!is_probable_prime(ell))
        fail(errc::bad_kernel_order, "step degree must be prime");
    const Curve &E = kernel_gen.curve();
    const Field &f = E->f;
    if (ell % f->p == 0)
        fail(errc::bad_kernel_order, "step degree equals the characteristic");
    if (kernel_gen.is_inf() || !scalar_mul(ell, kernel_gen).is_inf())
        fail(errc::bad_kernel_order, "kernel generator does not have exact order " + ell.get_str());

    std::vector<Point> kernel; // nontrivial points
    Point T = kernel_gen;
    for (Int i = 1; i < ell; ++i) {
        kernel.push_back(T);
        T = T + kernel_gen;
    }
    if (!T.is_inf())
        fail(errc::bad_kernel_order, "kernel generator order is not prime");

    // Velu coefficients: representatives are all 2-torsion kernel points
    // plus one of each +/- pair.
    FieldElement v = zero(f), w = zero(f);
    std::vector<bool> used(kernel.size(), false);
    for (size_t i = 0; i < kernel.size(); ++i) {
        if (used[i])
            continue;
        const Point &K = kernel[i];
        bool two_torsion = K.y().is_zero();
        if (!two_torsion) {
            Point neg = -K;
            for (size_t j = i + 1; j < kernel.size(); ++j)
                if (kernel[j] == neg)
                    used[j] = true;
        }
        FieldElement gx = FieldElement(f, Int(3)) * K.x() * K.x() + E->a;
        FieldElement u = FieldElement(f, Int(4)) * K.y() * K.y();
        FieldElement vT = two_torsion ? gx : FieldElement(f, Int(2)) * gx;
        v = v + vT;
        w = w + u + K.x() * vT;
    }
    FieldElement A2 = E->a - FieldElement(f, Int(5)) * v;
    FieldElement B2 = E->b - FieldElement(f, Int(7)) * w;
    std::optional<Int> ord;
    if (E->order_cache)
        ord = E->order_cache;
    Curve cod = make_curve(f, A2, B2, ord);

    IsogenyStep step{kernel_gen, ell, E, cod};
    Isogeny phi;
    phi.steps.push_back(step);
    phi.domain = E;
    phi.codomain = cod;
    phi.degree = ell;
    return phi;
}

namespace {

Point step_eval(const IsogenyStep &s, const Point &P) {
    if (P.is_inf())
        return Point(s.codomain);
    if (!P.curve()->same(*s.domain))
        fail(errc::mixed_curves, "isogeny evaluated off its domain");
    FieldElement x = P.x(), y = P.y();
    Point T = s.kernel_gen;
    for (Int i = 1; i < s.ell; ++i) {
        if (P == T || P == -T)
            return Point(s.codomain); // P in the kernel
        T = T + s.kernel_gen;
    }
    T = s.kernel_gen;
    for (Int i = 1; i < s.ell; ++i) {
        Point S = P + T;
        x = x + (S.x() - T.x());
        y = y + (S.y() - T.y());
        T = T + s.kernel_gen;
    }
    return Point(s.codomain, x, y);
}

} // namespace

Isogeny velu_chain(const Point &kernel_gen, const Int &d) {
    Isogeny phi = identity_isogeny(kernel_gen.curve());
    Point K = kernel_gen;
    Int rem = d;
    if (!scalar_mul(d, K).is_inf())
        fail(errc::bad_kernel_order, "kernel generator order does not divide " + d.get_str());
    while (rem > 1) {
        Int ell = factorize(rem).front().first;
        Point Kstep = scalar_mul(rem / ell, K);
        if (Kstep.is_inf())
            fail(errc::bad_kernel_order, "kernel generator has order less than " + d.get_str());
        Isogeny step = velu_isogeny(Kstep, ell);
        K = step_eval(step.steps[0], K);
        phi = compose(phi, step);
        rem /= ell;
    }
    return phi;
}

Point isogeny_eval(const Isogeny &phi, const Point &P) {
    Point cur = P;
    if (phi.steps.empty()) {
        if (!P.curve()->same(*phi.codomain))
            fail(errc::mixed_curves, "isogeny evaluated off its domain");
        return P;
    }
    for (const auto &s : phi.steps)
        cur = step_eval(s, cur);
    return cur;
}

Isogeny compose(const Isogeny &phi, const Isogeny &psi) {
    if (!phi.codomain->same(*psi.domain))
        fail(errc::mixed_curves, "isogeny composition domain mismatch");
    Isogeny out;
    out.steps = phi.steps;
    out.steps.insert(out.steps.end(), psi.steps.begin(), psi.steps.end());
    out.domain = phi.domain;
    out.codomain = psi.codomain;
    out.degree = phi.degree * psi.degree;
    return out;
}

namespace {

std::vector<FieldElement> field_sqrts_all(const FieldElement &x) {
    auto r = field_sqrt(x);
    if (!r)
        return {};
    if (r->is_zero())
        return {*r};
    return {*r, -*r};
}

std::vector<FieldElement> field_cbrts_all(const FieldElement &x) {
    const Field &f = x.field();
    if (x.is_zero())
        return {zero(f)};
    if ((f->q - 1) % 3 != 0) {
        Int inv3 = invmod(Int(3), f->q - 1);
        return {x.pow(inv3)};
    }
    if (f->q > (Int(1) << 20))
        fail(errc::budget_exceeded, "cube roots in a large field");
    std::vector<FieldElement> out;
    for (const FieldElement &c : all_elements(f))
        if (c * c * c == x)
            out.push_back(c);
    return out;
}

} // namespace

std::vector<CurveIso> find_isomorphisms(const Curve &E1, const Curve &E2) {
    if (!E1->f->same(*E2->f))
        fail(errc::mixed_fields, "isomorphism search across different fields");
    const Field &f = E1->f;
    std::vector<FieldElement> s_candidates; // s = u^2
    if (!E1->a.is_zero()) {
        FieldElement r = E2->a / E1->a;
        if (E1->b.is_zero()) {
            if (!E2->b.is_zero())
                return {};
            s_candidates = field_sqrts_all(r);
        } else {
            FieldElement s = (E2->b / E1->b) / r;
            s_candidates = {s};
        }
    } else {
        if (!E2->a.is_zero())
            return {};
        s_candidates = field_cbrts_all(E2->b / E1->b);
    }
    std::vector<CurveIso> out;
    for (const FieldElement &s : s_candidates) {
        if (s.is_zero())
            continue;
        if (s * s * E1->a != E2->a || s * s * s * E1->b != E2->b)
            continue;
        for (const FieldElement &u : field_sqrts_all(s))
            out.push_back({E1, E2, u});
    }
    return out;
}

Point iso_eval(const CurveIso &iso, const Point &P) {
    if (P.is_inf())
        return Point(iso.codomain);
    FieldElement u2 = iso.u * iso.u;
    return Point(iso.codomain, u2 * P.x(), u2 * iso.u * P.y());
}

Int order_over_extension(const Int &q, const Int &order_base, unsigned j) {
    Int a1 = q + 1 - order_base;
    Int am2 = 2, am1 = a1; // a_0, a_1
    Int qpow = q;
    for (unsigned i = 2; i <= j; ++i) {
        Int cur = a1 * am1 - q * am2;
        am2 = am1;
        am1 = cur;
    }
    for (unsigned i = 1; i < j; ++i)
        qpow *= q;
    return qpow + 1 - am1;
}

} // namespace sesqui
