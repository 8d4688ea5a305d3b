#include "sesqui/orientation.hpp"

#include <cctype>

namespace sesqui {

namespace {

struct Lexer {
    std::string text;
    size_t pos = 0;

    void skip() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    }
    bool eat(char c) {
        skip();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    bool peek(char c) {
        skip();
        return pos < text.size() && text[pos] == c;
    }
    std::string ident() {
        skip();
        std::string out;
        while (pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos])))
            out += text[pos++];
        return out;
    }
    std::optional<Int> integer() {
        skip();
        size_t start = pos;
        if (pos < text.size() && text[pos] == '-')
            ++pos;
        size_t digits = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
            ++pos;
        if (pos == digits) {
            pos = start;
            return std::nullopt;
        }
        return Int(text.substr(start, pos - start));
    }
    bool done() {
        skip();
        return pos >= text.size();
    }
};

EndoExpr parse_expr(Lexer &lx);

EndoExpr parse_primary(Lexer &lx) {
    if (lx.eat('(')) {
        EndoExpr e = parse_expr(lx);
        if (!lx.eat(')'))
            fail(errc::parse_error, "expected ')' in endomorphism expression");
        return e;
    }
    if (auto v = lx.integer()) {
        EndoExpr e;
        e.kind = EndoExpr::Kind::Scalar;
        e.scalar = *v;
        return e;
    }
    std::string id = lx.ident();
    if (id == "i") {
        EndoExpr e;
        e.kind = EndoExpr::Kind::I;
        return e;
    }
    if (id == "pi") {
        EndoExpr e;
        e.kind = EndoExpr::Kind::Pi;
        return e;
    }
    if (id == "scalar") {
        auto v = lx.integer();
        if (!v)
            fail(errc::parse_error, "expected integer after 'scalar'");
        EndoExpr e;
        e.kind = EndoExpr::Kind::Scalar;
        e.scalar = *v;
        return e;
    }
    fail(errc::parse_error, "unknown endomorphism token '" + id + "'");
}

EndoExpr parse_factor(Lexer &lx) {
    EndoExpr e = parse_primary(lx);
    while (lx.peek('/')) {
        lx.eat('/');
        auto v = lx.integer();
        if (!v || *v == 0)
            fail(errc::parse_error, "expected nonzero integer denominator");
        e.den *= *v;
    }
    return e;
}

EndoExpr parse_term(Lexer &lx) {
    EndoExpr e = parse_factor(lx);
    while (lx.peek('*')) {
        lx.eat('*');
        EndoExpr rhs = parse_factor(lx);
        EndoExpr node;
        node.kind = EndoExpr::Kind::Compose;
        node.children = {e, rhs};
        e = node;
    }
    return e;
}

EndoExpr parse_expr(Lexer &lx) {
    EndoExpr e = parse_term(lx);
    for (;;) {
        if (lx.peek('+')) {
            lx.eat('+');
            EndoExpr rhs = parse_term(lx);
            EndoExpr node;
            node.kind = EndoExpr::Kind::Sum;
            node.children = {e, rhs};
            e = node;
        } else if (lx.peek('-')) {
            lx.eat('-');
            EndoExpr rhs = parse_term(lx);
            EndoExpr node;
            node.kind = EndoExpr::Kind::Diff;
            node.children = {e, rhs};
            e = node;
        } else {
            break;
        }
    }
    return e;
}

} // namespace

EndoExpr EndoExpr::parse(const std::string &text) {
    Lexer lx{text};
    EndoExpr e = parse_expr(lx);
    if (!lx.done())
        fail(errc::parse_error, "trailing input in endomorphism expression: " + text);
    return e;
}

std::string EndoExpr::str() const {
    std::string body;
    switch (kind) {
    case Kind::I: body = "i"; break;
    case Kind::Pi: body = "pi"; break;
    case Kind::Scalar: body = scalar.get_str(); break;
    case Kind::Sum: body = "(" + children[0].str() + " + " + children[1].str() + ")"; break;
    case Kind::Diff: body = "(" + children[0].str() + " - " + children[1].str() + ")"; break;
    case Kind::Compose: body = children[0].str() + "*" + children[1].str(); break;
    }
    if (den != 1)
        body += "/" + den.get_str();
    return body;
}

namespace {

Point eval_node(const EndoExpr &expr, const Point &P) {
    const Curve &E = P.curve();
    switch (expr.kind) {
    case EndoExpr::Kind::I: {
        if (!E->b.is_zero())
            fail(errc::parse_error, "the 'i' endomorphism needs a curve y^2 = x^3 + ax");
        FieldElement minus1 = -one(E->f);
        auto c = field_sqrt(minus1);
        if (!c)
            fail(errc::parse_error, "sqrt(-1) missing from the base field");
        if (P.is_inf())
            return P;
        return Point(E, -P.x(), *c * P.y());
    }
    case EndoExpr::Kind::Pi: {
        if (P.is_inf())
            return P;
        return Point(E, P.x().pow(E->f->p), P.y().pow(E->f->p));
    }
    case EndoExpr::Kind::Scalar:
        return scalar_mul(expr.scalar, P);
    case EndoExpr::Kind::Sum:
        return eval_node(expr.children[0], P) + eval_node(expr.children[1], P);
    case EndoExpr::Kind::Diff:
        return eval_node(expr.children[0], P) - eval_node(expr.children[1], P);
    case EndoExpr::Kind::Compose:
        return eval_node(expr.children[0], eval_node(expr.children[1], P));
    }
    fail(errc::internal_inconsistency, "unreachable");
}

// Inner denominators of subexpressions multiply up.
Int total_den(const EndoExpr &e) {
    Int d = abs(e.den);
    for (const auto &c : e.children)
        d *= total_den(c);
    return d;
}

// On E[m] a denominator d acts as multiplication by d^{-1} mod m; every
// intermediate value stays in E[m], so denominators can be applied per node.
Point eval_mod(const EndoExpr &expr, const Point &P, const Int &m) {
    Point base(P.curve());
    switch (expr.kind) {
    case EndoExpr::Kind::Sum:
        base = eval_mod(expr.children[0], P, m) + eval_mod(expr.children[1], P, m);
        break;
    case EndoExpr::Kind::Diff:
        base = eval_mod(expr.children[0], P, m) - eval_mod(expr.children[1], P, m);
        break;
    case EndoExpr::Kind::Compose:
        base = eval_mod(expr.children[0], eval_mod(expr.children[1], P, m), m);
        break;
    default:
        base = eval_node(expr, P);
        break;
    }
    if (expr.den != 1) {
        if (gcd(expr.den, m) != 1)
            fail(errc::denominator_not_invertible, "denominator " + expr.den.get_str() +
                                                       " shares a factor with m = " + m.get_str());
        base = scalar_mul(invmod(mod_reduce(expr.den, m), m), base);
    }
    return base;
}

} // namespace

Point endo_eval(const EndoExpr &expr, const Point &P, const Int &m) {
    if (total_den(expr) == 1)
        return eval_node(expr, P);
    if (!scalar_mul(m, P).is_inf())
        fail(errc::point_not_in_torsion, "division by an integer needs an m-torsion input");
    return eval_mod(expr, P, m);
}

Orientation orientation_from_matrix(const Curve &E, const Int &m, const Point &P, const Point &Q,
                                    const Mat2 &M, const QuadOrder &ord,
                                    std::optional<Int> rel_conductor) {
    Orientation o{E, m, P, Q, M.mod(m), ord, rel_conductor};
    Mat2 chk = mat_add(mat_mul(o.M, o.M),
                       mat_add(mat_scale(-ord.t, o.M), mat_scale(ord.n, Mat2::identity())));
    if (!(chk.mod(m) == Mat2{Int(0), Int(0), Int(0), Int(0)}))
        fail(errc::min_poly_mismatch, "matrix violates x^2 - tx + n mod m");
    return o;
}

Orientation orientation_from_endo(const Curve &E, const Int &m, const Point &P, const Point &Q,
                                  const EndoExpr &expr, const QuadOrder &ord, Rng &rng,
                                  std::optional<Int> rel_conductor) {
    Point TP = endo_eval(expr, P, m);
    Point TQ = endo_eval(expr, Q, m);
    auto [u1, v1] = point_dlog2d(TP, P, Q, m, rng);
    auto [u2, v2] = point_dlog2d(TQ, P, Q, m, rng);
    Mat2 M{u1, u2, v1, v2};
    return orientation_from_matrix(E, m, P, Q, M, ord, rel_conductor);
}

Mat2 action_matrix(const Orientation &orient, const OrderElem &alpha) {
    return mat_add(mat_scale(alpha.a, Mat2::identity()), mat_scale(alpha.b, orient.M))
        .mod(orient.m);
}

std::pair<Int, Int> coords(const Orientation &orient, const Point &R, Rng &rng) {
    return point_dlog2d(R, orient.P, orient.Q, orient.m, rng);
}

Point apply(const Orientation &orient, const OrderElem &alpha, const Point &R, Rng &rng) {
    auto [u, v] = coords(orient, R, rng);
    Mat2 A = action_matrix(orient, alpha);
    Int u2 = mod_reduce(A.a * u + A.b * v, orient.m);
    Int v2 = mod_reduce(A.c * u + A.d * v, orient.m);
    return scalar_mul(u2, orient.P) + scalar_mul(v2, orient.Q);
}

namespace {

// m = q^k with q inert in the order
bool inert_prime_power(const QuadOrder &ord, const Int &m) {
    auto fac = factorize(m);
    if (fac.size() != 1)
        return false;
    const Int &q = fac[0].first;
    if (q == 2 || ord.disc() % q == 0)
        return false;
    Int disc = mod_reduce(ord.disc(), q);
    return mpz_kronecker(disc.get_mpz_t(), q.get_mpz_t()) == -1;
}

Int additive_order_mod(const Int &u, const Int &v, const Int &m) {
    return m / gcd(gcd(mod_reduce(u, m), mod_reduce(v, m)), m);
}

} // namespace

bool is_module_generator(const Orientation &orient, const Point &R, Rng &rng) {
    auto [u, v] = coords(orient, R, rng);
    if (additive_order_mod(u, v, orient.m) != orient.m)
        fail(errc::wrong_order, "point does not have exact order m");
    if (inert_prime_power(orient.ord, orient.m))
        return true; // any point of exact order m generates (inert case)
    Int mu = mod_reduce(orient.M.a * u + orient.M.b * v, orient.m);
    Int mv = mod_reduce(orient.M.c * u + orient.M.d * v, orient.m);
    Mat2 C{u, mu, v, mv};
    return gcd(mod_reduce(C.det(), orient.m), orient.m) == 1;
}

Int max_s(const Orientation &orient, const Point &R, Rng &rng) {
    auto [u, v] = coords(orient, R, rng);
    if (additive_order_mod(u, v, orient.m) != orient.m)
        fail(errc::wrong_order, "point does not have exact order m");
    const Int &m = orient.m;
    Int mu = mod_reduce(orient.M.a * u + orient.M.b * v, m);
    Int mv = mod_reduce(orient.M.c * u + orient.M.d * v, m);
    Mat2 C{u, mu, v, mv};
    // elementary divisors of [C | mI]: E[s] lies in the column span iff
    // gcd(d2, m) divides m/s
    Int d1 = gcd(gcd(gcd(C.a, C.b), gcd(C.c, C.d)), m);
    Int d2 = gcd(C.det(), m * d1) / d1;
    return m / gcd(d2, m);
}

bool is_cyclic_module(const Orientation &orient, const Int &rel_conductor, Rng &rng, int budget) {
    bool predicted = gcd(orient.m, rel_conductor) == 1;
    bool found = false;
    for (int i = 0; i < budget && !found; ++i) {
        Int u = rng.below(orient.m), v = rng.below(orient.m);
        if (additive_order_mod(u, v, orient.m) != orient.m)
            continue;
        Point R = scalar_mul(u, orient.P) + scalar_mul(v, orient.Q);
        if (is_module_generator(orient, R, rng))
            found = true;
    }
    if (found != predicted)
        fail(errc::empirical_contradiction,
             "cyclicity predicate and generator search disagree (bad conductor metadata?)");
    return predicted;
}

Point ideal_kernel(const Orientation &orient, const std::vector<OrderElem> &generators,
                   const Int &expected_order, Rng &rng) {
    (void)rng;
    const Int &m = orient.m;
    if (m * m > (Int(1) << 20))
        fail(errc::budget_exceeded, "ideal kernel enumeration over m^2 coordinates");
    std::vector<Mat2> mats;
    for (const auto &g : generators)
        mats.push_back(action_matrix(orient, g));
    std::optional<std::pair<Int, Int>> best;
    for (Int u = 0; u < m; ++u)
        for (Int v = 0; v < m; ++v) {
            bool killed = true;
            for (const auto &A : mats)
                if (mod_reduce(A.a * u + A.b * v, m) != 0 || mod_reduce(A.c * u + A.d * v, m) != 0) {
                    killed = false;
                    break;
                }
            if (!killed)
                continue;
            if (additive_order_mod(u, v, m) != expected_order)
                continue;
            if (!best) {
                best = {u, v};
            }
        }
    if (!best)
        fail(errc::no_such_subgroup,
             "no kernel point of order " + expected_order.get_str() + " found");
    return scalar_mul(best->first, orient.P) + scalar_mul(best->second, orient.Q);
}

Eigenbasis eigenbasis(const Orientation &orient, Rng &rng) {
    const Int &m = orient.m;
    struct Part {
        Int pe;
        Int c1, c2;
        std::pair<Int, Int> v1, v2;
    };
    std::vector<Part> parts;
    for (const auto &[q, e] : factorize(m)) {
        Int pe = 1;
        for (unsigned i = 0; i < e; ++i)
            pe *= q;
        if (pe > 4096)
            fail(errc::budget_exceeded, "eigenvalue enumeration mod " + pe.get_str());
        Mat2 Mq = orient.M.mod(pe);
        // roots of the characteristic polynomial mod q^e
        std::vector<Int> roots;
        for (Int c = 0; c < pe; ++c)
            if (mod_reduce(c * c - orient.ord.t * c + orient.ord.n, pe) == 0)
                roots.push_back(c);
        auto eigenvector = [&](const Int &c) -> std::optional<std::pair<Int, Int>> {
            Mat2 A{mod_reduce(Mq.a - c, pe), Mq.b, Mq.c, mod_reduce(Mq.d - c, pe)};
            for (Int u = 0; u < pe; ++u)
                for (Int v = 0; v < pe; ++v) {
                    if (additive_order_mod(u, v, pe) != pe)
                        continue;
                    if (mod_reduce(A.a * u + A.b * v, pe) == 0 &&
                        mod_reduce(A.c * u + A.d * v, pe) == 0)
                        return {{u, v}};
                }
            return std::nullopt;
        };
        Part part;
        part.pe = pe;
        bool ok = false;
        // scalar action: any basis is an eigenbasis
        for (const Int &c : roots) {
            Mat2 diff{mod_reduce(Mq.a - c, pe), Mq.b, Mq.c, mod_reduce(Mq.d - c, pe)};
            if (diff == Mat2{Int(0), Int(0), Int(0), Int(0)}) {
                part.c1 = part.c2 = c;
                part.v1 = {Int(1), Int(0)};
                part.v2 = {Int(0), Int(1)};
                ok = true;
                break;
            }
        }
        if (!ok) {
            for (size_t i = 0; i < roots.size() && !ok; ++i)
                for (size_t j = i + 1; j < roots.size() && !ok; ++j) {
                    auto w1 = eigenvector(roots[i]);
                    auto w2 = eigenvector(roots[j]);
                    if (!w1 || !w2)
                        continue;
                    Mat2 B{w1->first, w2->first, w1->second, w2->second};
                    if (gcd(mod_reduce(B.det(), pe), pe) != 1)
                        continue;
                    part.c1 = roots[i];
                    part.c2 = roots[j];
                    part.v1 = *w1;
                    part.v2 = *w2;
                    ok = true;
                }
        }
        if (!ok)
            fail(errc::not_split, "no eigenbasis mod " + pe.get_str());
        parts.push_back(part);
    }
    // CRT the per-prime-power data
    Int c1 = 0, c2 = 0, u1 = 0, v1 = 0, u2 = 0, v2 = 0, mod = 1;
    for (const auto &part : parts) {
        // select this component, zero elsewhere
        auto lift = [&](const Int &prev, const Int &cur) {
            return mod == 1 ? cur : crt_pair(prev, mod, cur, part.pe);
        };
        c1 = lift(c1, part.c1);
        c2 = lift(c2, part.c2);
        u1 = lift(u1, part.v1.first);
        v1 = lift(v1, part.v1.second);
        u2 = lift(u2, part.v2.first);
        v2 = lift(v2, part.v2.second);
        mod *= part.pe;
    }
    Eigenbasis eb;
    eb.S = scalar_mul(u1, orient.P) + scalar_mul(v1, orient.Q);
    eb.T = scalar_mul(u2, orient.P) + scalar_mul(v2, orient.Q);
    eb.eig_s = c1;
    eb.eig_t = c2;
    // verify
    Point tS = apply(orient, OrderElem{Int(0), Int(1)}, eb.S, rng);
    Point tT = apply(orient, OrderElem{Int(0), Int(1)}, eb.T, rng);
    if (tS != scalar_mul(c1, eb.S) || tT != scalar_mul(c2, eb.T))
        fail(errc::internal_inconsistency, "eigenbasis failed verification");
    return eb;
}

} // namespace sesqui
