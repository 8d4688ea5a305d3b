#include "sesqui/ffield.hpp"

#include <algorithm>
#include <atomic>
#include <optional>
#include <sstream>

namespace sesqui {

namespace {
std::atomic<uint64_t> g_deg_ge3_constructions{0};
}

uint64_t field_constructions_deg_ge3() { return g_deg_ge3_constructions.load(); }

namespace {

using Poly = std::vector<Int>; // little-endian

void trim(Poly &a) {
    while (!a.empty() && a.back() == 0)
        a.pop_back();
}

Poly poly_mod(Poly a, const Poly &f, const Int &p) {
    trim(a);
    size_t df = f.size() - 1; // f monic
    while (a.size() > df) {
        Int lead = a.back();
        size_t shift = a.size() - 1 - df;
        if (lead != 0)
            for (size_t i = 0; i <= df; ++i)
                a[shift + i] = mod_reduce(a[shift + i] - lead * f[i], p);
        a.pop_back();
        trim(a);
    }
    return a;
}

Poly poly_mulmod(const Poly &a, const Poly &b, const Poly &f, const Int &p) {
    if (a.empty() || b.empty())
        return {};
    Poly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0)
            continue;
        for (size_t j = 0; j < b.size(); ++j)
            c[i + j] = mod_reduce(c[i + j] + a[i] * b[j], p);
    }
    return poly_mod(std::move(c), f, p);
}

Poly poly_powmod(Poly base, Int e, const Poly &f, const Int &p) {
    Poly r{Int(1)};
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t()))
            r = poly_mulmod(r, base, f, p);
        base = poly_mulmod(base, base, f, p);
        e >>= 1;
    }
    return r;
}

Poly poly_gcd(Poly a, Poly b, const Int &p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        // a mod b with b made monic
        Int lead_inv = invmod(b.back(), p);
        Poly bm = b;
        for (auto &c : bm)
            c = mod_reduce(c * lead_inv, p);
        a = poly_mod(std::move(a), bm, p);
        std::swap(a, b);
    }
    return a;
}

bool poly_irreducible(const Poly &f, const Int &p) {
    size_t k = f.size() - 1;
    if (k == 1)
        return true;
    // x^(p^k) = x mod f, and gcd(x^(p^(k/t)) - x, f) = 1 for prime t | k
    Poly x{Int(0), Int(1)};
    Int pk = 1;
    for (size_t i = 0; i < k; ++i)
        pk *= p;
    Poly xq = poly_powmod(x, pk, f, p);
    Poly d = xq;
    if (d.size() < 2)
        d.resize(2, 0);
    d[1] = mod_reduce(d[1] - 1, p);
    trim(d);
    if (!d.empty())
        return false;
    for (const auto &[t, e] : factorize(Int(k))) {
        (void)e;
        size_t sub = k / mpz_get_ui(t.get_mpz_t());
        Int psub = 1;
        for (size_t i = 0; i < sub; ++i)
            psub *= p;
        Poly xs = poly_powmod(x, psub, f, p);
        if (xs.size() < 2)
            xs.resize(2, 0);
        xs[1] = mod_reduce(xs[1] - 1, p);
        Poly g = poly_gcd(f, xs, p);
        if (g.size() != 1)
            return false;
    }
    return true;
}

} // namespace

Field make_field(const Int &p, unsigned k, const std::vector<Int> &modulus) {
    if (!is_probable_prime(p) || p == 2)
        fail(errc::composite_modulus, "p = " + p.get_str() + " is not an odd prime");
    if (k < 1 || modulus.size() != k + 1)
        fail(errc::reducible_modulus, "modulus has wrong degree");
    std::vector<Int> f(modulus.size());
    for (size_t i = 0; i < modulus.size(); ++i)
        f[i] = mod_reduce(modulus[i], p);
    if (f.back() != 1)
        fail(errc::reducible_modulus, "modulus is not monic");
    if (!poly_irreducible(f, p))
        fail(errc::reducible_modulus, "modulus is reducible over F_p");
    auto d = std::make_shared<FieldDesc>();
    d->p = p;
    d->k = k;
    d->modulus = f;
    d->q = 1;
    for (unsigned i = 0; i < k; ++i)
        d->q *= p;
    if (k >= 3)
        g_deg_ge3_constructions.fetch_add(1);
    return d;
}

Field make_prime_field(const Int &p) { return make_field(p, 1, {Int(0), Int(1)}); }

FieldElement::FieldElement(Field f, const Int &c0) : f_(std::move(f)), c_(f_->k, 0) {
    c_[0] = mod_reduce(c0, f_->p);
}

FieldElement::FieldElement(Field f, std::vector<Int> coeffs) : f_(std::move(f)) {
    coeffs.resize(f_->k > coeffs.size() ? f_->k : coeffs.size(), 0);
    Poly r = poly_mod(std::move(coeffs), f_->modulus, f_->p);
    for (auto &c : r)
        c = mod_reduce(c, f_->p);
    r.resize(f_->k, 0);
    c_ = std::move(r);
}

void FieldElement::check_same(const FieldElement &o) const {
    if (f_ == o.f_)
        return;
    if (!f_ || !o.f_ || !f_->same(*o.f_))
        fail(errc::mixed_fields, "operands belong to different fields");
}

bool FieldElement::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const Int &x) { return x == 0; });
}

bool FieldElement::is_one() const {
    if (c_.empty() || c_[0] != 1)
        return false;
    return std::all_of(c_.begin() + 1, c_.end(), [](const Int &x) { return x == 0; });
}

FieldElement FieldElement::operator+(const FieldElement &o) const {
    check_same(o);
    std::vector<Int> r(c_.size());
    for (size_t i = 0; i < c_.size(); ++i)
        r[i] = mod_reduce(c_[i] + o.c_[i], f_->p);
    FieldElement out;
    out.f_ = f_;
    out.c_ = std::move(r);
    return out;
}

FieldElement FieldElement::operator-(const FieldElement &o) const {
    check_same(o);
    std::vector<Int> r(c_.size());
    for (size_t i = 0; i < c_.size(); ++i)
        r[i] = mod_reduce(c_[i] - o.c_[i], f_->p);
    FieldElement out;
    out.f_ = f_;
    out.c_ = std::move(r);
    return out;
}

FieldElement FieldElement::operator-() const {
    std::vector<Int> r(c_.size());
    for (size_t i = 0; i < c_.size(); ++i)
        r[i] = mod_reduce(-c_[i], f_->p);
    FieldElement out;
    out.f_ = f_;
    out.c_ = std::move(r);
    return out;
}

FieldElement FieldElement::operator*(const FieldElement &o) const {
    check_same(o);
    Poly r = poly_mulmod(c_, o.c_, f_->modulus, f_->p);
    r.resize(f_->k, 0);
    FieldElement out;
    out.f_ = f_;
    out.c_ = std::move(r);
    return out;
}

FieldElement FieldElement::inv() const {
    if (is_zero())
        fail(errc::division_by_zero, "inverse of zero field element");
    // extended Euclid in F_p[x]
    const Int &p = f_->p;
    Poly r0 = f_->modulus, r1 = c_;
    trim(r1);
    Poly s0{}, s1{Int(1)};
    while (!r1.empty()) {
        // divide r0 by r1
        Int lead_inv = invmod(r1.back(), p);
        Poly q(r0.size() > r1.size() - 1 ? r0.size() - r1.size() + 1 : 1, 0);
        Poly rem = r0;
        while (rem.size() >= r1.size() && !rem.empty()) {
            Int coef = mod_reduce(rem.back() * lead_inv, p);
            size_t shift = rem.size() - r1.size();
            if (coef != 0) {
                q[shift] = coef;
                for (size_t i = 0; i < r1.size(); ++i)
                    rem[shift + i] = mod_reduce(rem[shift + i] - coef * r1[i], p);
            }
            rem.pop_back();
            trim(rem);
        }
        // s_{i+1} = s0 - q*s1
        Poly qs1(q.size() + (s1.empty() ? 1 : s1.size()) - 1, 0);
        for (size_t i = 0; i < q.size(); ++i)
            for (size_t j = 0; j < s1.size(); ++j)
                qs1[i + j] = mod_reduce(qs1[i + j] + q[i] * s1[j], p);
        Poly s2 = s0;
        if (s2.size() < qs1.size())
            s2.resize(qs1.size(), 0);
        for (size_t i = 0; i < qs1.size(); ++i)
            s2[i] = mod_reduce(s2[i] - qs1[i], p);
        trim(s2);
        r0 = r1;
        r1 = rem;
        s0 = s1;
        s1 = s2;
    }
    // r0 is gcd (a unit since modulus irreducible and c_ nonzero)
    Int scale = invmod(r0.empty() ? Int(1) : r0[0], p);
    Poly res = s0;
    for (auto &c : res)
        c = mod_reduce(c * scale, p);
    res = poly_mod(std::move(res), f_->modulus, p);
    res.resize(f_->k, 0);
    FieldElement out;
    out.f_ = f_;
    out.c_ = std::move(res);
    return out;
}

FieldElement FieldElement::pow(const Int &e) const {
    if (e < 0)
        return inv().pow(-e);
    Poly r = poly_powmod(c_, e, f_->modulus, f_->p);
    r.resize(f_->k, 0);
    FieldElement out;
    out.f_ = f_;
    out.c_ = std::move(r);
    return out;
}

FieldElement FieldElement::frobenius() const { return pow(f_->p); }

bool FieldElement::operator==(const FieldElement &o) const {
    check_same(o);
    return c_ == o.c_;
}

bool FieldElement::lex_less(const FieldElement &o) const {
    for (size_t i = c_.size(); i-- > 0;) {
        if (c_[i] != o.c_[i])
            return c_[i] < o.c_[i];
    }
    return false;
}

std::string FieldElement::str() const {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < c_.size(); ++i)
        os << (i ? "," : "") << c_[i].get_str();
    os << "]";
    return os.str();
}

FieldElement zero(const Field &f) { return FieldElement(f, Int(0)); }
FieldElement one(const Field &f) { return FieldElement(f, Int(1)); }

Int mult_order(const FieldElement &x) {
    if (x.is_zero())
        fail(errc::zero_element, "multiplicative order of zero");
    Int e = x.field()->q - 1;
    auto fac = factorize(e);
    Int ord = e;
    for (const auto &[p, k] : fac) {
        for (unsigned i = 0; i < k; ++i) {
            Int t = ord / p;
            if (x.pow(t).is_one())
                ord = t;
            else
                break;
        }
    }
    return ord;
}

Int mult_order_dividing(const FieldElement &x, const Int &n) {
    if (x.is_zero())
        fail(errc::zero_element, "multiplicative order of zero");
    if (!x.pow(n).is_one())
        fail(errc::not_in_subgroup, "element order does not divide " + n.get_str());
    Int ord = n;
    for (const auto &[p, k] : factorize(n)) {
        for (unsigned i = 0; i < k; ++i) {
            Int t = ord / p;
            if (x.pow(t).is_one())
                ord = t;
            else
                break;
        }
    }
    return ord;
}

FieldElement mu_generator(const Field &f, const Int &m) {
    if ((f->q - 1) % m != 0)
        fail(errc::roots_of_unity_missing,
             "mu_" + m.get_str() + " not contained in field of size " + f->q.get_str());
    auto mfac = factorize(m);
    Rng rng(0xC0FFEEULL); // result does not depend on the sampling path
    FieldElement g = one(f);
    for (int tries = 0; tries < 4096; ++tries) {
        std::vector<Int> coeffs(f->k);
        for (auto &c : coeffs)
            c = rng.below(f->p);
        FieldElement x(f, coeffs);
        if (x.is_zero())
            continue;
        FieldElement cand = x.pow((f->q - 1) / m);
        bool exact = true;
        for (const auto &[p, e] : mfac) {
            (void)e;
            if (cand.pow(m / p).is_one()) {
                exact = false;
                break;
            }
        }
        if (!exact)
            continue;
        g = cand;
        break;
    }
    if (g.is_one() && m != 1)
        fail(errc::internal_inconsistency, "no element of order " + m.get_str() + " found");
    // minimize over the generators of <g>
    FieldElement best = g;
    FieldElement cur = g;
    for (Int j = 2; j < m; ++j) {
        cur = cur * g;
        if (gcd(j, m) != 1)
            continue;
        if (cur.lex_less(best))
            best = cur;
    }
    return best;
}

std::optional<FieldElement> field_sqrt(const FieldElement &x) {
    const Field &f = x.field();
    if (x.is_zero())
        return zero(f);
    Int h = (f->q - 1) / 2;
    if (!x.pow(h).is_one())
        return std::nullopt;
    FieldElement r = one(f);
    if (f->q % 4 == 3) {
        r = x.pow((f->q + 1) / 4);
    } else {
        // Tonelli-Shanks with field arithmetic
        Int q1 = f->q - 1;
        unsigned s = 0;
        while (q1 % 2 == 0) {
            q1 /= 2;
            ++s;
        }
        Rng rng(0x51C2ULL);
        FieldElement z = one(f);
        for (;;) {
            std::vector<Int> coeffs(f->k);
            for (auto &c : coeffs)
                c = rng.below(f->p);
            z = FieldElement(f, coeffs);
            if (!z.is_zero() && !z.pow(h).is_one())
                break;
        }
        unsigned m = s;
        FieldElement c = z.pow(q1);
        FieldElement t = x.pow(q1);
        r = x.pow((q1 + 1) / 2);
        while (!t.is_one()) {
            unsigned i = 0;
            FieldElement tt = t;
            while (!tt.is_one()) {
                tt = tt * tt;
                ++i;
            }
            FieldElement b = c;
            for (unsigned j = 0; j + i + 1 < m; ++j)
                b = b * b;
            m = i;
            c = b * b;
            t = t * c;
            r = r * b;
        }
    }
    FieldElement r2 = -r;
    return r.lex_less(r2) ? r : r2;
}

std::vector<FieldElement> all_elements(const Field &f, const Int &budget) {
    if (f->q > budget)
        fail(errc::budget_exceeded, "field too large to enumerate");
    std::vector<FieldElement> out;
    std::vector<Int> coeffs(f->k, 0);
    for (;;) {
        out.emplace_back(f, coeffs);
        unsigned i = 0;
        for (; i < f->k; ++i) {
            coeffs[i] += 1;
            if (coeffs[i] < f->p)
                break;
            coeffs[i] = 0;
        }
        if (i == f->k)
            break;
    }
    return out;
}

Extension make_extension(const Field &base, unsigned j, Rng &rng) {
    if (base->k > 2)
        fail(errc::budget_exceeded, "extensions only supported above degree <= 2 base fields");
    unsigned deg = base->k * j;
    Extension ext;
    if (deg == base->k) {
        ext.big = base;
        ext.base_gen_image = FieldElement(base, std::vector<Int>{Int(0), Int(1)});
        if (base->k == 1)
            ext.base_gen_image = zero(base);
        return ext;
    }
    // random monic polynomial until irreducible
    for (int tries = 0; tries < 4096; ++tries) {
        std::vector<Int> mod(deg + 1);
        for (unsigned i = 0; i < deg; ++i)
            mod[i] = rng.below(base->p);
        mod[deg] = 1;
        try {
            ext.big = make_field(base->p, deg, mod);
        } catch (const Error &) {
            continue;
        }
        break;
    }
    if (!ext.big)
        fail(errc::internal_inconsistency, "failed to build extension field");
    if (base->k == 1) {
        ext.base_gen_image = zero(ext.big);
        return ext;
    }
    // base = F_p[x]/(x^2 + b1 x + b0): embed the generator as a root in big
    const Int &p = base->p;
    Int b1 = base->modulus[1], b0 = base->modulus[0];
    // root = (-b1 + sqrt(b1^2 - 4 b0)) / 2
    FieldElement disc(ext.big, mod_reduce(b1 * b1 - 4 * b0, p));
    auto s = field_sqrt(disc);
    if (!s)
        fail(errc::internal_inconsistency, "quadratic modulus has no root in extension");
    FieldElement inv2 = FieldElement(ext.big, Int(2)).inv();
    ext.base_gen_image = (FieldElement(ext.big, mod_reduce(-b1, p)) + *s) * inv2;
    return ext;
}

FieldElement embed(const Extension &ext, const FieldElement &x) {
    const Field &src = x.field();
    if (src->same(*ext.big))
        return FieldElement(ext.big, x.coeffs());
    FieldElement acc = zero(ext.big);
    FieldElement pw = one(ext.big);
    for (unsigned i = 0; i < src->k; ++i) {
        acc = acc + pw * FieldElement(ext.big, x.coeffs()[i]);
        pw = pw * ext.base_gen_image;
    }
    return acc;
}

FieldElement descend(const Extension &ext, const Field &base, const FieldElement &x) {
    if (base->k == 1) {
        for (size_t i = 1; i < x.coeffs().size(); ++i)
            if (x.coeffs()[i] != 0)
                fail(errc::internal_inconsistency, "element not in prime subfield");
        return FieldElement(base, x.coeffs()[0]);
    }
    // solve x = e0 + e1 * gen_image over F_p
    const auto &g = ext.base_gen_image.coeffs();
    const auto &v = x.coeffs();
    const Int &p = base->p;
    // pick a pivot coordinate where g is nonzero beyond the constant term
    size_t piv = 0;
    bool found = false;
    for (size_t i = 1; i < g.size(); ++i)
        if (g[i] != 0) {
            piv = i;
            found = true;
            break;
        }
    if (!found)
        fail(errc::internal_inconsistency, "degenerate embedding");
    Int e1 = mod_reduce(v[piv] * invmod(g[piv], p), p);
    Int e0 = mod_reduce(v[0] - e1 * g[0], p);
    FieldElement cand(base, std::vector<Int>{e0, e1});
    if (embed(ext, cand) != x)
        fail(errc::internal_inconsistency, "element not in embedded subfield");
    return cand;
}

} // namespace sesqui
