#include "sesqui/intutil.hpp"

#include <algorithm>
#include <set>

namespace sesqui {

const char *errc_name(errc c) {
    switch (c) {
    case errc::ok: return "Ok";
    case errc::composite_modulus: return "CompositeModulus";
    case errc::reducible_modulus: return "ReducibleModulus";
    case errc::zero_element: return "ZeroElement";
    case errc::division_by_zero: return "DivisionByZero";
    case errc::mixed_fields: return "MixedFields";
    case errc::mixed_curves: return "MixedCurves";
    case errc::torsion_not_rational: return "TorsionNotRational";
    case errc::divisor_support_collision: return "DivisorSupportCollision";
    case errc::bad_kernel_order: return "BadKernelOrder";
    case errc::roots_of_unity_missing: return "RootsOfUnityMissing";
    case errc::budget_exceeded: return "BudgetExceeded";
    case errc::not_smooth: return "NotSmooth";
    case errc::no_solution: return "NoSolution";
    case errc::min_poly_mismatch: return "MinPolyMismatch";
    case errc::denominator_not_invertible: return "DenominatorNotInvertible";
    case errc::point_not_in_torsion: return "PointNotInTorsion";
    case errc::wrong_order: return "WrongOrder";
    case errc::empirical_contradiction: return "EmpiricalContradiction";
    case errc::no_such_subgroup: return "NoSuchSubgroup";
    case errc::not_split: return "NotSplit";
    case errc::not_in_subgroup: return "NotInSubgroup";
    case errc::internal_inconsistency: return "InternalInconsistency";
    case errc::degenerate_base: return "DegenerateBase";
    case errc::degenerate_self_pairing: return "DegenerateSelfPairing";
    case errc::ramified_prime: return "RamifiedPrime";
    case errc::coefficient_not_invertible: return "CoefficientNotInvertible";
    case errc::no_generator_among_pq: return "NoGeneratorAmongPQ";
    case errc::oracle_exhausted: return "OracleExhausted";
    case errc::not_ramified: return "NotRamified";
    case errc::not_anti_commuting: return "NotAntiCommuting";
    case errc::majority_inconclusive: return "MajorityInconclusive";
    case errc::ambiguous_match: return "AmbiguousMatch";
    case errc::no_split_prime_kernel: return "NoSplitPrimeKernel";
    case errc::conjugate_not_invertible: return "ConjugateNotInvertible";
    case errc::non_principal_divisor: return "NonPrincipalDivisor";
    case errc::bad_instance: return "BadInstance";
    case errc::parse_error: return "ParseError";
    }
    return "Unknown";
}

uint64_t Rng::next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

uint64_t Rng::below_u64(uint64_t n) {
    if (n == 0)
        fail(errc::internal_inconsistency, "Rng::below_u64(0)");
    // rejection sampling to keep the distribution exactly uniform
    uint64_t lim = UINT64_MAX - UINT64_MAX % n;
    uint64_t v;
    do {
        v = next_u64();
    } while (v >= lim);
    return v % n;
}

Int Rng::below(const Int &n) {
    if (n <= 0)
        fail(errc::internal_inconsistency, "Rng::below(<=0)");
    size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
    size_t words = (bits + 63) / 64;
    for (;;) {
        Int v = 0;
        for (size_t i = 0; i < words; ++i) {
            v <<= 64;
            Int w;
            uint64_t u = next_u64();
            mpz_import(w.get_mpz_t(), 1, 1, sizeof(u), 0, 0, &u);
            v += w;
        }
        v >>= (64 * words - bits);
        if (v < n)
            return v;
    }
}

Rng Rng::split(const std::string &label) {
    // FNV-1a over the label folded into the parent state
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : label) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    Rng child(state_ ^ h ^ 0xa5a5a5a55a5a5a5aULL);
    child.next_u64();
    return child;
}

bool is_probable_prime(const Int &n) {
    if (n < 2)
        return false;
    return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

Int powmod(const Int &base, const Int &exp, const Int &mod) {
    Int r;
    if (exp < 0) {
        Int inv = invmod(base, mod);
        Int e = -exp;
        mpz_powm(r.get_mpz_t(), inv.get_mpz_t(), e.get_mpz_t(), mod.get_mpz_t());
    } else {
        mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
    }
    return r;
}

Int invmod(const Int &a, const Int &m) {
    Int r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        fail(errc::division_by_zero, "no inverse of " + a.get_str() + " mod " + m.get_str());
    return r;
}

Int gcd(const Int &a, const Int &b) {
    Int r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

Int lcm(const Int &a, const Int &b) {
    Int r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

namespace {

Int pollard_rho(const Int &n, Rng &rng) {
    if (n % 2 == 0)
        return 2;
    for (;;) {
        Int x = rng.below(n - 2) + 2;
        Int y = x;
        Int c = rng.below(n - 1) + 1;
        Int d = 1;
        while (d == 1) {
            x = (x * x + c) % n;
            y = (y * y + c) % n;
            y = (y * y + c) % n;
            d = gcd(abs(x - y), n);
        }
        if (d != n)
            return d;
    }
}

void factor_rec(const Int &n, std::multiset<Int> &out, Rng &rng) {
    if (n == 1)
        return;
    if (is_probable_prime(n)) {
        out.insert(n);
        return;
    }
    Int d = pollard_rho(n, rng);
    factor_rec(d, out, rng);
    factor_rec(n / d, out, rng);
}

} // namespace

std::vector<std::pair<Int, unsigned>> factorize(Int n) {
    if (n < 1)
        fail(errc::internal_inconsistency, "factorize of non-positive integer");
    std::vector<std::pair<Int, unsigned>> out;
    if (n == 1)
        return out;
    for (Int p = 2; p * p <= n && p < 100000; p = (p == 2 ? Int(3) : p + 2)) {
        if (n % p == 0) {
            unsigned e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            out.emplace_back(p, e);
        }
    }
    if (n > 1) {
        std::multiset<Int> rest;
        Rng rng(0x9d2c5680u); // factoring only; result is order-independent
        factor_rec(n, rest, rng);
        for (auto it = rest.begin(); it != rest.end();) {
            Int p = *it;
            unsigned e = 0;
            while (it != rest.end() && *it == p) {
                ++e;
                ++it;
            }
            out.emplace_back(p, e);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

Int order_from_multiple(const Int &x, const Int &e,
                        const std::vector<std::pair<Int, unsigned>> &e_factors, const Int &mod) {
    Int ord = e;
    for (const auto &[p, k] : e_factors) {
        for (unsigned i = 0; i < k; ++i) {
            Int t = ord / p;
            if (powmod(x, t, mod) == 1)
                ord = t;
            else
                break;
        }
    }
    return ord;
}

Int crt_pair(const Int &r1, const Int &m1, const Int &r2, const Int &m2) {
    Int g = gcd(m1, m2);
    if (g != 1)
        fail(errc::internal_inconsistency, "crt moduli not coprime");
    Int m = m1 * m2;
    Int x = r1 + m1 * mod_reduce((r2 - r1) * invmod(m1, m2), m2);
    return mod_reduce(x, m);
}

std::vector<Int> sqrts_mod_prime(const Int &c0, const Int &p) {
    Int c = mod_reduce(c0, p);
    if (p == 2)
        return {c};
    if (c == 0)
        return {Int(0)};
    if (powmod(c, (p - 1) / 2, p) != 1)
        return {};
    Int r;
    if (p % 4 == 3) {
        r = powmod(c, (p + 1) / 4, p);
    } else {
        // Tonelli-Shanks
        Int q = p - 1;
        unsigned s = 0;
        while (q % 2 == 0) {
            q /= 2;
            ++s;
        }
        Int z = 2;
        while (powmod(z, (p - 1) / 2, p) != p - 1)
            ++z;
        Int m = s;
        Int cc = powmod(z, q, p);
        Int t = powmod(c, q, p);
        r = powmod(c, (q + 1) / 2, p);
        while (t != 1) {
            Int i = 0;
            Int tt = t;
            while (tt != 1) {
                tt = tt * tt % p;
                ++i;
            }
            Int b = powmod(cc, powmod(2, m - i - 1, p - 1), p);
            m = i;
            cc = b * b % p;
            t = t * cc % p;
            r = r * b % p;
        }
    }
    Int r2 = p - r;
    if (r == r2)
        return {r};
    return {std::min(r, r2), std::max(r, r2)};
}

namespace {

// Roots of x^2 = c mod p^e for unit c, odd p, by Hensel lifting.
std::vector<Int> sqrts_unit_mod_odd_pe(const Int &c, const Int &p, unsigned e) {
    auto base = sqrts_mod_prime(c, p);
    if (base.empty())
        return {};
    Int pk = p;
    for (unsigned i = 1; i < e; ++i) {
        Int pk1 = pk * p;
        std::vector<Int> lifted;
        for (const Int &r : base) {
            // r' = r - (r^2 - c) / (2r) mod pk1
            Int num = mod_reduce(r * r - c, pk1);
            Int corr = mod_reduce(num * invmod(mod_reduce(2 * r, pk1), pk1), pk1);
            lifted.push_back(mod_reduce(r - corr, pk1));
        }
        base = lifted;
        pk = pk1;
    }
    std::sort(base.begin(), base.end());
    return base;
}

std::vector<Int> sqrts_unit_mod_2e(const Int &c, unsigned e) {
    Int m = Int(1) << e;
    Int cc = mod_reduce(c, m);
    std::vector<Int> out;
    if (e == 1) {
        out = {Int(1)};
    } else if (e == 2) {
        if (cc % 4 == 1)
            out = {Int(1), Int(3)};
    } else {
        if (cc % 8 == 1) {
            // lift from mod 8 upward; solutions come in a coset of size 4
            Int r = 1;
            for (unsigned k = 3; k < e; ++k) {
                Int mk1 = Int(1) << (k + 1);
                if (mod_reduce(r * r - cc, mk1) != 0)
                    r += Int(1) << (k - 1);
            }
            std::set<Int> s{mod_reduce(r, m), mod_reduce(-r, m), mod_reduce(r + m / 2, m),
                            mod_reduce(-r + m / 2, m)};
            out.assign(s.begin(), s.end());
        }
    }
    return out;
}

std::vector<Int> sqrts_mod_pe(const Int &c0, const Int &p, unsigned e) {
    Int pe = 1;
    for (unsigned i = 0; i < e; ++i)
        pe *= p;
    Int c = mod_reduce(c0, pe);
    if (c != 0 && c % p != 0) {
        if (p == 2)
            return sqrts_unit_mod_2e(c, e);
        return sqrts_unit_mod_odd_pe(c, p, e);
    }
    // p divides c: fall back to enumeration for small moduli
    if (pe > (Int(1) << 20))
        fail(errc::budget_exceeded, "square roots of non-unit mod large prime power");
    std::vector<Int> out;
    for (Int x = 0; x < pe; ++x)
        if (mod_reduce(x * x - c, pe) == 0)
            out.push_back(x);
    return out;
}

} // namespace

std::vector<Int> all_sqrts_mod(const Int &c, const Int &m, const Int &prime_bound) {
    if (m == 1)
        return {Int(0)};
    auto fac = factorize(m);
    for (const auto &[p, e] : fac)
        if (p > prime_bound)
            fail(errc::not_smooth, "modulus " + m.get_str() + " has prime factor " + p.get_str());
    std::vector<Int> acc{Int(0)};
    Int acc_mod = 1;
    for (const auto &[p, e] : fac) {
        Int pe = 1;
        for (unsigned i = 0; i < e; ++i)
            pe *= p;
        auto part = sqrts_mod_pe(c, p, e);
        if (part.empty())
            return {};
        std::vector<Int> next;
        for (const Int &a : acc)
            for (const Int &b : part)
                next.push_back(acc_mod == 1 ? b : crt_pair(a, acc_mod, b, pe));
        acc = next;
        acc_mod *= pe;
    }
    std::sort(acc.begin(), acc.end());
    acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
    return acc;
}

} // namespace sesqui
