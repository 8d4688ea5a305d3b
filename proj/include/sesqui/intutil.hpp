#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "sesqui/error.hpp"

namespace sesqui {

using Int = mpz_class;

// Deterministic splittable generator (splitmix64).  All randomness in the
// library flows through one of these so that a single seed reproduces runs
// byte for byte.
class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64();

    // Uniform in [0, n), n > 0.
    Int below(const Int &n);
    uint64_t below_u64(uint64_t n);

    // Independent child stream; deterministic in (parent state, label).
    Rng split(const std::string &label);

  private:
    uint64_t state_;
};

bool is_probable_prime(const Int &n);

Int powmod(const Int &base, const Int &exp, const Int &mod);

// Inverse of a mod m; throws division_by_zero if gcd(a, m) != 1.
Int invmod(const Int &a, const Int &m);

Int gcd(const Int &a, const Int &b);
Int lcm(const Int &a, const Int &b);

// Prime factorization, smallest prime first.  Trial division plus Pollard
// rho; fine for the sizes this library meets.
std::vector<std::pair<Int, unsigned>> factorize(Int n);

// Exact multiplicative order of x modulo m given the factorization of a
// multiple e of the order (i.e. x^e = 1 mod m).
Int order_from_multiple(const Int &x, const Int &e,
                        const std::vector<std::pair<Int, unsigned>> &e_factors, const Int &mod);

// CRT: combine x = r1 mod m1, x = r2 mod m2 for coprime m1, m2.
Int crt_pair(const Int &r1, const Int &m1, const Int &r2, const Int &m2);

// All square roots of c modulo m.  m must be smooth: every prime factor at
// most `prime_bound`, else not_smooth.  Returns a sorted list (possibly
// empty).
std::vector<Int> all_sqrts_mod(const Int &c, const Int &m, const Int &prime_bound = Int(1) << 20);

// Square roots of a unit c modulo an odd prime p (Tonelli-Shanks); empty if
// c is a non-residue.
std::vector<Int> sqrts_mod_prime(const Int &c, const Int &p);

inline Int mod_reduce(const Int &a, const Int &m) {
    Int r = a % m;
    if (r < 0)
        r += m;
    return r;
}

} // namespace sesqui
