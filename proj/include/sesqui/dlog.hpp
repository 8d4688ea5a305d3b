#pragma once

#include "sesqui/curve.hpp"

namespace sesqui {

// x with g^x = h in the cyclic group generated by g, whose order divides m.
// Pohlig-Hellman over the prime powers of ord(g) with BSGS per prime.
Int dlog_mu(const FieldElement &g, const FieldElement &h, const Int &m,
            const Int &smooth_bound = Int(1) << 20);

// (u, v) with R = [u]P + [v]Q for a basis (P, Q) of E[m]; verified by scalar
// multiplication before returning.
std::pair<Int, Int> point_dlog2d(const Point &R, const Point &P, const Point &Q, const Int &m,
                                 Rng &rng);

// lambda in O/mO with pair_pow(base, lambda) = target.  The base must have
// annihilator mO (its exponent-vector matrix is invertible mod m).
OrderElem olinear_dlog(const PairVal &base, const PairVal &target, const Int &m,
                       const QuadOrder &ord, const Int &smooth_bound = Int(1) << 20);

} // namespace sesqui
