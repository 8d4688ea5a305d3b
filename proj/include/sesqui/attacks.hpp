#pragma once

#include <functional>

#include "sesqui/instance.hpp"

namespace sesqui {

// N(lambda) mod m for phi genE = [lambda] genEp, from the two self-pairings
// and a discrete log.  Refuses ramified m (use attack_ramified there).
Int recover_norm_lambda(const PublicInstance &inst, Rng &rng);

struct Candidate {
    OrderElem mu;
    Point image; // [mu] genEp
};

// All [mu] genEp with N(mu) = nval and [mu] genEp of full order.
std::vector<Candidate> candidate_images(const PublicInstance &inst, const Int &nval, Rng &rng);

struct OracleResult {
    std::optional<Isogeny> chain;  // on success
    std::optional<CurveIso> post;  // isomorphism chain.codomain -> Ep
    std::optional<Point> kernel_gen; // cyclic generator of the kernel
    std::string reject_reason;     // non-empty on Reject
    bool used_extension = false;
};

// Brute-force small-degree isogeny oracle: enumerates cyclic degree-d
// kernels (over the base field or a small extension), accepts the unique
// chain matching j-invariant and the claimed images up to post-composition
// isomorphism.
OracleResult isogeny_oracle(const Curve &E, const Curve &Ep, const Int &d, const Point &B1,
                            const Point &B2, const Point &I1, const Point &I2, const Int &m,
                            Rng &rng);

Int oracle_degree_budget(); // default 64, overridable via SESQUI_BUDGET

struct Sidh1Report {
    Point B1, B2; // recovered basis of E[m]
    Point I1, I2; // images under phi
    Mat2 matrix;  // action in the instance bases
    OracleResult oracle;
};

Sidh1Report attack_sidh1(const PublicInstance &inst, Rng &rng);

struct DiagonalReport {
    Int lambda_sq;
    std::vector<Int> tried; // sqrt candidates, ascending
    Int accepted;           // the verified candidate
    Mat2 matrix;
    OracleResult oracle;
};

DiagonalReport attack_diagonal(const PublicInstance &inst, Rng &rng);

// tau' = 2*sigma (m odd) or sigma with sigma = (disc + sqrt(disc))/2, and
// m' per the parity of m; Tr(tau') = N(tau') = 0 mod m'.
struct RamifiedTau {
    OrderElem tau_prime; // in the (1, tau) basis of the original order
    QuadOrder ord_prime; // (trace, norm) of tau'
    Int m_prime;
    bool degenerate; // m' <= 1
};

RamifiedTau ramified_tau_select(const QuadOrder &ord, const Int &m);

struct RamifiedReport {
    RamifiedTau tau;
    Int n_lambda;
    std::vector<Int> sqrt_cands;
    Point Q;                      // [tau'] genE
    std::vector<Point> candidates; // possible phi(Q), includes E'[4] offsets
};

RamifiedReport attack_ramified(const PublicInstance &inst, Rng &rng);

struct TwoOrientReport {
    Int n_lambda;
    OrderElem lambda_sq;
    std::vector<OrderElem> cands;
    OrderElem accepted;
    Mat2 matrix;
    OracleResult oracle;
};

TwoOrientReport attack_two_orient(const PublicInstance &inst, Rng &rng);

// Oracle access to the pairing for an unknown orientation.
using PairingOracle = std::function<ReducedPairValue(const Point &, const Point &)>;

// Monte-Carlo recovery of the tau action on E[m] from pairing access alone;
// majority vote over `rounds` independent samples.
Mat2 recover_orientation(const Curve &E, const Int &m, const Point &P1, const Point &P2,
                         const PairingOracle &oracle, const QuadOrder &ord, Rng &rng,
                         int rounds = 15);

// ---- verification helpers (these may read sealed data) ----

// Matrices equal up to post-composition with an automorphism of Ep.
bool matrix_matches_up_to_automorphism(const Mat2 &got, const Mat2 &sealed, const Orientation &orEp,
                                       Rng &rng);

// The oracle result's kernel equals the sealed chain's kernel subgroup.
bool oracle_kernel_matches(const OracleResult &got, const AttackInstance &inst);

} // namespace sesqui
