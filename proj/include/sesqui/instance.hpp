#pragma once

#include "sesqui/serial.hpp"

namespace sesqui {

// Everything an attack is allowed to see.
struct PublicInstance {
    std::string variant; // norm | sidh1 | diagonal | ramified | two-orient
    Int m;
    Int degree;
    Curve E, Ep;
    Orientation orE, orEp;                    // primary orientation, holds the bases
    std::optional<Orientation> orE2, orEp2;   // second orientation (two-orient)
    std::optional<Point> genE, genEp;         // O-module generators
    std::optional<Point> R, phiR;             // sidh1 payload
    std::optional<Point> Pp, Qp;              // diagonal payload
};

struct SealedTruth {
    Mat2 matrix;                              // phi on the E basis, coords in the Ep basis
    std::optional<OrderElem> lambda;          // phi genE = [lambda] genEp
    std::vector<std::pair<Int, Point>> chain; // (ell, kernel generator), in evaluation order
};

struct AttackInstance {
    PublicInstance pub;
    std::optional<SealedTruth> sealed;
};

json instance_to_json(const AttackInstance &inst);
AttackInstance instance_from_json(const json &j);

// Rebuild the hidden isogeny from the sealed chain.
Isogeny rebuild_chain(const Curve &E, const std::vector<std::pair<Int, Point>> &chain);

struct GenSpec {
    std::string family; // f541 | f101 | wouter | gaussian | custom
    Int p = 0;          // gaussian / custom
    int r = 3;          // wouter
    Int m = 0;          // torsion level; defaults per family
    Int degree = 2;
    std::string variant = "norm";
    uint64_t seed = 0;
};

AttackInstance gen_instance(const GenSpec &spec);

} // namespace sesqui
