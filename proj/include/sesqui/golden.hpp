#pragma once

#include "sesqui/attacks.hpp"

namespace sesqui {

struct GoldenReport {
    bool pass = false;
    json detail; // per-check results, matrices, chosen conventions
};

// Self-pairing log tables over F_541 against the published 5x5 matrices
// (one uniform unit exponent allowed; u = 1 tried first and reported).
GoldenReport golden_f541();

// Cyclicity and Frobenius-image facts for the curve over F_{101^2}.
GoldenReport golden_f101();

// The p = 4*3^r - 1 family: orientation, tau' selection, T' self-pairing
// order.
GoldenReport golden_wouter(int r);

GoldenReport run_golden(const std::string &name, int r = 3);

} // namespace sesqui
