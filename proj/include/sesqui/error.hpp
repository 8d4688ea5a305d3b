#pragma once

#include <stdexcept>
#include <string>

namespace sesqui {

// Error codes shared between the C++ exceptions and the C API.
enum class errc : int {
    ok = 0,
    composite_modulus = 1,
    reducible_modulus = 2,
    zero_element = 3,
    division_by_zero = 4,
    mixed_fields = 5,
    mixed_curves = 6,
    torsion_not_rational = 7,
    divisor_support_collision = 8,
    bad_kernel_order = 9,
    roots_of_unity_missing = 10,
    budget_exceeded = 11,
    not_smooth = 12,
    no_solution = 13,
    min_poly_mismatch = 14,
    denominator_not_invertible = 15,
    point_not_in_torsion = 16,
    wrong_order = 17,
    empirical_contradiction = 18,
    no_such_subgroup = 19,
    not_split = 20,
    not_in_subgroup = 21,
    internal_inconsistency = 22,
    degenerate_base = 23,
    degenerate_self_pairing = 24,
    ramified_prime = 25,
    coefficient_not_invertible = 26,
    no_generator_among_pq = 27,
    oracle_exhausted = 28,
    not_ramified = 29,
    not_anti_commuting = 30,
    majority_inconclusive = 31,
    ambiguous_match = 32,
    no_split_prime_kernel = 33,
    conjugate_not_invertible = 34,
    non_principal_divisor = 35,
    bad_instance = 36,
    parse_error = 37,
};

const char *errc_name(errc c);

class Error : public std::runtime_error {
  public:
    Error(errc c, const std::string &msg)
        : std::runtime_error(std::string(errc_name(c)) + ": " + msg), code_(c) {}

    errc code() const { return code_; }

  private:
    errc code_;
};

[[noreturn]] inline void fail(errc c, const std::string &msg) { throw Error(c, msg); }

} // namespace sesqui
