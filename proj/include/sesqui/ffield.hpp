#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "sesqui/intutil.hpp"

namespace sesqui {

// F_{p^k} as a single-step quotient F_p[x]/(modulus).  Descriptors are
// immutable and shared; elements hold a reference to theirs.
struct FieldDesc {
    Int p;
    unsigned k;
    std::vector<Int> modulus; // monic, length k+1, little-endian
    Int q;                    // p^k

    bool same(const FieldDesc &o) const { return p == o.p && k == o.k && modulus == o.modulus; }
};

using Field = std::shared_ptr<const FieldDesc>;

Field make_field(const Int &p, unsigned k, const std::vector<Int> &modulus);

// F_p with modulus x.
Field make_prime_field(const Int &p);

// Running count of constructed descriptors of extension degree >= 3; lets
// tests assert that a computation stayed inside small fields.
uint64_t field_constructions_deg_ge3();

class FieldElement {
  public:
    FieldElement() = default;
    FieldElement(Field f, const Int &c0);               // embed a residue
    FieldElement(Field f, std::vector<Int> coeffs);     // little-endian, reduced mod p

    const Field &field() const { return f_; }
    const std::vector<Int> &coeffs() const { return c_; }

    bool is_zero() const;
    bool is_one() const;

    FieldElement operator+(const FieldElement &o) const;
    FieldElement operator-(const FieldElement &o) const;
    FieldElement operator*(const FieldElement &o) const;
    FieldElement operator-() const;
    FieldElement inv() const;
    FieldElement operator/(const FieldElement &o) const { return *this * o.inv(); }
    FieldElement pow(const Int &e) const;
    FieldElement frobenius() const; // x -> x^p

    bool operator==(const FieldElement &o) const;
    bool operator!=(const FieldElement &o) const { return !(*this == o); }

    // total order on coefficient tuples; used for canonical choices
    bool lex_less(const FieldElement &o) const;

    std::string str() const;

  private:
    void check_same(const FieldElement &o) const;

    Field f_;
    std::vector<Int> c_;
};

FieldElement zero(const Field &f);
FieldElement one(const Field &f);

// Least e >= 1 with x^e = 1; requires x != 0.
Int mult_order(const FieldElement &x);

// Multiplicative order given that it divides n (n factored by the callee).
Int mult_order_dividing(const FieldElement &x, const Int &n);

// The canonical generator of mu_m in F: the lexicographically least element
// of multiplicative order exactly m.  Deterministic.
FieldElement mu_generator(const Field &f, const Int &m);

// Square root in F_q (q odd); returns the lexicographically smaller root.
// Empty optional if x is a non-residue.
std::optional<FieldElement> field_sqrt(const FieldElement &x);

// Iterate all field elements (enumeration order: lexicographic coefficient
// tuples).  Only valid when q fits the enumeration budget.
std::vector<FieldElement> all_elements(const Field &f, const Int &budget = Int(1) << 24);

// Degree-j extension of a base field together with the embedding of the base
// field.  Supported for base fields of degree 1 and 2.
struct Extension {
    Field big;
    // image of the base generator (class of x) in the big field
    FieldElement base_gen_image;
};

Extension make_extension(const Field &base, unsigned j, Rng &rng);
FieldElement embed(const Extension &ext, const FieldElement &x);
// inverse of embed; fails if x is not in the embedded subfield
FieldElement descend(const Extension &ext, const Field &base, const FieldElement &x);

} // namespace sesqui
