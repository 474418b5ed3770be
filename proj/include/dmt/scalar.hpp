#pragma once

// Exact arithmetic in F_{p^h} and truncated Witt rings W_n(F_{p^h}).
//
// Representation: W_n(F_{p^h}) = (Z/p^n)[t]/(lifted_modulus), where
// lifted_modulus is the Hensel lift of a primitive degree-h polynomial over
// F_p and divides X^(p^h-1) - 1 over Z/p^n.  The Frobenius sigma is the ring
// endomorphism t -> t^p; at n = 1 the ring is the plain field F_{p^h}.

#include <vector>

#include "dmt/base.hpp"

namespace dmt {

// Element of W_n(F_{p^h}): h coordinates mod p^n in the power basis of t.
using Elem = std::vector<u64>;

// First (in lexicographic coefficient order c_0..c_{h-1}) monic primitive
// polynomial of degree h over F_p.  Returned as low-to-high coefficient
// vector of length h (the leading 1 is implicit).
std::vector<u64> find_primitive_poly(u64 p, u64 h);

// Hensel lift of the factorization X^(p^h-1) - 1 = f * g from mod p to
// mod p^n, where f is the primitive polynomial above.  Returns the lifted
// f (length h, coefficients mod p^n).
std::vector<u64> lift_modulus(u64 p, u64 h, u64 n);

// Unique root u of x^2 - a x + q = 0 mod p^n with u = a mod p.
// Rejects p | a (supersingular input: no unit root).
u64 unit_root(i64 a, u64 q, u64 p, u64 n);

class Ring {
public:
    u64 p, h, n;
    u64 pn;                    // p^n
    u64 q;                     // p^h
    std::vector<u64> modulus;  // lifted modulus, length h, coefficients mod p^n

    Ring(u64 p, u64 h, u64 n);

    // Shared, cached instance (rings are immutable after construction).
    static const Ring& get(u64 p, u64 h, u64 n);

    bool is_field() const { return n == 1; }

    Elem zero() const { return Elem(h, 0); }
    Elem one() const;
    Elem gen() const;  // the class of t
    Elem from_int(u64 c) const;

    bool is_zero(const Elem& x) const;
    Elem add(const Elem& a, const Elem& b) const;
    Elem sub(const Elem& a, const Elem& b) const;
    Elem neg(const Elem& a) const;
    Elem smul(u64 c, const Elem& a) const;
    Elem mul(const Elem& a, const Elem& b) const;
    Elem pow(const Elem& a, u128 e) const;

    // sigma^k; k may be negative (sigma has order h).
    Elem frobenius(const Elem& x, i64 k) const;

    bool is_unit(const Elem& x) const;  // nonzero mod p
    Elem inv(const Elem& x) const;      // UsageError on non-units

    // Coordinates reduced from level n to level m <= n.
    Elem reduce_level(const Elem& x, const Ring& target) const;

    // Teichmuller lift: coordinates of `a` are read mod p and the unique
    // multiplicative lift with w(a)^(p^h) = w(a) is returned.
    Elem teichmuller(const Elem& a) const;

    // Multiplicative order of a unit (order divides q - 1 only for
    // Teichmuller elements; general units allowed, brute-forced).
    u64 mult_order(const Elem& x) const;

private:
    std::vector<std::vector<u64>> red_;    // t^(h+i) reduced, i = 0..h-2
    std::vector<std::vector<u64>> sigma_;  // sigma^k as h x h matrix, row-major, k = 0..h-1
};

// Embedding W_n(F_{p^h}) -> W_n(F_{p^(h*m)}) determined by the smallest
// power of the target generator that is a root of the source modulus.
struct Embedding {
    const Ring* src;
    const Ring* dst;
    Elem image_of_t;
};

Embedding make_embedding(const Ring& src, const Ring& dst);
Elem embed(const Embedding& e, const Elem& x);

}  // namespace dmt
