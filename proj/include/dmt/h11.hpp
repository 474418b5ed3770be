#pragma once

// Forms of the supersingular BT_1 H_{1,1}[p] over finite fields containing
// F_{p^2}: the tau-map a -> sigma(a)/sigma^-1(a), the coset invariant in
// K^x / tau(K^x), and the polarized form count p + 1.

#include <string>

#include "dmt/scalar.hpp"

namespace dmt {

// sigma(a) / sigma^-1(a); requires a != 0 and a level-1 field.
Elem tau(const Ring& K, const Elem& a);

// Index of tau(K^x) in K^x; requires h even (F_{p^2} inside K).
// Equals p^2 - 1 for every finite K.
u64 tau_image_index(const Ring& K);

// Rank-2 module with basis x, y, F x = y, V x = lambda y, generated by x.
struct CyclicGenModule {
    const Ring* K;  // level-1 field containing F_{p^2}
    Elem lambda;    // nonzero
};

CyclicGenModule make_cyclic_gen_module(const Ring& K, const Elem& lambda);

// Coset label of the form invariant in K^x / tau(K^x), as a discrete-log
// residue mod p^2 - 1 with respect to the canonical generator t of K^x.
// The label is independent of the chosen generator b x + c y (b != 0):
// the invariant transforms by sigma^-1(b)/sigma(b) = tau(b)^-1.
u64 form_class(const CyclicGenModule& M, const Elem& b, const Elem& c);

// Number of unpolarized forms over K = p^2 - 1 (the tau-image index).
u64 unpolarized_form_count(const Ring& K);

// |{a in F_{p^2}^x : a * a^p = 1}| = p + 1, computed exhaustively and
// cross-checked against |pi0| of the polarized H_{1,1} from dieudonne_core.
u64 polarized_form_count(u64 p);

// Discrete logarithm of a unit with respect to t (exhaustive; fields here
// have at most 3^6 elements).
u64 discrete_log(const Ring& K, const Elem& a);

// CSV census: columns p, field_degree, form_label, polarized (0/1).
std::string h11_census_csv(u64 p, u64 degree);

}  // namespace dmt
