#pragma once

// Endomorphism algebras of Dieudonne modules, automorphism-group orders,
// component groups (pi0), splitting degrees and lift images.
//
// Level n = 1 uses the structured path: radical of the endomorphism algebra
// by the characteristic-p Friedl-Ronyai method, |Aut| = |S^x| * p^dim J, and
// pi0 = S^x / O_p (image of the unitary group when a pairing is present).
// Level n > 1 reduces to the image algebra inside the mod-p fiber.

#include <optional>
#include <vector>

#include "dmt/dieudonne.hpp"
#include "dmt/grouptab.hpp"
#include "dmt/linalg.hpp"

namespace dmt {

// Flattened endomorphism coordinates: entry (i,j) of the rank x rank matrix,
// scalar coordinate k, lives at index (i*rank + j)*h + k.

struct EndoGen {
    std::vector<u64> vec;  // coordinates mod p^n
    u64 order_exp;         // additive order p^order_exp (always n at n = 1)
};

struct EndoAlgebra {
    u64 p = 0, h = 0, n = 0;
    size_t rank = 0;
    bool graded = false;  // restricted to slope-block-diagonal maps
    std::vector<EndoGen> gens;

    // log_p |E| = sum of the order exponents.
    u64 log_size() const;
    // F_p-dimension of the image of E in the mod-p fiber.
    size_t mod_p_dim() const;
};

// Basis of { A : A [F] = [F] A^sigma, A [V] = [V] A^(sigma^-1) } over the
// module's ring.  With pairing_compatible set the module must carry a
// pairing; if it also carries slope blocks, the solution space is restricted
// to block-diagonal maps (the aut(G, lambda) convention for polarized
// modules with several isotypic slope pieces).
EndoAlgebra endomorphism_algebra(const DieudonneModule& M, bool pairing_compatible = false);

// Convert a flattened generator back to a matrix over the module's ring.
KMat endo_to_matrix(const DieudonneModule& M, const std::vector<u64>& vec);

struct AutResult {
    // |Aut(M)|; the unitary group when M carries a pairing.  Zero when the
    // exact order does not fit in 128 bits (large base changes); the
    // component-group data below is always exact.
    u128 aut_order = 0;
    u64 pi0_order = 0;
    size_t dim_e = 0;  // F_p-dimension of the level-1 algebra used
    size_t dim_j = 0;  // its radical dimension
    GroupTable pi0;    // explicit component-group table
};

// Unit group (unitary group when M has a pairing) of End of the base-change
// of M by m.  Size guards apply to the semisimple enumeration and to the
// pi0 table.
AutResult automorphism_group(const DieudonneModule& M, u64 m = 1);

// Smallest m <= 12 with |pi0| equal at base changes m, 2m, 4m.
u64 splitting_degree(const DieudonneModule& M);

// pi0 at splitting level.
AutResult pi0(const DieudonneModule& M);

struct LiftImageResult {
    u64 image_order;  // image of Aut at level n_high inside pi0 at level n_low
    u64 pi0_order;    // full pi0 at level n_low
};

// Image of Aut(minimal_module(c,d) at level n_high) (the polarized H_{1,1}
// when polarized is set, requiring c = d = 1) inside pi0 at level n_low.
LiftImageResult lift_image(u64 c, u64 d, u64 p, u64 n_high, u64 n_low, bool polarized = false);

// Exhaustive oracle: enumerate all p^(log_size) elements of End(M) and count
// the invertible ones (pairing-preserving ones when requested).  Guarded at
// 2^24 candidates; n = 1 or small Witt levels only.
u128 automorphism_group_exhaustive(const DieudonneModule& M, bool pairing = false);

}  // namespace dmt
