#pragma once

// Dieudonne modules over W_n(F_{p^h}): minimal modules H_{c,d}, ordinary
// modules, polarized doubles, BT_1 checks, serialization and the Newton
// polygon order bound.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dmt/scalar.hpp"

namespace dmt {

// Matrix over a Ring, row-major.
struct KMat {
    size_t rows = 0, cols = 0;
    std::vector<Elem> a;

    KMat() = default;
    KMat(size_t r, size_t c, const Elem& fill) : rows(r), cols(c), a(r * c, fill) {}
    Elem& at(size_t i, size_t j) { return a[i * cols + j]; }
    const Elem& at(size_t i, size_t j) const { return a[i * cols + j]; }
};

KMat kmat_identity(const Ring& K, size_t r);
KMat kmat_zero(const Ring& K, size_t r, size_t c);
KMat kmat_mul(const Ring& K, const KMat& A, const KMat& B);
KMat kmat_add(const Ring& K, const KMat& A, const KMat& B);
KMat kmat_sub(const Ring& K, const KMat& A, const KMat& B);
KMat kmat_smul(const Ring& K, u64 c, const KMat& A);
KMat kmat_transpose(const KMat& A);
KMat kmat_frob(const Ring& K, const KMat& A, i64 k);
bool kmat_eq(const Ring& K, const KMat& A, const KMat& B);
// Inverse over the local ring (pivot entries must be units); nullopt if singular.
std::optional<KMat> kmat_inv(const Ring& K, const KMat& A);

// A map v -> matrix * sigma^twist(v).
struct SemilinearMap {
    KMat matrix;
    i64 twist = 0;
};

struct DieudonneModule {
    const Ring* ring = nullptr;
    size_t rank = 0;
    SemilinearMap F;  // twist +1
    SemilinearMap V;  // twist -1
    std::optional<KMat> pairing;
    // Canonical slope decomposition as (offset, size) basis ranges, set by the
    // polarized constructors.  Pairing-compatible endomorphism computations
    // restrict to maps preserving this decomposition (isotypic pieces of
    // distinct slope); unpolarized computations ignore it.
    std::vector<std::pair<size_t, size_t>> blocks;

    const Ring& R() const { return *ring; }
};

// Checks F sigma(V) = p Id, V sigma^-1(F) = p Id, and (when present) that the
// pairing is invertible, alternating and pqp-compatible.  Throws on failure.
void validate_module(const DieudonneModule& M);

// H_{c,d} over W_n(F_{p^(c+d)}): basis e_1..e_h with e_{i+h} = p e_i,
// F e_i = e_{i+d}, V e_i = e_{i+c}.
DieudonneModule minimal_module(u64 c, u64 d, u64 p, u64 n);

// Minimal module with its canonical principal quasipolarization; defined for
// (c,d) = (1,1) (rank 2, lambda with sigma(lambda) = -lambda).
DieudonneModule minimal_module_polarized_11(u64 p, u64 n);

// H_{c,d} + H_{d,c} with the evaluation pairing [[0, J], [-J, 0]],
// J the antidiagonal (dual-basis identification H_{d,c} = H_{c,d}^D).
// For (c,d) = (1,1) this degenerates to the rank-2 polarized H_{1,1}.
DieudonneModule polarized_double(u64 c, u64 d, u64 p, u64 n);

// (toric + etale)^g over W_n(F_p): toric block F = p sigma, V = sigma^-1;
// etale block F = sigma, V = p sigma^-1; standard alternating pairing
// between the blocks.
DieudonneModule ordinary_module(u64 g, u64 p, u64 n, bool with_pairing = true);

// Rank-1 etale module (F = sigma, V = 0 at n=1), used in tests and as the
// simplest splitting-degree example; optional Galois twist by a permutation
// is available through twisted_etale below.
DieudonneModule etale_line(u64 p);

// Etale module of rank r over F_p whose Frobenius matrix is the permutation
// matrix of `perm` (a Galois twist of the split etale module).
DieudonneModule twisted_etale(u64 p, const std::vector<size_t>& perm);

// n = 1 only: im F = ker V and im V = ker F on the flattened F_p-space.
bool bt1_check(const DieudonneModule& M);

// Direct sum (no pairing on the result unless both parts carry one that is
// extended block-diagonally).
DieudonneModule direct_sum(const DieudonneModule& A, const DieudonneModule& B);

// Base change to W_n(F_{p^(h m)}).
DieudonneModule base_change(const DieudonneModule& M, u64 m);

// Relabel the basis by an invertible matrix: F -> C^-1 F sigma(C), etc.
DieudonneModule conjugate_module(const DieudonneModule& M, const KMat& C);

// Plain-text serialization; bit-exact round-trip.
std::string serialize_module(const DieudonneModule& M);
DieudonneModule deserialize_module(const std::string& text);

struct NewtonSegment {
    u64 c, d, m;
};

struct NewtonPolygon {
    std::vector<NewtonSegment> segments;
};

// Admissible: gcd(c,d) = 1, m >= 1.  Symmetric (when required): multiset of
// segments stable under (c,d) -> (d,c).
bool newton_admissible(const NewtonPolygon& nu);
bool newton_symmetric(const NewtonPolygon& nu);

// Lemma 4.4 bound: product of #GL_m(O_mu / p^n) factors, each
// #GL_m(F_{p^h}) * p^(h m^2 (h n - 1)), h = c + d.  Symmetric polygons are
// read as polarized (one factor per dual slope pair); non-symmetric ones
// get the full unpolarized product over all segments.
u128 automorphism_bound(const NewtonPolygon& nu, u64 p, u64 n);

}  // namespace dmt
