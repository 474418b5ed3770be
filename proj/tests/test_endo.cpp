#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "dmt/endo.hpp"
#include "dmt/linalg.hpp"
#include "doctest.h"

using namespace dmt;

namespace {

// Membership of a flattened endomorphism vector (mod p, n = 1) in the span
// of the algebra's generators, via a rank comparison.
bool in_span(const EndoAlgebra& E, const std::vector<u64>& vec) {
    size_t cols = vec.size();
    FpMat A(E.gens.size(), cols), B(E.gens.size() + 1, cols);
    for (size_t r = 0; r < E.gens.size(); ++r)
        for (size_t i = 0; i < cols; ++i) {
            A.at(r, i) = u32(E.gens[r].vec[i] % E.p);
            B.at(r, i) = A.at(r, i);
        }
    for (size_t i = 0; i < cols; ++i) B.at(E.gens.size(), i) = u32(vec[i] % E.p);
    return fp_rank(B, u32(E.p)) == fp_rank(A, u32(E.p));
}

std::vector<u64> flatten(const DieudonneModule& M, const KMat& A) {
    const Ring& K = M.R();
    std::vector<u64> v(M.rank * M.rank * K.h, 0);
    for (size_t i = 0; i < M.rank; ++i)
        for (size_t j = 0; j < M.rank; ++j)
            for (size_t k = 0; k < K.h; ++k) v[(i * M.rank + j) * K.h + k] = A.at(i, j)[k];
    return v;
}

}  // namespace

TEST_CASE("endomorphism algebra of H_{2,1}[2]: dimension 9 and the displayed shape") {
    DieudonneModule M = minimal_module(2, 1, 2, 1);
    EndoAlgebra E = endomorphism_algebra(M);
    CHECK(E.log_size() == 9);  // 9-dimensional over F_2
    const Ring& K = M.R();
    // Every basis element has the displayed lower-triangular form:
    //   diag(a, a^sigma, a^(sigma^2)), entry (3,2) = sigma of entry (2,1),
    //   entry (3,1) free; strictly-upper entries vanish.
    for (const auto& g : E.gens) {
        KMat A = endo_to_matrix(M, g.vec);
        CHECK(K.is_zero(A.at(0, 1)));
        CHECK(K.is_zero(A.at(0, 2)));
        CHECK(K.is_zero(A.at(1, 2)));
        CHECK(A.at(1, 1) == K.frobenius(A.at(0, 0), 1));
        CHECK(A.at(2, 2) == K.frobenius(A.at(0, 0), 2));
        CHECK(A.at(2, 1) == K.frobenius(A.at(1, 0), 1));
    }
    // The shape space also has dimension 3 + 3 + 3 = 9, so span equality holds.
}

TEST_CASE("endomorphism algebra: closure, unity, etale line") {
    for (u64 p : {2, 3}) {
        DieudonneModule M = minimal_module(2, 1, p, 1);
        EndoAlgebra E = endomorphism_algebra(M);
        const Ring& K = M.R();
        // identity in span
        CHECK(in_span(E, flatten(M, kmat_identity(K, M.rank))));
        // multiplicative closure of basis products
        for (const auto& a : E.gens)
            for (const auto& b : E.gens) {
                KMat P = kmat_mul(K, endo_to_matrix(M, a.vec), endo_to_matrix(M, b.vec));
                CHECK(in_span(E, flatten(M, P)));
            }
    }
    // End(etale line) = F_p
    DieudonneModule L = etale_line(5);
    CHECK(endomorphism_algebra(L).log_size() == 1);
}

TEST_CASE("automorphism anchors: minimal modules") {
    AutResult a21_2 = automorphism_group(minimal_module(2, 1, 2, 1));
    CHECK(a21_2.aut_order == u128(448));
    CHECK(a21_2.pi0_order == 7);
    AutResult a21_3 = automorphism_group(minimal_module(2, 1, 3, 1));
    CHECK(a21_3.aut_order == u128(18954));
    CHECK(a21_3.pi0_order == 26);
    AutResult a11_3 = automorphism_group(minimal_module(1, 1, 3, 1));
    CHECK(a11_3.aut_order == u128(72));
    CHECK(a11_3.pi0_order == 8);
    // etale line: Aut = F_p^x
    CHECK(automorphism_group(etale_line(5)).aut_order == u128(4));
}

TEST_CASE("exhaustive oracle agrees with the structured count") {
    DieudonneModule M = minimal_module(2, 1, 2, 1);
    CHECK(automorphism_group_exhaustive(M) == automorphism_group(M).aut_order);
    DieudonneModule P = minimal_module_polarized_11(2, 1);
    CHECK(automorphism_group_exhaustive(P, true) == automorphism_group(P).aut_order);
    DieudonneModule P3 = minimal_module_polarized_11(3, 1);
    CHECK(automorphism_group_exhaustive(P3, true) == automorphism_group(P3).aut_order);
}

TEST_CASE("aut order is invariant under basis relabeling") {
    DieudonneModule M = minimal_module(2, 1, 2, 1);
    AutResult base = automorphism_group(M);
    const Ring& K = M.R();
    std::mt19937_64 rng(7);
    int done = 0;
    while (done < 3) {
        KMat C(3, 3, K.zero());
        for (size_t i = 0; i < 3; ++i)
            for (size_t j = 0; j < 3; ++j) {
                Elem e(K.h);
                for (auto& c : e) c = rng() % K.pn;
                C.at(i, j) = e;
            }
        if (!kmat_inv(K, C)) continue;
        AutResult got = automorphism_group(conjugate_module(M, C));
        CHECK(got.aut_order == base.aut_order);
        CHECK(got.pi0_order == base.pi0_order);
        ++done;
    }
}

TEST_CASE("polarized double has the automorphism order of the single minimal module") {
    for (u64 p : {2, 3}) {
        AutResult dbl = automorphism_group(polarized_double(2, 1, p, 1));
        AutResult one = automorphism_group(minimal_module(2, 1, p, 1));
        CHECK(dbl.aut_order == one.aut_order);
        CHECK(dbl.pi0_order == one.pi0_order);
    }
}

TEST_CASE("polarized H_{1,1}: unitary orders and pi0 = norm-one group") {
    AutResult p2 = automorphism_group(minimal_module_polarized_11(2, 1));
    CHECK(p2.aut_order == u128(12));
    CHECK(p2.pi0_order == 3);
    AutResult p3 = automorphism_group(minimal_module_polarized_11(3, 1));
    CHECK(p3.aut_order == u128(36));
    CHECK(p3.pi0_order == 4);
}

TEST_CASE("ordinary modules: pi0 = GL_g(F_p)") {
    CHECK(automorphism_group(ordinary_module(1, 3, 1)).pi0_order == 2);
    CHECK(automorphism_group(ordinary_module(2, 2, 1)).pi0_order == 6);   // |GL_2(F_2)|
    CHECK(automorphism_group(ordinary_module(2, 3, 1)).pi0_order == 48);  // |GL_2(F_3)|
}

TEST_CASE("splitting degrees") {
    CHECK(splitting_degree(minimal_module(2, 1, 2, 1)) == 1);
    CHECK(splitting_degree(etale_line(3)) == 1);
    CHECK(splitting_degree(twisted_etale(3, {1, 0})) == 2);
    AutResult tw = pi0(twisted_etale(3, {1, 0}));
    CHECK(tw.pi0_order == automorphism_group(twisted_etale(3, {1, 0}), 2).pi0_order);
}

TEST_CASE("Witt level n = 2: structured order matches exhaustive count / bound") {
    DieudonneModule P = minimal_module_polarized_11(2, 2);
    CHECK(automorphism_group(P).aut_order == automorphism_group_exhaustive(P, true));
    CHECK(automorphism_group(P).aut_order == u128(96));
    // minimal (2,1) at p=2, n=2 meets the Lemma 4.4 bound with equality
    DieudonneModule M = minimal_module(2, 1, 2, 2);
    CHECK(automorphism_group(M).aut_order ==
          automorphism_bound(NewtonPolygon{{{2, 1, 1}}}, 2, 2));
}

TEST_CASE("lift images: surjectivity for minimal modules") {
    LiftImageResult u = lift_image(2, 1, 2, 2, 1);
    CHECK(u.pi0_order == 7);
    CHECK(u.image_order == 7);
    LiftImageResult v = lift_image(1, 1, 3, 2, 1);
    CHECK(v.image_order == v.pi0_order);
    CHECK(v.pi0_order == 8);
    LiftImageResult w = lift_image(1, 1, 3, 2, 1, true);
    CHECK(w.pi0_order == 4);
    CHECK(w.image_order == 4);
}
