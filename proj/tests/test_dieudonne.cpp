#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "dmt/dieudonne.hpp"
#include "doctest.h"

using namespace dmt;

namespace {

// F composed with V as semilinear maps: (F o V)(v) = [F] sigma([V]) v.
bool fv_is_mul_p(const DieudonneModule& M) {
    const Ring& K = M.R();
    KMat FV = kmat_mul(K, M.F.matrix, kmat_frob(K, M.V.matrix, 1));
    KMat VF = kmat_mul(K, M.V.matrix, kmat_frob(K, M.F.matrix, -1));
    KMat pI = kmat_smul(K, K.p % K.pn, kmat_identity(K, M.rank));
    return kmat_eq(K, FV, pI) && kmat_eq(K, VF, pI);
}

std::vector<std::pair<u64, u64>> coprime_cd(u64 hmax) {
    std::vector<std::pair<u64, u64>> out;
    for (u64 c = 1; c < hmax; ++c)
        for (u64 d = 1; c + d <= hmax; ++d)
            if (gcd_u64(c, d) == 1) out.push_back({c, d});
    return out;
}

}  // namespace

TEST_CASE("minimal_module: matrix shape and F V = p Id") {
    for (u64 p : {2, 3}) {
        for (u64 n : {1, 2}) {
            DieudonneModule M = minimal_module(2, 1, p, n);
            validate_module(M);
            CHECK(fv_is_mul_p(M));
            const Ring& K = M.R();
            // F e_1 = e_2, F e_2 = e_3, F e_3 = p e_1
            CHECK(M.F.matrix.at(1, 0) == K.one());
            CHECK(M.F.matrix.at(2, 1) == K.one());
            CHECK(M.F.matrix.at(0, 2) == K.from_int(K.p % K.pn));
            // V e_1 = e_3, V e_2 = p e_1, V e_3 = p e_2
            CHECK(M.V.matrix.at(2, 0) == K.one());
            CHECK(M.V.matrix.at(0, 1) == K.from_int(K.p % K.pn));
        }
    }
    CHECK_THROWS_AS(minimal_module(2, 2, 2, 1), UsageError);
    CHECK_THROWS_AS(minimal_module(2, 4, 3, 1), UsageError);
}

TEST_CASE("bt1_check: minimal, ordinary, etale pass; F = V = Id fails") {
    CHECK(bt1_check(minimal_module(2, 1, 2, 1)));
    CHECK(bt1_check(minimal_module(1, 2, 2, 1)));
    CHECK(bt1_check(ordinary_module(1, 3, 1)));
    CHECK(bt1_check(etale_line(5)));
    // rank-1 module with F = V = id: im F = all != ker V = 0
    DieudonneModule bad = etale_line(5);
    bad.V.matrix = bad.F.matrix;  // V = identity-matrix semilinear map
    CHECK(!bt1_check(bad));
    CHECK_THROWS_AS(bt1_check(minimal_module(2, 1, 2, 2)), UsageError);
}

TEST_CASE("bt1_check suite: all coprime (c,d) with c+d <= 5, ordinary g <= 3, direct sums") {
    for (u64 p : {2, 3}) {
        for (auto [c, d] : coprime_cd(5)) {
            DieudonneModule M = minimal_module(c, d, p, 1);
            validate_module(M);
            CHECK(fv_is_mul_p(M));
            CHECK(bt1_check(M));
        }
        for (u64 g : {1, 2, 3}) CHECK(bt1_check(ordinary_module(g, p, 1)));
        DieudonneModule S = direct_sum(minimal_module(2, 1, p, 1), minimal_module(1, 2, p, 1));
        CHECK(bt1_check(S));
        DieudonneModule S2 = direct_sum(minimal_module(1, 1, p, 1), minimal_module(1, 1, p, 1));
        CHECK(bt1_check(S2));
    }
}

TEST_CASE("polarized constructors: pairing alternating, invertible, pqp-compatible") {
    for (u64 p : {2, 3}) {
        for (u64 n : {1, 2}) {
            for (DieudonneModule M : {polarized_double(2, 1, p, n), polarized_double(1, 1, p, n),
                                      minimal_module_polarized_11(p, n), ordinary_module(2, p, n)}) {
                REQUIRE(M.pairing.has_value());
                validate_module(M);  // checks alternating + invertible + <Fx,y> = sigma(<x,Vy>)
                CHECK(fv_is_mul_p(M));
            }
        }
    }
}

TEST_CASE("serialization: bit-exact round trip") {
    std::vector<DieudonneModule> fixtures = {
        minimal_module(2, 1, 2, 1),     minimal_module(3, 2, 2, 1), minimal_module(2, 1, 3, 2),
        polarized_double(2, 1, 2, 1),   polarized_double(1, 1, 3, 2),
        ordinary_module(2, 3, 1),       etale_line(5),
        twisted_etale(3, {1, 0}),
    };
    for (const auto& M : fixtures) {
        std::string s = serialize_module(M);
        DieudonneModule N = deserialize_module(s);
        CHECK(serialize_module(N) == s);
        CHECK(N.rank == M.rank);
        CHECK(N.blocks == M.blocks);
        CHECK(N.pairing.has_value() == M.pairing.has_value());
        validate_module(N);
    }
    CHECK_THROWS_AS(deserialize_module("not a module"), UsageError);
}

TEST_CASE("base_change and conjugation preserve module validity") {
    DieudonneModule M = minimal_module(2, 1, 2, 1);
    DieudonneModule B = base_change(M, 2);
    CHECK(B.rank == M.rank);
    CHECK(B.R().h == 6);
    validate_module(B);
    CHECK(bt1_check(B));

    const Ring& K = M.R();
    KMat C = kmat_identity(K, 3);
    C.at(0, 1) = K.gen();
    C.at(1, 2) = K.one();
    DieudonneModule MC = conjugate_module(M, C);
    validate_module(MC);
    CHECK(bt1_check(MC));
}

TEST_CASE("newton polygon admissibility and symmetry") {
    NewtonPolygon good{{{2, 1, 1}}};
    NewtonPolygon bad{{{2, 4, 1}}};
    NewtonPolygon ord1{{{1, 0, 1}, {0, 1, 1}}};
    NewtonPolygon dbl{{{2, 1, 1}, {1, 2, 1}}};
    CHECK(newton_admissible(good));
    CHECK(!newton_admissible(bad));
    CHECK(!newton_admissible(NewtonPolygon{}));
    CHECK(!newton_symmetric(good));
    CHECK(newton_symmetric(ord1));
    CHECK(newton_symmetric(dbl));
    CHECK(newton_symmetric(NewtonPolygon{{{1, 1, 2}}}));
}

TEST_CASE("automorphism_bound: anchors") {
    // single segment (2,1), n = 1: (p^3 - 1) p^6
    CHECK(automorphism_bound(NewtonPolygon{{{2, 1, 1}}}, 2, 1) == u128(448));
    CHECK(automorphism_bound(NewtonPolygon{{{2, 1, 1}}}, 3, 1) == u128(26) * 729);
    // symmetric ordinary polygon reads as polarized: one GL_g factor
    CHECK(automorphism_bound(NewtonPolygon{{{1, 0, 1}, {0, 1, 1}}}, 5, 1) == u128(4));
    CHECK(automorphism_bound(NewtonPolygon{{{1, 0, 2}, {0, 1, 2}}}, 2, 1) == u128(6));  // |GL_2(F_2)|
    // symmetric double (2,1)+(1,2) reads as the single (2,1) factor
    CHECK(automorphism_bound(NewtonPolygon{{{2, 1, 1}, {1, 2, 1}}}, 2, 1) == u128(448));
    CHECK_THROWS_AS(automorphism_bound(NewtonPolygon{{{2, 2, 1}}}, 2, 1), UsageError);
}

TEST_CASE("automorphism_bound: monotone in n") {
    for (const auto& nu :
         {NewtonPolygon{{{2, 1, 1}}}, NewtonPolygon{{{1, 1, 1}}},
          NewtonPolygon{{{1, 0, 1}, {0, 1, 1}}}, NewtonPolygon{{{2, 1, 1}, {1, 2, 1}}}}) {
        for (u64 p : {2, 3}) {
            u128 prev = 0;
            for (u64 n = 1; n <= 3; ++n) {
                u128 B = automorphism_bound(nu, p, n);
                CHECK(B >= prev);
                prev = B;
            }
        }
    }
}
